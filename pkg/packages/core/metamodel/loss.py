from __future__ import annotations

from typing import Any, Optional, Sequence, Union

import numpy as np

from .errors import DimensionError
from .models import AdaptationEnd, Entities, StateSet


def loss(
    current: Union[Entities, Sequence[Any]],
    end: AdaptationEnd,
    state_set: Optional[StateSet] = None,
) -> float:
    """Normalised Hamming distance for finite states, mean squared error otherwise.

    Without a state set, any float among the values selects the continuous case.
    """
    values = tuple(current.states) if isinstance(current, Entities) else tuple(current)
    targets = tuple(end.targets)
    if len(values) != len(targets):
        raise DimensionError(f"{len(values)} states compared against {len(targets)} targets")
    if not values:
        raise DimensionError("cannot compute a loss over zero entities")
    if state_set is not None:
        finite = state_set.is_finite
    else:
        finite = not any(isinstance(value, float) for value in values + targets)
    if finite:
        mismatches = sum(1 for value, target in zip(values, targets) if value != target)
        return mismatches / len(values)
    difference = np.asarray(values, dtype=float) - np.asarray(targets, dtype=float)
    return float(np.mean(difference ** 2))
