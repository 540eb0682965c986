from __future__ import annotations

import math

from .network import ActivationKind


# exp() overflows past ~709; the logistic is saturated long before that
_EXPONENT_LIMIT = 500.0


def logistic(x: float) -> float:
    z = min(max(x, -_EXPONENT_LIMIT), _EXPONENT_LIMIT)
    return 1.0 / (1.0 + math.exp(-z))


def threshold(x: float, theta: float) -> int:
    return 1 if x >= theta else 0


def activation(x: float, kind: ActivationKind, theta: float = 0.0) -> float:
    if kind == ActivationKind.THRESHOLD:
        return threshold(x, theta)
    return logistic(x)
