from __future__ import annotations

from typing import List, Sequence

import numpy as np

from ..metamodel.errors import DimensionError, ValidationError
from ..metamodel.models import Trajectory


def to_pbm(rows: Sequence[Sequence[int]]) -> str:
    """Portable bitmap (P1) text; 1 is a black pixel."""
    grid = np.asarray(rows, dtype=int)
    if grid.ndim != 2:
        raise DimensionError("a bitmap needs a rectangular grid")
    if not np.isin(grid, (0, 1)).all():
        raise ValidationError("P1 bitmaps hold only the states 0 and 1")
    height, width = grid.shape
    lines = ["P1", f"{width} {height}"]
    lines.extend(" ".join(str(int(value)) for value in row) for row in grid)
    return "\n".join(lines) + "\n"


def trajectory_to_pbm(trajectory: Trajectory) -> str:
    """Space-time diagram of a 1-D run, one pixel row per time step."""
    return to_pbm([row.states for row in trajectory.rows])


def trajectory_frames(trajectory: Trajectory, width: int, height: int) -> List[str]:
    frames = []
    for row in trajectory.rows:
        if len(row.states) != width * height:
            raise DimensionError(f"{len(row.states)} cells do not form a {width}x{height} grid")
        frames.append(to_pbm(np.asarray(row.states, dtype=int).reshape(height, width)))
    return frames
