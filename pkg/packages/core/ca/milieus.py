from __future__ import annotations

from typing import Tuple

from ..metamodel.errors import SizeError, ValidationError


RING = "ring"
FIXED = "fixed"
BOUNDARIES = (RING, FIXED)

Neighborhoods = Tuple[Tuple[int, ...], ...]

# NW, N, NE, W, E, SW, S, SE as (row, column) offsets
MOORE_OFFSETS: Tuple[Tuple[int, int], ...] = (
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
)


def ring_milieu(c: int, radius: int, boundary: str = RING) -> Neighborhoods:
    """1-based neighbour indices i-radius..i-1, i+1..i+radius, left to right.

    With a fixed boundary, positions past either end map to index 0, the
    phantom cell.
    """
    _check_boundary(boundary)
    if radius < 0:
        raise SizeError(f"radius must be non-negative, got {radius}")
    if c < 2 * radius + 1:
        raise SizeError(f"a ring of {c} cells cannot hold radius {radius} (needs {2 * radius + 1})")
    offsets = [offset for offset in range(-radius, radius + 1) if offset != 0]
    neighborhoods = []
    for i in range(1, c + 1):
        neighborhoods.append(tuple(_wrap(i - 1 + offset, c, boundary) for offset in offsets))
    return tuple(neighborhoods)


def moore_milieu(width: int, height: int, boundary: str = RING) -> Neighborhoods:
    """8-neighbour Moore neighbourhoods over a row-major grid."""
    _check_boundary(boundary)
    if width < 3 or height < 3:
        raise SizeError(f"a Moore grid needs at least 3x3 cells, got {width}x{height}")
    neighborhoods = []
    for row in range(height):
        for column in range(width):
            neighbors = []
            for d_row, d_column in MOORE_OFFSETS:
                r, col = row + d_row, column + d_column
                if boundary == FIXED and not (0 <= r < height and 0 <= col < width):
                    neighbors.append(0)
                    continue
                neighbors.append((r % height) * width + (col % width) + 1)
            neighborhoods.append(tuple(neighbors))
    return tuple(neighborhoods)


def _wrap(position: int, c: int, boundary: str) -> int:
    if boundary == FIXED:
        return position + 1 if 0 <= position < c else 0
    return position % c + 1


def _check_boundary(boundary: str) -> None:
    if boundary not in BOUNDARIES:
        raise ValidationError(f"unknown boundary {boundary!r}; expected one of {BOUNDARIES}")
