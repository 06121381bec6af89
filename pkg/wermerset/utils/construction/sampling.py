import math
import typing

import numpy as np


CHUNK_SIZE = 2048


def disk_grid(radius: float, density: float, boundary: bool = True) -> np.ndarray:
    """Lattice points of spacing 1/density inside the closed disk |z| <= radius

    With boundary set, points on the circle |z| = radius are added too (a multiple of
    four of them, so the axis points are always among them).
    """

    spacing = 1.0 / density
    steps = int(math.floor(radius / spacing))
    axis = spacing * np.arange(-steps, steps + 1)
    grid = (axis[:, None] + 1j * axis[None, :]).reshape(-1)
    grid = grid[np.abs(grid) < radius]
    if boundary:
        grid = np.concatenate([grid, circle_points(0, radius, boundary_count(radius, density))])
    return grid


def boundary_count(radius: float, density: float) -> int:
    """How many points a circle of this radius gets: at least 16 and a multiple of 4"""

    count = max(16, int(math.ceil(2 * math.pi * radius * density)))
    return 4 * int(math.ceil(count / 4))


def circle_points(center: complex, radius: float, count: int, offset: float = 0.0) -> np.ndarray:
    """count equally spaced points on a circle, the first at angle 2pi * offset / count"""

    angles = 2 * np.pi * (np.arange(count) + offset) / count
    return center + radius * np.exp(1j * angles)


def unit_stencil(angles: int) -> np.ndarray:
    """Offsets covering the closed unit disk: the centre plus rings at radius 1/3, 2/3 and 1"""

    ring = np.exp(2j * np.pi * np.arange(angles) / angles)
    rings = [np.zeros(1, dtype=complex)]
    for index, radius in enumerate((1 / 3, 2 / 3, 1.0)):
        twist = np.exp(1j * np.pi * index / angles)
        rings.append(radius * ring * twist)
    return np.concatenate(rings)


def chunked(values: np.ndarray, size: int = CHUNK_SIZE) -> typing.Iterator[np.ndarray]:
    """Yields consecutive slices of at most size entries"""

    for start in range(0, values.size, size):
        yield values[start : start + size]
