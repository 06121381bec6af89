import math
import typing

import numpy as np


GOLDEN_FRACTION = (math.sqrt(5) - 1) / 2


class Cut(object):
    """A branch cut: the ray base + t * direction, t >= 0

    Params:
        base: complex
            The branch point the ray starts at
        direction: complex
            A unit vector giving the direction of the ray
    """

    __slots__ = ("base", "direction")

    def __init__(self, base: complex, direction: complex):
        self.base = complex(base)
        self.direction = complex(direction) / abs(direction)

    @classmethod
    def for_index(cls, j: int, base: complex) -> "Cut":
        """The cut of a_j, pointing at angle 2pi * frac(j * (sqrt 5 - 1) / 2)"""

        angle = 2 * math.pi * ((j * GOLDEN_FRACTION) % 1.0)
        return cls(base, complex(math.cos(angle), math.sin(angle)))

    def rotated(self, z) -> np.ndarray:
        """(z - base) / direction, which puts the cut on the positive real axis"""

        return (np.asarray(z, dtype=complex) - self.base) / self.direction

    def sqrt(self, z) -> np.ndarray:
        """A square root of z - base that is continuous off the ray and jumps across it

        On the ray itself the value is the limit taken from the side reached by
        turning counterclockwise off the ray (arg of the rotated point -> 0+).
        """

        u = np.atleast_1d(self.rotated(z)).astype(complex)
        t = -u
        # The ray maps to the non-positive real axis of t; give it the -0 imaginary part
        t.imag = np.where(t.imag == 0, -0.0, t.imag)
        root = 1j * np.sqrt(t) * np.sqrt(self.direction)
        return root.reshape(np.shape(z)) if np.ndim(z) else root[0]

    def distance(self, z) -> np.ndarray:
        """Euclidean distance from z to the ray"""

        u = self.rotated(z)
        return np.where(u.real >= 0, np.abs(u.imag), np.abs(u))

    def circle_crossings(self, center: complex, radius: float) -> typing.List[complex]:
        """Where the ray meets the circle |z - center| = radius"""

        offset = self.base - center
        b = 2 * (offset.real * self.direction.real + offset.imag * self.direction.imag)
        c = abs(offset) ** 2 - radius ** 2
        disc = b * b - 4 * c
        if disc < 0:
            return []
        roots = sorted({(-b - math.sqrt(disc)) / 2, (-b + math.sqrt(disc)) / 2})
        return [self.base + t * self.direction for t in roots if t >= 0]

    def __repr__(self) -> str:
        return f"Cut[{self.base} <direction {self.direction}>]"


def cuts_for(points: typing.Sequence[complex]) -> typing.List[Cut]:
    """One cut per branch point, cut j belonging to a_j"""

    return [Cut.for_index(j, a) for j, a in enumerate(points, start=1)]
