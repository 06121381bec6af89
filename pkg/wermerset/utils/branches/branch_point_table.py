import itertools
import math
import typing
from fractions import Fraction

import numpy as np


GaussianRational = typing.Tuple[Fraction, Fraction]


def _rationals_of_height(height: int) -> typing.List[Fraction]:
    """Every reduced p/q with max(|p|, q) == height"""

    values = set()
    for q in range(1, height + 1):
        for p in range(-height, height + 1):
            if max(abs(p), q) != height:
                continue
            if math.gcd(p, q) != 1:
                continue
            values.add(Fraction(p, q))
    if height == 1:
        values.add(Fraction(0))
    return sorted(values)


def _height(value: Fraction) -> int:
    return max(abs(value.numerator), value.denominator)


def _as_complex(point: GaussianRational) -> complex:
    return complex(float(point[0]), float(point[1]))


def _candidates(radius_cap: float = None) -> typing.Iterator[GaussianRational]:
    """Gaussian rationals in order of height, then modulus, then argument in [0, 2pi)"""

    for height in itertools.count(1):
        pool = set()
        for h in range(1, height + 1):
            pool.update(_rationals_of_height(h))
        layer = []
        for re, im in itertools.product(pool, repeat=2):
            if max(_height(re), _height(im)) != height:
                continue
            if radius_cap is not None and abs(_as_complex((re, im))) >= radius_cap:
                continue
            layer.append((re, im))
        layer.sort(
            key=lambda point: (
                abs(_as_complex(point)),
                math.atan2(point[1], point[0]) % (2 * math.pi),
                point[0],
                point[1],
            )
        )
        yield from layer


class BranchPointTable(object):
    """The ordered branch points a_1, a_2, ... kept as exact Gaussian rationals

    Params:
        points: list of (Fraction, Fraction)
            Real and imaginary parts of a_1, a_2, ...
    """

    __slots__ = ("points",)

    def __init__(self, points: typing.Sequence[GaussianRational]):
        self.points: typing.Tuple[GaussianRational, ...] = tuple(
            (Fraction(re), Fraction(im)) for re, im in points
        )

    @property
    def count(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, index: int) -> complex:
        """a_index, counted from 1 as in the recursion"""

        if index < 1:
            raise IndexError("Branch points are numbered from 1")
        re, im = self.points[index - 1]
        return complex(float(re), float(im))

    def as_array(self, count: int = None) -> np.ndarray:
        """The first count branch points as a complex array"""

        chosen = self.points if count is None else self.points[:count]
        return np.array([complex(float(re), float(im)) for re, im in chosen], dtype=complex)

    def __eq__(self, other) -> bool:
        if not isinstance(other, self.__class__):
            return False
        return self.points == other.points

    def __repr__(self) -> str:
        return f"BranchPointTable[{self.count} points]"


def enumerate_branch_points(count: int, radius_cap: float = None) -> BranchPointTable:
    """Lists count Gaussian rationals by height, placing each a_k greedily so that |a_k| < k

    The choice at position k only depends on the fixed candidate order and on the
    earlier choices, so extending count never changes earlier entries.

    Params:
        count: int
            How many points to produce (at least 1)
        radius_cap: float = None
            If given, only points of modulus below this are used (the Wermer mode
            keeps every branch point inside the disk of radius 1/2)
    """

    if count < 1:
        raise ValueError("enumerate_branch_points needs count >= 1")
    chosen: typing.List[GaussianRational] = []
    waiting: typing.List[GaussianRational] = []
    source = _candidates(radius_cap)
    while len(chosen) < count:
        k = len(chosen) + 1
        pick = None
        for position, point in enumerate(waiting):
            if abs(_as_complex(point)) < k:
                pick = waiting.pop(position)
                break
        while pick is None:
            point = next(source)
            if abs(_as_complex(point)) < k:
                pick = point
            else:
                waiting.append(point)
        chosen.append(pick)
    return BranchPointTable(chosen)
