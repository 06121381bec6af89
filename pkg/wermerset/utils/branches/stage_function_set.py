import itertools
import typing

import numpy as np

from wermerset.utils.algebra import UniPoly
from wermerset.utils.branches.branch_point_table import BranchPointTable
from wermerset.utils.branches.cut import Cut, cuts_for


class SignVector(tuple):
    """A choice of sign (+1 / -1) for each term of g_n, naming one branch h_s"""

    def __new__(cls, signs: typing.Iterable[int]):
        values = tuple(int(s) for s in signs)
        if any(s not in (1, -1) for s in values):
            raise ValueError(f"Signs must be +1 or -1, got {values}")
        return super().__new__(cls, values)

    @classmethod
    def all(cls, n: int) -> typing.List["SignVector"]:
        """Every sign vector of length n, (+1, ..., +1) first"""

        return [cls(s) for s in itertools.product((1, -1), repeat=n)]

    def flipped(self, indices: typing.Iterable[int]) -> "SignVector":
        """Flips the signs at the given 1-based term indices"""

        flip = set(indices)
        return SignVector(-s if j in flip else s for j, s in enumerate(self, start=1))

    def __neg__(self) -> "SignVector":
        return SignVector(-s for s in self)

    def __repr__(self) -> str:
        return "SignVector(" + "".join("+" if s > 0 else "-" for s in self) + ")"


def beta_eval(j: int, z, table: BranchPointTable, cuts: typing.Sequence[Cut]) -> np.ndarray:
    """beta_j(z) = (z - a_1) ... (z - a_(j-1)) * sqrt(z - a_j), the root taken along cut j"""

    z = np.asarray(z, dtype=complex)
    value = cuts[j - 1].sqrt(z)
    for l in range(1, j):
        value = value * (z - table[l])
    return value


class StageFunctionSet(object):
    """Everything needed to evaluate the branches of g_n

    Params:
        table: BranchPointTable
            The branch points a_1, a_2, ...
        constants: sequence of float
            c_1, ..., c_n
        z_polys: sequence of UniPoly
            Z_0, ..., Z_(n-1), with Z_0 = Z_1 = 1
        cuts: list of Cut = None
            Cut j belongs to a_j; the golden-angle rays are used if omitted
    """

    __slots__ = ("table", "constants", "z_polys", "cuts")

    def __init__(
        self,
        table: BranchPointTable,
        constants: typing.Sequence[float],
        z_polys: typing.Sequence[UniPoly],
        cuts: typing.Sequence[Cut] = None,
    ):
        if len(constants) != len(z_polys):
            raise ValueError("Need one Z polynomial (Z_0 .. Z_(n-1)) per constant")
        self.table = table
        self.constants = tuple(float(c) for c in constants)
        self.z_polys = tuple(z_polys)
        self.cuts = list(cuts) if cuts is not None else cuts_for(table.as_array())

    @property
    def n(self) -> int:
        return len(self.constants)

    def term(self, j: int, z) -> np.ndarray:
        """c_j * Z_(j-1)(z) * beta_j(z)"""

        return self.constants[j - 1] * self.z_polys[j - 1](z) * beta_eval(j, z, self.table, self.cuts)

    def term_modulus(self, j: int, z) -> np.ndarray:
        """|Z_(j-1)(z) B_j(z)|, which is continuous across the cuts"""

        z = np.asarray(z, dtype=complex)
        value = np.abs(self.z_polys[j - 1](z)) * np.sqrt(np.abs(z - self.table[j]))
        for l in range(1, j):
            value = value * np.abs(z - self.table[l])
        return value

    def sign_matrix(self) -> np.ndarray:
        return np.array(SignVector.all(self.n), dtype=float)

    def all_branches(self, z) -> np.ndarray:
        """Every h_s(z), the sign vectors in SignVector.all order on the last axis"""

        z = np.asarray(z, dtype=complex)
        terms = np.stack([self.term(j, z) for j in range(1, self.n + 1)], axis=-1)
        return terms @ self.sign_matrix().T

    def extended(self, c: float, z_poly: UniPoly) -> "StageFunctionSet":
        """The function set of g_(n+1) = g_n + c Z_n B_(n+1)"""

        return StageFunctionSet(
            self.table, self.constants + (c,), self.z_polys + (z_poly,), self.cuts
        )

    def __repr__(self) -> str:
        return f"StageFunctionSet[n={self.n}]"


def branch_eval(s: typing.Sequence[int], z, fs: StageFunctionSet) -> np.ndarray:
    """h_s(z) = sum_j s_j c_j Z_(j-1)(z) beta_j(z)"""

    if len(s) != fs.n:
        raise ValueError(f"Sign vector of length {len(s)} for a stage-{fs.n} function set")
    z = np.asarray(z, dtype=complex)
    total = np.zeros(z.shape, dtype=complex)
    for j, sign in enumerate(s, start=1):
        total = total + sign * fs.term(j, z)
    return total


def identify_branch(w: complex, z: complex, fs: StageFunctionSet) -> typing.Tuple[SignVector, float]:
    """The sign vector whose branch value at z is closest to w, and that distance"""

    values = fs.all_branches(np.asarray([z]))[0]
    index = int(np.argmin(np.abs(values - w)))
    return SignVector.all(fs.n)[index], float(np.abs(values[index] - w))
