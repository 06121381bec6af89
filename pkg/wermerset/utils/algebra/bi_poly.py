import math
import typing

import numpy as np
import numpy.polynomial.polynomial as npp

from wermerset.utils.algebra.uni_poly import UniPoly
from wermerset.utils.errors import Degenerate


def _trim_table(coeffs: np.ndarray) -> np.ndarray:
    """Drops all-zero top rows (z) and columns (w) so the degrees are tight"""

    rows, cols = coeffs.shape
    while rows > 1 and not np.any(coeffs[rows - 1, :cols]):
        rows -= 1
    while cols > 1 and not np.any(coeffs[:rows, cols - 1]):
        cols -= 1
    return coeffs[:rows, :cols].copy()


class BiPoly(object):
    """A polynomial in (z, w) stored as a dense table, coeffs[i, j] being the
    coefficient of z^i w^j

    Params:
        coeffs: 2D array-like of complex
            The coefficient table; zero top rows and columns are trimmed off
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        table = np.asarray(coeffs, dtype=complex)
        if table.ndim != 2 or table.size == 0:
            raise ValueError("BiPoly needs a non-empty 2D coefficient table")
        table = _trim_table(table)
        table.setflags(write=False)
        self.coeffs: np.ndarray = table

    @classmethod
    def zero(cls) -> "BiPoly":
        return cls(np.zeros((1, 1)))

    @classmethod
    def from_terms(cls, terms: typing.Dict[typing.Tuple[int, int], complex]) -> "BiPoly":
        """Builds a polynomial from {(i, j): coefficient of z^i w^j}"""

        deg_z = max(i for i, _ in terms)
        deg_w = max(j for _, j in terms)
        table = np.zeros((deg_z + 1, deg_w + 1), dtype=complex)
        for (i, j), value in terms.items():
            table[i, j] += value
        return cls(table)

    @classmethod
    def from_uni(cls, poly: UniPoly, w_power: int = 0) -> "BiPoly":
        """Gives poly(z) * w^w_power"""

        table = np.zeros((poly.coeffs.size, w_power + 1), dtype=complex)
        table[:, w_power] = poly.coeffs
        return cls(table)

    @property
    def deg_z(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def deg_w(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def max_coefficient(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def w_coefficients(self, z) -> np.ndarray:
        """The coefficients of p(z, .) as a polynomial in w, on the last axis"""

        z = np.asarray(z, dtype=complex)
        values = npp.polyval(z, self.coeffs)  # shape (deg_w+1,) + z.shape
        return np.moveaxis(values, 0, -1)

    def __call__(self, z, w):
        """Evaluates p(z, w), broadcasting z against w"""

        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        z, w = np.broadcast_arrays(z, w)
        column = self.w_coefficients(z)
        acc = column[..., -1].copy()
        for j in range(self.deg_w - 1, -1, -1):
            acc = acc * w + column[..., j]
        return acc

    def leading_constant(self, rtol: float = 1e-12) -> complex:
        """The coefficient of the top power of w, which has to be constant in z"""

        column = self.coeffs[:, -1]
        if np.any(np.abs(column[1:]) > rtol * max(abs(column[0]), 1e-300)):
            raise Degenerate(complex("nan"), float(abs(column[0])))
        if column[0] == 0:
            raise Degenerate(complex("nan"), 0.0)
        return complex(column[0])

    def scaled(self, factor: complex) -> "BiPoly":
        return BiPoly(self.coeffs * factor)

    def normalized(self) -> typing.Tuple["BiPoly", float]:
        """Scales the table so its largest coefficient has modulus 1"""

        scale = self.max_coefficient
        if scale == 0:
            return self, 1.0
        return BiPoly(self.coeffs / scale), scale

    def taylor_in_w(self, k: int) -> "BiPoly":
        """The k-th Taylor coefficient in w, (1/k!) d^k p / dw^k"""

        if k > self.deg_w:
            return BiPoly.zero()
        table = np.zeros((self.deg_z + 1, self.deg_w - k + 1), dtype=complex)
        for j in range(k, self.deg_w + 1):
            table[:, j - k] = math.comb(j, k) * self.coeffs[:, j]
        return BiPoly(table)

    def w_derivative(self) -> "BiPoly":
        return self.taylor_in_w(1)

    def times_uni(self, poly: UniPoly) -> "BiPoly":
        """Multiplies every w-column by a polynomial in z"""

        table = np.zeros(
            (self.deg_z + poly.degree + 1, self.deg_w + 1), dtype=complex
        )
        for j in range(self.deg_w + 1):
            table[:, j] = np.convolve(self.coeffs[:, j], poly.coeffs)
        return BiPoly(table)

    def __add__(self, other: "BiPoly") -> "BiPoly":
        rows = max(self.coeffs.shape[0], other.coeffs.shape[0])
        cols = max(self.coeffs.shape[1], other.coeffs.shape[1])
        table = np.zeros((rows, cols), dtype=complex)
        table[: self.coeffs.shape[0], : self.coeffs.shape[1]] += self.coeffs
        table[: other.coeffs.shape[0], : other.coeffs.shape[1]] += other.coeffs
        return BiPoly(table)

    def __neg__(self) -> "BiPoly":
        return BiPoly(-self.coeffs)

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __mul__(self, other) -> "BiPoly":
        if isinstance(other, (int, float, complex, np.number)):
            return self.scaled(other)
        if isinstance(other, UniPoly):
            return self.times_uni(other)
        a, b = self.coeffs, other.coeffs
        if a.size < b.size:
            a, b = b, a
        table = np.zeros(
            (a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1), dtype=complex
        )
        for i, j in zip(*np.nonzero(b)):
            table[i : i + a.shape[0], j : j + a.shape[1]] += b[i, j] * a
        return BiPoly(table)

    __rmul__ = __mul__

    def allclose(self, other: "BiPoly", rtol: float = 1e-10) -> bool:
        difference = (self - other).coeffs
        scale = max(self.max_coefficient, other.max_coefficient, 1e-300)
        return bool(np.max(np.abs(difference)) <= rtol * scale)

    def __repr__(self) -> str:
        return f"BiPoly[deg_z {self.deg_z} <deg_w {self.deg_w}>]"


def poly_eval(p: BiPoly, z: complex, w: complex) -> complex:
    """Horner evaluation of p at a single point"""

    return complex(p(z, w))
