import typing

import numpy as np
import numpy.polynomial.polynomial as npp


def trim_coefficients(coeffs: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """Strips trailing (highest-degree) coefficients whose modulus is at most tol
    times the largest coefficient, always leaving at least the constant term"""

    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    if coeffs.size == 0:
        return np.zeros(1, dtype=complex)
    cutoff = tol * np.max(np.abs(coeffs)) if tol > 0 else 0.0
    k = coeffs.size - 1
    while k > 0 and abs(coeffs[k]) <= cutoff:
        k -= 1
    return coeffs[: k + 1].copy()


class UniPoly(object):
    """A univariate polynomial in z with complex coefficients, stored lowest degree first

    Params:
        coeffs: sequence of complex
            coeffs[i] is the coefficient of z^i
        trim_tol: float = 0.0
            Relative size below which top coefficients are dropped
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: typing.Sequence[complex], trim_tol: float = 0.0):
        trimmed = trim_coefficients(coeffs, trim_tol)
        trimmed.setflags(write=False)
        self.coeffs: np.ndarray = trimmed

    @classmethod
    def one(cls) -> "UniPoly":
        return cls([1.0])

    @classmethod
    def from_roots(
        cls, roots: typing.Sequence[complex], multiplicities: typing.Sequence[int] = None
    ) -> "UniPoly":
        """Builds the monic polynomial prod (z - r)^m"""

        if multiplicities is None:
            multiplicities = [1] * len(roots)
        expanded = [r for r, m in zip(roots, multiplicities) for _ in range(int(m))]
        if not expanded:
            return cls.one()
        return cls(npp.polyfromroots(np.asarray(expanded, dtype=complex)))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 1 and self.coeffs[0] == 0

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    def __call__(self, z):
        return npp.polyval(np.asarray(z, dtype=complex), self.coeffs)

    def __add__(self, other) -> "UniPoly":
        other = _as_uni(other)
        return UniPoly(npp.polyadd(self.coeffs, other.coeffs))

    def __sub__(self, other) -> "UniPoly":
        other = _as_uni(other)
        return UniPoly(npp.polysub(self.coeffs, other.coeffs))

    def __neg__(self) -> "UniPoly":
        return UniPoly(-self.coeffs)

    def __mul__(self, other) -> "UniPoly":
        if isinstance(other, (int, float, complex, np.number)):
            return UniPoly(self.coeffs * other)
        other = _as_uni(other)
        return UniPoly(npp.polymul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "UniPoly":
        if exponent < 0:
            raise ValueError("UniPoly only supports non-negative powers")
        result = UniPoly.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def derivative(self) -> "UniPoly":
        if self.degree == 0:
            return UniPoly([0.0])
        return UniPoly(npp.polyder(self.coeffs))

    def normalized(self) -> typing.Tuple["UniPoly", float]:
        """Gives back the polynomial scaled so its largest coefficient has modulus 1,
        along with the scale that was divided out"""

        scale = float(np.max(np.abs(self.coeffs)))
        if scale == 0:
            return self, 1.0
        return UniPoly(self.coeffs / scale), scale

    def allclose(self, other: "UniPoly", rtol: float = 1e-10) -> bool:
        other = _as_uni(other)
        size = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(size, dtype=complex)
        b = np.zeros(size, dtype=complex)
        a[: self.coeffs.size] = self.coeffs
        b[: other.coeffs.size] = other.coeffs
        scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
        return bool(np.max(np.abs(a - b)) <= rtol * scale)

    def __repr__(self) -> str:
        return f"UniPoly[degree {self.degree}]"


def _as_uni(value) -> UniPoly:
    if isinstance(value, UniPoly):
        return value
    return UniPoly([complex(value)])
