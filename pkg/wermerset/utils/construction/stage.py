import dataclasses
import math
import typing

from wermerset.utils.algebra import BiPoly, RootSet, UniPoly


LOG2 = math.log(2)


@dataclasses.dataclass(frozen=True)
class Stage(object):
    """Everything recorded for stage n of the recursion

    eps_n is kept as an exact power of two, eps_n = 2^-eps_exponent, since the
    later values are far below the double precision range.

    Params:
        n: int
        c: float
            c_n
        eps_exponent: int
            t with eps_n = 2^-t
        m: int
            m_n
        delta: float
            The factor p_n was scaled by (1 at stage 1)
        rho: float
            Half-height of the bidisk D_(n+1) x D_rho holding the stage-n sublevel set
        p: BiPoly
            p_n
        Z: UniPoly = None
            Z_n, filled in once stage n+1 is built
        Z_roots: RootSet = None
            The zeros of Z_n with their multiplicities
    """

    n: int
    c: float
    eps_exponent: int
    m: int
    delta: float
    rho: float
    p: BiPoly
    Z: typing.Optional[UniPoly] = None
    Z_roots: typing.Optional[RootSet] = None

    @property
    def log_eps(self) -> float:
        return -self.eps_exponent * LOG2

    @property
    def eps(self) -> float:
        """eps_n as a float (0.0 once it underflows)"""

        return math.ldexp(1.0, -self.eps_exponent)

    @property
    def log_lead(self) -> float:
        return math.log(abs(self.p.leading_constant()))

    @property
    def degree(self) -> int:
        return self.p.deg_w

    def with_Z(self, Z: UniPoly, Z_roots: RootSet) -> "Stage":
        return dataclasses.replace(self, Z=Z, Z_roots=Z_roots)

    def __repr__(self) -> str:
        return f"Stage[{self.n} <c {self.c:.3g}, eps 2^-{self.eps_exponent}, m {self.m}, rho {self.rho:.3g}>]"
