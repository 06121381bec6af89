import pytest

from wermerset.utils.algebra import RootSet, UniPoly
from wermerset.utils.branches import BranchPointTable
from wermerset.utils.construction import Construction, GridConfig, Stage, polynomial_chain


HAND_CONSTANTS = (1.0, 0.05, 0.002)
HAND_EXPONENTS = (10, 40, 120)
HAND_M = (1, 5, 20)
HAND_RHO = (3.0, 5.0, 7.0)


@pytest.fixture
def small_table():
    """a_1 = 0, a_2 = 1, a_3 = i, a_4 = -1"""

    return BranchPointTable([(0, 0), (1, 0), (0, 1), (-1, 0)])


@pytest.fixture
def hand_built(small_table):
    """Three stages with hand-picked constants and Z = 1, no selector involved"""

    _, polys = polynomial_chain(small_table, HAND_CONSTANTS)
    stages = []
    for n, p in enumerate(polys, start=1):
        stage = Stage(
            n=n,
            c=HAND_CONSTANTS[n - 1],
            eps_exponent=HAND_EXPONENTS[n - 1],
            m=HAND_M[n - 1],
            delta=1.0,
            rho=HAND_RHO[n - 1],
            p=p,
        )
        if n < len(polys):
            stage = stage.with_Z(UniPoly.one(), RootSet.empty())
        stages.append(stage)
    return Construction(small_table, GridConfig(z_grid=8, w_grid=8, max_stage=3), "modified", stages)


@pytest.fixture(scope="session")
def built():
    """A modified-mode construction taken to stage 3 on a coarse grid"""

    construction = Construction.start(GridConfig(z_grid=8, w_grid=8, max_stage=3))
    return construction.advance().advance()


@pytest.fixture(scope="session")
def deep_built():
    """A modified-mode construction taken to stage 4 at the default densities"""

    construction = Construction.start(GridConfig(max_stage=4))
    return construction.advance().advance().advance()
