import logging
import typing

import numpy as np

from wermerset.utils.algebra import RootSet, UniPoly
from wermerset.utils.branches import BranchPointTable, StageFunctionSet, collision_zeros, enumerate_branch_points
from wermerset.utils.construction.grid_config import GridConfig
from wermerset.utils.construction.sampling import disk_grid
from wermerset.utils.construction.selectors import (
    WERMER_RADIUS,
    StageContext,
    build_p_next,
    init_stage1,
    select_c,
    select_eps,
    select_m,
    select_rho,
)
from wermerset.utils.construction.stage import Stage
from wermerset.utils.construction.verification import verify_stage
from wermerset.utils.construction.verification_report import VerificationReport
from wermerset.utils.errors import ConfigError, PredicateFailure


MODES = ("modified", "wermer")


class Construction(object):
    """A truncation of the set X: its branch points and the stages built so far

    Constructions are snapshots; advance() gives back a new one and leaves this one
    as it was, including when a selector or a check fails.

    Params:
        table: BranchPointTable
        config: GridConfig
        mode: str = "modified"
            "modified" or "wermer"
        stages: sequence of Stage = ()
        reports: sequence of VerificationReport = ()
    """

    logger = logging.getLogger("wermerset.construction")

    def __init__(
        self,
        table: BranchPointTable,
        config: GridConfig,
        mode: str = "modified",
        stages: typing.Sequence[Stage] = (),
        reports: typing.Sequence[VerificationReport] = (),
    ):
        if mode not in MODES:
            raise ConfigError("mode", mode, f"should be one of {', '.join(MODES)}")
        self.table = table
        self.config = config
        self.mode = mode
        self.stages: typing.Tuple[Stage, ...] = tuple(stages)
        self.reports: typing.Tuple[VerificationReport, ...] = tuple(reports)

    @classmethod
    def start(cls, config: GridConfig, mode: str = "modified", table: BranchPointTable = None) -> "Construction":
        """Enumerates the branch points and builds and checks stage 1"""

        wermer = mode == "wermer"
        if table is None:
            table = enumerate_branch_points(config.max_stage + 2, WERMER_RADIUS if wermer else None)
        stage = init_stage1(table, config, wermer)
        construction = cls(table, config, mode, [stage])
        reports = verify_stage(construction, 1)
        construction = cls(table, config, mode, [stage], reports)
        cls._raise_failures(1, reports)
        cls.logger.info(f"Started a {mode} construction: {stage!r}")
        return construction

    @property
    def wermer(self) -> bool:
        return self.mode == "wermer"

    @property
    def depth(self) -> int:
        return len(self.stages)

    def disk_radius(self, k: int) -> float:
        """The radius of D_k (1/2 for every k in the Wermer mode)"""

        return WERMER_RADIUS if self.wermer else float(k)

    def z_samples(self, k: int, config: GridConfig = None) -> np.ndarray:
        config = config or self.config
        return disk_grid(self.disk_radius(k), config.z_grid)

    def z_polys(self, n: int) -> typing.List[UniPoly]:
        """Z_0, ..., Z_(n-1)"""

        polys = [UniPoly.one()]
        for stage in self.stages[: n - 1]:
            polys.append(stage.Z if stage.Z is not None else UniPoly.one())
        return polys

    def function_set(self, n: int = None) -> StageFunctionSet:
        """The function set of g_n"""

        n = self.depth if n is None else n
        constants = [stage.c for stage in self.stages[:n]]
        return StageFunctionSet(self.table, constants, self.z_polys(n))

    def context(self, n: int = None) -> StageContext:
        n = self.depth if n is None else n
        return StageContext(self.stages[:n], self.function_set(n), self.table, self.config, self.wermer)

    def reports_for(self, n: int) -> typing.List[VerificationReport]:
        return [report for report in self.reports if report.stage == n]

    def collision_polynomial(self) -> typing.Tuple[UniPoly, RootSet]:
        """Z_n for the last stage, with its zeros"""

        n = self.depth
        if self.wermer or n < 2:
            return UniPoly.one(), RootSet.empty()
        stage = self.stages[-1]
        previous = self.stages[-2].Z_roots if n > 2 else RootSet.empty()
        zeros = collision_zeros(n, self.function_set(n), stage.p, self.table, self.config, previous)
        return UniPoly.from_roots(zeros.roots, zeros.multiplicities), zeros

    def advance(self) -> "Construction":
        """Builds and checks stage n+1

        Raises:
            ConfigError: max_stage is reached
            PredicateFailure: the new stage fails one of its checks
            SearchExhausted, EmptyExterior, OrderEstimateUnstable, NonPolynomialResidue
        """

        n = self.depth
        if n >= self.config.max_stage:
            raise ConfigError("max_stage", self.config.max_stage, f"stage {n + 1} would go past it")
        self.logger.info(f"Advancing to stage {n + 1}")

        Z, zeros = self.collision_polynomial()
        stages = self.stages[:-1] + (self.stages[-1].with_Z(Z, zeros),)
        with_Z = Construction(self.table, self.config, self.mode, stages, self.reports)
        ctx = with_Z.context(n)

        c = select_c(ctx, Z, zeros.roots)
        rho = select_rho(ctx, c, Z)
        p, delta = build_p_next(ctx, c, Z, rho)
        m = select_m(ctx, c, Z, delta)
        t = select_eps(ctx, c, Z, delta, m)
        stage = Stage(n=n + 1, c=c, eps_exponent=t, m=m, delta=delta, rho=rho, p=p)

        candidate = Construction(self.table, self.config, self.mode, stages + (stage,), self.reports)
        reports = verify_stage(candidate, n + 1)
        self._raise_failures(n + 1, reports)
        self.logger.info(f"Stage {n + 1} built: {stage!r}")
        return Construction(self.table, self.config, self.mode, stages + (stage,), self.reports + tuple(reports))

    @classmethod
    def _raise_failures(cls, n: int, reports: typing.Sequence[VerificationReport]):
        failed = [report for report in reports if not report.passed]
        if failed:
            raise PredicateFailure(n, failed)

    def __repr__(self) -> str:
        return f"Construction[{self.mode} <{self.depth} stages>]"
