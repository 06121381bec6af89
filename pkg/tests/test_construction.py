import math
import types

import numpy as np
import pytest

from wermerset.utils.algebra import BiPoly, UniPoly, roots_in_w, shift_product
from wermerset.utils.branches import BranchPointTable
from wermerset.utils.construction import (
    Construction,
    GridConfig,
    Predicate,
    Stage,
    StageContext,
    VerificationReport,
    analytic_cap,
    build_p_next,
    check_lev1,
    disk_grid,
    init_stage1,
    lev1_sequence,
    m_from_minimum,
    polynomial_chain,
    radicand,
    select_c,
    select_rho,
    unit_stencil,
    verify_stage,
)
from wermerset.utils.construction import selectors
from wermerset.utils.errors import ConfigError, SearchExhausted


@pytest.fixture
def table(small_table):
    return small_table


@pytest.fixture
def config():
    return GridConfig(z_grid=8, w_grid=8, max_stage=3)


@pytest.fixture
def stage_one_context(table, config):
    stage = init_stage1(table, config)
    fs, _ = polynomial_chain(table, [stage.c])
    return StageContext((stage,), fs, table, config)


class TestGridConfig:

    def test_defaults_are_valid(self):
        config = GridConfig()
        assert config.margin == 0.5
        assert config.max_stage == 5

    @pytest.mark.parametrize(
        "changes",
        [{"margin": 0.0}, {"margin": 0.75}, {"z_grid": -1}, {"max_stage": 7}, {"probe_samples": 10}],
    )
    def test_rejects_bad_values(self, changes):
        with pytest.raises(ConfigError):
            GridConfig(**changes)

    def test_from_dict(self):
        config = GridConfig.from_dict({"z_grid": "16", "seed": 4})
        assert config.z_grid == 16.0
        assert config.seed == 4
        with pytest.raises(ConfigError):
            GridConfig.from_dict({"colour": "blue"})
        with pytest.raises(ConfigError):
            GridConfig.from_dict({"seed": "many"})

    def test_dict_round_trip(self):
        config = GridConfig(z_grid=12, seed=9)
        assert GridConfig.from_dict(config.to_dict()) == config

    def test_integer_densities_are_stored_as_floats(self):
        config = GridConfig(z_grid=8, w_grid=8, margin=0.5)
        assert isinstance(config.z_grid, float) and isinstance(config.w_grid, float)
        assert config.to_dict()["z_grid"] == 8.0
        assert GridConfig.from_dict(config.to_dict()).to_dict() == config.to_dict()
        assert isinstance(config.max_stage, int)

    def test_verification_grid_is_denser(self):
        config = GridConfig(z_grid=10, w_grid=6, verify_factor=3).verification()
        assert (config.z_grid, config.w_grid) == (30, 18)

    def test_overrides_skip_none(self):
        config = GridConfig()
        assert config.with_overrides(seed=None) is config
        assert config.with_overrides(seed=3).seed == 3


class TestSampling:

    def test_disk_grid_stays_in_the_disk(self):
        points = disk_grid(2.0, 8)
        assert np.all(np.abs(points) <= 2.0 + 1e-12)
        assert np.min(np.abs(points + 2.0)) < 1e-12  # the axis points are on the boundary

    def test_unit_stencil(self):
        stencil = unit_stencil(8)
        assert stencil.size == 25
        assert stencil[0] == 0
        assert np.max(np.abs(stencil)) == pytest.approx(1.0)


class TestStage:

    def test_eps_is_a_power_of_two(self, table):
        fs, (p1,) = polynomial_chain(table, [1.0])
        stage = Stage(n=1, c=1.0, eps_exponent=10, m=1, delta=1.0, rho=3.0, p=p1)
        assert stage.eps == 2.0 ** -10
        assert stage.log_eps == pytest.approx(-10 * math.log(2))
        assert stage.degree == 2
        assert stage.log_lead == 0.0

    def test_tiny_eps_keeps_its_logarithm(self, table):
        fs, (p1,) = polynomial_chain(table, [1.0])
        stage = Stage(n=1, c=1.0, eps_exponent=5000, m=1, delta=1.0, rho=3.0, p=p1)
        assert stage.eps == 0.0
        assert math.isfinite(stage.log_eps)

    def test_report_passes_at_zero_margin(self):
        assert VerificationReport(Predicate.P1, 1, 0.0, (0j, 0j)).passed
        assert not VerificationReport(Predicate.P1, 1, -1e-12, (0j, 0j)).passed


class TestStageOne:

    def test_first_polynomial(self, table, config):
        stage = init_stage1(table, config)
        expected = BiPoly.from_terms({(0, 2): 1.0, (1, 0): -1.0, (0, 0): table[1]})
        assert stage.p.allclose(expected)
        assert stage.c == 1.0
        assert stage.m == 1

    def test_rho_holds_the_sublevel_set(self, table, config):
        stage = init_stage1(table, config)
        assert stage.rho >= math.sqrt(2 + stage.eps)

    def test_sublevel_points_are_near_a_root(self, table, config):
        # |w^2 - z| <= eps forces min |w -/+ sqrt z| <= sqrt eps
        stage = init_stage1(table, config)
        rng = np.random.default_rng(5)
        z = rng.uniform(-1, 1, 2000) + 1j * rng.uniform(-1, 1, 2000)
        w = np.sqrt(z) + math.sqrt(stage.eps) * (rng.normal(size=2000) + 1j * rng.normal(size=2000))
        inside = np.abs(stage.p(z, w)) <= stage.eps
        nearest = np.minimum(np.abs(w - np.sqrt(z)), np.abs(w + np.sqrt(z)))
        assert np.all(nearest[inside] <= math.sqrt(stage.eps) * (1 + 1e-9))

    def test_wermer_constant(self, table, config):
        assert init_stage1(table, config, wermer=True).c == pytest.approx(0.1)

    def test_needs_two_branch_points(self, config):
        with pytest.raises(ValueError):
            init_stage1(BranchPointTable([(0, 0)]), config)


class TestSelectors:

    def test_analytic_cap(self, stage_one_context):
        # sup over |z| <= 2 of |z (z - 1)| is 6, reached at z = -2
        cap = analytic_cap(stage_one_context, UniPoly.one())
        assert cap == pytest.approx(1 / (10 * math.sqrt(6)), rel=1e-9)

    def test_c_stays_under_the_cap(self, stage_one_context, config):
        c = select_c(stage_one_context, UniPoly.one())
        assert 0 < c <= config.margin * analytic_cap(stage_one_context, UniPoly.one()) * (1 + 1e-12)

    def test_ladder_in_wermer_mode(self, table, config):
        stage = init_stage1(table, config, wermer=True)
        fs, _ = polynomial_chain(table, [stage.c])
        ctx = StageContext((stage,), fs, table, config, wermer=True)
        c = select_c(ctx, UniPoly.one())
        assert c <= stage.c / 10
        # a power-of-two fraction of the start, with no rounding on the way
        mantissa, _ = math.frexp((stage.c / 10) / c)
        assert mantissa == 0.5

    def test_first_order_jump_is_outside_the_halving_budget(self, stage_one_context, monkeypatch):
        monkeypatch.setattr(selectors, "C_HALVINGS", 0)
        monkeypatch.setattr(selectors, "_c_holds", lambda *args: True)
        ctx = stage_one_context
        cap = ctx.cfg.margin * analytic_cap(ctx, UniPoly.one())
        c = select_c(ctx, UniPoly.one())
        assert c <= cap
        assert math.frexp(cap / c)[0] == 0.5

    def test_ladder_gives_up_after_the_budget(self, stage_one_context, monkeypatch):
        monkeypatch.setattr(selectors, "_c_holds", lambda *args: False)
        with pytest.raises(SearchExhausted) as raised:
            select_c(stage_one_context, UniPoly.one())
        assert raised.value.halvings == selectors.C_HALVINGS

    def test_rho(self, stage_one_context):
        # |w| = |z|^(1/2) on the stage-1 branches, so D_3 reaches sqrt 3
        rho = select_rho(stage_one_context, 0.01, UniPoly.one())
        assert rho > math.sqrt(3)
        assert rho > stage_one_context.stage.rho + 1

    def test_next_polynomial(self, stage_one_context, table):
        ctx = stage_one_context
        c = 0.01
        rho = select_rho(ctx, c, UniPoly.one())
        p2, delta = build_p_next(ctx, c, UniPoly.one(), rho)
        R1 = radicand(table, UniPoly.one(), 1)
        assert R1.allclose(UniPoly.from_roots([table[1], table[1], table[2]]))
        assert p2.allclose(shift_product(ctx.stage.p, c, R1).scaled(delta))
        assert 0 < delta < 1

        rng = np.random.default_rng(6)
        for z0 in rng.uniform(-1.5, 1.5, 20) + 1j * rng.uniform(-1.5, 1.5, 20):
            roots = roots_in_w(p2, z0).values()
            a = np.sqrt(complex(z0))
            b = c * z0 * np.sqrt(complex(z0 - 1))
            expected = np.array([a + b, a - b, -a + b, -a - b])
            assert np.max(np.min(np.abs(roots[:, None] - expected[None, :]), axis=1)) <= 1e-8

    def test_next_polynomial_is_small_inside_the_bidisk(self, stage_one_context):
        ctx = stage_one_context
        rho = select_rho(ctx, 0.01, UniPoly.one())
        p2, _ = build_p_next(ctx, 0.01, UniPoly.one(), rho)
        rng = np.random.default_rng(7)
        z = 1.5 * np.exp(2j * np.pi * rng.uniform(size=100)) * rng.uniform(size=100)
        w = 0.5 * rho * np.exp(2j * np.pi * rng.uniform(size=100)) * rng.uniform(size=100)
        assert np.all(np.abs(p2(z, w)) <= ctx.cfg.margin)

    @pytest.mark.parametrize(
        "log_min, n, expected",
        [(-10.0, 2, 40), (0.0, 3, 1), (2.5, 1, 1), (-0.1, 1, 1), (-1.0, 4, 16)],
    )
    def test_m_from_minimum(self, log_min, n, expected):
        assert m_from_minimum(log_min, n) == expected


class TestLev1:

    def test_decreasing_sequence(self):
        log_eps = [math.log(value) for value in (1e-2, 1e-8, 1e-32)]
        sequence = lev1_sequence(log_eps)
        assert np.allclose(np.exp(sequence), [1e-1, 1e-2, 1e-4])

    def test_check(self):
        stages = [types.SimpleNamespace(log_eps=math.log(value)) for value in (1e-2, 1e-8, 1e-32)]
        sequence, decreasing = check_lev1(types.SimpleNamespace(stages=stages))
        assert decreasing
        assert len(sequence) == 3

    def test_constant_eps_fails(self):
        stages = [types.SimpleNamespace(log_eps=math.log(1e-3)) for _ in range(3)]
        _, decreasing = check_lev1(types.SimpleNamespace(stages=stages))
        assert not decreasing


class TestConstruction:

    def test_start_checks_stage_one(self):
        construction = Construction.start(GridConfig(z_grid=8, w_grid=8, max_stage=1))
        assert construction.depth == 1
        assert [report.predicate for report in construction.reports] == [Predicate.P1, Predicate.ES11]
        assert all(report.passed for report in construction.reports)
        assert construction.table[1] == 0

    def test_max_stage_stops_advancing(self):
        construction = Construction.start(GridConfig(z_grid=8, w_grid=8, max_stage=1))
        with pytest.raises(ConfigError):
            construction.advance()

    def test_unknown_mode(self, table, config):
        with pytest.raises(ConfigError):
            Construction(table, config, mode="classic")

    def test_stage_one_verification_order(self):
        construction = Construction.start(GridConfig(z_grid=8, w_grid=8, max_stage=1))
        reports = verify_stage(construction, 1)
        assert [report.predicate for report in reports] == [Predicate.P1, Predicate.ES11]


@pytest.mark.slow
class TestBuiltConstruction:

    def test_degree_doubles(self, built):
        assert built.depth == 3
        assert [stage.degree for stage in built.stages] == [2, 4, 8]

    def test_reports_pass_in_order(self, built):
        order = [Predicate.P1, Predicate.ES11, Predicate.P2, Predicate.C1, Predicate.C2,
                 Predicate.XXX, Predicate.ES4, Predicate.ES1, Predicate.LEV1]
        for n in (2, 3):
            reports = built.reports_for(n)
            assert [report.predicate for report in reports] == order
            assert all(report.passed for report in reports)

    def test_invariants(self, built):
        stages = built.stages
        for before, after in zip(stages, stages[1:]):
            assert after.eps_exponent > before.eps_exponent
            assert after.rho > before.rho + 1
            # eps_(n+1) <= e^-m_(n+1)
            assert after.log_eps <= -after.m
        _, decreasing = check_lev1(built)
        assert decreasing

    def test_collision_zeros_are_inherited(self, built):
        second, third = built.stages[1], built.stages[2]
        assert second.Z is not None and second.Z_roots is not None
        assert third.Z is None
        Z3, zeros = built.collision_polynomial()
        assert zeros.contains(second.Z_roots, 100 * built.config.collision_tol)
        assert Z3.degree == zeros.degree
        for k in (1, 2, 3):
            if len(zeros):
                assert np.min(np.abs(zeros.roots - built.table[k])) > built.config.branch_exclusion

    def test_stage_four_at_default_densities(self, deep_built):
        assert deep_built.depth == 4
        assert deep_built.config.z_grid == GridConfig().z_grid
        for n in (2, 3, 4):
            assert all(report.passed for report in deep_built.reports_for(n))
        fourth = deep_built.stages[3]
        assert 0 < fourth.c < deep_built.stages[2].c
        assert math.isfinite(fourth.log_eps)

    def test_advance_leaves_the_snapshot_alone(self):
        start = Construction.start(GridConfig(z_grid=8, w_grid=8, max_stage=2))
        advanced = start.advance()
        assert start.depth == 1
        assert advanced.depth == 2
        assert start.stages[0].Z is None
        assert advanced.stages[0].Z is not None

    def test_wermer_mode(self):
        construction = Construction.start(GridConfig(z_grid=8, w_grid=8, max_stage=3), mode="wermer")
        construction = construction.advance().advance()
        for stage in construction.stages[:-1]:
            assert stage.Z.allclose(UniPoly.one())
        for before, after in zip(construction.stages, construction.stages[1:]):
            assert after.c <= before.c / 10
        assert np.all(np.abs(construction.table.as_array(4)) < 0.5)
