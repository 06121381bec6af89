import math

import numpy as np
import pytest

from wermerset.utils.analysis import (
    CircleProbe,
    CoherenceReport,
    coherence_check,
    complement_nesting_check,
    cut_crossings,
    disk_sampler,
    extract_E,
    fiber,
    fiber_max,
    fiber_max_subharmonicity,
    jump_check,
    membership_index,
    potential,
    potential_grid,
    segment_sampler,
    separation_check,
    shadow_check,
    stage_frame,
    validate_probe,
)
from wermerset.utils.construction import Construction, GridConfig, disk_grid
from wermerset.utils.errors import ProbeInvalid


class TestFiber:

    def test_stage_one_roots(self, hand_built):
        report = fiber(hand_built, 1.0, 1)
        assert np.allclose(report.roots.roots, [-1, 1])
        assert report.min_pair_gap == pytest.approx(2.0)
        assert report.membership == 1
        assert report.sublevel_samples.size > 0
        assert report.hausdorff_root_to_sublevel < 2e-3

    def test_deeper_fibre(self, hand_built):
        report = fiber(hand_built, 0.5 + 0.25j, 3)
        assert report.roots.degree == 8
        assert report.min_pair_gap > 0
        assert np.all(np.isfinite(report.sublevel_samples))

    def test_unbuilt_stage(self, hand_built):
        with pytest.raises(ValueError):
            fiber(hand_built, 0.5, 4)

    @pytest.mark.parametrize("z0, expected", [(0.5, 1), (-1.9j, 1), (2.5, 2), (5.5, 5), (100.0, None)])
    def test_membership_index(self, hand_built, z0, expected):
        construction = Construction(hand_built.table, GridConfig(max_stage=5), "modified", hand_built.stages)
        assert membership_index(construction, z0) == expected


class TestProbes:

    @pytest.fixture
    def probe(self):
        return CircleProbe(0.0, 0.75, 1)

    def test_separation_at_stage_one(self, hand_built, probe):
        # |h_+ - h_-| = 2 c_1 |beta_1|
        assert round(separation_check(hand_built, probe), 6) == 2.0

    def test_shadow_of_the_same_stage(self, hand_built):
        assert shadow_check(hand_built, 1.5 + 0.5j, 3, 3) == 0.0

    def test_shadow_of_the_first_stage(self, hand_built):
        assert shadow_check(hand_built, 1.5 + 0.5j, 3, 1) <= 1 / 9
        assert 0 <= shadow_check(hand_built, 1.5 + 0.5j, 2, 1, sublevel=True) < 1 / 4

    def test_shadow_needs_ordered_stages(self, hand_built):
        with pytest.raises(ValueError):
            shadow_check(hand_built, 0.5, 2, 3)

    def test_jump_at_stage_one(self, hand_built, probe):
        crossings = cut_crossings(hand_built, probe)
        assert len(crossings) == 1
        jump, reference = jump_check(hand_built, probe, crossings[0])
        assert reference == pytest.approx(2 * math.sqrt(0.75))
        assert jump == pytest.approx(reference, rel=1e-9)

    def test_jump_needs_a_point_on_the_cut(self, hand_built, probe):
        with pytest.raises(ProbeInvalid):
            jump_check(hand_built, probe, 0.75)
        with pytest.raises(ProbeInvalid):
            jump_check(hand_built, probe, 0.5)

    def test_circle_through_a_branch_point(self, hand_built):
        with pytest.raises(ProbeInvalid):
            validate_probe(hand_built, CircleProbe(0.5, 0.5, 1))
        with pytest.raises(ValueError):
            validate_probe(hand_built, CircleProbe(0.0, 0.75, 4))

    def test_coherence(self, hand_built, probe):
        report = coherence_check(hand_built, probe, 3)
        assert isinstance(report, CoherenceReport)
        assert report.passed
        assert report.max_ratio < 0.1

    def test_coherence_report(self):
        assert not CoherenceReport(0.5, 0).passed
        assert not CoherenceReport(0.1, 2).passed


class TestPotential:

    def test_far_from_the_set(self, hand_built):
        z, w = 0.3, 100.0
        expected = sum(
            max(math.log(abs(hand_built.stages[n - 1].p(z, w))) / hand_built.stages[n - 1].m, -1.0) for n in (2, 3)
        )
        sample = potential(hand_built, z, w, 3)
        assert sample.value == pytest.approx(expected, rel=1e-9)
        assert sample.clamped_terms == 0

    def test_clamped_at_a_root(self, hand_built):
        w = stage_frame(hand_built, 0.3, 2).branches(2)[0, 0]
        sample = potential(hand_built, 0.3, w, 2)
        assert sample.value == -1.0
        assert sample.clamped_terms == 1

    def test_grid_shape(self, hand_built):
        z = np.array([0.1, 0.2, 0.3])
        w = np.linspace(-2, 2, 5)[None, :].repeat(3, axis=0)
        values, clamped = potential_grid(hand_built, z, w, 3)
        assert values.shape == clamped.shape == (3, 5)
        assert np.all(values >= -2.0)

    def test_needs_two_stages(self, hand_built):
        with pytest.raises(ValueError):
            potential(hand_built, 0.3, 0.0, 1)

    def test_fiber_max_shape(self, hand_built):
        values = fiber_max(hand_built, np.array([[0.2, 0.4], [0.6, 0.8]]), 2)
        assert values.shape == (2, 2)

    def test_harmonic_function_passes(self, hand_built):
        report = fiber_max_subharmonicity(hand_built, [0.3, 0.5j], 0.1, 2, potential_fn=np.real)
        assert report.passed
        assert abs(report.worst_excess) < 1e-12
        assert report.checks == 2

    def test_superharmonic_function_fails(self, hand_built):
        report = fiber_max_subharmonicity(hand_built, [0.3, 0.5j], 0.1, 2, potential_fn=lambda z: -np.abs(z) ** 2)
        assert report.violations == 2
        assert report.worst_excess == pytest.approx(0.01)


class TestExtraction:

    def test_samplers(self):
        segment = segment_sampler(0.0, 1 + 1j, 5)()
        assert segment[0] == 0 and segment[-1] == 1 + 1j
        first = disk_sampler(0.5, 0.25, 100, seed=3)()
        assert np.array_equal(first, disk_sampler(0.5, 0.25, 100, seed=3)())
        assert np.all(np.abs(first - 0.5) <= 0.25)

    def test_roots_over_a_segment(self, hand_built):
        cloud = extract_E(hand_built, segment_sampler(0.2, 0.8, 5), 2)
        assert len(cloud) == 5 * 4
        assert np.allclose(np.unique(cloud.z), cloud.samples)
        for index in range(5):
            fibre = cloud.fibre(index)
            assert fibre.size == 4
            # the fibre is symmetric under w -> -w
            assert np.max(np.min(np.abs(fibre[:, None] + fibre[None, :]), axis=1)) < 1e-12

    def test_sublevel_points(self, hand_built):
        cloud = extract_E(hand_built, np.linspace(2.2, 2.8, 4), 2, per_point_roots=False)
        assert set(cloud.source) == {0, 1, 2, 3}
        frame = stage_frame(hand_built, cloud.z, 2)
        logs = frame.log_modulus_at(2, cloud.w[:, None])
        assert np.all(logs <= hand_built.stages[1].log_eps + 1e-2)

    def test_unbuilt_stage(self, hand_built):
        with pytest.raises(ValueError):
            extract_E(hand_built, [0.5], 4)


@pytest.mark.slow
class TestBuiltAnalysis:

    @pytest.mark.parametrize("n", [1, 2])
    def test_complement_nesting(self, built, n):
        report = complement_nesting_check(built, n)
        assert report.checks > 0
        assert report.passed

    def test_nesting_needs_a_following_stage(self, built):
        with pytest.raises(ValueError):
            complement_nesting_check(built, 3)

    def test_separation(self, built):
        assert separation_check(built, CircleProbe(0.0, 0.75, 1)) > 1.5

    def test_shadows(self, built):
        for z0 in (0.4 + 0.3j, -0.6 + 0.2j, 1.5 - 0.5j):
            assert shadow_check(built, z0, 3, 2) <= 1 / 9 + 1e-8


@pytest.mark.slow
class TestStageFourAnalysis:

    def test_potential_at_the_roots(self, deep_built):
        rng = np.random.default_rng(11)
        z = 2.5 * np.sqrt(rng.uniform(size=50)) * np.exp(2j * np.pi * rng.uniform(size=50))
        # every term is clamped at a root of p_4
        assert np.all(fiber_max(deep_built, z, 4) <= -3 + 1e-9)
        assert np.all(fiber_max(deep_built, z, 2) <= -1 + 1e-9)

    def test_tail_outside_the_second_sublevel_set(self, deep_built):
        config = deep_built.config.verification()
        z = disk_grid(2.0, config.z_grid, boundary=False)[::97]
        second = deep_built.stages[1]
        w = disk_grid(second.rho, 4.0, boundary=False)
        w = np.broadcast_to(w, (z.size, w.size))
        frame = stage_frame(deep_built, z, 4)
        outside = frame.log_modulus_at(2, w) > second.log_eps
        u4, _ = potential_grid(deep_built, z, w, 4)
        u2, _ = potential_grid(deep_built, z, w, 2)
        assert outside.any()
        assert np.all((u4 - u2)[outside] >= -(1 / 4 + 1 / 8) - 1e-9)

    def test_shadows_up_to_stage_four(self, deep_built):
        for z0 in (0.4 + 0.3j, -0.6 + 0.2j, 1.5 - 0.5j, -1.1 - 1.2j):
            for N in range(1, 5):
                for k in range(1, N + 1):
                    assert shadow_check(deep_built, z0, N, k) <= 1 / 9 + 1e-8
