import numpy as np
import pytest

from wermerset.utils.algebra import (
    BiPoly,
    RootSet,
    UniPoly,
    batch_roots,
    discriminant_in_w,
    poly_eval,
    roots_in_w,
    shift_product,
    uni_roots,
)
from wermerset.utils.errors import ClusterAmbiguity, Degenerate


def square_root_poly(a1: complex = 0.0) -> BiPoly:
    """w^2 - (z - a1)"""

    return BiPoly.from_terms({(0, 2): 1.0, (1, 0): -1.0, (0, 0): a1})


class TestBiPoly:

    def test_evaluation(self):
        p = square_root_poly()
        assert p(1, 1) == 0
        assert p(0, 0) == 0
        assert p(2 + 1j, 0) == pytest.approx(-2 - 1j)
        assert poly_eval(p, 2 + 1j, 0) == pytest.approx(-2 - 1j)
        assert isinstance(poly_eval(p, 4, 2), complex)

    def test_broadcasts_z_against_w(self):
        p = square_root_poly()
        z = np.array([1.0, 4.0, 9.0])
        values = p(z[:, None], np.array([1.0, 2.0, 3.0])[None, :])
        assert values.shape == (3, 3)
        assert np.allclose(np.diag(values), [0, 0, 0])

    def test_degrees_are_trimmed(self):
        p = BiPoly(np.array([[0, 0, 1, 0], [-1, 0, 0, 0], [0, 0, 0, 0]]))
        assert (p.deg_z, p.deg_w) == (1, 2)

    def test_leading_constant(self):
        assert square_root_poly().scaled(3.0).leading_constant() == 3.0

    def test_leading_coefficient_depending_on_z_is_degenerate(self):
        p = BiPoly.from_terms({(1, 2): 1.0, (0, 0): 1.0})
        with pytest.raises(Degenerate):
            p.leading_constant()

    def test_taylor_in_w(self):
        # p(z, w + t) = w^2 + 2wt + t^2 - z
        p = square_root_poly()
        assert p.taylor_in_w(1).allclose(BiPoly.from_terms({(0, 1): 2.0}))
        assert p.taylor_in_w(2).allclose(BiPoly.from_terms({(0, 0): 1.0}))
        assert p.taylor_in_w(3).allclose(BiPoly.zero())

    def test_product_matches_pointwise_product(self):
        rng = np.random.default_rng(3)
        p = BiPoly(rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4)))
        q = BiPoly(rng.normal(size=(2, 3)))
        z = rng.normal(size=10) + 1j * rng.normal(size=10)
        w = rng.normal(size=10) + 1j * rng.normal(size=10)
        assert np.allclose((p * q)(z, w), p(z, w) * q(z, w))


class TestShiftProduct:

    def expected(self, c: float, R: UniPoly) -> BiPoly:
        # (w^2 + c^2 R - z)^2 - 4 c^2 R w^2
        inner = BiPoly.from_terms({(0, 2): 1.0, (1, 0): -1.0}) + BiPoly.from_uni(R * (c * c))
        return inner * inner - BiPoly.from_terms({(0, 2): 4 * c * c}).times_uni(R)

    def test_square_root_poly(self):
        R = UniPoly([0.0, 0.0, -1.0, 1.0])  # z^2 (z - 1)
        result = shift_product(square_root_poly(), 0.2, R)
        assert result.deg_w == 4
        assert result.allclose(self.expected(0.2, R))

    def test_zero_shift_squares(self):
        p = square_root_poly(0.5)
        assert shift_product(p, 0.0, UniPoly([2.0, 1.0])).allclose(p * p)

    def test_matches_root_product(self):
        rng = np.random.default_rng(11)
        a = [0.0, 1.0, 1j]
        R1 = UniPoly.from_roots([a[0], a[0], a[1]])
        p2 = shift_product(square_root_poly(a[0]), 0.3, R1)
        R2 = UniPoly.from_roots([a[0], a[0], a[1], a[1], a[2]])
        p3 = shift_product(p2, 0.05, R2)

        z = rng.uniform(-1.5, 1.5, 40) + 1j * rng.uniform(-1.5, 1.5, 40)
        w = rng.uniform(-1.5, 1.5, 40) + 1j * rng.uniform(-1.5, 1.5, 40)
        for z0, w0 in zip(z, w):
            roots = roots_in_w(p3, z0).values()
            direct = np.prod(w0 - roots)
            assert abs(p3(z0, w0) - direct) <= 1e-8 * max(1.0, abs(direct))

    def test_degree_doubles_each_time(self):
        p = square_root_poly()
        for n in range(1, 4):
            p = shift_product(p, 0.1 ** n, UniPoly.from_roots([0.0] * (2 * n) + [n]))
            assert p.deg_w == 2 ** (n + 1)


class TestRootsInW:

    def test_unit_fibre(self):
        roots = roots_in_w(square_root_poly(), 1.0)
        assert np.allclose(np.sort_complex(roots.values()), [-1, 1])
        assert roots.degree == 2

    def test_branch_point_is_a_double_root(self):
        roots = roots_in_w(square_root_poly(), 0.0)
        assert len(roots) == 1
        assert list(roots.multiplicities) == [2]
        assert abs(roots.roots[0]) < 1e-7

    def test_principal_root(self):
        roots = roots_in_w(square_root_poly(), 2 + 1j)
        expected = 1.45535 + 0.34356j
        assert np.min(np.abs(roots.roots - expected)) < 1e-5
        assert np.min(np.abs(roots.roots + expected)) < 1e-5

    def test_needs_a_w_variable(self):
        with pytest.raises(ValueError):
            roots_in_w(BiPoly.from_terms({(1, 0): 1.0}), 0.0)


class TestUniRoots:

    def test_double_root(self):
        q = UniPoly.from_roots([1.0, -1j], [2, 1])
        roots = uni_roots(q, cluster_tol=1e-6)
        found = {complex(np.round(r, 6)): int(m) for r, m in zip(roots.roots, roots.multiplicities)}
        assert found == {1 + 0j: 2, -1j: 1}

    def test_imaginary_pair(self):
        roots = uni_roots(UniPoly([1.0, 0.0, 1.0]))
        assert np.allclose(np.sort_complex(roots.roots), [-1j, 1j])

    def test_known_factors_round_trip(self):
        rng = np.random.default_rng(12)
        expected = rng.uniform(-2, 2, 12) + 1j * rng.uniform(-2, 2, 12)
        roots = uni_roots(UniPoly.from_roots(expected), cluster_tol=1e-10, strict=False)
        assert roots.degree == 12
        for root in expected:
            assert np.min(np.abs(roots.roots - root)) < 1e-8

    def test_zero_roots_are_kept(self):
        roots = uni_roots(UniPoly([0.0, 0.0, -1.0, 1.0]), cluster_tol=1e-9)
        assert roots.degree == 3
        assert 0 in list(roots.roots)

    def test_constant_has_no_roots(self):
        with pytest.raises(ValueError):
            uni_roots(UniPoly([3.0]))

    def test_strict_clustering(self):
        with pytest.raises(ClusterAmbiguity):
            RootSet.from_values([0.0, 5e-7, 1.0], cluster_tol=1e-7, strict=True)

    def test_batch_roots_shape(self):
        coeffs = np.array([[-1.0, 0.0, 1.0], [-4.0, 0.0, 1.0]])
        roots = np.sort_complex(batch_roots(coeffs))
        assert roots.shape == (2, 2)
        assert np.allclose(roots, [[-1, 1], [-2, 2]])


class TestRootSet:

    def test_min_gap(self):
        roots = RootSet([0.0, 1.0, 3.0], [1, 1, 1])
        assert roots.min_gap() == pytest.approx(1.0)
        assert RootSet([0.0], [2]).min_gap() == 0.0

    def test_contains(self):
        big = RootSet([0.0, 1.0], [2, 1])
        assert big.contains(RootSet([0.0], [1]), 1e-9)
        assert not big.contains(RootSet([1.0], [2]), 1e-9)
        assert not big.contains(RootSet([2.0], [1]), 1e-9)

    def test_nearest_distance(self):
        roots = RootSet([0.0, 2.0], [1, 1])
        assert np.allclose(roots.nearest_distance([0.5, 1.5, 3.0]), [0.5, 0.5, 1.0])
        assert np.all(np.isinf(RootSet.empty().nearest_distance([1.0])))


class TestDiscriminant:

    def test_square_root_poly(self):
        disc = discriminant_in_w(square_root_poly(0.5))
        assert disc.degree == 1
        roots = uni_roots(disc)
        assert np.allclose(roots.roots, [0.5], atol=1e-9)

    def test_stage_two_vanishes_at_branch_points(self):
        a1, a2 = 0.0, 1.0
        p2 = shift_product(square_root_poly(a1), 0.1, UniPoly.from_roots([a1, a1, a2]))
        disc = discriminant_in_w(p2)
        for a in (a1, a2):
            assert abs(disc(a)) <= 1e-8 * np.abs(disc.coeffs).max()

    def test_distinct_roots_give_nonzero_values(self):
        disc = discriminant_in_w(square_root_poly())
        z = np.array([1.0, -2.0, 3j, 0.5 - 0.5j])
        assert np.all(np.abs(disc(z)) > 0)
