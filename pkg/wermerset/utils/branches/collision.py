import itertools
import logging
import typing

import numpy as np
import numpy.polynomial.polynomial as npp

from wermerset.utils.algebra import BiPoly, RootSet, UniPoly, discriminant_in_w, shift_product, uni_roots
from wermerset.utils.branches.branch_point_table import BranchPointTable
from wermerset.utils.branches.fibre_frame import FibreFrame
from wermerset.utils.branches.stage_function_set import StageFunctionSet
from wermerset.utils.errors import OrderEstimateUnstable


logger = logging.getLogger("wermerset.branches")

RING_SAMPLES = 16
SLOPE_AGREEMENT = 0.25
RADIUS_RETRIES = 3


def min_branch_gaps(fs: StageFunctionSet, z) -> np.ndarray:
    """The smallest distance between two branches of g_n at every z given"""

    frame = FibreFrame(fs, z, [0.0] * fs.n)
    return frame.min_gap().reshape(np.shape(z))


def _slope(fs: StageFunctionSet, center: complex, outer: float) -> float:
    """Least-squares slope of log(min gap) against log(radius) on two rings"""

    angles = 2 * np.pi * (np.arange(RING_SAMPLES) + 0.5) / RING_SAMPLES
    x, y = [], []
    for radius in (outer, outer / 2):
        gaps = min_branch_gaps(fs, center + radius * np.exp(1j * angles))
        x.append(np.full(RING_SAMPLES, np.log(radius)))
        y.append(np.log(np.maximum(gaps, 1e-300)))
    x = np.concatenate(x)
    y = np.concatenate(y)
    x = x - x.mean()
    return float(np.dot(x, y - y.mean()) / np.dot(x, x))


def estimate_collision_order(fs: StageFunctionSet, center: complex, radius: float) -> float:
    """Numerical vanishing order of the closest pair of branches at center

    The smallest branch gap is dominated by the pair vanishing to the highest order,
    so this is the largest order among the colliding pairs. Two radius pairs (r, r/2)
    and (r/2, r/4) each give a slope and they have to agree.

    Raises:
        OrderEstimateUnstable: the two slopes differ by more than 0.25
    """

    slopes = (_slope(fs, center, radius), _slope(fs, center, radius / 2))
    if abs(slopes[0] - slopes[1]) > SLOPE_AGREEMENT:
        raise OrderEstimateUnstable(center, slopes)
    return (slopes[0] + slopes[1]) / 2


def _linear(root: complex) -> UniPoly:
    return UniPoly([-root, 1.0])


def difference_norm(indices: typing.Sequence[int], fs: StageFunctionSet) -> UniPoly:
    """A polynomial whose zeros are the points where sum_(j in indices) +/- T_j vanishes
    for some choice of signs, T_j = c_j Z_(j-1) beta_j

    With j0 the smallest index, every T_j is T_j0 times
    (c_j / c_j0) K_j sqrt((z - a_j0)(z - a_j)), K_j = (Z_(j-1) / Z_(j0-1)) prod_(j0<l<j) (z - a_l).
    The zeros of T_j0 (branch points and old collision zeros) are left out; the
    remaining ones are those of prod (1 +/- ...) over all signs, which is the value at
    w = 0 of the polynomial whose roots are -1 +/- ... and is built by shift products.
    """

    indices = sorted(indices)
    j0 = indices[0]
    table = fs.table
    base = fs.z_polys[j0 - 1]
    q = BiPoly.from_terms({(0, 1): 1.0, (0, 0): 1.0})
    for j in indices[1:]:
        factor = UniPoly(npp.polydiv(fs.z_polys[j - 1].coeffs, base.coeffs)[0])
        for l in range(j0 + 1, j):
            factor = factor * _linear(table[l])
        radicand = factor * factor * _linear(table[j0]) * _linear(table[j])
        q = shift_product(q, fs.constants[j - 1] / fs.constants[j0 - 1], radicand)
    return UniPoly(q.coeffs[:, 0])


def _candidates(n: int, fs: StageFunctionSet, p_n: BiPoly, cfg, all_types: bool, method: str) -> np.ndarray:
    if method == "discriminant":
        disc = discriminant_in_w(p_n)
        if disc.degree < 1:
            return np.zeros(0, dtype=complex)
        return uni_roots(disc, cfg.collision_tol, strict=False).roots
    values = []
    for size in range(2, n + 1):
        for indices in itertools.combinations(range(1, n + 1), size):
            if not all_types and n not in indices:
                continue
            norm = difference_norm(indices, fs)
            if norm.degree >= 1:
                values.extend(uni_roots(norm, cfg.collision_tol, strict=False).roots)
    return RootSet.from_values(values, cfg.collision_tol).roots


def collision_zeros(
    n: int,
    fs: StageFunctionSet,
    p_n: BiPoly,
    table: BranchPointTable,
    cfg,
    previous: RootSet = None,
    method: str = "factored",
) -> RootSet:
    """The zeros z_i of Z_n with their orders m_i

    Candidates are the points where two branches of g_n meet away from a_1 .. a_n:
    either the zeros of the w-discriminant of p_n (method "discriminant") or, the
    default, the zeros of the difference norms, which are the factors of that
    discriminant taken one difference type at a time. Each candidate gets the order
    estimated from the branch gaps around it; candidates whose order rounds to 0 are
    numerical noise and are dropped. Zeros of Z_(n-1) are carried over with at least
    their old multiplicity.
    """

    if n < 2:
        return RootSet.empty()

    candidates = _candidates(n, fs, p_n, cfg, previous is None, method)
    branch_points = table.as_array(n)
    candidates = [z for z in candidates if np.min(np.abs(branch_points - z)) > cfg.branch_exclusion]
    logger.debug(f"Stage {n}: {len(candidates)} collision candidates off the branch points")

    carried = list(previous.roots) if previous is not None else []
    zeros: typing.List[complex] = []
    orders: typing.List[int] = []
    for index, z in enumerate(candidates):
        others = np.array(
            [w for k, w in enumerate(candidates) if k != index] + list(branch_points) + carried,
            dtype=complex,
        )
        radius = cfg.order_radius
        if others.size:
            radius = min(radius, 0.25 * float(np.min(np.abs(others - z))))
        for attempt in range(RADIUS_RETRIES + 1):
            try:
                order = estimate_collision_order(fs, z, radius)
                break
            except OrderEstimateUnstable:
                if attempt == RADIUS_RETRIES:
                    raise
                radius /= 4
        m = int(round(order))
        if m >= 1:
            zeros.append(complex(z))
            orders.append(m)

    if previous is not None:
        for zeta, mu in zip(previous.roots, previous.multiplicities):
            distances = np.abs(np.asarray(zeros, dtype=complex) - zeta)
            if distances.size and distances.min() <= 100 * cfg.collision_tol:
                k = int(np.argmin(distances))
                zeros[k] = complex(zeta)
                orders[k] = max(orders[k], int(mu))
            else:
                zeros.append(complex(zeta))
                orders.append(int(mu))

    logger.info(f"Stage {n}: Z_{n} has {len(zeros)} zeros, degree {sum(orders)}")
    return RootSet(zeros, orders, cfg.collision_tol)


def compute_Z(
    n: int,
    fs: StageFunctionSet,
    p_n: BiPoly,
    table: BranchPointTable,
    cfg,
    previous: RootSet = None,
    method: str = "factored",
) -> UniPoly:
    """Z_n = prod (z - z_i)^(m_i) over the collision zeros of the branches of g_n"""

    zeros = collision_zeros(n, fs, p_n, table, cfg, previous, method)
    return UniPoly.from_roots(zeros.roots, zeros.multiplicities)
