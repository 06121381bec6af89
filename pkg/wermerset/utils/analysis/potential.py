import dataclasses
import logging
import typing

import numpy as np

from wermerset.utils.analysis.fiber import stage_frame
from wermerset.utils.branches import FibreFrame, FibreSamples
from wermerset.utils.construction import circle_points


logger = logging.getLogger("wermerset.analysis")

CLAMP = -1.0


@dataclasses.dataclass(frozen=True)
class PotentialSample(object):
    """u_N at one point, with the number of terms that hit the clamp at -1"""

    z: complex
    w: complex
    stage: int
    value: float
    clamped_terms: int


@dataclasses.dataclass(frozen=True)
class SubharmonicityReport(object):
    """Sub-mean-value checks of z -> max_w u_N(z, w) over circles

    Params:
        stage: int
        checks: int
        violations: int
            Checks where the centre value exceeds the circle mean by more than tol
        worst_excess: float
            The largest centre value minus circle mean seen
        worst_center: complex
        tol: float
    """

    stage: int
    checks: int
    violations: int
    worst_excess: float
    worst_center: complex
    tol: float

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _sum_terms(construction, log_moduli: typing.Callable[[int], np.ndarray], N: int):
    total = 0.0
    clamped = 0
    for n in range(2, N + 1):
        scaled = log_moduli(n) / construction.stages[n - 1].m
        hit = scaled <= CLAMP
        total = total + np.where(hit, CLAMP, scaled)
        clamped = clamped + hit.astype(int)
    return total, clamped


def potential_grid(construction, z, w, N: int) -> typing.Tuple[np.ndarray, np.ndarray]:
    """u_N and the clamp counts at w[i, :] above z[i]"""

    if not 2 <= N <= construction.depth:
        raise ValueError(f"The potential needs 2 <= N <= {construction.depth}, got {N}")
    frame = stage_frame(construction, z, N)
    w = np.asarray(w, dtype=complex).reshape(frame.size, -1)
    with np.errstate(divide="ignore"):
        return _sum_terms(construction, lambda n: frame.log_modulus_at(n, w), N)


def potential(construction, z: complex, w: complex, N: int) -> PotentialSample:
    """u_N(z, w) = sum over n = 2 .. N of max((1/m_n) log |p_n(z, w)|, -1)"""

    values, clamped = potential_grid(construction, [z], [[w]], N)
    return PotentialSample(complex(z), complex(w), N, float(values[0, 0]), int(clamped[0, 0]))


def potential_at_branches(frame: FibreFrame, construction, N: int) -> np.ndarray:
    """u_N at the exact roots of p_N above each point of the frame, shape (size, 2^N)"""

    count = 2 ** N
    samples = FibreSamples(
        level=N,
        base=np.broadcast_to(np.arange(count), (frame.size, count)).copy(),
        log_radius=np.full((frame.size, count), -np.inf),
        direction=np.ones((frame.size, count), dtype=complex),
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        values, _ = _sum_terms(construction, lambda n: frame.log_modulus(n, samples), N)
    return values


def fiber_max(construction, z, N: int) -> np.ndarray:
    """M(z): the largest u_N over the roots of p_N(z, .)"""

    frame = stage_frame(construction, np.asarray(z).reshape(-1), N)
    return potential_at_branches(frame, construction, N).max(axis=-1).reshape(np.shape(z))


def fiber_max_subharmonicity(
    construction,
    centers,
    radius: float,
    N: int,
    nodes: int = 64,
    tol: float = 1e-3,
    potential_fn: typing.Callable[[np.ndarray], np.ndarray] = None,
) -> SubharmonicityReport:
    """Checks M(z) <= mean of M over the circle of the given radius around each centre

    The mean uses the trapezoidal rule on at least 64 nodes. potential_fn replaces M,
    which is how the check itself is tested on harmonic functions.
    """

    nodes = max(64, int(nodes))
    if potential_fn is None:
        potential_fn = lambda z: fiber_max(construction, z, N)  # noqa: E731
    centers = np.atleast_1d(np.asarray(centers, dtype=complex))
    circle = circle_points(0, radius, nodes)
    middle = np.asarray(potential_fn(centers), dtype=float)
    around = np.asarray(potential_fn(centers[:, None] + circle[None, :]), dtype=float)
    excess = middle - around.mean(axis=-1)
    worst = int(np.argmax(excess))
    report = SubharmonicityReport(
        stage=N,
        checks=int(centers.size),
        violations=int(np.sum(excess > tol)),
        worst_excess=float(excess[worst]),
        worst_center=complex(centers[worst]),
        tol=tol,
    )
    logger.info(
        f"Fibre-max sub-mean-value at stage {N}: {report.violations}/{report.checks} violations, "
        f"worst excess {report.worst_excess:.3g}"
    )
    return report
