import dataclasses
import logging
import typing

import numpy as np

from wermerset.utils.algebra import RootSet
from wermerset.utils.branches import FibreFrame
from wermerset.utils.construction import unit_stencil


logger = logging.getLogger("wermerset.analysis")


@dataclasses.dataclass(frozen=True)
class FiberReport(object):
    """The stage-N approximation of the fibre of X above z0

    Params:
        z0: complex
        stage: int
        roots: RootSet
            The roots of p_N(z0, .), which are the branch values of g_N
        sublevel_samples: array of complex
            Samples with |p_j(z0, w)| <= eps_j for membership <= j <= N
        min_pair_gap: float
            The smallest distance between two roots
        hausdorff_root_to_sublevel: float
            The largest distance from a sublevel sample to its nearest root
        membership: int
            The smallest n with z0 in D_(n+1), where the conditions on the fibre start
    """

    z0: complex
    stage: int
    roots: RootSet
    sublevel_samples: np.ndarray
    min_pair_gap: float
    hausdorff_root_to_sublevel: float
    membership: typing.Optional[int]

    def __repr__(self) -> str:
        return f"FiberReport[z0={self.z0} <stage {self.stage}, {len(self.roots)} roots, {self.sublevel_samples.size} samples>]"


def membership_index(construction, z0: complex) -> typing.Optional[int]:
    """The smallest n with |z0| < r_(n+1), or None when z0 is outside every disk"""

    for n in range(1, construction.config.max_stage + 1):
        if abs(z0) < construction.disk_radius(n + 1):
            return n
    return None


def stage_frame(construction, z, N: int) -> FibreFrame:
    """A frame for g_N over the given points"""

    leads = [stage.log_lead for stage in construction.stages[:N]]
    return FibreFrame(construction.function_set(N), np.atleast_1d(z), leads)


def fiber(construction, z0: complex, N: int) -> FiberReport:
    """Roots and sublevel samples of the stage-N fibre above z0

    The sublevel samples are local stencils around the roots, kept when they pass
    every stage from the membership index up to N (only stage N when z0 lies
    outside D_(N+1)).
    """

    if not 1 <= N <= construction.depth:
        raise ValueError(f"Stage {N} isn't built (the construction has {construction.depth})")
    cfg = construction.config
    z0 = complex(z0)
    frame = stage_frame(construction, z0, N)
    values = frame.branches(N)[0]
    roots = RootSet.from_values(values, cfg.cluster_tol)

    n0 = membership_index(construction, z0)
    first = N if n0 is None or n0 > N else n0
    stage = construction.stages[N - 1]
    samples, mask = frame.sublevel_samples(N, stage.log_eps, unit_stencil(2 * cfg.local_samples))
    for j in range(first, N):
        mask &= frame.log_modulus(j, samples) <= construction.stages[j - 1].log_eps

    # Distance from each sample to every root, formed from the exact differences
    picked = frame.differences(N, N)[0][samples.base[0]]
    offset = np.exp(samples.log_radius[0]) * samples.direction[0]
    nearest = np.min(np.abs(picked + offset[:, None]), axis=-1)
    hausdorff = float(np.max(nearest[mask[0]])) if np.any(mask) else 0.0

    report = FiberReport(
        z0=z0,
        stage=N,
        roots=roots,
        sublevel_samples=samples.values(frame)[0][mask[0]],
        min_pair_gap=float(frame.min_gap(N)[0]),
        hausdorff_root_to_sublevel=hausdorff,
        membership=n0,
    )
    logger.debug(repr(report))
    return report
