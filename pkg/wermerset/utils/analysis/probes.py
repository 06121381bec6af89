import dataclasses
import logging
import math
import typing

import numpy as np

from wermerset.utils.analysis.fiber import stage_frame
from wermerset.utils.branches import SignVector, branch_eval, track_branch
from wermerset.utils.construction import circle_points, unit_stencil
from wermerset.utils.errors import ProbeInvalid


logger = logging.getLogger("wermerset.analysis")

EXCLUSION_FACTOR = 10
CUT_TOL = 1e-9
TRACK_STEPS = 720


@dataclasses.dataclass(frozen=True)
class CircleProbe(object):
    """A circle C(z', r) used to test the branches of g_k

    Params:
        center: complex
        radius: float
        k: int
            The reference stage
        samples: int = 512
    """

    center: complex
    radius: float
    k: int
    samples: int = 512

    @property
    def spacing(self) -> float:
        return 2 * math.pi * self.radius / self.samples

    def points(self, offset: float = 0.5) -> np.ndarray:
        return circle_points(self.center, self.radius, self.samples, offset)

    def angle_of(self, z: complex) -> float:
        return math.atan2((z - self.center).imag, (z - self.center).real)


@dataclasses.dataclass(frozen=True)
class CoherenceReport(object):
    """How one root of p_N follows a branch of g_k around a probe circle

    Params:
        max_ratio: float
            The largest |root - h_i| / (c_k |Z_(k-1) beta_k|) seen, h_i being the branch
            of g_k the root started next to (followed continuously)
        switches: int
            Points where the nearest branch of g_k wasn't that followed branch
    """

    max_ratio: float
    switches: int

    @property
    def passed(self) -> bool:
        return self.max_ratio < 1 / 3 and self.switches == 0


def excluded_points(construction, k: int) -> np.ndarray:
    """a_1 .. a_k and the zeros of Z_(k-1)"""

    points = list(construction.table.as_array(k))
    if k >= 2:
        roots = construction.stages[k - 2].Z_roots
        if roots is not None:
            points.extend(roots.roots)
    return np.asarray(points, dtype=complex)


def validate_probe(construction, probe: CircleProbe):
    """Raises ProbeInvalid if the circle passes within 10 sample spacings of an excluded point"""

    if not 1 <= probe.k <= construction.depth:
        raise ValueError(f"Stage {probe.k} isn't built (the construction has {construction.depth})")
    required = EXCLUSION_FACTOR * probe.spacing
    for point in excluded_points(construction, probe.k):
        distance = abs(abs(point - probe.center) - probe.radius)
        if distance < required:
            raise ProbeInvalid(complex(point), distance, required)


def _scale(construction, k: int, z) -> np.ndarray:
    """c_k |Z_(k-1)(z) beta_k(z)|"""

    fs = construction.function_set(k)
    return construction.stages[k - 1].c * fs.term_modulus(k, z)


def separation_check(construction, probe: CircleProbe) -> float:
    """min over the circle and over pairs s != t of |h_s - h_t| / (c_k |Z_(k-1) beta_k|)"""

    validate_probe(construction, probe)
    k = probe.k
    z = probe.points()
    frame = stage_frame(construction, z, k)
    ratio = float(np.min(frame.min_gap(k) / _scale(construction, k, frame.z)))
    logger.info(f"Separation at stage {k} on C({probe.center}, {probe.radius}): {ratio:.6g}")
    return ratio


def shadow_check(construction, z0: complex, N: int, k: int, sublevel: bool = False) -> float:
    """max over the roots of p_N(z0, .) of the distance to the nearest branch of g_k,
    over c_k |Z_(k-1)(z0) beta_k(z0)|

    With sublevel set, the stage-N sublevel samples are measured instead of the roots.
    """

    if not 1 <= k <= N <= construction.depth:
        raise ValueError(f"Need 1 <= k <= N <= {construction.depth}, got k={k}, N={N}")
    frame = stage_frame(construction, complex(z0), N)
    if sublevel:
        stage = construction.stages[N - 1]
        samples, mask = frame.sublevel_samples(N, stage.log_eps, unit_stencil(construction.config.local_samples))
        picked = frame.differences(N, k)[0][samples.base[0]]
        offset = np.exp(samples.log_radius[0]) * samples.direction[0]
        distances = np.min(np.abs(picked + offset[:, None]), axis=-1)[mask[0]]
    else:
        distances = np.min(np.abs(frame.differences(N, k)[0]), axis=-1)
    scale = float(_scale(construction, k, complex(z0)))
    return float(np.max(distances)) / scale if distances.size else 0.0


def jump_check(construction, probe: CircleProbe, z1: complex) -> typing.Tuple[float, float]:
    """The jump of the branches of g_k at z1 after going once around the circle,
    against 2 c_k |Z_(k-1)(z1) beta_k(z1)|

    Every branch h_s is continued from z1 once around the circle and comes back as
    h_s'; the jump is |h_s'(z1) - h_s(z1)|, and the smallest jump over all s is
    returned along with the reference.

    Raises:
        ProbeInvalid: the circle is too close to an excluded point, or z1 isn't a
            point of the circle on cut k and off the cuts 1 .. k-1
    """

    validate_probe(construction, probe)
    k = probe.k
    fs = construction.function_set(k)
    z1 = complex(z1)
    off_circle = abs(abs(z1 - probe.center) - probe.radius)
    if off_circle > CUT_TOL * max(1.0, probe.radius):
        raise ProbeInvalid(z1, off_circle, CUT_TOL)
    on_cut = float(fs.cuts[k - 1].distance(z1))
    if on_cut > CUT_TOL * max(1.0, abs(z1)):
        raise ProbeInvalid(z1, on_cut, CUT_TOL)
    for j in range(1, k):
        distance = float(fs.cuts[j - 1].distance(z1))
        if distance < EXCLUSION_FACTOR * probe.spacing:
            raise ProbeInvalid(z1, distance, EXCLUSION_FACTOR * probe.spacing)

    start = probe.angle_of(z1)
    steps = max(TRACK_STEPS, probe.samples)
    jumps = []
    for s in SignVector.all(k):
        after = track_branch(fs, probe.center, probe.radius, s, steps, start)
        jumps.append(abs(complex(branch_eval(after, z1, fs)) - complex(branch_eval(s, z1, fs))))
    reference = 2 * float(_scale(construction, k, z1))
    logger.info(f"Jump at {z1} (stage {k}): {min(jumps):.6g} against {reference:.6g}")
    return min(jumps), reference


def cut_crossings(construction, probe: CircleProbe) -> typing.List[complex]:
    """Where the circle meets cut k, the candidates for jump_check"""

    fs = construction.function_set(probe.k)
    return fs.cuts[probe.k - 1].circle_crossings(probe.center, probe.radius)


def coherence_check(construction, probe: CircleProbe, N: int) -> CoherenceReport:
    """Follows every root of p_N around the circle next to the branch of g_k it starts at"""

    validate_probe(construction, probe)
    k = probe.k
    if not k <= N <= construction.depth:
        raise ValueError(f"Need {k} <= N <= {construction.depth}, got N={N}")
    steps = max(TRACK_STEPS, probe.samples)
    z = circle_points(probe.center, probe.radius, steps)
    z = np.append(z, z[:1])
    frame = stage_frame(construction, z, N)
    roots = frame.branches(N)
    branches = frame.branches(k)
    scale = _scale(construction, k, z)

    current = roots[0].copy()
    followed = branches[0][np.argmin(np.abs(current[:, None] - branches[0][None, :]), axis=-1)]
    max_ratio = 0.0
    switches = 0
    for t in range(1, steps + 1):
        root_index = np.argmin(np.abs(roots[t][None, :] - current[:, None]), axis=-1)
        current = roots[t][root_index]
        branch_index = np.argmin(np.abs(branches[t][None, :] - followed[:, None]), axis=-1)
        followed = branches[t][branch_index]
        nearest = branches[t][np.argmin(np.abs(current[:, None] - branches[t][None, :]), axis=-1)]
        switches += int(np.sum(nearest != followed))
        max_ratio = max(max_ratio, float(np.max(np.abs(current - followed)) / scale[t]))
    logger.info(f"Coherence at stage {k} vs {N}: ratio {max_ratio:.6g}, {switches} switches")
    return CoherenceReport(max_ratio, switches)
