import logging
import math
import typing

import numpy as np

from wermerset.utils.branches import FibreFrame
from wermerset.utils.construction.sampling import boundary_count, chunked, circle_points, unit_stencil
from wermerset.utils.construction.selectors import (
    W_BLOCK,
    exceptional_points,
    level_crossings,
    shifted_branches,
)
from wermerset.utils.construction.stage import LOG2
from wermerset.utils.construction.verification_report import Predicate, VerificationReport


logger = logging.getLogger("wermerset.construction")


class _Worst(object):
    """Keeps the smallest margin seen for one predicate and where it was seen"""

    def __init__(self, predicate: Predicate, stage: int):
        self.predicate = predicate
        self.stage = stage
        self.margin = np.inf
        self.point = (0j, 0j)
        self.samples = 0

    def update(self, margins: np.ndarray, z: np.ndarray, w: np.ndarray = None):
        margins = np.asarray(margins, dtype=float)
        if margins.size == 0:
            return
        self.samples += int(margins.size)
        index = np.unravel_index(int(np.argmin(margins)), margins.shape)
        if margins[index] < self.margin:
            self.margin = float(margins[index])
            at_w = 0j if w is None else complex(np.broadcast_to(w, margins.shape)[index])
            self.point = (complex(z[index[0]]), at_w)

    def report(self) -> VerificationReport:
        return VerificationReport(self.predicate, self.stage, self.margin, self.point, self.samples)


def lev1_sequence(log_eps: typing.Sequence[float]) -> typing.List[float]:
    """log(eps_n^(1/2^n)) for n = 1, 2, ..."""

    return [value / 2 ** n for n, value in enumerate(log_eps, start=1)]


def check_lev1(construction) -> typing.Tuple[typing.List[float], bool]:
    """The sequence eps_n^(1/2^n), as logarithms, and whether it strictly decreases"""

    sequence = lev1_sequence([stage.log_eps for stage in construction.stages])
    decreasing = all(a > b for a, b in zip(sequence, sequence[1:]))
    return sequence, decreasing


def _lev1_report(construction, n: int) -> VerificationReport:
    sequence = lev1_sequence([stage.log_eps for stage in construction.stages[:n]])
    margin = min((a - b for a, b in zip(sequence, sequence[1:])), default=np.inf)
    return VerificationReport(Predicate.LEV1, n, float(margin), (0j, 0j), len(sequence))


def _backward_error(p, z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """|p(z, w)| / sum_j |a_j(z)| |w|^j for roots w of shape (size, K)"""

    columns = p.w_coefficients(z)
    value = np.broadcast_to(columns[:, -1:], w.shape).astype(complex)
    scale = np.broadcast_to(np.abs(columns[:, -1:]), w.shape).astype(float)
    modulus = np.abs(w)
    for j in range(columns.shape[-1] - 2, -1, -1):
        value = value * w + columns[:, j : j + 1]
        scale = scale * modulus + np.abs(columns[:, j : j + 1])
    return np.abs(value) / np.where(scale > 0, scale, 1.0)


def _check_roots(construction, n: int, z: np.ndarray, leads, cfg) -> typing.List[VerificationReport]:
    """P1 and ES11 for stage n, over D_(n+1)"""

    stage = construction.stages[n - 1]
    fs = construction.function_set(n)
    roots = _Worst(Predicate.P1, n)
    close = _Worst(Predicate.ES11, n)
    es11_bound = 1 / max(n - 1, 1)
    for frame in FibreFrame.chunks(fs, z, leads):
        branches = frame.branches(n)
        error = _backward_error(stage.p, frame.z, branches)
        roots.update(1 - error / cfg.root_tol, frame.z, branches)
        radius = np.exp(frame.enclosure_log_radius(n, stage.log_eps))
        close.update(1 - radius / es11_bound, frame.z, branches)
    return [roots.report(), close.report()]


def verify_stage(construction, n: int) -> typing.List[VerificationReport]:
    """Re-checks every predicate of stage n on the verification grid

    Stage 1 only has P1 and ES11; later stages get all nine. Failures are reported,
    never raised.
    """

    cfg = construction.config.verification()
    wermer = construction.wermer
    leads = tuple(stage.log_lead for stage in construction.stages[:n])
    z_next = construction.z_samples(n + 1, cfg)
    reports = _check_roots(construction, n, z_next, leads, cfg)
    if n == 1:
        return _log_reports(reports)

    k = n - 1
    previous = construction.stages[k - 1]
    stage = construction.stages[n - 1]
    fs_prev = construction.function_set(k)
    fs = construction.function_set(n)
    Z_k = previous.Z
    zeros = previous.Z_roots.roots if previous.Z_roots is not None else None
    old_log_eps = previous.log_eps

    nested = _Worst(Predicate.P2, n)
    inside = _Worst(Predicate.C1, n)
    ladder = _Worst(Predicate.C2, n)
    separated = _Worst(Predicate.XXX, n)
    exterior = _Worst(Predicate.ES4, n)
    sublevel = _Worst(Predicate.ES1, n)

    z_here = construction.z_samples(n, cfg)
    exceptional = exceptional_points(construction.table, Z_k, k, zeros)
    stencil = unit_stencil(cfg.local_samples)
    w_circle = circle_points(0, previous.rho, boundary_count(previous.rho, cfg.w_grid), offset=0.5)

    for frame in FibreFrame.chunks(fs, z_here, leads):
        term = fs.term(n, frame.z) / stage.c
        log_c = math.log(stage.c)

        # p2: the new sublevel set sits inside the old one
        samples, mask = frame.sublevel_samples(n, stage.log_eps, stencil)
        if np.any(mask):
            with np.errstate(over="ignore"):
                ratio = np.exp(frame.log_modulus(k, samples) - old_log_eps)
            nested.update(np.where(mask, 1 - ratio, np.inf), frame.z, samples.values(frame))

        # c1: the new branches are deep inside the old sublevel set
        shifted = shifted_branches(frame, log_c, term, level=k)
        spread = frame.log_modulus(k, shifted) - (old_log_eps - LOG2)
        with np.errstate(over="ignore"):
            inside.update(1 - np.exp(spread), frame.z, frame.branches(n))

        # c2
        upper = fs_prev.term_modulus(k, frame.z)
        lower = stage.c * fs.term_modulus(n, frame.z)
        if wermer:
            ladder.update(np.array([1 - stage.c / (previous.c / 10)]), frame.z[:1])
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = lower / (upper * previous.c / 10)
            ratio = np.where(np.isnan(ratio), 0.0, ratio)
            ladder.update(1 - ratio, frame.z)

        # XXX
        if not wermer:
            keep = np.min(np.abs(frame.z[:, None] - exceptional[None, :]), axis=-1) > cfg.branch_exclusion
            gaps = frame.min_gap(k)
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = 2 * lower / gaps
            separated.update(np.where(keep, 1 - ratio, np.inf), frame.z)

    # es4 over B_n minus the old sublevel set, on the boundary of that region
    for frame in FibreFrame.chunks(fs, z_here, leads):
        crossings, valid = level_crossings(frame, k, previous.log_eps, 4 * cfg.local_samples)
        valid &= np.abs(crossings.values(frame)) < previous.rho
        if np.any(valid):
            values = frame.log_modulus(n, crossings) / stage.m + 2.0 ** -k
            exterior.update(np.where(valid, values, np.inf), frame.z, crossings.values(frame))
        for block in chunked(w_circle, W_BLOCK):
            w = np.broadcast_to(block, (frame.size, block.size))
            outside = frame.log_modulus_at(k, w) > previous.log_eps
            values = frame.log_modulus_at(n, w) / stage.m + 2.0 ** -k
            exterior.update(np.where(outside, values, np.inf), frame.z, w)

    # es1 on the new sublevel set over D_(n+1)
    for frame in FibreFrame.chunks(fs, z_next, leads):
        samples, mask = frame.sublevel_samples(n, stage.log_eps, stencil)
        values = -1 - frame.log_modulus(n, samples) / stage.m
        sublevel.update(np.where(mask, values, np.inf), frame.z, samples.values(frame))

    reports += [nested.report(), inside.report(), ladder.report()]
    if not wermer:
        reports.append(separated.report())
    reports += [exterior.report(), sublevel.report(), _lev1_report(construction, n)]
    return _log_reports(reports)


def _log_reports(reports: typing.List[VerificationReport]) -> typing.List[VerificationReport]:
    for report in reports:
        if report.passed:
            logger.debug(str(report))
        else:
            logger.warning(str(report))
    return reports
