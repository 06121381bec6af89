import dataclasses
import logging
import typing

import numpy as np

from wermerset.utils.analysis.fiber import membership_index, stage_frame
from wermerset.utils.branches import FibreFrame
from wermerset.utils.construction import W_BLOCK, chunked, circle_points, disk_grid, level_crossings, unit_stencil


logger = logging.getLogger("wermerset.analysis")

Sampler = typing.Callable[[], np.ndarray]


def segment_sampler(start: complex, end: complex, count: int) -> Sampler:
    """count equally spaced points of the segment [start, end], both ends included"""

    def sample() -> np.ndarray:
        t = np.linspace(0.0, 1.0, count)
        return complex(start) + t * (complex(end) - complex(start))

    return sample


def disk_sampler(center: complex, radius: float, count: int, seed: int = 0) -> Sampler:
    """count uniform points of the closed disk, the same ones for the same seed"""

    def sample() -> np.ndarray:
        rng = np.random.default_rng(seed)
        r = radius * np.sqrt(rng.random(count))
        angle = 2 * np.pi * rng.random(count)
        return complex(center) + r * np.exp(1j * angle)

    return sample


def circle_sampler(center: complex, radius: float, count: int) -> Sampler:
    def sample() -> np.ndarray:
        return circle_points(complex(center), radius, count)

    return sample


@dataclasses.dataclass(frozen=True)
class PointCloud(object):
    """Points (z, w) of the stage-N approximation of E = (S x C) n X

    Params:
        stage: int
        z: array of complex
        w: array of complex
        source: array of int
            The index of the sample of S each point sits above
        samples: array of complex
            The sample of S itself
    """

    stage: int
    z: np.ndarray
    w: np.ndarray
    source: np.ndarray
    samples: np.ndarray

    def __len__(self) -> int:
        return int(self.w.size)

    def fibre(self, index: int) -> np.ndarray:
        """The w values above the index-th sample"""

        return self.w[self.source == index]

    def __repr__(self) -> str:
        return f"PointCloud[stage {self.stage} <{len(self)} points over {self.samples.size} samples>]"


def extract_E(
    construction,
    samples: typing.Union[Sampler, typing.Sequence[complex], np.ndarray],
    N: int,
    per_point_roots: bool = True,
) -> PointCloud:
    """The stage-N fibres above a sample of a plane set S

    With per_point_roots every root of p_N above each sample is emitted, so each
    sample carries 2^N points. Without it the sublevel samples of the fibre are
    emitted instead, kept on every stage from the membership index up to N.

    As N grows these clouds approximate E, whose pluripolar hull in C^2 is all of X.
    """

    if not 1 <= N <= construction.depth:
        raise ValueError(f"Stage {N} isn't built (the construction has {construction.depth})")
    s = np.asarray(samples() if callable(samples) else samples, dtype=complex).reshape(-1)
    zs, ws, sources = [], [], []
    for start, chunk in enumerate_chunks(s):
        frame = stage_frame(construction, chunk, N)
        if per_point_roots:
            w = frame.branches(N)
            keep = np.ones(w.shape, dtype=bool)
        else:
            w, keep = _sublevel_points(construction, frame, N)
        rows = np.broadcast_to(np.arange(start, start + chunk.size)[:, None], w.shape)
        zs.append(np.broadcast_to(chunk[:, None], w.shape)[keep])
        ws.append(w[keep])
        sources.append(rows[keep])

    cloud = PointCloud(
        stage=N,
        z=np.concatenate(zs) if zs else np.zeros(0, dtype=complex),
        w=np.concatenate(ws) if ws else np.zeros(0, dtype=complex),
        source=np.concatenate(sources) if sources else np.zeros(0, dtype=int),
        samples=s,
    )
    logger.info(f"Extracted {cloud!r}")
    return cloud


def enumerate_chunks(values: np.ndarray) -> typing.Iterator[typing.Tuple[int, np.ndarray]]:
    start = 0
    for chunk in chunked(values, W_BLOCK):
        yield start, chunk
        start += chunk.size


def _sublevel_points(construction, frame: FibreFrame, N: int) -> typing.Tuple[np.ndarray, np.ndarray]:
    stage = construction.stages[N - 1]
    samples, mask = frame.sublevel_samples(N, stage.log_eps, unit_stencil(construction.config.local_samples))
    first = np.array([membership_index(construction, complex(z)) or N for z in frame.z])
    first = np.minimum(first, N)
    for j in range(1, N):
        active = (first <= j)[:, None]
        if np.any(active):
            inside = frame.log_modulus(j, samples) <= construction.stages[j - 1].log_eps
            mask &= ~active | inside
    return samples.values(frame), mask


@dataclasses.dataclass(frozen=True)
class NestingReport(object):
    """The complement form of the sublevel nesting between stages n and n+1

    Every sampled (z, w) over D_(n+1) with |p_n| > eps_n should also have
    |p_(n+1)| > eps_(n+1). The margin is log |p_(n+1)| - log eps_(n+1).
    """

    stage: int
    checks: int
    violations: int
    worst_margin: float
    worst_point: typing.Tuple[complex, complex]

    @property
    def passed(self) -> bool:
        return self.violations == 0


def complement_nesting_check(construction, n: int) -> NestingReport:
    """Samples {|p_n| > eps_n} over D_(n+1), just outside the eps_n-level curves and on
    the w-disk of radius rho_n, and checks |p_(n+1)| > eps_(n+1) there
    """

    if not 1 <= n < construction.depth:
        raise ValueError(f"Need 1 <= n < {construction.depth}, got {n}")
    cfg = construction.config
    stage = construction.stages[n - 1]
    following = construction.stages[n]
    fs = construction.function_set(n + 1)
    leads = tuple(s.log_lead for s in construction.stages[: n + 1])
    w_window = disk_grid(stage.rho, cfg.w_grid)

    checks = 0
    violations = 0
    worst = np.inf
    worst_point = (0j, 0j)

    def record(margins: np.ndarray, outside: np.ndarray, z: np.ndarray, w: np.ndarray):
        nonlocal checks, violations, worst, worst_point
        margins = np.where(outside, margins, np.inf)
        checks += int(np.sum(outside))
        violations += int(np.sum(margins <= 0))
        if margins.size and np.min(margins) < worst:
            index = np.unravel_index(int(np.argmin(margins)), margins.shape)
            worst = float(margins[index])
            worst_point = (complex(z[index[0]]), complex(w[index]))

    for frame in FibreFrame.chunks(fs, construction.z_samples(n + 1), leads):
        crossings, valid = level_crossings(frame, n, stage.log_eps, 2 * cfg.local_samples)
        outside = valid & (frame.log_modulus(n, crossings) > stage.log_eps)
        margins = frame.log_modulus(n + 1, crossings) - following.log_eps
        record(margins, outside, frame.z, crossings.values(frame))
        for block in chunked(w_window, W_BLOCK):
            w = np.broadcast_to(block, (frame.size, block.size))
            outside = frame.log_modulus_at(n, w) > stage.log_eps
            record(frame.log_modulus_at(n + 1, w) - following.log_eps, outside, frame.z, w)

    report = NestingReport(n, checks, violations, worst, worst_point)
    logger.info(f"Complement nesting {n} -> {n + 1}: {violations}/{checks} violations, worst margin {worst:.4g}")
    return report
