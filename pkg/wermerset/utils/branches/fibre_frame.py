import dataclasses
import math
import typing

import numpy as np

from wermerset.utils.branches.stage_function_set import SignVector, StageFunctionSet


CHUNK_SIZE = 2048
LOG2 = math.log(2)


@dataclasses.dataclass
class FibreSamples(object):
    """Points of the fibres written as w = h_base(z) + e^log_radius * direction

    base indexes the branches of the given level (SignVector.all order). Keeping the
    radius as a logarithm lets samples sit far closer to a branch than a float could
    resolve.
    """

    level: int
    base: np.ndarray
    log_radius: np.ndarray
    direction: np.ndarray

    @property
    def log_offset(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return self.log_radius + np.log(np.abs(self.direction))

    @property
    def offset_modulus(self) -> np.ndarray:
        return np.exp(self.log_offset)

    def values(self, frame: "FibreFrame") -> np.ndarray:
        """The samples as plain complex numbers (offsets below double precision are lost)"""

        branches = frame.branches(self.level)
        rows = np.arange(branches.shape[0])[:, None]
        return branches[rows, self.base] + np.exp(self.log_radius) * self.direction


class FibreFrame(object):
    """Branch coordinates for the fibres of p_1 .. p_n above a batch of z points

    Each p_k(z, .) equals lead_k * prod_s (w - h_s(z)) over the 2^k branches of g_k, so
    moduli of p_k are taken from branch values instead of coefficient tables. Gaps
    between branches are formed from the terms c_j Z_(j-1) beta_j themselves and never
    by subtracting branch values, which keeps them exact even when two branches agree
    to far below double precision.

    Params:
        fs: StageFunctionSet
            The function set of g_n
        z: array of complex
            The base points (flattened)
        log_leads: sequence of float
            log |leading coefficient of p_k| for k = 1 .. n
    """

    def __init__(self, fs: StageFunctionSet, z, log_leads: typing.Sequence[float]):
        self.fs = fs
        self.z = np.asarray(z, dtype=complex).reshape(-1)
        self.log_leads = tuple(float(value) for value in log_leads)
        if len(self.log_leads) < fs.n:
            raise ValueError(f"Need {fs.n} leading coefficients, got {len(self.log_leads)}")
        self.terms = np.stack([fs.term(j, self.z) for j in range(1, fs.n + 1)], axis=-1)
        self._branches: typing.Dict[int, np.ndarray] = {}
        self._differences: typing.Dict[typing.Tuple[int, int], np.ndarray] = {}

    @classmethod
    def chunks(
        cls,
        fs: StageFunctionSet,
        z,
        log_leads: typing.Sequence[float],
        level: int = None,
    ) -> typing.Iterator["FibreFrame"]:
        """Frames over consecutive slices of z, smaller slices for deeper levels"""

        z = np.asarray(z, dtype=complex).reshape(-1)
        level = fs.n if level is None else level
        size = max(32, CHUNK_SIZE >> max(0, 2 * level - 4))
        for start in range(0, z.size, size):
            yield cls(fs, z[start : start + size], log_leads)

    @property
    def n(self) -> int:
        return self.fs.n

    @property
    def size(self) -> int:
        return self.z.size

    @staticmethod
    def signs(k: int) -> np.ndarray:
        return np.array(SignVector.all(k), dtype=float).reshape(2 ** k, k)

    def branches(self, k: int = None) -> np.ndarray:
        """h^(k)_s(z) for every sign vector s of length k, shape (size, 2^k)"""

        k = self.n if k is None else k
        if k not in self._branches:
            self._branches[k] = self.terms[:, :k] @ self.signs(k).T
        return self._branches[k]

    def differences(self, level: int, k: int) -> np.ndarray:
        """h^(level)_s - h^(k)_t as exact term sums, shape (size, 2^level, 2^k)"""

        key = (level, k)
        if key not in self._differences:
            width = max(level, k)
            coefficients = np.zeros((2 ** level, 2 ** k, width))
            coefficients[:, :, :level] += self.signs(level)[:, None, :]
            coefficients[:, :, :k] -= self.signs(k)[None, :, :]
            self._differences[key] = np.einsum("mj,stj->mst", self.terms[:, :width], coefficients)
        return self._differences[key]

    def log_modulus(self, k: int, samples: FibreSamples) -> np.ndarray:
        """log |p_k| at the given samples, shape (size, K)"""

        rows = np.arange(self.size)[:, None]
        picked = self.differences(samples.level, k)[rows, samples.base]
        offset = np.exp(samples.log_radius) * samples.direction
        with np.errstate(divide="ignore"):
            logs = np.log(np.abs(picked + offset[..., None]))
            exact = picked == 0
            if np.any(exact):
                logs = np.where(exact, samples.log_offset[..., None], logs)
        return self.log_leads[k - 1] + logs.sum(axis=-1)

    def log_modulus_at(self, k: int, w) -> np.ndarray:
        """log |p_k(z, w)| for plain complex w of shape (size, K)"""

        w = np.asarray(w, dtype=complex).reshape(self.size, -1)
        with np.errstate(divide="ignore"):
            logs = np.log(np.abs(w[..., None] - self.branches(k)[:, None, :]))
        return self.log_leads[k - 1] + logs.sum(axis=-1)

    def pair_gaps(self, k: int = None) -> np.ndarray:
        """|h_s - h_t| for all s, t at level k with an infinite diagonal"""

        k = self.n if k is None else k
        gaps = np.abs(self.differences(k, k))
        size = 2 ** k
        gaps[:, np.arange(size), np.arange(size)] = np.inf
        return gaps

    def min_gap(self, k: int = None) -> np.ndarray:
        """The smallest distance between two branches of g_k at each z"""

        return self.pair_gaps(k).min(axis=(-2, -1))

    def log_derivative(self, k: int = None) -> np.ndarray:
        """log |d/dw p_k| at each of its roots h_s, shape (size, 2^k)"""

        k = self.n if k is None else k
        with np.errstate(divide="ignore"):
            logs = np.log(self.pair_gaps(k))
        logs[:, np.arange(2 ** k), np.arange(2 ** k)] = 0.0
        return self.log_leads[k - 1] + logs.sum(axis=-1)

    def enclosure_log_radius(self, k: int, log_eps: float) -> np.ndarray:
        """log of a radius r_s around each root h_s of p_k such that every w with
        |p_k(z, w)| <= eps lies within r_s of its nearest root

        If h_s is the nearest root and t the distance, |w - h_j| >= max(t, g_sj / 2)
        with g_sj = |h_s - h_j|, so |p_k| >= |lead| t prod_j max(t, g_sj / 2). That bound
        is convex and increasing in log t and its level crossing is the smallest of
        the crossings of its linear pieces. Around a well separated simple root the
        first-order radius 3 eps / |p_k'| is used when it is smaller.
        """

        log_lead = self.log_leads[k - 1]
        with np.errstate(divide="ignore"):
            log_gaps = np.log(self.pair_gaps(k))
        # Breakpoints log(g / 2), the infinite diagonal sorts last and is dropped
        breaks = np.sort(log_gaps - LOG2, axis=-1)[..., :-1]
        tails = np.concatenate(
            [np.cumsum(breaks[..., ::-1], axis=-1)[..., ::-1], np.zeros(breaks.shape[:-1] + (1,))],
            axis=-1,
        )
        pieces = np.arange(1, tails.shape[-1] + 1)
        with np.errstate(invalid="ignore"):
            crossings = (log_eps - log_lead - tails) / pieces
        crossings = np.where(np.isnan(crossings), np.inf, crossings)
        radius = crossings.min(axis=-1)

        # |p_k| >= |p_k'| t (1 - t S) for t below the smallest gap, S = sum 1 / g_sj;
        # that bound is concave in t, so holding eps at both ends covers [local, radius]
        log_derivative = self.log_derivative(k)
        local = math.log(3) + log_eps - log_derivative
        inverse_gaps = np.exp(-log_gaps).sum(axis=-1)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            spread = np.exp(local) * inverse_gaps
            reach = np.exp(radius) * inverse_gaps
            far_end = log_derivative + radius + np.log1p(-np.minimum(reach, 1.0))
        usable = (spread <= 2 / 3) & (radius <= breaks[..., 0]) & (reach < 1) & (far_end >= log_eps)
        return np.where(usable, np.minimum(radius, local), radius)

    def stencil_samples(self, k: int, log_radius: np.ndarray, stencil: np.ndarray) -> FibreSamples:
        """The stencil placed around every root of p_k, scaled by the per-root radius"""

        count = 2 ** k
        base = np.repeat(np.arange(count), stencil.size)
        direction = np.tile(stencil, count)
        return FibreSamples(
            level=k,
            base=np.broadcast_to(base, (self.size, base.size)).copy(),
            log_radius=np.repeat(log_radius, stencil.size, axis=-1),
            direction=np.broadcast_to(direction, (self.size, direction.size)).copy(),
        )

    def sublevel_samples(
        self, k: int, log_eps: float, stencil: np.ndarray
    ) -> typing.Tuple[FibreSamples, np.ndarray]:
        """Samples around each root of p_k and a mask marking those with |p_k| <= eps"""

        samples = self.stencil_samples(k, self.enclosure_log_radius(k, log_eps), stencil)
        return samples, self.log_modulus(k, samples) <= log_eps

    def term_modulus(self, j: int) -> np.ndarray:
        """|Z_(j-1) B_j| at each z"""

        return self.fs.term_modulus(j, self.z)

    def __repr__(self) -> str:
        return f"FibreFrame[n={self.n} <{self.size} points>]"
