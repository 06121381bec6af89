import dataclasses
import logging
import math
import typing

import numpy as np

from wermerset.utils.algebra import BiPoly, UniPoly, shift_product, uni_roots
from wermerset.utils.branches import BranchPointTable, FibreFrame, FibreSamples, StageFunctionSet
from wermerset.utils.construction.grid_config import GridConfig
from wermerset.utils.construction.sampling import boundary_count, chunked, circle_points, disk_grid, unit_stencil
from wermerset.utils.construction.stage import LOG2, Stage
from wermerset.utils.errors import EmptyExterior, SearchExhausted


logger = logging.getLogger("wermerset.construction")

C_HALVINGS = 60
EPS_HALVINGS = 200
RAY_BISECTIONS = 32
RAY_DEPTH = 60.0  # log-radius span searched inwards along each ray
WERMER_RADIUS = 0.5
WERMER_C1 = 0.1
W_BLOCK = 256


@dataclasses.dataclass(frozen=True)
class StageContext(object):
    """The stages 1 .. n of a construction, as the selectors for stage n+1 see them

    Params:
        stages: tuple of Stage
        fs: StageFunctionSet
            The function set of g_n
        table: BranchPointTable
        cfg: GridConfig
        wermer: bool = False
            Whether every disk is the disk of radius 1/2
    """

    stages: typing.Tuple[Stage, ...]
    fs: StageFunctionSet
    table: BranchPointTable
    cfg: GridConfig
    wermer: bool = False

    @property
    def n(self) -> int:
        return len(self.stages)

    @property
    def stage(self) -> Stage:
        return self.stages[-1]

    @property
    def log_leads(self) -> typing.Tuple[float, ...]:
        return tuple(stage.log_lead for stage in self.stages)

    @property
    def stencil(self) -> np.ndarray:
        return unit_stencil(self.cfg.local_samples)

    def disk_radius(self, k: int) -> float:
        """The radius of D_k"""

        return WERMER_RADIUS if self.wermer else float(k)

    def z_samples(self, k: int) -> np.ndarray:
        return disk_grid(self.disk_radius(k), self.cfg.z_grid)


def radicand(table: BranchPointTable, Z_n: UniPoly, n: int) -> UniPoly:
    """R_n = Z_n^2 (z - a_1)^2 ... (z - a_n)^2 (z - a_(n+1))"""

    value = Z_n * Z_n
    for l in range(1, n + 1):
        factor = UniPoly([-table[l], 1.0])
        value = value * factor * factor
    return value * UniPoly([-table[n + 1], 1.0])


def polynomial_chain(
    table: BranchPointTable, constants: typing.Sequence[float], z_polys: typing.Sequence[UniPoly] = None
) -> typing.Tuple[StageFunctionSet, typing.List[BiPoly]]:
    """The monic polynomials p_1 .. p_N for hand-picked constants, skipping every selector

    z_polys are Z_0 .. Z_(N-1) and default to 1.
    """

    if z_polys is None:
        z_polys = [UniPoly.one()] * len(constants)
    c1 = constants[0]
    polys = [BiPoly.from_terms({(0, 2): 1.0, (1, 0): -c1 * c1, (0, 0): c1 * c1 * table[1]})]
    for n in range(1, len(constants)):
        polys.append(shift_product(polys[-1], constants[n], radicand(table, z_polys[n], n)))
    return StageFunctionSet(table, constants, z_polys), polys


def _max_reach(frame: FibreFrame, k: int, log_eps: float) -> float:
    """The largest |w| of the stage-k sublevel set above the frame"""

    radius = np.exp(frame.enclosure_log_radius(k, log_eps))
    return float(np.max(np.abs(frame.branches(k)) + radius))


def init_stage1(table: BranchPointTable, cfg: GridConfig, wermer: bool = False) -> Stage:
    """Stage 1: c_1 = 1 (1/10 in the Wermer mode) and p_1 = w^2 - c_1^2 (z - a_1)

    eps_1 is the largest 2^-t whose sublevel set over D_2 stays within margin of a root,
    and rho is the smallest half-height (plus margin) whose bidisk holds that set.
    """

    if table.count < 2:
        raise ValueError("Stage 1 needs at least two branch points")
    c1 = WERMER_C1 if wermer else 1.0
    fs, (p1,) = polynomial_chain(table, [c1])
    radius = WERMER_RADIUS if wermer else 2.0
    z = disk_grid(radius, cfg.z_grid)
    frames = list(FibreFrame.chunks(fs, z, [0.0]))

    for t in range(1, EPS_HALVINGS + 1):
        log_eps = -t * LOG2
        worst = max(float(np.max(frame.enclosure_log_radius(1, log_eps))) for frame in frames)
        if worst <= math.log(cfg.margin):
            break
    else:
        raise SearchExhausted("eps", 1, EPS_HALVINGS)

    rho = max(_max_reach(frame, 1, log_eps) for frame in frames) + cfg.margin
    stage = Stage(n=1, c=c1, eps_exponent=t, m=1, delta=1.0, rho=rho, p=p1, Z=None)
    logger.info(f"Stage 1 ready: eps_1 = 2^-{t}, rho = {rho:.6g}")
    return stage


def next_term(fs: StageFunctionSet, Z_n: UniPoly, z) -> np.ndarray:
    """Z_n(z) beta_(n+1)(z), the new term before it's scaled by c"""

    return fs.extended(1.0, Z_n).term(fs.n + 1, z)


def analytic_cap(ctx: StageContext, Z_n: UniPoly, z: np.ndarray = None) -> float:
    """(c_n / 10) inf |Z_(n-1) B_n| / |Z_n B_(n+1)| over the grid on D_(n+1)

    Any c below this satisfies c |Z_n B_(n+1)| <= (1/10) c_n |Z_(n-1) B_n| on the grid.
    Points where both sides vanish are skipped; the quotient only has poles there.
    """

    n = ctx.n
    z = ctx.z_samples(n + 1) if z is None else z
    upper = ctx.fs.term_modulus(n, z)
    lower = ctx.fs.extended(1.0, Z_n).term_modulus(n + 1, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.log(upper) - np.log(lower)
    ratio = np.where(np.isnan(ratio), np.inf, ratio)
    return ctx.stage.c / 10 * math.exp(float(ratio.min()))


def shifted_branches(frame: FibreFrame, log_c: float, term: np.ndarray, level: int = None) -> FibreSamples:
    """The branches h_s +/- c T of g_(k+1) as offsets from the branches of g_k, k = level

    Ordered like SignVector.all(k+1), the new sign varying fastest.
    """

    level = frame.n if level is None else level
    count = 2 ** level
    modulus = np.abs(term)
    with np.errstate(divide="ignore"):
        log_term = np.log(modulus)
    direction = np.where(modulus > 0, term / np.where(modulus > 0, modulus, 1.0), 1.0)
    signs = np.tile([1.0, -1.0], count)
    base = np.repeat(np.arange(count), 2)
    return FibreSamples(
        level=level,
        base=np.broadcast_to(base, (frame.size, base.size)).copy(),
        log_radius=np.broadcast_to((log_c + log_term)[:, None], (frame.size, base.size)).copy(),
        direction=signs[None, :] * direction[:, None],
    )


def exceptional_points(table: BranchPointTable, Z_n: UniPoly, n: int, zeros=None) -> np.ndarray:
    """a_1 .. a_(n+1) and the zeros of Z_n, where the separation bound is an equality"""

    points = list(table.as_array(n + 1))
    if zeros is not None:
        points.extend(zeros)
    elif Z_n.degree > 0:
        points.extend(uni_roots(Z_n, strict=False).roots)
    return np.asarray(points, dtype=complex)


def _far_from(z: np.ndarray, points: np.ndarray, distance: float) -> np.ndarray:
    if points.size == 0:
        return np.ones(z.shape, dtype=bool)
    return np.min(np.abs(z[:, None] - points[None, :]), axis=-1) > distance


def _c_holds(frame, log_c, term, log_term, target, keep, log_margin, wermer) -> bool:
    spread = frame.log_modulus(frame.n, shifted_branches(frame, log_c, term))
    if np.max(spread) > target:
        return False
    if wermer or not np.any(keep):
        return True
    with np.errstate(divide="ignore"):
        log_gaps = np.log(frame.min_gap())
    return bool(np.all(log_c + LOG2 + log_term[keep] <= log_margin + log_gaps[keep]))


def select_c(ctx: StageContext, Z_n: UniPoly, zeros=None) -> float:
    """c_(n+1): the largest value on a halving ladder from the analytic cap meeting
    (c1) |p_n| <= margin eps_n / 2 on the new branches and
    (XXX) 2c |Z_n B_(n+1)| <= margin |h_s - h_t| off the exceptional points

    In the Wermer mode the ladder starts at c_n / 10 and only (c1) is imposed.
    Every candidate is cap * 2^-k, so the result never exceeds the cap.

    Raises:
        SearchExhausted: still failing after 60 halvings below the first-order start
    """

    n, cfg = ctx.n, ctx.cfg
    log_margin = math.log(cfg.margin)
    z = ctx.z_samples(n + 1)
    cap = ctx.stage.c / 10 if ctx.wermer else cfg.margin * analytic_cap(ctx, Z_n, z)
    log_cap = math.log(cap)
    target = ctx.stage.log_eps + log_margin - LOG2
    exceptional = exceptional_points(ctx.table, Z_n, n, zeros)
    logger.debug(f"Stage {n + 1}: c search starts at {cap:.6g}")

    drop = 0  # total exponent shift below the cap
    halvings = 0  # ladder steps only, the first-order jumps are free
    for frame in FibreFrame.chunks(ctx.fs, z, ctx.log_leads):
        term = next_term(ctx.fs, Z_n, frame.z)
        with np.errstate(divide="ignore"):
            log_term = np.log(np.abs(term))
        keep = _far_from(frame.z, exceptional, cfg.branch_exclusion)

        # First-order caps pull the start of the ladder down in one step
        growth = frame.log_derivative(n) + log_term[:, None]
        estimates = [target - float(np.max(growth))]
        if not ctx.wermer and np.any(keep):
            with np.errstate(divide="ignore"):
                log_gaps = np.log(frame.min_gap())
            estimates.append(log_margin + float(np.min(log_gaps[keep] - LOG2 - log_term[keep])))
        start = min([log_cap - drop * LOG2] + [value for value in estimates if not math.isnan(value)])
        if not math.isfinite(start):
            raise SearchExhausted("c", n + 1, halvings)
        drop = max(drop, int(math.ceil((log_cap - start) / LOG2)))

        while not _c_holds(frame, log_cap - drop * LOG2, term, log_term, target, keep, log_margin, ctx.wermer):
            drop += 1
            halvings += 1
            if halvings > C_HALVINGS:
                raise SearchExhausted("c", n + 1, C_HALVINGS)

    c = math.ldexp(cap, -drop)
    if c == 0.0:
        raise SearchExhausted("c", n + 1, halvings)
    logger.info(f"Stage {n + 1}: c = {c:.6g} (2^-{drop} of the cap, {halvings} ladder halvings)")
    return c


def select_rho(ctx: StageContext, c: float, Z_n: UniPoly) -> float:
    """rho_(n+2): holds the sublevel set of p_n and the new branches over D_(n+2),
    plus one, and exceeds rho_(n+1) + 1 by at least margin"""

    n = ctx.n
    fs_next = ctx.fs.extended(c, Z_n)
    reach = 0.0
    for frame in FibreFrame.chunks(fs_next, ctx.z_samples(n + 2), ctx.log_leads + (0.0,)):
        reach = max(
            reach,
            _max_reach(frame, n, ctx.stage.log_eps),
            float(np.max(np.abs(frame.branches(n + 1)))),
        )
    rho = max(ctx.stage.rho + 1 + ctx.cfg.margin, reach + 1)
    logger.info(f"Stage {n + 1}: rho = {rho:.6g} (sublevel reach {reach:.6g})")
    return rho


def _log_max_on_circle(frame: FibreFrame, k: int, w: np.ndarray) -> float:
    best = -np.inf
    for block in chunked(w, W_BLOCK):
        values = frame.log_modulus_at(k, np.broadcast_to(block, (frame.size, block.size)))
        best = max(best, float(np.max(values)))
    return best


def build_p_next(ctx: StageContext, c: float, Z_n: UniPoly, rho: float) -> typing.Tuple[BiPoly, float]:
    """p_(n+1) = delta p_c with p_c = p~_n(w - cA) p~_n(w + cA), A^2 = R_n

    delta = margin / max |p_c| over B_(n+2); the maximum is taken on the torus
    |z| = r_(n+2), |w| = rho, where p_c is evaluated from its roots.
    """

    n = ctx.n
    p_c = shift_product(ctx.stage.p, c, radicand(ctx.table, Z_n, n))
    fs_next = ctx.fs.extended(c, Z_n)
    radius = ctx.disk_radius(n + 2)
    z = circle_points(0, radius, boundary_count(radius, ctx.cfg.z_grid))
    w = circle_points(0, rho, boundary_count(rho, ctx.cfg.w_grid), offset=0.5)
    log_max = max(
        _log_max_on_circle(frame, n + 1, w)
        for frame in FibreFrame.chunks(fs_next, z, ctx.log_leads + (0.0,))
    )
    delta = ctx.cfg.margin * math.exp(-log_max)
    logger.info(f"Stage {n + 1}: delta = {delta:.6g}, deg_w {p_c.deg_w}, deg_z {p_c.deg_z}")
    return p_c.scaled(delta), delta


def m_from_minimum(log_min: float, n: int) -> int:
    """The smallest m with (1/m) log_min >= -1/2^n"""

    return max(1, int(math.ceil(2 ** n * max(0.0, -log_min))))


def level_crossings(
    frame: FibreFrame, k: int, log_eps: float, angles: int
) -> typing.Tuple[FibreSamples, np.ndarray]:
    """Points just outside {|p_k| <= eps}, found by bisecting rays out of every root

    Each ray starts inside at its root and ends at twice the enclosure radius; rays
    whose far end is still inside (it ran into a neighbouring root) are masked out.
    """

    count = 2 ** k
    turn = np.exp(2j * np.pi * (np.arange(angles) + 0.25) / angles)
    base = np.broadcast_to(np.repeat(np.arange(count), angles), (frame.size, count * angles)).copy()
    direction = np.broadcast_to(np.tile(turn, count), (frame.size, count * angles)).copy()

    def at(log_radius):
        return FibreSamples(level=k, base=base, log_radius=log_radius, direction=direction)

    outer = np.repeat(frame.enclosure_log_radius(k, log_eps) + LOG2, angles, axis=-1)
    outer = np.where(np.isfinite(outer), outer, 0.0)
    inner = outer - RAY_DEPTH
    valid = frame.log_modulus(k, at(outer)) > log_eps
    for _ in range(RAY_BISECTIONS):
        middle = (inner + outer) / 2
        inside = frame.log_modulus(k, at(middle)) <= log_eps
        inner = np.where(inside, middle, inner)
        outer = np.where(inside, outer, middle)
    return at(outer), valid


def select_m(ctx: StageContext, c: float, Z_n: UniPoly, delta: float) -> int:
    """m_(n+1) from the minimum of |p_(n+1)| over B_(n+1) minus {|p_n| <= eps_n}

    p_(n+1) has no zeros there, so on every fibre the minimum sits on the boundary:
    the level curves |p_n| = eps_n and the circle |w| = rho_(n+1).

    Raises:
        EmptyExterior: no sample outside the previous sublevel set
    """

    n, cfg = ctx.n, ctx.cfg
    stage = ctx.stage
    fs_next = ctx.fs.extended(c, Z_n)
    leads = ctx.log_leads + (math.log(delta),)
    w_circle = circle_points(0, stage.rho, boundary_count(stage.rho, cfg.w_grid), offset=0.5)
    log_min = np.inf
    for frame in FibreFrame.chunks(fs_next, ctx.z_samples(n + 1), leads):
        samples, valid = level_crossings(frame, n, stage.log_eps, 4 * cfg.local_samples)
        valid &= np.abs(samples.values(frame)) < stage.rho
        if np.any(valid):
            log_min = min(log_min, float(np.min(frame.log_modulus(n + 1, samples)[valid])))
        for block in chunked(w_circle, W_BLOCK):
            w = np.broadcast_to(block, (frame.size, block.size))
            outside = frame.log_modulus_at(n, w) > stage.log_eps
            if np.any(outside):
                log_min = min(log_min, float(np.min(frame.log_modulus_at(n + 1, w)[outside])))
    if not math.isfinite(log_min):
        raise EmptyExterior(n + 1)
    m = m_from_minimum(log_min + math.log(cfg.margin), n)
    logger.info(f"Stage {n + 1}: m = {m} (log min |p| = {log_min:.6g})")
    return m


def select_eps(ctx: StageContext, c: float, Z_n: UniPoly, delta: float, m: int) -> int:
    """The exponent t of eps_(n+1) = 2^-t: the smallest t, past t_n and with 2^-t <= e^-m,
    for which (p2) the new sublevel set over D_(n+1) lies in {|p_n| <= margin eps_n}
    and (es11) every new sublevel point over D_(n+2) is within margin / n of a root

    Both conditions only get easier as t grows, so each grid chunk pushes t up until
    it passes and the chunks before it stay satisfied.

    Raises:
        SearchExhausted: still failing after 200 halvings
    """

    n, cfg = ctx.n, ctx.cfg
    stage = ctx.stage
    fs_next = ctx.fs.extended(c, Z_n)
    leads = ctx.log_leads + (math.log(delta),)
    start = max(stage.eps_exponent + 1, int(math.ceil(m / LOG2)))
    t = start
    p2_bound = stage.log_eps + math.log(cfg.margin)
    es11_bound = math.log(cfg.margin / n)
    stencil = ctx.stencil

    def nested(frame: FibreFrame) -> bool:
        samples, mask = frame.sublevel_samples(n + 1, -t * LOG2, stencil)
        if not np.any(mask):
            return True
        return bool(np.max(frame.log_modulus(n, samples)[mask]) <= p2_bound)

    def close(frame: FibreFrame) -> bool:
        return bool(np.max(frame.enclosure_log_radius(n + 1, -t * LOG2)) <= es11_bound)

    for radius_index, check in ((n + 1, nested), (n + 2, close)):
        for frame in FibreFrame.chunks(fs_next, ctx.z_samples(radius_index), leads):
            while not check(frame):
                t += 1
                if t - start > EPS_HALVINGS:
                    raise SearchExhausted("eps", n + 1, EPS_HALVINGS)
    logger.info(f"Stage {n + 1}: eps = 2^-{t} (m = {m})")
    return t
