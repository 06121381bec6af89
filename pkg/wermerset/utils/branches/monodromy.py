import logging
import typing

import numpy as np

from wermerset.utils.algebra import BiPoly, fibre_roots
from wermerset.utils.branches.branch_point_table import BranchPointTable
from wermerset.utils.branches.stage_function_set import SignVector, StageFunctionSet
from wermerset.utils.errors import BranchPointOnLoop


logger = logging.getLogger("wermerset.branches")

LOOP_TOL = 1e-9


def monodromy(
    loop_center: complex,
    loop_radius: float,
    s: typing.Sequence[int],
    fs: StageFunctionSet,
    table: BranchPointTable,
    tol: float = LOOP_TOL,
) -> SignVector:
    """The branch reached by continuing h_s once counterclockwise around a circle

    Each beta_j changes sign exactly when a_j is inside the circle and the Z
    polynomials are single valued, so the result flips s_j for every enclosed a_j.

    Raises:
        BranchPointOnLoop: some a_j (j <= n) lies within tol of the circle
    """

    enclosed = []
    for j in range(1, fs.n + 1):
        distance = abs(table[j] - loop_center)
        if abs(distance - loop_radius) <= tol:
            raise BranchPointOnLoop(j, table[j], abs(distance - loop_radius))
        if distance < loop_radius:
            enclosed.append(j)
    result = SignVector(s).flipped(enclosed)
    logger.debug(f"Loop around {loop_center} r={loop_radius} encloses {enclosed}: {s} -> {result}")
    return result


def continue_along_loop(
    p: BiPoly,
    loop_center: complex,
    loop_radius: float,
    w_start: complex,
    steps: int = 720,
    start_angle: float = 0.0,
    turns: int = 1,
) -> complex:
    """Follows one root of p(z, .) around a circle by nearest-root matching

    Params:
        p: BiPoly
            The polynomial whose roots are followed
        loop_center, loop_radius
            The circle, traversed counterclockwise
        w_start: complex
            A root of p at the starting point of the loop
        steps: int = 720
            Number of sample points per turn
        start_angle: float = 0.0
            Angle of the starting point on the circle
        turns: int = 1
            How many times to go around

    Returns:
        The root reached after coming back to the starting point
    """

    angles = start_angle + 2 * np.pi * np.arange(1, steps * turns + 1) / steps
    z_path = loop_center + loop_radius * np.exp(1j * angles)
    fibres = fibre_roots(p, z_path)
    w = complex(w_start)
    for roots in fibres:
        w = complex(roots[np.argmin(np.abs(roots - w))])
    return w


def track_branch(
    fs: StageFunctionSet,
    loop_center: complex,
    loop_radius: float,
    s: typing.Sequence[int],
    steps: int = 720,
    start_angle: float = 0.0,
) -> SignVector:
    """Follows h_s once around a circle by nearest-branch matching and names the branch
    it comes back on

    Unlike continue_along_loop this never builds p_n, so it keeps working at stages
    whose coefficients are too badly scaled to root-find.
    """

    angles = start_angle + 2 * np.pi * np.arange(0, steps + 1) / steps
    z_path = loop_center + loop_radius * np.exp(1j * angles)
    values = fs.all_branches(z_path)
    signs = SignVector.all(fs.n)
    index = signs.index(SignVector(s))
    w = values[0, index]
    for row in values[1:]:
        index = int(np.argmin(np.abs(row - w)))
        w = row[index]
    return signs[index]
