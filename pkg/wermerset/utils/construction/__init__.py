# flake8: noqa
from wermerset.utils.construction.grid_config import GridConfig, HARD_STAGE_CAP
from wermerset.utils.construction.sampling import (
    boundary_count,
    chunked,
    circle_points,
    disk_grid,
    unit_stencil,
)
from wermerset.utils.construction.stage import Stage
from wermerset.utils.construction.verification_report import Predicate, VerificationReport
from wermerset.utils.construction.selectors import (
    W_BLOCK,
    StageContext,
    analytic_cap,
    build_p_next,
    init_stage1,
    level_crossings,
    m_from_minimum,
    polynomial_chain,
    radicand,
    select_c,
    select_eps,
    select_m,
    select_rho,
    shifted_branches,
)
from wermerset.utils.construction.verification import check_lev1, lev1_sequence, verify_stage
from wermerset.utils.construction.construction import Construction, MODES
