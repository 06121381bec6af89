# flake8: noqa
from wermerset.utils.branches.branch_point_table import BranchPointTable, enumerate_branch_points
from wermerset.utils.branches.cut import Cut, cuts_for
from wermerset.utils.branches.stage_function_set import (
    SignVector,
    StageFunctionSet,
    beta_eval,
    branch_eval,
    identify_branch,
)
from wermerset.utils.branches.fibre_frame import FibreFrame, FibreSamples
from wermerset.utils.branches.monodromy import monodromy, continue_along_loop, track_branch
from wermerset.utils.branches.collision import (
    collision_zeros,
    compute_Z,
    difference_norm,
    estimate_collision_order,
    min_branch_gaps,
)
