# flake8: noqa
from wermerset.utils.analysis.fiber import FiberReport, fiber, membership_index, stage_frame
from wermerset.utils.analysis.potential import (
    CLAMP,
    PotentialSample,
    SubharmonicityReport,
    fiber_max,
    fiber_max_subharmonicity,
    potential,
    potential_at_branches,
    potential_grid,
)
from wermerset.utils.analysis.probes import (
    CircleProbe,
    CoherenceReport,
    coherence_check,
    cut_crossings,
    excluded_points,
    jump_check,
    separation_check,
    shadow_check,
    validate_probe,
)
from wermerset.utils.analysis.extraction import (
    NestingReport,
    PointCloud,
    circle_sampler,
    complement_nesting_check,
    disk_sampler,
    extract_E,
    segment_sampler,
)
