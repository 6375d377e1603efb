"""Channel model of a multi-layer 3D wireless NoC stack."""

from __future__ import annotations

__all__ = (
    "AngleGain",
    "AngleOutcome",
    "AngleSample",
    "ApproxConfig",
    "ChannelResult",
    "ClassCount",
    "ClassGain",
    "ClassRange",
    "CoefficientSet",
    "ComplexityReport",
    "Geometry",
    "IndexRange",
    "PathClass",
    "StackSpec",
    "StepGainTable",
    "TimingResult",
    "admissible_classes",
    "angle_grid",
    "angle_sample",
    "approx_total_gain",
    "arrival_time",
    "assemble_result",
    "boundary_excluded_count",
    "class_count",
    "class_counts",
    "class_gain",
    "class_range",
    "coefficient_set",
    "complexity_report",
    "dropped_gain",
    "effective_count",
    "gain_ratio",
    "launch_offset",
    "loop_counts",
    "loop_difference_term",
    "loop_weight",
    "predicted_loop_difference",
    "reach_distance",
    "redundant_count",
    "reflection_range",
    "refraction_combinations",
    "refraction_range",
    "resolve_theta_bound",
    "solve_theta_bound",
    "step_gain_table",
    "survivor_table",
    "theta_threshold",
    "to_db",
    "total_gain",
    "weigh_angle",
    "x_reflect",
    "x_refract",
)

from winoc.model._complexity import (
    ComplexityReport,
    complexity_report,
    loop_counts,
    loop_difference_term,
    predicted_loop_difference,
)
from winoc.model._counting import (
    ClassCount,
    boundary_excluded_count,
    class_count,
    class_counts,
    effective_count,
    redundant_count,
    refraction_combinations,
    survivor_table,
)
from winoc.model._gain import (
    AngleGain,
    AngleOutcome,
    ApproxConfig,
    ChannelResult,
    ClassGain,
    TimingResult,
    approx_total_gain,
    arrival_time,
    assemble_result,
    class_gain,
    dropped_gain,
    gain_ratio,
    loop_weight,
    theta_threshold,
    to_db,
    total_gain,
    weigh_angle,
)
from winoc.model._geometry import (
    AngleSample,
    ClassRange,
    Geometry,
    IndexRange,
    PathClass,
    admissible_classes,
    angle_grid,
    angle_sample,
    class_range,
    launch_offset,
    reach_distance,
    reflection_range,
    refraction_range,
    resolve_theta_bound,
    solve_theta_bound,
    x_reflect,
    x_refract,
)
from winoc.model._materials import (
    CoefficientSet,
    StackSpec,
    StepGainTable,
    coefficient_set,
    step_gain_table,
)
