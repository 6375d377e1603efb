"""Class gains and the total channel gain.

The total gain integrates, over launch angles up to the angle bound,
the gains of every admissible path class. Class gains span hundreds of
decibels, so each one is formed in the log domain and the linear
values are summed with `math.fsum`.
"""

from __future__ import annotations

__all__ = (
    "AngleGain",
    "AngleOutcome",
    "ApproxConfig",
    "ChannelResult",
    "ClassGain",
    "TimingResult",
    "approx_total_gain",
    "arrival_time",
    "assemble_result",
    "class_gain",
    "dropped_gain",
    "gain_ratio",
    "loop_weight",
    "theta_threshold",
    "to_db",
    "total_gain",
    "weigh_angle",
)

import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal, NamedTuple

from scipy.constants import c as SPEED_OF_LIGHT

from winoc._errors import (
    ComputationError,
    DegenerateRatioError,
    ValidationError,
)
from winoc.model._counting import class_counts
from winoc.model._geometry import (
    admissible_classes,
    angle_grid,
    angle_sample,
    reflection_range,
    resolve_theta_bound,
)
from winoc.model._materials import coefficient_set, step_gain_table

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from winoc._typing import ClassKey
    from winoc.model._geometry import Geometry
    from winoc.model._materials import (
        CoefficientSet,
        StackSpec,
        StepGainTable,
    )

type Model = Literal[
    "boundary-less",
    "boundary-constrained",
    "approximate",
    "oracle",
]

_LOG_FLOAT_MAX = math.log(sys.float_info.max)


@dataclass(frozen=True, slots=True)
class ApproxConfig:
    """Settings of the approximation algorithm.

    Attributes:
        t_c: Channel coherence time in seconds.
        v: Speed of light in vacuum in m/s.
        refraction_truncation: Keep only the least-refracted classes.
        coherence_cutoff: Drop angles whose paths arrive too late.
    """

    t_c: float
    v: float = SPEED_OF_LIGHT
    refraction_truncation: bool = True
    coherence_cutoff: bool = True

    def __post_init__(self) -> None:
        """Validate the invariants of the settings.

        Raises:
            ValidationError: If a time or speed is not positive.
        """
        if not self.t_c > 0:
            raise ValidationError("approx.t_c", "t_c > 0")
        if not self.v > 0:
            raise ValidationError("approx.v", "v > 0")


class AngleGain(NamedTuple):
    """Contribution of one launch-angle sample.

    Attributes:
        theta: Launch angle in radians.
        h_theta: Partial gain, already weighted by the angle step and
            the antenna gains.
        classes: Number of classes evaluated at the angle.
    """

    theta: float
    h_theta: float
    classes: int


class ClassGain(NamedTuple):
    """Gain of one path class.

    Attributes:
        theta: Launch angle in radians.
        n: Number of refraction steps.
        m: Number of reflection steps.
        count: Number of received paths in the class.
        gain: Gain of the whole class.
        contribution: `gain` weighted by the angle step and the
            antenna gains, as summed into the total.
    """

    theta: float
    n: int
    m: int
    count: int
    gain: float
    contribution: float


class ChannelResult(NamedTuple):
    """Total channel gain and its breakdown.

    Attributes:
        model: Which model produced the result.
        theta_bound: Launch-angle bound in radians.
        h_linear: Total gain, the sum of the per-angle gains.
        h_db: ``10 log10(h_linear)``; ``-inf`` for a zero gain.
        per_angle: Partial gains in ascending angle order.
        per_class: Class gains in (angle, n, m) order, or None when not
            requested.
        loops_executed: Innermost loop iterations spent.
    """

    model: Model
    theta_bound: float
    h_linear: float
    h_db: float
    per_angle: tuple[AngleGain, ...]
    per_class: tuple[ClassGain, ...] | None
    loops_executed: int


class TimingResult(NamedTuple):
    """Arrival times behind the coherence-time cutoff.

    Attributes:
        t_theta: ``(theta, t)`` arrival time of the least-reflected
            direct class at every grid angle.
        t_min: Earliest arrival time, over the grid angles and the
            reference class at the angle bound.
        theta_t: Cutoff angle in radians.
        theta_bound: Launch-angle bound in radians.
        n_bound: Refraction count of the reference class.
        m_bound: Reflection count of the reference class.
    """

    t_theta: tuple[tuple[float, float], ...]
    t_min: float
    theta_t: float
    theta_bound: float
    n_bound: int
    m_bound: int


def to_db(h: float) -> float:
    """Convert a power gain to decibels.

    Args:
        h: Linear gain.

    Returns:
        ``10 log10(h)``, or ``-inf`` for a zero gain.

    Examples:
        >>> to_db(0.01)
        -20.0
    """
    return 10 * math.log10(h) if h > 0 else -math.inf


def class_gain(
    count: int,
    n: int,
    m: int,
    j: int,
    table: StepGainTable,
) -> float:
    """Compute the gain of a class of ``count`` received paths.

    The gain is ``count * g_prefix * g_layer**(J - 1) *
    g_pair**((n - J) / 2) * g_refl**m``, evaluated in the log domain.

    Args:
        count: Number of received paths in the class.
        n: Number of refraction steps, ``n >= J`` of J's parity.
        m: Number of reflection steps.
        j: Layers between transmitter and receiver.
        table: Step gain factors of the stack.

    Returns:
        The class gain (0 for an empty class).
    """
    if count <= 0:
        return 0.0
    log_gain = math.log(count) + table.log_prefix
    for exponent, log_factor in (
        (j - 1, table.log_layer),
        ((n - j) // 2, table.log_pair),
        (m, table.log_refl),
    ):
        if exponent:
            log_gain += exponent * log_factor
    return math.exp(log_gain)


def arrival_time(
    theta: float,
    n: int,
    m: int,
    stack: StackSpec,
    v: float,
) -> float:
    """Approximate the arrival time of a class travelling in silicon.

    Args:
        theta: Launch angle in radians.
        n: Number of refraction steps.
        m: Number of reflection steps.
        stack: The material stack.
        v: Speed of light in vacuum in m/s.

    Returns:
        ``(2m + n + 1) l3 n3 / (v tan(theta))`` in seconds.
    """
    return (2 * m + n + 1) * stack.l3 * stack.n3 / (v * math.tan(theta))


def gain_ratio(
    stack: StackSpec,
    coeffs: CoefficientSet | None = None,
) -> float:
    """Compute the refraction-to-reflection single-step gain ratio.

    Args:
        stack: The material stack.
        coeffs: Coefficients derived from `stack`; computed when
            omitted.

    Returns:
        ``T1 T2 T3 / ((1 - T3)(1 - T6)) * exp(2 l3 lam3 - l2 lam2 -
        l1 lam1)``.

    Raises:
        DegenerateRatioError: If ``T3`` or ``T6`` equals 1.
        ComputationError: If the ratio overflows a float.
    """
    if coeffs is None:
        coeffs = coefficient_set(stack)
    t1, t2, t3, _, _, t6 = coeffs.t
    denominator = (1 - t3) * (1 - t6)
    if denominator == 0:
        msg = "reflection coefficient R3 or R6 vanishes"
        raise DegenerateRatioError(msg)
    exponent = (
        2 * stack.lam3 * stack.l3
        - stack.lam2 * stack.l2
        - stack.lam1 * stack.l1
    )
    prefactor = t1 * t2 * t3 / denominator
    if prefactor == 0:
        return 0.0
    log_ratio = math.log(prefactor) + exponent
    if log_ratio > _LOG_FLOAT_MAX:
        msg = f"gain ratio overflows: ln(ratio) = {log_ratio:.6g}"
        raise ComputationError(msg)
    return math.exp(log_ratio)


class _AngleTask(NamedTuple):
    theta: float
    geom: Geometry
    stack: StackSpec
    table: StepGainTable
    bounded: bool
    n_limit: int | None


class AngleOutcome(NamedTuple):
    """Unweighted result of one launch-angle sample.

    Attributes:
        theta: Launch angle in radians.
        partial: Sum of the class gains at the angle.
        loops: Inner-loop iterations spent at the angle.
        classes: ``(n, m, count, gain)`` per class in class order.
    """

    theta: float
    partial: float
    loops: int
    classes: tuple[tuple[int, int, int, float], ...]


def loop_weight(n: int, geom: Geometry, *, bounded: bool) -> int:
    """Get the inner-loop iterations spent on one class.

    Args:
        n: Refraction count of the class.
        geom: The geometry.
        bounded: Whether the boundary-constrained model runs.

    Returns:
        ``2n - J_bound`` for the boundary-constrained model, else ``n``.
    """
    if bounded and geom.j_bound is not None:
        return 2 * n - geom.j_bound
    return n


def _evaluate_angle(task: _AngleTask) -> AngleOutcome:
    geom = task.geom
    sample = angle_sample(task.theta, task.stack)
    keys = [
        (cls.n, cls.m)
        for cls in admissible_classes(sample, geom)
        if task.n_limit is None or cls.n <= task.n_limit
    ]
    counts = class_counts(sample, geom, keys, bounded=task.bounded)
    return weigh_angle(
        task.theta,
        geom,
        task.table,
        {key: c.effective for key, c in counts.items()},
        bounded=task.bounded,
    )


def weigh_angle(
    theta: float,
    geom: Geometry,
    table: StepGainTable,
    effective: dict[ClassKey, int],
    *,
    bounded: bool,
) -> AngleOutcome:
    """Turn the effective counts of one angle into class gains.

    Args:
        theta: Launch angle in radians.
        geom: The geometry.
        table: Step gain factors of the stack.
        effective: Effective counts keyed by ``(n, m)``, in class
            order.
        bounded: Whether the boundary-constrained model runs.

    Returns:
        The unweighted outcome of the angle.
    """
    rows = []
    loops = 0
    for (n, m), count in effective.items():
        rows.append((n, m, count, class_gain(count, n, m, geom.j, table)))
        loops += loop_weight(n, geom, bounded=bounded)
    return AngleOutcome(
        theta=theta,
        partial=math.fsum(row[3] for row in rows),
        loops=loops,
        classes=tuple(rows),
    )


def _map_angles(
    tasks: Sequence[_AngleTask],
    jobs: int,
) -> list[AngleOutcome]:
    if jobs <= 1 or len(tasks) <= 1:
        return [_evaluate_angle(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_evaluate_angle, tasks))


def assemble_result(
    model: Model,
    geom: Geometry,
    theta_bound: float,
    outcomes: Iterable[AngleOutcome],
    *,
    per_class: bool,
) -> ChannelResult:
    """Reduce per-angle outcomes into a channel result.

    The reduction runs in ascending angle order whatever order the
    outcomes were computed in.

    Args:
        model: Name of the model that produced the outcomes.
        geom: The geometry.
        theta_bound: The launch-angle bound in radians.
        outcomes: Per-angle outcomes.
        per_class: Whether to keep the per-class breakdown.

    Returns:
        The channel result.
    """
    weight = theta_bound / geom.r * geom.g_t * geom.g_r
    ordered = sorted(outcomes, key=lambda o: o.theta)
    per_angle = tuple(
        AngleGain(o.theta, weight * o.partial, len(o.classes))
        for o in ordered
    )
    classes = None
    if per_class:
        classes = tuple(
            ClassGain(o.theta, n, m, count, gain, weight * gain)
            for o in ordered
            for n, m, count, gain in o.classes
        )
    h = math.fsum(a.h_theta for a in per_angle)
    return ChannelResult(
        model=model,
        theta_bound=theta_bound,
        h_linear=h,
        h_db=to_db(h),
        per_angle=per_angle,
        per_class=classes,
        loops_executed=sum(o.loops for o in ordered),
    )


def _check_bounded(geom: Geometry, *, bounded: bool) -> None:
    if bounded and geom.j_bound is None:
        raise ValidationError(
            "geometry.J_bound",
            "required by the boundary-constrained model",
        )


def total_gain(
    geom: Geometry,
    stack: StackSpec,
    *,
    bounded: bool | None = None,
    per_class: bool = False,
    jobs: int = 1,
) -> ChannelResult:
    """Compute the total channel gain of the full model.

    Args:
        geom: The geometry.
        stack: The material stack.
        bounded: Run the boundary-constrained model; defaults to
            whether ``geom.j_bound`` is set.
        per_class: Whether to keep the per-class breakdown.
        jobs: Worker processes evaluating angle samples.

    Returns:
        The channel result.
    """
    if bounded is None:
        bounded = geom.bounded
    _check_bounded(geom, bounded=bounded)
    logger = logging.getLogger(__name__)
    theta_bound = resolve_theta_bound(geom, stack)
    table = step_gain_table(stack)
    tasks = [
        _AngleTask(theta, geom, stack, table, bounded, None)
        for theta in angle_grid(theta_bound, geom.r)
    ]
    outcomes = _map_angles(tasks, jobs)
    model: Model = "boundary-constrained" if bounded else "boundary-less"
    result = assemble_result(
        model,
        geom,
        theta_bound,
        outcomes,
        per_class=per_class,
    )
    if not any(o.classes for o in outcomes):
        logger.warning("no admissible path class at any sampled angle")
    logger.info(
        "%s gain %.6g dB over %d angles (%d loops)",
        model,
        result.h_db,
        geom.r,
        result.loops_executed,
    )
    return result


def theta_threshold(
    geom: Geometry,
    stack: StackSpec,
    approx: ApproxConfig,
    reference_class: ClassKey | None = None,
) -> TimingResult:
    """Compute the coherence-time cutoff angle.

    Args:
        geom: The geometry.
        stack: The material stack.
        approx: Approximation settings.
        reference_class: ``(n, m)`` of the earliest class at the angle
            bound; defaults to ``(J, ref_max)`` there.

    Returns:
        The timing result, with the cutoff clamped into
        ``[0, theta_bound]``.
    """
    theta_bound = resolve_theta_bound(geom, stack)
    if reference_class is None:
        top = reflection_range(angle_sample(theta_bound, stack), geom.j, geom)
        reference_class = (geom.j, max(top.hi, 0))
    n_bound, m_bound = reference_class
    t_bound = arrival_time(theta_bound, n_bound, m_bound, stack, approx.v)

    t_theta = []
    for theta in angle_grid(theta_bound, geom.r):
        rng = reflection_range(angle_sample(theta, stack), geom.j, geom)
        t_theta.append((
            theta,
            arrival_time(theta, geom.j, max(rng.lo, 0), stack, approx.v),
        ))

    t_min = min(t_bound, *(t for _, t in t_theta))
    reach = stack.n3 * (2 * m_bound + n_bound + 1) * stack.l3
    tan_bound = math.tan(theta_bound)
    theta_t = math.atan(
        reach * tan_bound / (reach + approx.v * approx.t_c * tan_bound),
    )
    return TimingResult(
        t_theta=tuple(t_theta),
        t_min=t_min,
        theta_t=min(max(theta_t, 0.0), theta_bound),
        theta_bound=theta_bound,
        n_bound=n_bound,
        m_bound=m_bound,
    )


def approx_total_gain(
    geom: Geometry,
    stack: StackSpec,
    approx: ApproxConfig,
    *,
    per_class: bool = False,
    jobs: int = 1,
) -> ChannelResult:
    """Compute the total channel gain with the approximation algorithm.

    Only the least-refracted classes (``n = J``) are kept, and angle
    samples below the coherence-time cutoff are skipped; either rule
    can be switched off in `approx`.

    Args:
        geom: The geometry.
        stack: The material stack.
        approx: Approximation settings.
        per_class: Whether to keep the per-class breakdown.
        jobs: Worker processes evaluating angle samples.

    Returns:
        The channel result; never above the full model's gain.
    """
    logger = logging.getLogger(__name__)
    theta_bound = resolve_theta_bound(geom, stack)
    table = step_gain_table(stack)
    grid = angle_grid(theta_bound, geom.r)
    if approx.coherence_cutoff:
        theta_t = theta_threshold(geom, stack, approx).theta_t
        kept = tuple(theta for theta in grid if theta >= theta_t)
        logger.debug(
            "cutoff %r rad keeps %d of %d angles",
            theta_t,
            len(kept),
            len(grid),
        )
        grid = kept
    n_limit = geom.j if approx.refraction_truncation else None
    tasks = [
        _AngleTask(theta, geom, stack, table, geom.bounded, n_limit)
        for theta in grid
    ]
    return assemble_result(
        "approximate",
        geom,
        theta_bound,
        _map_angles(tasks, jobs),
        per_class=per_class,
    )


def dropped_gain(full: ChannelResult, approx: ChannelResult) -> float:
    """Sum the contributions the approximation left out.

    Args:
        full: Full-model result with its per-class breakdown.
        approx: Approximate result with its per-class breakdown.

    Returns:
        The summed contribution of every class present in `full` but
        absent from `approx`.

    Raises:
        ValueError: If either result lacks its per-class breakdown.
    """
    if full.per_class is None or approx.per_class is None:
        msg = "both results need a per-class breakdown"
        raise ValueError(msg)
    kept = {(c.theta, c.n, c.m) for c in approx.per_class}
    return math.fsum(
        c.contribution
        for c in full.per_class
        if (c.theta, c.n, c.m) not in kept
    )
