"""Step displacements, the launch-angle bound and admissible classes.

A ray launched at angle ``theta`` advances horizontally by ``x_T`` on
every refraction step (one layer up or down) and by ``x_R`` on every
reflection step (a bounce pair inside the substrate). Whether a class
of ``n`` refractions and ``m`` reflections lands on the receiver
antenna ``[d, d + L]`` is decided from these displacements alone.
"""

from __future__ import annotations

__all__ = (
    "ANGLE_TOL",
    "SNAP_RTOL",
    "AngleSample",
    "ClassRange",
    "Geometry",
    "IndexRange",
    "PathClass",
    "admissible_classes",
    "angle_grid",
    "angle_sample",
    "ceil_snapped",
    "class_range",
    "floor_snapped",
    "launch_offset",
    "reach_distance",
    "reflection_range",
    "refraction_range",
    "resolve_theta_bound",
    "solve_theta_bound",
    "x_reflect",
    "x_refract",
)

import logging
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import TYPE_CHECKING, NamedTuple

from scipy.optimize import brentq

from winoc._errors import (
    DegenerateAngleError,
    NoSolutionError,
    ValidationError,
)

if TYPE_CHECKING:
    from collections.abc import Iterator, Mapping

    from winoc.model._materials import StackSpec

ANGLE_TOL = 1e-12
"""Absolute tolerance of the launch-angle root search in radians."""

SNAP_RTOL = 1e-9
"""Relative distance to an integer below which floor/ceil snap to it."""

_THETA_MAX = math.pi / 2 - 1e-9


def _snap(x: float) -> float:
    nearest = round(x)
    if abs(x - nearest) <= SNAP_RTOL * max(1.0, abs(x)):
        return float(nearest)
    return x


def floor_snapped(x: float) -> int:
    """Floor a value, treating near-integers as exact integers.

    Args:
        x: The value to floor.

    Returns:
        ``floor(x)`` after snapping `x` to a nearby integer.

    Examples:
        >>> floor_snapped(2.9999999999999)
        3
        >>> floor_snapped(2.5)
        2
    """
    return math.floor(_snap(x))


def ceil_snapped(x: float) -> int:
    """Ceil a value, treating near-integers as exact integers.

    Args:
        x: The value to ceil.

    Returns:
        ``ceil(x)`` after snapping `x` to a nearby integer.

    Examples:
        >>> ceil_snapped(3.0000000000001)
        3
    """
    return math.ceil(_snap(x))


@dataclass(frozen=True, slots=True)
class Geometry:
    """Placement of the transmitter and receiver in the stack.

    Attributes:
        j: Layers between transmitter and receiver (``J``).
        d: Horizontal transmitter-receiver displacement in meters.
        length: Receiver antenna length ``L`` in meters.
        j_bound: Layers between transmitter and the nearest chip
            boundary; None for the boundary-less model.
        g_t: Transmitter gain.
        g_r: Receiver gain.
        r: Number of launch-angle samples.
        q: Extra pair count of the bounding path in the angle bound.
        theta_bound: Explicit launch-angle bound in radians, used
            instead of solving for it when set.
    """

    j: int
    d: float
    length: float
    j_bound: int | None = None
    g_t: float = 1.0
    g_r: float = 1.0
    r: int = 10
    q: int = 0
    theta_bound: float | None = None

    def __post_init__(self) -> None:
        """Validate the invariants of a geometry.

        Raises:
            ValidationError: If any field is out of its domain.
        """
        if self.j < 1:
            raise ValidationError("geometry.J", "J >= 1")
        if self.r < 1:
            raise ValidationError("geometry.r", "r >= 1")
        if self.q < 0:
            raise ValidationError("geometry.q", "q >= 0")
        if self.j_bound is not None and self.j_bound < 0:
            raise ValidationError("geometry.J_bound", "J_bound >= 0")
        if not self.d >= 0:
            raise ValidationError("geometry.d", "d >= 0")
        if not self.length > 0:
            raise ValidationError("geometry.L", "L > 0")
        for name in ("g_t", "g_r"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"geometry.{name}", "> 0")
        if self.theta_bound is not None and not (
            0 < self.theta_bound < math.pi / 2
        ):
            raise ValidationError(
                "geometry.theta_bound",
                "0 < theta_bound < pi/2",
            )

    @property
    def bounded(self) -> bool:
        """Get whether a chip boundary is configured."""
        return self.j_bound is not None

    def receives(self, x: float) -> bool:
        """Check whether a horizontal position lies on the antenna.

        Args:
            x: Horizontal position in meters.

        Returns:
            True if ``d <= x <= d + L`` up to a relative rounding
            tolerance.
        """
        tol = SNAP_RTOL * max(self.d + self.length, abs(x))
        return self.d - tol <= x <= self.d + self.length + tol


class AngleSample(NamedTuple):
    """Step displacements at one launch angle.

    Attributes:
        theta: Launch angle in radians.
        x_t: Horizontal displacement of one refraction step.
        x_r: Horizontal displacement of one reflection step.
        launch_offset: Displacement accumulated when leaving the
            transmitter.
    """

    theta: float
    x_t: float
    x_r: float
    launch_offset: float

    def landing(self, n: int, m: int) -> float:
        """Get the landing position of a class.

        Args:
            n: Number of refraction steps.
            m: Number of reflection steps.

        Returns:
            ``n*x_t + (m + n/2 + 1)*x_r + launch_offset`` in meters.
        """
        return (
            n * self.x_t
            + (m + n / 2 + 1) * self.x_r
            + self.launch_offset
        )


class PathClass(NamedTuple):
    """A class of paths sharing angle, refraction and reflection count.

    Attributes:
        theta: Launch angle in radians.
        n: Number of refraction steps.
        m: Number of reflection steps.
    """

    theta: float
    n: int
    m: int


class IndexRange(NamedTuple):
    """An inclusive integer range that may be empty.

    Attributes:
        lo: Smallest member.
        hi: Largest member; the range is empty when ``hi < lo``.
    """

    lo: int
    hi: int

    @property
    def empty(self) -> bool:
        """Get whether the range has no members."""
        return self.hi < self.lo

    def __len__(self) -> int:
        """Return the number of members."""
        return max(0, self.hi - self.lo + 1)


class ClassRange(NamedTuple):
    """Admissible refraction and reflection counts at one angle.

    Attributes:
        theta: Launch angle in radians.
        tra_min: Minimum refraction count (always ``J``).
        tra_max: Maximum refraction count.
        ref: Reflection range per admissible refraction count.
    """

    theta: float
    tra_min: int
    tra_max: int
    ref: Mapping[int, IndexRange]


def _refracted_tan(theta: float, ni: float, n3: float) -> float:
    return math.tan(math.asin(ni * math.sin(theta) / n3))


def launch_offset(theta: float, stack: StackSpec) -> float:
    """Compute the displacement of leaving the transmitter.

    Args:
        theta: Launch angle in radians.
        stack: The material stack.

    Returns:
        ``l1 * tan(arcsin(n1 sin(theta) / n3))`` in meters.
    """
    return stack.l1 * _refracted_tan(theta, stack.n1, stack.n3)


def x_refract(theta: float, stack: StackSpec) -> float:
    """Compute the horizontal displacement of one refraction step.

    Args:
        theta: Launch angle in radians, ``0 <= theta < pi/2``.
        stack: The material stack.

    Returns:
        The displacement ``X_T`` in meters.

    Raises:
        DegenerateAngleError: If a refracted angle is undefined.
    """
    try:
        return stack.l1 * _refracted_tan(
            theta,
            stack.n1,
            stack.n3,
        ) + stack.l2 * _refracted_tan(theta, stack.n2, stack.n3)
    except ValueError as exc:
        msg = f"refracted angle undefined at theta={theta!r}"
        raise DegenerateAngleError(msg) from exc


def x_reflect(theta: float, stack: StackSpec) -> float:
    """Compute the horizontal displacement of one reflection step.

    Args:
        theta: Launch angle in radians, ``0 <= theta < pi/2``.
        stack: The material stack.

    Returns:
        The displacement ``X_R = 2 l2 tan(theta)`` in meters.
    """
    return 2 * stack.l2 * math.tan(theta)


def angle_sample(theta: float, stack: StackSpec) -> AngleSample:
    """Evaluate all step displacements at one launch angle.

    Args:
        theta: Launch angle in radians.
        stack: The material stack.

    Returns:
        The angle sample.
    """
    return AngleSample(
        theta=theta,
        x_t=x_refract(theta, stack),
        x_r=x_reflect(theta, stack),
        launch_offset=launch_offset(theta, stack),
    )


def reach_distance(
    theta: float,
    geom: Geometry,
    stack: StackSpec,
    q: int | None = None,
) -> float:
    """Horizontal reach of the bounding path at a launch angle.

    The bounding path refracts ``2q + J`` times and lands on the far
    end of the antenna exactly at the angle bound.

    Args:
        theta: Launch angle in radians.
        geom: The geometry.
        stack: The material stack.
        q: Extra pair count; defaults to ``geom.q``.

    Returns:
        The reach in meters; strictly increasing in `theta`.
    """
    if q is None:
        q = geom.q
    steps = 2 * q + geom.j
    return (
        x_refract(theta, stack) * steps
        + (steps + 2) * stack.l2 * math.tan(theta)
        + 2 * launch_offset(theta, stack)
    )


def solve_theta_bound(
    geom: Geometry,
    stack: StackSpec,
    q: int | None = None,
) -> float:
    """Solve for the largest launch angle that reaches the antenna.

    Args:
        geom: The geometry.
        stack: The material stack.
        q: Extra pair count; defaults to ``geom.q``.

    Returns:
        The angle bound in radians, accurate to `ANGLE_TOL`.

    Raises:
        NoSolutionError: If the antenna end ``d + L`` is already
            exceeded at the smallest resolvable angle.
    """
    logger = logging.getLogger(__name__)
    target = geom.d + geom.length

    def excess(theta: float) -> float:
        return reach_distance(theta, geom, stack, q) - target

    if excess(ANGLE_TOL) >= 0:
        msg = f"no launch angle reaches d + L = {target!r}"
        raise NoSolutionError(msg)
    if excess(_THETA_MAX) <= 0:
        logger.warning("theta_bound clipped to %r", _THETA_MAX)
        return _THETA_MAX
    theta = brentq(excess, ANGLE_TOL, _THETA_MAX, xtol=ANGLE_TOL)
    logger.debug("theta_bound solved as %r", theta)
    return float(theta)


def resolve_theta_bound(geom: Geometry, stack: StackSpec) -> float:
    """Get the angle bound, preferring an explicit override.

    Args:
        geom: The geometry.
        stack: The material stack.

    Returns:
        ``geom.theta_bound`` if set, otherwise the solved bound.
    """
    if geom.theta_bound is not None:
        return geom.theta_bound
    return solve_theta_bound(geom, stack)


def angle_grid(theta_bound: float, r: int) -> tuple[float, ...]:
    """Get the right-endpoint sampling grid ``(k/r) * theta_bound``.

    Args:
        theta_bound: The angle bound in radians.
        r: Number of samples.

    Returns:
        The ``r`` launch angles in ascending order.

    Examples:
        >>> angle_grid(1.0, 4)
        (0.25, 0.5, 0.75, 1.0)
    """
    return tuple(k / r * theta_bound for k in range(1, r + 1))


def refraction_range(sample: AngleSample, geom: Geometry) -> IndexRange:
    """Get the minimum and maximum refraction counts at an angle.

    Only counts of the same parity as ``J`` inside the range are
    admissible.

    Args:
        sample: The angle sample.
        geom: The geometry.

    Returns:
        ``(J, tra_max)``; empty when ``tra_max < J``.

    Raises:
        DegenerateAngleError: If both step displacements vanish.
    """
    denominator = 2 * sample.x_t + sample.x_r
    if denominator <= 0:
        msg = f"step displacements vanish at theta={sample.theta!r}"
        raise DegenerateAngleError(msg)
    numerator = 2 * (
        geom.d + geom.length - 2 * sample.launch_offset - sample.x_r
    )
    return IndexRange(geom.j, floor_snapped(numerator / denominator))


def reflection_range(
    sample: AngleSample,
    n: int,
    geom: Geometry,
) -> IndexRange:
    """Get the minimum and maximum reflection counts for ``n``.

    Every count in the range lands on the antenna; its neighbours just
    outside the range do not.

    Args:
        sample: The angle sample.
        n: An admissible refraction count.
        geom: The geometry.

    Returns:
        ``(ref_min, ref_max)``, with ``ref_min`` clamped at 0; empty
        when no count lands on the antenna.

    Raises:
        DegenerateAngleError: If the reflection displacement vanishes.
    """
    if sample.x_r <= 0:
        msg = f"reflection displacement vanishes at theta={sample.theta!r}"
        raise DegenerateAngleError(msg)
    base = sample.landing(n, 0)
    lo = ceil_snapped((geom.d - base) / sample.x_r)
    hi = floor_snapped((geom.d + geom.length - base) / sample.x_r)
    return IndexRange(max(0, lo), hi)


def class_range(sample: AngleSample, geom: Geometry) -> ClassRange:
    """Collect the refraction and reflection ranges at one angle.

    Args:
        sample: The angle sample.
        geom: The geometry.

    Returns:
        The class range; its mapping only holds refraction counts with
        a non-empty reflection range.
    """
    tra = refraction_range(sample, geom)
    ref = {}
    for n in range(tra.lo, tra.hi + 1, 2):
        if not (rng := reflection_range(sample, n, geom)).empty:
            ref[n] = rng
    return ClassRange(
        theta=sample.theta,
        tra_min=tra.lo,
        tra_max=tra.hi,
        ref=MappingProxyType(ref),
    )


def admissible_classes(
    sample: AngleSample,
    geom: Geometry,
) -> Iterator[PathClass]:
    """Iterate the admissible classes at one angle in (n, m) order.

    Args:
        sample: The angle sample.
        geom: The geometry.

    Yields:
        Every admissible path class.
    """
    for n, rng in class_range(sample, geom).ref.items():
        for m in range(rng.lo, rng.hi + 1):
            yield PathClass(sample.theta, n, m)
