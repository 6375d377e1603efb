"""Loop-count accounting of the two full models.

The boundary-constrained model spends ``2n - J_bound`` inner iterations
on a class where the boundary-less model spends ``n``. The counters
below walk the very class grid `total_gain` iterates; the closed-form
prediction replaces each reflection range by the width estimate
``alpha`` and each refraction range by ``beta``.
"""

from __future__ import annotations

__all__ = (
    "ComplexityReport",
    "complexity_report",
    "loop_counts",
    "loop_difference_term",
    "predicted_loop_difference",
)

import logging
import math
from typing import TYPE_CHECKING, NamedTuple

from winoc._errors import ValidationError
from winoc.model._gain import loop_weight
from winoc.model._geometry import (
    admissible_classes,
    angle_grid,
    angle_sample,
    ceil_snapped,
    floor_snapped,
    resolve_theta_bound,
)

if TYPE_CHECKING:
    from winoc.model._geometry import AngleSample, Geometry
    from winoc.model._materials import StackSpec


class ComplexityReport(NamedTuple):
    """Loop counts of both models and their predicted difference.

    Attributes:
        j_bound: Boundary distance the counts were taken for.
        loop_bl: Inner iterations of the boundary-less model.
        loop_bc: Inner iterations of the boundary-constrained model.
        predicted_difference: Closed-form estimate of
            ``loop_bc - loop_bl``.
        alpha: ``(theta, alpha)`` per grid angle.
        beta: ``(theta, beta)`` per grid angle.
        negative_terms: Classes whose ``2n - J_bound`` is negative.
    """

    j_bound: int
    loop_bl: int
    loop_bc: int
    predicted_difference: float
    alpha: tuple[tuple[float, int], ...]
    beta: tuple[tuple[float, int], ...]
    negative_terms: int

    @property
    def empirical_difference(self) -> int:
        """Get the counted difference ``loop_bc - loop_bl``."""
        return self.loop_bc - self.loop_bl

    @property
    def relative_gap(self) -> float | None:
        """Get ``(predicted - empirical) / |empirical|``, None if 0."""
        empirical = self.empirical_difference
        if empirical == 0:
            return None
        return (self.predicted_difference - empirical) / abs(empirical)


def _require_bound(geom: Geometry) -> int:
    if geom.j_bound is None:
        raise ValidationError("geometry.J_bound", "required for loop counts")
    return geom.j_bound


def _tally(geom: Geometry, stack: StackSpec) -> tuple[int, int, int]:
    j_bound = _require_bound(geom)
    loop_bl = loop_bc = negative = 0
    for theta in angle_grid(resolve_theta_bound(geom, stack), geom.r):
        for cls in admissible_classes(angle_sample(theta, stack), geom):
            loop_bl += loop_weight(cls.n, geom, bounded=False)
            loop_bc += loop_weight(cls.n, geom, bounded=True)
            negative += 2 * cls.n < j_bound
    return loop_bl, loop_bc, negative


def loop_counts(geom: Geometry, stack: StackSpec) -> tuple[int, int]:
    """Count the inner iterations of both full models.

    Args:
        geom: The geometry; ``J_bound`` must be set.
        stack: The material stack.

    Returns:
        ``(loop_bl, loop_bc)``.

    Raises:
        ValidationError: If ``geom.j_bound`` is None.
    """
    loop_bl, loop_bc, _ = _tally(geom, stack)
    return loop_bl, loop_bc


def loop_difference_term(alpha: int, beta: int, j_bound: int) -> float:
    """Evaluate one angle's term of the predicted loop difference.

    Examples:
        >>> loop_difference_term(3, 2, 3)
        0.0
        >>> loop_difference_term(2, 3, 1)
        12.0
    """
    return alpha * (-(j_bound**2) + j_bound + beta**2 + beta) / 2


def _alpha(sample: AngleSample, geom: Geometry) -> int:
    return ceil_snapped(2 * geom.length / sample.x_r + 1)


def _beta(sample: AngleSample, geom: Geometry) -> int:
    numerator = (
        geom.d + geom.length - 2 * sample.launch_offset - sample.x_r
    )
    return floor_snapped(numerator / (sample.x_t + sample.x_r / 2))


def _alpha_beta(
    geom: Geometry,
    stack: StackSpec,
) -> list[tuple[float, int, int]]:
    rows = []
    for theta in angle_grid(resolve_theta_bound(geom, stack), geom.r):
        sample = angle_sample(theta, stack)
        rows.append((theta, _alpha(sample, geom), _beta(sample, geom)))
    return rows


def predicted_loop_difference(geom: Geometry, stack: StackSpec) -> float:
    """Predict ``loop_bc - loop_bl`` in closed form.

    Per angle, ``alpha = ceil(L / (l2 tan(theta)) + 1)`` and ``beta``
    is the largest refraction count.

    Args:
        geom: The geometry; ``J_bound`` must be set.
        stack: The material stack.

    Returns:
        The sum of `loop_difference_term` over the angle grid.

    Raises:
        ValidationError: If ``geom.j_bound`` is None.
    """
    j_bound = _require_bound(geom)
    return math.fsum(
        loop_difference_term(alpha, beta, j_bound)
        for _, alpha, beta in _alpha_beta(geom, stack)
    )


def complexity_report(geom: Geometry, stack: StackSpec) -> ComplexityReport:
    """Collect counted and predicted loop figures for a geometry.

    Args:
        geom: The geometry; ``J_bound`` must be set.
        stack: The material stack.

    Returns:
        The complexity report.

    Raises:
        ValidationError: If ``geom.j_bound`` is None.
    """
    logger = logging.getLogger(__name__)
    j_bound = _require_bound(geom)
    loop_bl, loop_bc, negative = _tally(geom, stack)
    if negative:
        logger.warning(
            "%d classes have 2n < J_bound = %d; summed as negative loops",
            negative,
            j_bound,
        )
    grid = _alpha_beta(geom, stack)
    report = ComplexityReport(
        j_bound=j_bound,
        loop_bl=loop_bl,
        loop_bc=loop_bc,
        predicted_difference=math.fsum(
            loop_difference_term(alpha, beta, j_bound)
            for _, alpha, beta in grid
        ),
        alpha=tuple((theta, alpha) for theta, alpha, _ in grid),
        beta=tuple((theta, beta) for theta, _, beta in grid),
        negative_terms=negative,
    )
    logger.info(
        "loops: boundary-less %d, boundary-constrained %d, predicted "
        "difference %.6g",
        loop_bl,
        loop_bc,
        report.predicted_difference,
    )
    return report
