"""Exhaustive enumeration of step sequences.

Every sequence of a class is walked step by step: refractions move the
ray one layer up or down, reflections keep its depth. A sequence is
dropped when it refracts again after a refraction landed it on the
receiver layer inside the antenna window. The deepest point above the
transmitter each sequence reaches is kept, so one walk answers every
boundary distance at once.
"""

from __future__ import annotations

__all__ = (
    "CountComparison",
    "OracleCaps",
    "OracleReport",
    "check_counts",
    "enumerate_paths",
    "oracle_total_gain",
    "sequence_gain",
)

import logging
import math
from collections import Counter
from dataclasses import replace
from types import MappingProxyType
from typing import TYPE_CHECKING, NamedTuple

from winoc._errors import CapExceededError, OracleMismatchError
from winoc.model import (
    angle_grid,
    angle_sample,
    assemble_result,
    class_counts,
    reflection_range,
    refraction_range,
    resolve_theta_bound,
    step_gain_table,
    weigh_angle,
)

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping

    from winoc._typing import ClassKey
    from winoc.model import (
        AngleSample,
        ChannelResult,
        Geometry,
        StackSpec,
        StepGainTable,
    )

MAX_STEPS = 20
"""Largest ``n_max + m_max`` the oracle agrees to enumerate."""


class OracleCaps(NamedTuple):
    """Largest class sizes to enumerate.

    Attributes:
        n_max: Largest refraction count.
        m_max: Largest reflection count.
    """

    n_max: int
    m_max: int

    def check(self) -> None:
        """Reject caps beyond the enumeration guard.

        Raises:
            CapExceededError: If ``n_max + m_max`` exceeds `MAX_STEPS`
                or a cap is negative.
        """
        if self.n_max < 0 or self.m_max < 0:
            msg = f"caps must be non-negative, got {tuple(self)}"
            raise CapExceededError(msg)
        if self.n_max + self.m_max > MAX_STEPS:
            msg = (
                f"n_max + m_max = {self.n_max + self.m_max} exceeds "
                f"{MAX_STEPS}"
            )
            raise CapExceededError(msg)


class OracleReport(NamedTuple):
    """Enumerated counts and gains at one launch angle.

    Attributes:
        theta: Launch angle in radians.
        j_bound: Boundary distance applied, None when boundary-less.
        caps: The enumeration caps.
        counts: Received sequences per ``(n, m)`` in class order.
        gains: Summed per-sequence gain per ``(n, m)``.
    """

    theta: float
    j_bound: int | None
    caps: OracleCaps
    counts: Mapping[ClassKey, int]
    gains: Mapping[ClassKey, float]

    @property
    def partial(self) -> float:
        """Get the unweighted gain of the angle."""
        return math.fsum(self.gains.values())


class CountComparison(NamedTuple):
    """Counted against enumerated sequences of one class.

    Attributes:
        j: Layers between transmitter and receiver.
        j_bound: Boundary distance, None when boundary-less.
        theta: Launch angle in radians.
        n: Refraction count.
        m: Reflection count.
        counted: Effective count of the counting module.
        enumerated: Received sequences found by enumeration.
    """

    j: int
    j_bound: int | None
    theta: float
    n: int
    m: int
    counted: int
    enumerated: int

    @property
    def agrees(self) -> bool:
        """Get whether both counts are equal."""
        return self.counted == self.enumerated


def _peak_histogram(
    sample: AngleSample,
    geom: Geometry,
    n: int,
    m: int,
) -> Counter[int]:
    """Tally the received sequences of a class by their peak depth."""
    j = geom.j
    ups_total = (n - j) // 2
    downs_total = n - ups_total
    histogram: Counter[int] = Counter()

    def visit(
        ups: int,
        downs: int,
        refl: int,
        depth: int,
        peak: int,
        *,
        arrived: bool,
    ) -> None:
        if not (ups or downs or refl):
            histogram[peak] += 1
            return
        taken = (ups_total - ups) + (downs_total - downs)
        if refl:
            visit(ups, downs, refl - 1, depth, peak, arrived=arrived)
        if arrived:
            return
        at = sample.landing(taken + 1, m - refl)
        if downs:
            lower = depth - 1
            visit(
                ups,
                downs - 1,
                refl,
                lower,
                peak,
                arrived=lower == -j and geom.receives(at),
            )
        if ups:
            upper = depth + 1
            visit(
                ups - 1,
                downs,
                refl,
                upper,
                max(peak, upper),
                arrived=upper == -j and geom.receives(at),
            )

    visit(ups_total, downs_total, m, 0, 0, arrived=False)
    return histogram


def _received(histogram: Counter[int], j_bound: int | None) -> int:
    if j_bound is None:
        return sum(histogram.values())
    return sum(c for peak, c in histogram.items() if peak <= j_bound)


def sequence_gain(n: int, m: int, j: int, table: StepGainTable) -> float:
    """Multiply the step factors of one sequence of a class.

    Args:
        n: Refraction count.
        m: Reflection count.
        j: Layers between transmitter and receiver.
        table: Step gain factors of the stack.

    Returns:
        The gain of a single sequence.
    """
    factors = [table.g_prefix]
    factors += [table.g_layer] * (j - 1)
    factors += [table.g_pair] * ((n - j) // 2)
    factors += [table.g_refl] * m
    return math.prod(factors)


def _classes_within(
    sample: AngleSample,
    geom: Geometry,
    caps: OracleCaps,
) -> list[ClassKey]:
    """List the admissible classes within caps in (n, m) order."""
    tra = refraction_range(sample, geom)
    keys = []
    for n in range(tra.lo, min(tra.hi, caps.n_max) + 1, 2):
        ref = reflection_range(sample, n, geom)
        keys.extend((n, m) for m in range(ref.lo, min(ref.hi, caps.m_max) + 1))
    return keys


def enumerate_paths(
    theta: float,
    geom: Geometry,
    stack: StackSpec,
    caps: OracleCaps,
    *,
    bounded: bool,
) -> OracleReport:
    """Enumerate every sequence of the admissible classes within caps.

    Args:
        theta: Launch angle in radians.
        geom: The geometry.
        stack: The material stack.
        caps: Largest class sizes to enumerate.
        bounded: Whether to drop sequences rising above
            ``geom.j_bound``.

    Returns:
        The per-class counts and gains at the angle.

    Raises:
        CapExceededError: If the caps exceed the enumeration guard.
    """
    caps.check()
    j_bound = geom.j_bound if bounded else None
    sample = angle_sample(theta, stack)
    table = step_gain_table(stack)
    counts = {}
    gains = {}
    for n, m in _classes_within(sample, geom, caps):
        count = _received(_peak_histogram(sample, geom, n, m), j_bound)
        counts[n, m] = count
        gains[n, m] = count * sequence_gain(n, m, geom.j, table)
    return OracleReport(
        theta=theta,
        j_bound=j_bound,
        caps=caps,
        counts=MappingProxyType(counts),
        gains=MappingProxyType(gains),
    )


def oracle_total_gain(
    geom: Geometry,
    stack: StackSpec,
    caps: OracleCaps,
    *,
    bounded: bool,
) -> ChannelResult:
    """Integrate the channel gain from enumerated counts.

    The integration rule and summation order are those of
    `winoc.model.total_gain`.

    Args:
        geom: The geometry.
        stack: The material stack.
        caps: Largest class sizes to enumerate.
        bounded: Whether to apply ``geom.j_bound``.

    Returns:
        The channel result of the "oracle" model.

    Raises:
        CapExceededError: If the caps exceed the enumeration guard.
    """
    caps.check()
    theta_bound = resolve_theta_bound(geom, stack)
    table = step_gain_table(stack)
    outcomes = [
        weigh_angle(
            theta,
            geom,
            table,
            dict(
                enumerate_paths(
                    theta,
                    geom,
                    stack,
                    caps,
                    bounded=bounded,
                ).counts,
            ),
            bounded=bounded,
        )
        for theta in angle_grid(theta_bound, geom.r)
    ]
    return assemble_result(
        "oracle",
        geom,
        theta_bound,
        outcomes,
        per_class=False,
    )


def _sort_key(row: CountComparison) -> tuple[int, float, int, int, float]:
    bound = math.inf if row.j_bound is None else row.j_bound
    return (row.j, row.theta, row.n, row.m, bound)


def check_counts(
    geom: Geometry,
    stack: StackSpec,
    caps: OracleCaps,
    *,
    js: Iterable[int],
    j_bounds: Iterable[int | None],
    samples: int,
) -> list[CountComparison]:
    """Compare counting-module counts with enumeration.

    For every ``J`` in `js`, ``samples`` angles of the right-endpoint
    grid are checked against every boundary distance in `j_bounds`
    (None for the boundary-less model).

    Args:
        geom: Base geometry; its ``J`` and ``J_bound`` are replaced.
        stack: The material stack.
        caps: Largest class sizes to enumerate.
        js: Receiver distances to check.
        j_bounds: Boundary distances to check.
        samples: Number of angle samples per ``J``.

    Returns:
        Every comparison, ordered by ``(J, theta, n, m, J_bound)``.

    Raises:
        CapExceededError: If the caps exceed the enumeration guard.
        OracleMismatchError: On the smallest disagreeing class.
    """
    caps.check()
    logger = logging.getLogger(__name__)
    bounds = list(j_bounds)
    rows = []
    for j in js:
        base = replace(geom, j=j, j_bound=None, r=samples)
        for theta in angle_grid(resolve_theta_bound(base, stack), samples):
            sample = angle_sample(theta, stack)
            keys = _classes_within(sample, base, caps)
            free = class_counts(sample, base, keys, bounded=False)
            histograms = {
                key: _peak_histogram(sample, base, *key) for key in keys
            }
            for j_bound in bounds:
                counted = (
                    free
                    if j_bound is None
                    else class_counts(
                        sample,
                        replace(base, j_bound=j_bound),
                        keys,
                        bounded=True,
                    )
                )
                rows.extend(
                    CountComparison(
                        j=j,
                        j_bound=j_bound,
                        theta=theta,
                        n=n,
                        m=m,
                        counted=counted[n, m].effective,
                        enumerated=_received(histograms[n, m], j_bound),
                    )
                    for n, m in keys
                )
        logger.info("checked J=%d over %d angles", j, samples)
    rows.sort(key=_sort_key)
    if failed := [row for row in rows if not row.agrees]:
        first = failed[0]
        logger.error(
            "%d of %d comparisons disagree; first counted %d, "
            "enumerated %d",
            len(failed),
            len(rows),
            first.counted,
            first.enumerated,
        )
        raise OracleMismatchError(first.theta, first.n, first.m, first.j_bound)
    return rows
