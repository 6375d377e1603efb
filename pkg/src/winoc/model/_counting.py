"""Exact path-class cardinalities.

A path is a sequence of refraction steps (``+1`` one layer up, ``-1``
one layer down) and reflection steps (``0``). A class ``(n, m)`` holds
every sequence with ``n`` refractions summing to ``-J`` and ``m``
reflections. Two kinds of sequences are not received:

- redundant ones, which arrive at the receiver layer on the antenna by
  a refraction and then refract away again (the antenna already
  absorbed the energy);
- boundary-crossing ones, whose depth rises above ``J_bound`` (the
  ray leaves the chip).

All counts are Python integers; no floating point is involved except
for deciding which positions lie on the antenna.
"""

from __future__ import annotations

__all__ = (
    "ClassCount",
    "boundary_excluded_count",
    "class_count",
    "class_counts",
    "effective_count",
    "redundant_count",
    "refraction_combinations",
    "survivor_table",
)

import logging
from math import comb
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

if TYPE_CHECKING:
    from collections.abc import Iterable

    from winoc._typing import ClassKey
    from winoc.model._geometry import AngleSample, Geometry, PathClass


class ClassCount(NamedTuple):
    """Path counts of one class.

    Attributes:
        raw: All sequences of the class.
        redundant: Sequences absorbed before their last refraction.
        boundary_excluded: Sequences crossing the boundary that are
            not already redundant; 0 for the boundary-less model.
        effective: ``raw - redundant - boundary_excluded``.
    """

    raw: int
    redundant: int
    boundary_excluded: int
    effective: int


def refraction_combinations(n: int, j: int) -> int:
    """Count the refraction orders of ``n`` steps summing to ``-J``.

    Args:
        n: Number of refraction steps.
        j: Layers between transmitter and receiver.

    Returns:
        ``C(n, (n - J) / 2)`` when ``n >= J`` with matching parity,
        otherwise 0.

    Examples:
        >>> refraction_combinations(3, 1)
        3
        >>> refraction_combinations(4, 1)
        0
    """
    if n < j or (n - j) % 2:
        return 0
    return comb(n, (n - j) // 2)


def class_count(n: int, m: int, j: int) -> int:
    """Count all sequences of a class, received or not.

    Args:
        n: Number of refraction steps.
        m: Number of reflection steps.
        j: Layers between transmitter and receiver.

    Returns:
        ``refraction_combinations(n, J) * C(n + m, m)``.

    Examples:
        >>> class_count(3, 1, 1)
        12
    """
    return refraction_combinations(n, j) * comb(n + m, m)


def survivor_table(
    sample: AngleSample,
    geom: Geometry,
    n_max: int,
    m_max: int,
    j_bound: int | None = None,
) -> np.ndarray:
    """Count received sequences of every class up to given sizes.

    The dynamic program walks the lattice of (refractions taken,
    reflections taken, depth). Counts that arrive at depth ``-J`` on
    the antenna by a refraction are held in a separate "arrived"
    register: they may still reflect, but any further refraction is
    dropped. With a boundary, depths above `j_bound` are never
    represented.

    Args:
        sample: The angle sample deciding antenna positions.
        geom: The geometry.
        n_max: Largest refraction count of interest.
        m_max: Largest reflection count of interest.
        j_bound: Boundary distance, or None for no boundary.

    Returns:
        An object array of shape ``(n_max + 1, m_max + 1)`` holding, at
        ``[n, m]``, the number of received sequences of class
        ``(n, m)`` (whether ``(n, m)`` itself lands on the antenna is
        not checked).
    """
    j = geom.j
    lo = -max(n_max, j)
    hi = n_max if j_bound is None else min(n_max, j_bound)
    width = hi - lo + 1
    target = -j - lo
    origin = -lo
    table = np.zeros((n_max + 1, m_max + 1), dtype=object)
    if n_max < 0 or m_max < 0:
        return table

    prev_free: list[np.ndarray] = []
    for k in range(n_max + 1):
        free: list[np.ndarray] = []
        arrived = [0] * (m_max + 1)
        for i in range(m_max + 1):
            vec = np.zeros(width, dtype=object)
            held = 0
            if k == 0 and i == 0:
                vec[origin] = 1
            if i > 0:
                vec += free[i - 1]
                held += arrived[i - 1]
            if k > 0:
                step = np.zeros(width, dtype=object)
                src = prev_free[i]
                step[1:] += src[:-1]
                step[:-1] += src[1:]
                if geom.receives(sample.landing(k, i)):
                    held += step[target]
                    step[target] = 0
                vec += step
            table[k, i] = vec[target] + held
            free.append(vec)
            arrived[i] = held
        prev_free = free
    return table


def _crossing_walks(n: int, j: int, j_bound: int) -> int:
    """Count ±1 walks of ``n`` steps to ``-J`` that rise above J_bound.

    Reflecting the walk at its first visit of ``J_bound + 1`` maps it
    onto the walks ending at ``2 J_bound + 2 + J``.
    """
    if n < j or (n - j) % 2:
        return 0
    ups = (n - j) // 2 - j_bound - 1
    return comb(n, ups) if ups >= 0 else 0


def boundary_excluded_count(cls: PathClass, j: int, j_bound: int) -> int:
    """Count sequences of a class whose depth ever exceeds J_bound.

    Absorption is ignored here; `effective_count` combines both
    exclusions without counting a sequence twice.

    Args:
        cls: The path class.
        j: Layers between transmitter and receiver.
        j_bound: Layers between transmitter and the boundary.

    Returns:
        The number of boundary-crossing sequences.

    Examples:
        >>> from winoc.model._geometry import PathClass
        >>> boundary_excluded_count(PathClass(0.1, 3, 0), 1, 0)
        1
    """
    return _crossing_walks(cls.n, j, j_bound) * comb(cls.n + cls.m, cls.m)


def class_counts(
    sample: AngleSample,
    geom: Geometry,
    classes: Iterable[ClassKey],
    *,
    bounded: bool,
) -> dict[ClassKey, ClassCount]:
    """Count every given class at one angle.

    Args:
        sample: The angle sample.
        geom: The geometry.
        classes: ``(n, m)`` pairs to count.
        bounded: Whether to apply the boundary of ``geom.j_bound``.

    Returns:
        The counts keyed by ``(n, m)`` in the order of `classes`.
    """
    keys = list(classes)
    if not keys:
        return {}
    logger = logging.getLogger(__name__)
    n_max = max(n for n, _ in keys)
    m_max = max(m for _, m in keys)
    free = survivor_table(sample, geom, n_max, m_max)
    kept = (
        survivor_table(sample, geom, n_max, m_max, geom.j_bound)
        if bounded
        else free
    )
    logger.debug(
        "counted %d classes at theta=%r (n <= %d, m <= %d)",
        len(keys),
        sample.theta,
        n_max,
        m_max,
    )
    result = {}
    for n, m in keys:
        raw = class_count(n, m, geom.j)
        received = int(free[n, m])
        effective = int(kept[n, m])
        result[n, m] = ClassCount(
            raw=raw,
            redundant=raw - received,
            boundary_excluded=received - effective,
            effective=effective,
        )
    return result


def redundant_count(
    cls: PathClass,
    sample: AngleSample,
    geom: Geometry,
) -> int:
    """Count sequences of a class absorbed before their end.

    Args:
        cls: The path class.
        sample: The angle sample of ``cls.theta``.
        geom: The geometry.

    Returns:
        The number of redundant sequences; 0 when ``n = J``.
    """
    counts = class_counts(sample, geom, [(cls.n, cls.m)], bounded=False)
    return counts[cls.n, cls.m].redundant


def effective_count(
    cls: PathClass,
    sample: AngleSample,
    geom: Geometry,
    *,
    bounded: bool,
) -> ClassCount:
    """Count the received sequences of one class.

    Args:
        cls: The path class.
        sample: The angle sample of ``cls.theta``.
        geom: The geometry.
        bounded: Whether to apply the boundary of ``geom.j_bound``.

    Returns:
        The full count breakdown of the class.
    """
    return class_counts(sample, geom, [(cls.n, cls.m)], bounded=bounded)[
        cls.n, cls.m
    ]
