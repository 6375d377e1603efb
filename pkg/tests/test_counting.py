from __future__ import annotations

import itertools
from collections import Counter
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from winoc.model import (
    AngleSample,
    Geometry,
    PathClass,
    StackSpec,
    admissible_classes,
    angle_sample,
    boundary_excluded_count,
    class_count,
    class_counts,
    effective_count,
    redundant_count,
    refraction_combinations,
    survivor_table,
)

# unit displacements keep every landing position exact
UNIT = AngleSample(theta=0.1, x_t=1.0, x_r=0.5, launch_offset=0.25)


def sequences(n: int, m: int, j: int) -> itertools.chain[tuple[int, ...]]:
    """Generate every step sequence of a class."""
    ups = (n - j) // 2

    def build(up_at: tuple[int, ...], refl_at: tuple[int, ...]) -> tuple:
        signs = iter(1 if k in up_at else -1 for k in range(n))
        return tuple(
            0 if pos in refl_at else next(signs) for pos in range(n + m)
        )

    return itertools.chain.from_iterable(
        (build(up_at, refl_at) for refl_at in itertools.combinations(
            range(n + m),
            m,
        ))
        for up_at in itertools.combinations(range(n), ups)
    )


def walk(
    steps: tuple[int, ...],
    sample: AngleSample,
    geom: Geometry,
) -> tuple[bool, int]:
    """Return whether a sequence is received, and its peak depth."""
    depth = peak = refractions = reflections = 0
    arrived = False
    for step in steps:
        if step == 0:
            reflections += 1
            continue
        if arrived:
            return False, peak
        depth += step
        refractions += 1
        peak = max(peak, depth)
        arrived = depth == -geom.j and geom.receives(
            sample.landing(refractions, reflections),
        )
    return True, peak


def brute_force(
    n: int,
    m: int,
    sample: AngleSample,
    geom: Geometry,
) -> tuple[int, Counter[int]]:
    raw = 0
    peaks: Counter[int] = Counter()
    for steps in sequences(n, m, geom.j):
        raw += 1
        received, peak = walk(steps, sample, geom)
        if received:
            peaks[peak] += 1
    return raw, peaks


def test_refraction_combinations() -> None:
    assert refraction_combinations(3, 1) == 3
    assert refraction_combinations(5, 5) == 1
    assert refraction_combinations(4, 1) == 0
    assert refraction_combinations(1, 3) == 0


def test_class_count_examples() -> None:
    assert class_count(1, 2, 1) == 3
    assert class_count(2, 0, 2) == 1
    assert class_count(3, 1, 1) == 12


def test_class_count_matches_interleavings() -> None:
    tally: Counter[tuple[int, int, int]] = Counter()
    for length in range(13):
        for steps in itertools.product((-1, 0, 1), repeat=length):
            m = steps.count(0)
            tally[length - m, m, sum(steps)] += 1
    for j in range(1, 4):
        for n in range(1, 13):
            for m in range(13 - n):
                assert class_count(n, m, j) == tally[n, m, -j], (n, m, j)


def test_absorbed_paths_with_full_window() -> None:
    geom = Geometry(j=1, d=0.0, length=100.0)
    count = class_counts(UNIT, geom, [(3, 0)], bounded=False)[3, 0]
    assert count.raw == 3
    assert count.redundant == 2
    assert count.effective == 1
    bounded = Geometry(j=1, d=0.0, length=100.0, j_bound=0)
    count = class_counts(UNIT, bounded, [(3, 0)], bounded=True)[3, 0]
    assert count.redundant == 2
    assert count.boundary_excluded == 1
    assert count.effective == 0


def test_no_absorption_outside_window() -> None:
    # only the final landing at 4.5 lies on the antenna
    geom = Geometry(j=1, d=4.0, length=1.0)
    cls = PathClass(UNIT.theta, 3, 0)
    assert redundant_count(cls, UNIT, geom) == 0
    assert effective_count(cls, UNIT, geom, bounded=False).effective == 3


def test_prefix_position_uses_class_landing() -> None:
    # first refraction lands at 1.0 + 0.75 + 0.25 = 2.0, not at 1.25
    geom = Geometry(j=1, d=1.9, length=0.2)
    assert geom.receives(UNIT.landing(1, 0))
    assert not geom.receives(UNIT.x_t + UNIT.launch_offset)
    count = class_counts(UNIT, geom, [(3, 0)], bounded=False)[3, 0]
    assert count.redundant == 2
    assert count.effective == 1


def test_direct_path() -> None:
    geom = Geometry(j=1, d=0.0, length=100.0, j_bound=0)
    cls = PathClass(UNIT.theta, 1, 0)
    for bounded in (False, True):
        assert effective_count(cls, UNIT, geom, bounded=bounded) == (
            1,
            0,
            0,
            1,
        )


def test_least_refracted_classes_have_no_redundancy(
    geometry: Geometry,
    stack: StackSpec,
) -> None:
    sample = angle_sample(0.3, stack)
    keys = [(c.n, c.m) for c in admissible_classes(sample, geometry)]
    counts = class_counts(sample, geometry, keys, bounded=False)
    for (n, _), count in counts.items():
        if n == geometry.j:
            assert count.redundant == 0
            assert count.effective == count.raw


def test_boundary_excluded_examples() -> None:
    assert boundary_excluded_count(PathClass(0.1, 3, 0), 1, 0) == 1
    assert boundary_excluded_count(PathClass(0.1, 5, 0), 1, 1) == 1
    assert boundary_excluded_count(PathClass(0.1, 5, 2), 1, 1) == comb(7, 2)
    assert boundary_excluded_count(PathClass(0.1, 5, 3), 1, 5) == 0


@given(
    j=st.integers(min_value=1, max_value=3),
    n=st.integers(min_value=1, max_value=9),
    m=st.integers(min_value=0, max_value=3),
    j_bound=st.integers(min_value=0, max_value=4),
)
def test_boundary_excluded_matches_enumeration(
    j: int,
    n: int,
    m: int,
    j_bound: int,
) -> None:
    if n < j or (n - j) % 2:
        return
    crossing = 0
    for steps in sequences(n, m, j):
        depth = peak = 0
        for step in steps:
            depth += step
            peak = max(peak, depth)
        crossing += peak > j_bound
    assert boundary_excluded_count(PathClass(0.1, n, m), j, j_bound) == (
        crossing
    )


@settings(max_examples=50, deadline=None)
@given(
    j=st.integers(min_value=1, max_value=3),
    d=st.floats(min_value=0.0, max_value=8.0),
    length=st.floats(min_value=0.25, max_value=6.0),
    j_bound=st.integers(min_value=0, max_value=3),
)
def test_counts_match_enumeration(
    j: int,
    d: float,
    length: float,
    j_bound: int,
) -> None:
    geom = Geometry(j=j, d=d, length=length, j_bound=j_bound)
    keys = [(n, m) for n in range(j, 8, 2) for m in range(4)]
    free = class_counts(UNIT, geom, keys, bounded=False)
    kept = class_counts(UNIT, geom, keys, bounded=True)
    for n, m in keys:
        raw, peaks = brute_force(n, m, UNIT, geom)
        received = sum(peaks.values())
        effective = sum(c for peak, c in peaks.items() if peak <= j_bound)
        assert free[n, m].raw == raw
        assert free[n, m].effective == received
        assert free[n, m].boundary_excluded == 0
        assert kept[n, m].effective == effective
        assert kept[n, m].redundant == raw - received
        assert kept[n, m].boundary_excluded == received - effective


def test_boundary_exclusion_shrinks_with_distance() -> None:
    keys = [(n, m) for n in range(1, 10, 2) for m in range(3)]
    previous = None
    for j_bound in range(6):
        geom = Geometry(j=1, d=0.0, length=100.0, j_bound=j_bound)
        counts = class_counts(UNIT, geom, keys, bounded=True)
        free = class_counts(UNIT, geom, keys, bounded=False)
        excluded = [counts[key].boundary_excluded for key in keys]
        for key in keys:
            assert counts[key].effective <= free[key].effective
        if previous is not None:
            assert all(
                b <= a for a, b in zip(previous, excluded, strict=True)
            )
        previous = excluded


def test_survivor_table_shape() -> None:
    geom = Geometry(j=2, d=0.0, length=100.0)
    table = survivor_table(UNIT, geom, 6, 3)
    assert table.shape == (7, 4)
    assert table[2, 0] == 1
    assert table[1, 0] == 0
    assert table[2, 2] == comb(4, 2)


def test_counts_are_python_integers() -> None:
    geom = Geometry(j=1, d=0.0, length=100.0)
    count = class_counts(UNIT, geom, [(9, 4)], bounded=False)[9, 4]
    assert all(type(value) is int for value in count)
