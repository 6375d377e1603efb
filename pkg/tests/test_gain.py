from __future__ import annotations

import math
from dataclasses import replace

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from winoc._errors import (
    ComputationError,
    DegenerateRatioError,
    ValidationError,
)
from winoc.cli import RunConfig
from winoc.model import (
    ApproxConfig,
    Geometry,
    StackSpec,
    admissible_classes,
    angle_sample,
    approx_total_gain,
    arrival_time,
    class_counts,
    class_gain,
    coefficient_set,
    dropped_gain,
    gain_ratio,
    resolve_theta_bound,
    step_gain_table,
    theta_threshold,
    to_db,
    total_gain,
)


def test_class_gain_of_direct_path(stack: StackSpec) -> None:
    table = step_gain_table(stack)
    assert class_gain(1, 1, 0, 1, table) == pytest.approx(
        table.g_prefix,
        rel=1e-12,
    )
    assert class_gain(0, 1, 0, 1, table) == 0


def test_class_gain_factor_product(stack: StackSpec) -> None:
    table = step_gain_table(stack)
    expected = 3 * table.g_prefix * table.g_pair * table.g_refl**2
    assert class_gain(3, 3, 2, 1, table) == pytest.approx(expected, rel=1e-12)
    expected = 5 * table.g_prefix * table.g_layer**2 * table.g_pair
    assert class_gain(5, 5, 0, 3, table) == pytest.approx(expected, rel=1e-12)


def test_lossless_class_gain() -> None:
    stack = StackSpec(1e-6, 1e-6, 5e-4, 2.0, 1.96, 3.42, 0, 0, 0)
    (t1, t2, t3, t4, _, _), (_, _, r3, r4, _, r6) = coefficient_set(stack)
    expected = t1**2 * t2 * t3 * t4 * r4 * r3 * r6
    assert class_gain(
        1,
        1,
        1,
        1,
        step_gain_table(stack),
    ) == pytest.approx(expected, rel=1e-12)


def test_to_db() -> None:
    assert to_db(1.0) == 0
    assert to_db(0.0) == -math.inf


def _independent_ratio(stack: StackSpec) -> float:
    def power(a: float, b: float) -> float:
        return ((a - b) / (a + b)) ** 2

    t1 = power(stack.n3, stack.n1)
    t2 = power(stack.n2, stack.n1)
    t3 = power(stack.n3, stack.n2)
    loss = math.exp(
        2 * stack.lam3 * stack.l3
        - stack.lam2 * stack.l2
        - stack.lam1 * stack.l1,
    )
    return t1 * t2 * t3 / ((1 - t3) * (1 - t3)) * loss


@given(
    n=st.tuples(
        st.floats(min_value=1.0, max_value=3.0),
        st.floats(min_value=1.0, max_value=3.0),
        st.floats(min_value=3.0, max_value=4.0),
    ),
    lam=st.tuples(*(st.floats(min_value=0.0, max_value=300.0),) * 3),
)
def test_gain_ratio_matches_closed_form(
    n: tuple[float, float, float],
    lam: tuple[float, float, float],
) -> None:
    stack = StackSpec(1e-6, 1e-6, 5e-4, *n, *lam)
    assert gain_ratio(stack) == pytest.approx(
        _independent_ratio(stack),
        rel=1e-12,
        abs=1e-300,
    )


def test_gain_ratio_edges(stack: StackSpec) -> None:
    assert gain_ratio(replace(stack, n1=3.42, n2=3.42)) == 0
    assert 1 / gain_ratio(stack) >= 1e6
    with pytest.raises(DegenerateRatioError):
        gain_ratio(stack, coefficient_set(stack)._replace(
            t=(0.1, 0.1, 1.0, 0.1, 0.1, 1.0),
        ))


def test_gain_ratio_overflow_is_a_computation_error(
    stack: StackSpec,
) -> None:
    lossy = replace(stack, lam3=1e7)
    with pytest.raises(ComputationError, match="overflows"):
        gain_ratio(lossy)


def test_arrival_time(stack: StackSpec) -> None:
    expected = 9 * stack.l3 * stack.n3 / (3e8 * math.tan(0.4))
    assert arrival_time(0.4, 2, 3, stack, 3e8) == pytest.approx(expected)


def test_equal_indices_give_zero_gain(geometry: Geometry) -> None:
    stack = StackSpec(1e-6, 1e-6, 5e-4, 2.0, 2.0, 2.0, 100, 100, 200)
    result = total_gain(geometry, stack)
    assert result.h_linear == 0
    assert result.h_db == -math.inf


def test_single_angle_unrolled(geometry: Geometry, stack: StackSpec) -> None:
    geom = replace(geometry, r=1, g_t=2.0, g_r=0.5)
    result = total_gain(geom, stack, bounded=True, per_class=True)
    theta = resolve_theta_bound(geom, stack)
    sample = angle_sample(theta, stack)
    keys = [(c.n, c.m) for c in admissible_classes(sample, geom)]
    counts = class_counts(sample, geom, keys, bounded=True)
    table = step_gain_table(stack)
    expected = theta * math.fsum(
        class_gain(counts[key].effective, *key, geom.j, table)
        for key in keys
    )
    assert result.h_linear == pytest.approx(expected, rel=1e-12)
    assert len(result.per_angle) == 1
    assert result.per_class is not None
    assert len(result.per_class) == len(keys)


def test_result_invariants(geometry: Geometry, stack: StackSpec) -> None:
    result = total_gain(geometry, stack, per_class=True)
    assert result.model == "boundary-constrained"
    assert result.h_linear > 0
    assert math.isfinite(result.h_db)
    assert result.h_db < 0
    assert result.h_linear == math.fsum(a.h_theta for a in result.per_angle)
    thetas = [a.theta for a in result.per_angle]
    assert thetas == sorted(thetas)
    assert result.loops_executed > 0


def test_boundary_less_needs_no_bound(
    geometry: Geometry,
    stack: StackSpec,
) -> None:
    geom = replace(geometry, j_bound=None)
    assert total_gain(geom, stack).model == "boundary-less"
    with pytest.raises(ValidationError):
        total_gain(geom, stack, bounded=True)


def test_bounded_gain_approaches_boundary_less(
    geometry: Geometry,
    stack: StackSpec,
) -> None:
    h_bl = total_gain(geometry, stack, bounded=False).h_linear
    previous = 0.0
    for j_bound in range(6):
        geom = replace(geometry, j_bound=j_bound)
        h_bc = total_gain(geom, stack, bounded=True).h_linear
        assert previous <= h_bc <= h_bl
        previous = h_bc
    huge = replace(geometry, j_bound=10_000)
    assert total_gain(huge, stack, bounded=True).h_linear == h_bl


def test_more_layers_lower_gain(geometry: Geometry, stack: StackSpec) -> None:
    h2 = total_gain(replace(geometry, j=2), stack).h_linear
    h3 = total_gain(replace(geometry, j=3), stack).h_linear
    assert h3 < h2


def test_parallel_evaluation_is_bit_identical(
    geometry: Geometry,
    stack: StackSpec,
) -> None:
    geom = replace(geometry, r=4)
    serial = total_gain(geom, stack, per_class=True, jobs=1)
    parallel = total_gain(geom, stack, per_class=True, jobs=2)
    assert serial == parallel


def test_theta_threshold_limits(reference: RunConfig) -> None:
    geom, stack = reference.geometry, reference.stack
    slow = theta_threshold(geom, stack, ApproxConfig(t_c=1e3))
    assert 0 <= slow.theta_t < 1e-6
    fast = theta_threshold(geom, stack, ApproxConfig(t_c=1e-30))
    assert fast.theta_t == pytest.approx(fast.theta_bound, rel=1e-9)
    assert fast.theta_t <= fast.theta_bound
    assert len(fast.t_theta) == geom.r
    at_bound = arrival_time(
        fast.theta_bound,
        fast.n_bound,
        fast.m_bound,
        stack,
        ApproxConfig(t_c=1.0).v,
    )
    assert fast.t_min == min(at_bound, *(t for _, t in fast.t_theta))


@pytest.mark.parametrize("theta_bound", [None, 0.2, 0.5])
def test_arrival_times_never_precede_t_min(
    reference: RunConfig,
    theta_bound: float | None,
) -> None:
    geom = replace(reference.geometry, theta_bound=theta_bound)
    timing = theta_threshold(geom, reference.stack, ApproxConfig(t_c=1e-9))
    assert timing.t_theta
    assert all(t >= timing.t_min for _, t in timing.t_theta)
    assert 0 <= timing.theta_t <= timing.theta_bound


def test_theta_threshold_direct(reference: RunConfig) -> None:
    geom, stack = reference.geometry, reference.stack
    approx = ApproxConfig(t_c=1e-9)
    timing = theta_threshold(geom, stack, approx, reference_class=(2, 1))
    reach = stack.n3 * 5 * stack.l3
    tan_bound = math.tan(timing.theta_bound)
    expected = math.atan(
        reach * tan_bound / (reach + approx.v * 1e-9 * tan_bound),
    )
    assert timing.theta_t == pytest.approx(expected, rel=1e-12)
    assert (timing.n_bound, timing.m_bound) == (2, 1)


def test_approx_config_validation() -> None:
    with pytest.raises(ValidationError):
        ApproxConfig(t_c=0.0)
    with pytest.raises(ValidationError):
        ApproxConfig(t_c=1e-9, v=-1.0)


def test_approximation_without_rules_is_exact(
    reference: RunConfig,
) -> None:
    approx = ApproxConfig(
        t_c=1e-9,
        refraction_truncation=False,
        coherence_cutoff=False,
    )
    full = total_gain(reference.geometry, reference.stack)
    fake = approx_total_gain(reference.geometry, reference.stack, approx)
    assert fake.h_linear == full.h_linear
    assert fake.model == "approximate"


def test_dropped_gain_explains_the_gap(reference: RunConfig) -> None:
    assert reference.approx is not None
    geom = reference.geometry
    full = total_gain(geom, reference.stack, per_class=True)
    approx = approx_total_gain(
        geom,
        reference.stack,
        reference.approx,
        per_class=True,
    )
    assert approx.h_linear <= full.h_linear
    assert approx.loops_executed < full.loops_executed
    assert full.h_linear - approx.h_linear == pytest.approx(
        dropped_gain(full, approx),
        abs=1e-12 * full.h_linear,
    )
    with pytest.raises(ValueError, match="per-class"):
        dropped_gain(full, approx._replace(per_class=None))


@pytest.mark.slow
@settings(
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
@given(
    j=st.integers(min_value=1, max_value=3),
    d=st.floats(min_value=0.0, max_value=5e-6),
    length=st.floats(min_value=1e-6, max_value=5e-6),
    r=st.integers(min_value=1, max_value=4),
    t_c=st.floats(min_value=1e-12, max_value=1e-6),
)
def test_approximation_is_a_lower_bound(
    stack: StackSpec,
    j: int,
    d: float,
    length: float,
    r: int,
    t_c: float,
) -> None:
    geom = Geometry(j=j, d=d, length=length, r=r, j_bound=1)
    full = total_gain(geom, stack)
    approx = approx_total_gain(geom, stack, ApproxConfig(t_c=t_c))
    assert approx.h_linear <= full.h_linear


@pytest.mark.slow
def test_gain_per_layer(reference: RunConfig) -> None:
    h_db = [
        total_gain(replace(reference.geometry, j=j), reference.stack).h_db
        for j in range(2, 11)
    ]
    for a, b in zip(h_db, h_db[1:], strict=False):
        assert -70 <= b - a <= -50


@pytest.mark.slow
@pytest.mark.parametrize("j", [2, 4, 8])
def test_approximation_error(reference: RunConfig, j: int) -> None:
    assert reference.approx is not None
    geom = replace(reference.geometry, j=j)
    full = total_gain(geom, reference.stack)
    approx = approx_total_gain(geom, reference.stack, reference.approx)
    assert (full.h_linear - approx.h_linear) / full.h_linear < 1e-3
    assert full.h_db - approx.h_db < 1e-3


@pytest.mark.slow
def test_models_agree_on_deep_stacks(reference: RunConfig) -> None:
    differences = []
    for j in range(2, 21):
        geom = replace(reference.geometry, j=j)
        h_bl = total_gain(geom, reference.stack, bounded=False).h_linear
        h_bc = total_gain(geom, reference.stack, bounded=True).h_linear
        differences.append(h_bl - h_bc)
        if j == 20:
            assert (h_bl - h_bc) / h_bl < 1e-5
    assert all(
        b <= a for a, b in zip(differences, differences[1:], strict=False)
    )
