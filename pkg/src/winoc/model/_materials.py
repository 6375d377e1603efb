"""Material stacks and their interface coefficients.

One NoC layer is a stack of three materials (top to bottom: the
nitride, the oxide and the silicon substrate). This module holds their
constants and derives the interface coefficients and the per-step gain
factors every channel computation is built from.
"""

from __future__ import annotations

__all__ = (
    "CoefficientSet",
    "StackSpec",
    "StepGainTable",
    "coefficient_set",
    "step_gain_table",
)

import math
from dataclasses import dataclass, fields
from typing import NamedTuple

from winoc._errors import ValidationError


def _log(x: float) -> float:
    """Return the natural logarithm, mapping zero to ``-inf``."""
    return math.log(x) if x > 0 else -math.inf


@dataclass(frozen=True, slots=True)
class StackSpec:
    """Constants of one NoC layer's three material stacks.

    Attributes:
        l1: Thickness of material 1 in meters.
        l2: Thickness of material 2 in meters.
        l3: Thickness of material 3 (the substrate) in meters.
        n1: Refractive index of material 1.
        n2: Refractive index of material 2.
        n3: Refractive index of material 3.
        lam1: Attenuation coefficient of material 1 in 1/m.
        lam2: Attenuation coefficient of material 2 in 1/m.
        lam3: Attenuation coefficient of material 3 in 1/m.
        frequency: Carrier frequency in Hz, kept as metadata.
    """

    l1: float
    l2: float
    l3: float
    n1: float
    n2: float
    n3: float
    lam1: float
    lam2: float
    lam3: float
    frequency: float = 1e12

    def __post_init__(self) -> None:
        """Validate the invariants of a stack.

        Raises:
            ValidationError: If a thickness is not positive, an index is
                below 1, an attenuation coefficient is negative, or the
                substrate index is below one of the other two.
        """
        for f in fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value):
                raise ValidationError(f"stack.{f.name}", "must be finite")
        for name in ("l1", "l2", "l3"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"stack.{name}", "> 0")
        for name in ("n1", "n2", "n3"):
            if getattr(self, name) < 1:
                raise ValidationError(f"stack.{name}", ">= 1")
        for name in ("lam1", "lam2", "lam3"):
            if getattr(self, name) < 0:
                raise ValidationError(f"stack.{name}", ">= 0")
        if self.n3 < self.n1:
            raise ValidationError("stack.n3", ">= n1")
        if self.n3 < self.n2:
            raise ValidationError("stack.n3", ">= n2")

    @property
    def layer_exponent(self) -> float:
        """Get the attenuation exponent of one full layer crossing.

        Returns:
            ``l1*lam1 + l2*lam2 + l3*lam3``.
        """
        return self.l1 * self.lam1 + self.l2 * self.lam2 + self.l3 * self.lam3


class CoefficientSet(NamedTuple):
    """Interface transmission and reflection coefficients.

    Attributes:
        t: ``T1..T6`` in order.
        r: ``R1..R6`` in order, ``R[i] = 1 - T[i]``.
    """

    t: tuple[float, float, float, float, float, float]
    r: tuple[float, float, float, float, float, float]


class StepGainTable(NamedTuple):
    """Gain factors of the elementary propagation steps.

    Linear values and their natural logarithms are both kept; a factor
    of zero has the logarithm ``-inf``.

    Attributes:
        g_prefix: Launch and landing factor of a direct path.
        g_layer: One full-layer crossing.
        g_pair: One extra up/down refraction pair.
        g_refl: One reflection step in the substrate.
        log_prefix: ``log(g_prefix)``.
        log_layer: ``log(g_layer)``.
        log_pair: ``log(g_pair)``.
        log_refl: ``log(g_refl)``.
    """

    g_prefix: float
    g_layer: float
    g_pair: float
    g_refl: float
    log_prefix: float
    log_layer: float
    log_pair: float
    log_refl: float


def _power_coefficient(a: float, b: float) -> float:
    return ((a - b) / (a + b)) ** 2


def coefficient_set(stack: StackSpec) -> CoefficientSet:
    """Compute the twelve interface coefficients of a stack.

    The coefficients are power coefficients and do not depend on the
    angle of incidence.

    Args:
        stack: The material stack.

    Returns:
        The coefficient set, with ``T4 = T1``, ``T5 = T2``, ``T6 = T3``
        and ``R[i] = 1 - T[i]``.

    Examples:
        >>> s = StackSpec(1e-6, 1e-6, 5e-4, 1.5, 1.5, 1.5, 0, 0, 0)
        >>> coefficient_set(s).t
        (0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    """
    t1 = _power_coefficient(stack.n3, stack.n1)
    t2 = _power_coefficient(stack.n2, stack.n1)
    t3 = _power_coefficient(stack.n3, stack.n2)
    t = (t1, t2, t3, t1, t2, t3)
    r = tuple(1.0 - x for x in t)
    return CoefficientSet(t=t, r=r)  # type: ignore[arg-type]


def step_gain_table(
    stack: StackSpec,
    coeffs: CoefficientSet | None = None,
) -> StepGainTable:
    """Decompose the class transfer function into per-step factors.

    Args:
        stack: The material stack.
        coeffs: Coefficients derived from `stack`; computed when
            omitted.

    Returns:
        The step gain table.
    """
    if coeffs is None:
        coeffs = coefficient_set(stack)
    t1, t2, t3, t4, t5, _ = coeffs.t
    _, _, r3, r4, _, r6 = coeffs.r
    layer_exp = stack.layer_exponent
    pair_exp = (
        2 * stack.l3 * stack.lam3
        + stack.l2 * stack.lam2
        + stack.l1 * stack.lam1
    )
    refl_exp = 2 * stack.l3 * stack.lam3

    g_prefix = math.exp(-3 * layer_exp) * t1**2 * t2 * t3 * t4 * r4
    g_layer = t1 * t2 * t3 * math.exp(-layer_exp)
    g_pair = t1 * t4 * t5 * r4 * math.exp(-pair_exp)
    g_refl = r3 * r6 * math.exp(-refl_exp)

    log_prefix = (
        -3 * layer_exp
        + 2 * _log(t1)
        + _log(t2)
        + _log(t3)
        + _log(t4)
        + _log(r4)
    )
    log_layer = _log(t1) + _log(t2) + _log(t3) - layer_exp
    log_pair = _log(t1) + _log(t4) + _log(t5) + _log(r4) - pair_exp
    log_refl = _log(r3) + _log(r6) - refl_exp
    return StepGainTable(
        g_prefix=g_prefix,
        g_layer=g_layer,
        g_pair=g_pair,
        g_refl=g_refl,
        log_prefix=log_prefix,
        log_layer=log_layer,
        log_pair=log_pair,
        log_refl=log_refl,
    )
