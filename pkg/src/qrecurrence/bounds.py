"""Closed-form recurrence-time bounds and pigeonhole q bounds.

Integer powers are formed exactly; the only floating-point steps are the final
multiplication by the base period (``2*pi / span`` or ``pi / max_R``). The
tolerance count ``N = ceil(pi / eps)`` is computed exactly for the rational
value of ``eps`` by bracketing pi between rationals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import PreconditionError

# pi to 110 places; the bracket below is [PI_LO, PI_LO + 10^-110]
_PI_DIGITS = (
    "3.14159265358979323846264338327950288419716939937510582097494459230781640628"
    "62089986280348253421170679821480865132823"
)
_PI_LO = Fraction(_PI_DIGITS)
_PI_HI = _PI_LO + Fraction(1, 10 ** 110)


def _pi_bracket(bits: int) -> tuple[Fraction, Fraction]:
    with mpmath.workprec(bits + 16):
        man, exp = mpmath.mpf(mpmath.pi).man_exp
    mid = Fraction(man) * Fraction(2) ** exp
    ulp = Fraction(2) ** exp
    return mid - 2 * ulp, mid + 2 * ulp


def ceil_pi_over(eps: float | Fraction | str) -> int:
    """Exact ``ceil(pi / eps)`` for the rational value of ``eps``.

    The ceiling is taken at both ends of a rational bracket of pi; if they
    disagree the bracket is tightened. Since ``pi / eps`` is irrational for
    rational ``eps`` the loop always terminates.
    """
    e = Fraction(eps)
    if e <= 0:
        raise PreconditionError("eps must be positive")
    lo, hi = _PI_LO, _PI_HI
    bits = 512
    while True:
        a, b = math.ceil(lo / e), math.ceil(hi / e)
        if a == b:
            return a
        bits *= 2
        lo, hi = _pi_bracket(bits)


@dataclass(frozen=True)
class BoundReport:
    """One recurrence-time bound.

    ``value`` is the bound as printed in the theorem. For the discrete-time
    bounds, whose prefactor ``pi / max_R`` is generally not an integer,
    ``adjusted_value`` repeats the bound with the integer step
    ``ceil(pi / max_R)``, the base step an actual construction can use.
    """

    theorem: str
    value: float
    N_used: int
    inputs: dict = field(default_factory=dict)
    adjusted_value: float | None = None
    note: str = ""


def _check_eps(eps, upper: Fraction, theorem: str) -> int:
    e = Fraction(eps)
    if not (0 < e < 1) or e > upper:
        if upper < 1:
            raise PreconditionError(f"{theorem} requires 0 < eps <= {upper}, got {float(e)!r}")
        raise PreconditionError(f"{theorem} requires 0 < eps < 1, got {float(e)!r}")
    return ceil_pi_over(e)


def _period(e_max: float, e_min: float) -> float:
    if not e_max > e_min:
        raise PreconditionError("continuous bounds need E_max > E_min")
    return 2 * math.pi / (e_max - e_min)


def _step_prefactors(max_R: float) -> tuple[float, int]:
    if not 0 < max_R <= math.pi * (1 + 1e-15):
        raise PreconditionError("max_R must lie in (0, pi]")
    literal = math.pi / max_R
    return literal, base_step(max_R)


def base_step(max_R: float) -> int:
    """Integer base step ``ceil(pi / max_R)``; ratios within 1e-12 of an integer snap to it."""
    ratio = math.pi / max_R
    near = round(ratio)
    if near >= 1 and abs(ratio - near) <= 1e-12 * ratio:
        return int(near)
    return math.ceil(ratio)


def bound_T1(e_max: float, e_min: float, d: int, eps) -> BoundReport:
    """``t_r <= (2 pi / span) (2N)^(d-2)`` from plain simultaneous approximation."""
    if d < 2:
        raise PreconditionError("bound T1 requires d >= 2")
    N = _check_eps(eps, Fraction(1), "bound T1")
    t0 = _period(e_max, e_min)
    return BoundReport("T1", t0 * (2 * N) ** (d - 2), N, dict(d=d, eps=float(eps), span=e_max - e_min))


def bound_T2(max_R: float, d: int, eps) -> BoundReport:
    """``m_r <= (pi / max_R) (2N)^(d-1)`` for discrete-time evolution."""
    if d < 2:
        raise PreconditionError("bound T2 requires d >= 2")
    N = _check_eps(eps, Fraction(1, 2), "bound T2")
    lit, m0 = _step_prefactors(max_R)
    p = (2 * N) ** (d - 1)
    return BoundReport("T2", lit * p, N, dict(d=d, eps=float(eps), max_R=max_R), adjusted_value=float(m0 * p))


def _t3a_factor(N: int, d: int) -> int:
    return N * (2 * N + 1) ** (d - 3)


def _t3b_factor(N: int, d: int) -> Fraction:
    return Fraction((2 * N + 2) ** (d - 2), d - 1)


def bound_T3(e_max: float, e_min: float, d: int, eps):
    """Both improved continuous bounds and their minimum.

    Returns ``(T3a, T3b, best)``; ``T3a`` is ``None`` for ``d = 2`` where only
    the second form applies.
    """
    if d < 2:
        raise PreconditionError("bound T3 requires d >= 2")
    N = _check_eps(eps, Fraction(1), "bound T3")
    t0 = _period(e_max, e_min)
    inputs = dict(d=d, eps=float(eps), span=e_max - e_min)
    a = BoundReport("T3a", t0 * _t3a_factor(N, d), N, inputs) if d >= 3 else None
    b = BoundReport("T3b", t0 * float(_t3b_factor(N, d)), N, inputs)
    best = b if a is None or b.value <= a.value else a
    return a, b, best


def bound_T4(max_R: float, d: int, eps):
    """Both improved discrete bounds and their minimum, as ``(T4a, T4b, best)``."""
    if d < 2:
        raise PreconditionError("bound T4 requires d >= 2")
    N = _check_eps(eps, Fraction(1, 2), "bound T4")
    lit, m0 = _step_prefactors(max_R)
    inputs = dict(d=d, eps=float(eps), max_R=max_R)
    fa = N * (2 * N + 1) ** (d - 2)
    fb = Fraction((2 * N + 2) ** (d - 1), d)
    note = "d = 2: first form mirrors a continuous bound stated for d >= 3" if d == 2 else ""
    a = BoundReport("T4a", lit * fa, N, inputs, adjusted_value=float(m0 * fa), note=note)
    b = BoundReport("T4b", lit * float(fb), N, inputs, adjusted_value=float(m0 * fb))
    best = a if a.value < b.value else b
    return a, b, best


def prop1_q_bounds(d: int, N: int) -> tuple[int, int, int, int]:
    """``((2N)^(d-1), N (2N+1)^(d-2), ceil((2N+2)^(d-1) / d), min)``."""
    if d < 2 or N < 1:
        raise PreconditionError("prop1 bounds need d >= 2 and N >= 1")
    a = (2 * N) ** (d - 1)
    b = N * (2 * N + 1) ** (d - 2)
    c = -(-((2 * N + 2) ** (d - 1)) // d)
    return a, b, c, min(a, b, c)


def applicable_bounds(mode: str, d: int, eps, *, span: float | None = None, max_R: float | None = None) -> list[BoundReport]:
    """Every theorem bound that applies to ``(mode, d, eps)``, in table order."""
    if mode == "continuous":
        if span is None:
            raise PreconditionError("continuous bounds need the spectral span")
        a, b, _ = bound_T3(span, 0.0, d, eps)
        rows = [bound_T1(span, 0.0, d, eps)]
        return rows + ([a] if a is not None else []) + [b]
    if mode == "discrete":
        if not 0 < Fraction(eps) <= Fraction(1, 2):
            raise PreconditionError(f"bounds T2 and T4 require 0 < eps <= 1/2, got {eps!r}")
        if max_R is None:
            raise PreconditionError("discrete bounds need max_R")
        a, b, _ = bound_T4(max_R, d, eps)
        return [bound_T2(max_R, d, eps), a, b]
    raise PreconditionError(f"unknown mode {mode!r}")
