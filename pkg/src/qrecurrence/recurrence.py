"""State and system recurrence, worst-case distances and certified recurrence times."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from . import bounds as _bounds
from .diophantine import DiffApproximation, diff_approx
from .errors import PreconditionError, VerificationError
from .spectral import (
    CONTINUOUS,
    DISCRETE,
    TWO_PI,
    PureState,
    Spectrum,
    max_circle_distance,
    max_circle_pair,
    trace_distance_pure,
)
from .tiling import HYPERCUBE, METHODS, SIMPLEX_HULL, TWO_CUBE, normalize_method

#: number of grid points used when no excursion times are supplied
DEFAULT_EXCURSION_GRID = 10_000

_THEOREMS = {
    CONTINUOUS: {HYPERCUBE: "T1", TWO_CUBE: "T3a", SIMPLEX_HULL: "T3b"},
    DISCRETE: {HYPERCUBE: "T2", TWO_CUBE: "T4a", SIMPLEX_HULL: "T4b"},
}


def evolved_phases(s: Spectrum, t) -> np.ndarray:
    """Phases of the distinct eigenvalues after time ``t``, reduced into ``[0, 2*pi)``.

    Continuous phases are measured relative to the lowest energy; a common
    phase does not change any distance. An array of times gives one row per
    time.
    """
    v = s.values
    if s.mode == CONTINUOUS:
        v = v - v[0]
    theta = np.multiply.outer(np.asarray(t, dtype=float), v)
    return np.mod(theta, TWO_PI)


def arc_width(theta: np.ndarray) -> np.ndarray | float:
    """Length of the shortest arc of the unit circle containing all ``theta``.

    Works along the last axis, so a 2-D array gives one width per row.
    """
    th = np.sort(np.mod(theta, TWO_PI), axis=-1)
    wrap = TWO_PI - (th[..., -1] - th[..., 0])
    gap = np.maximum(np.diff(th, axis=-1).max(axis=-1, initial=0.0), wrap)
    w = np.maximum(0.0, TWO_PI - gap)
    return float(w) if w.ndim == 0 else w


def _sup_from_width(w):
    return np.where(w >= math.pi, 1.0, np.sin(np.minimum(w, math.pi) / 2.0))


def worst_case_trace_distance(s: Spectrum, t: float) -> float:
    """Largest trace distance ``T(psi(t), psi(0))`` over all states.

    The survival amplitude is a convex combination of the points
    ``exp(i theta_k)``, so the supremum is ``sqrt(1 - r^2)`` with ``r`` the
    distance from the origin to their convex hull. For points on the unit
    circle that hull misses the origin exactly when they fit in an arc of
    width ``w < pi``; the nearest hull point is then the midpoint of the chord
    across the arc, at distance ``cos(w / 2)``, giving ``sin(w / 2)``.
    """
    return float(_sup_from_width(arc_width(evolved_phases(s, t))))


def worst_case_many(s: Spectrum, times) -> np.ndarray:
    """:func:`worst_case_trace_distance` evaluated on an array of times."""
    return _sup_from_width(arc_width(evolved_phases(s, np.atleast_1d(times))))


class StateRecurrence(NamedTuple):
    recurrent: bool
    witness_time: float | None
    distance_at_t: float
    status: str


@dataclass(frozen=True)
class SystemRecurrenceReport:
    """Outcome of a system recurrence check.

    ``status`` is ``"recurrent"``, ``"not_recurrent"`` (some state is farther
    than epsilon at ``t``), ``"trivial"`` (all states within epsilon at ``t``
    but no excursion found among the checked times) or
    ``"trivial_or_not_recurrent"`` when no excursion times were available.
    ``heuristic`` is set when the excursion times came from the default grid.
    """

    recurrent: bool
    status: str
    worst_case_at_t: float
    witness_time: float | None
    witness_worst_case: float | None
    times_checked: int
    heuristic: bool = False


def _check_eps(eps: float) -> None:
    if not 0 <= eps < 1:
        raise PreconditionError(f"epsilon must lie in [0, 1), got {eps!r}")


def _check_times(s: Spectrum, t, times: Sequence) -> list:
    out = list(times)
    for tp in out:
        if not tp < t:
            raise PreconditionError(f"excursion time {tp!r} is not before t={t!r}")
        if s.mode == DISCRETE and (int(tp) != tp or tp < 1):
            raise PreconditionError("discrete excursion times must be positive integers")
    return out


def is_state_recurrent_at(
    state: PureState, s: Spectrum, eps: float, t, excursion_times: Sequence
) -> StateRecurrence:
    """Check whether ``state`` is epsilon-recurrent at ``t``.

    The excursion must happen strictly before ``t``; the first time in
    ``excursion_times`` with distance above ``eps`` is returned as witness.
    """
    _check_eps(eps)
    times = _check_times(s, t, excursion_times)
    dist = trace_distance_pure(state, s, t)
    if dist > eps:
        return StateRecurrence(False, None, dist, "not_recurrent")
    if not times:
        return StateRecurrence(False, None, dist, "trivial_or_not_recurrent")
    for tp in times:
        if trace_distance_pure(state, s, tp) > eps:
            return StateRecurrence(True, tp, dist, "recurrent")
    return StateRecurrence(False, None, dist, "trivial")


def default_excursion_grid(s: Spectrum, t) -> np.ndarray:
    """Heuristic excursion grid: ``DEFAULT_EXCURSION_GRID`` points in ``(0, t)``."""
    if s.mode == DISCRETE:
        t = int(t)
        if t - 1 <= DEFAULT_EXCURSION_GRID:
            return np.arange(1, t)
        return np.unique(np.linspace(1, t - 1, DEFAULT_EXCURSION_GRID).astype(np.int64))
    if t <= 0:
        return np.empty(0)
    k = np.arange(1, DEFAULT_EXCURSION_GRID + 1)
    return t * k / (DEFAULT_EXCURSION_GRID + 1)


def is_system_recurrent_at(
    s: Spectrum, eps: float, t, excursion_times: Sequence | None = None
) -> SystemRecurrenceReport:
    """Check system epsilon-recurrence at ``t``.

    All states must be within ``eps`` at ``t`` (exact worst case), and some
    state must exceed ``eps`` at a time strictly before ``t``. With
    ``excursion_times=None`` a uniform grid is searched; that half of the
    answer is then a heuristic, flagged in the report.
    """
    _check_eps(eps)
    heuristic = excursion_times is None
    times = list(default_excursion_grid(s, t)) if heuristic else _check_times(s, t, excursion_times)
    worst = worst_case_trace_distance(s, t)
    if worst > eps:
        return SystemRecurrenceReport(False, "not_recurrent", worst, None, None, 0, heuristic)
    if not times:
        return SystemRecurrenceReport(False, "trivial_or_not_recurrent", worst, None, None, 0, heuristic)
    wc = worst_case_many(s, np.asarray(times, dtype=float))
    hits = np.flatnonzero(wc > eps)
    if hits.size:
        k = int(hits[0])
        tp = int(times[k]) if s.mode == DISCRETE else float(times[k])
        return SystemRecurrenceReport(True, "recurrent", worst, tp, float(wc[k]), k + 1, heuristic)
    return SystemRecurrenceReport(False, "trivial", worst, None, None, len(times), heuristic)


def _snapped_floor(ratio: float) -> int:
    near = round(ratio)
    if abs(ratio - near) <= 1e-12 * ratio:
        return int(near)
    return math.floor(ratio)


def witness_nontrivial(s: Spectrum, eps: float) -> tuple[PureState, float | int]:
    """A state and a time at which that state is farther than ``eps`` from its start.

    Continuous: the equal superposition of the lowest and highest energy
    eigenstates at ``t' = pi / span``, where its distance is exactly 1. This
    is the midpoint of the window where ``|sin(span t / 2)| > eps`` inside the
    first period.

    Discrete (requires ``eps <= 1/2``): the equal superposition of the two
    eigenstates whose phases are farthest apart on the circle (distance
    ``R``), at step ``m' = floor(pi / R)`` (at least 1). Then ``m' R`` lies in
    ``(pi/2, pi]`` or ``m' = 1`` with ``R > pi/2``, so the distance exceeds
    ``sin(pi/4) > 1/2``.
    """
    s.require_recurrence_ready()
    if s.mode == CONTINUOUS:
        if not 0 < eps < 1:
            raise PreconditionError("continuous witness needs 0 < eps < 1")
        state = PureState.equal_superposition(s.dim, [s.representative(0), s.representative(s.d - 1)])
        return state, math.pi / s.span
    if not 0 < eps <= 0.5:
        raise PreconditionError("discrete witness needs 0 < eps <= 1/2")
    j, k = max_circle_pair(s)
    R = max_circle_distance(s)
    m_prime = max(1, _snapped_floor(math.pi / R))
    state = PureState.equal_superposition(s.dim, [s.representative(j), s.representative(k)])
    return state, m_prime


@dataclass(frozen=True)
class RecurrenceCertificate:
    """A certified epsilon-recurrence time.

    ``recurrence_time = multiplier * base_time``. ``phase_integers`` holds one
    integer ``l_k`` per distinct eigenvalue with
    ``|(E_j - E_k) t_r - 2 pi (l_j - l_k)| <= 2 eps`` for every pair;
    ``max_phase_error`` is the largest left-hand side. ``bound_value`` is the
    theorem bound for the tiling used (for discrete time, the version with the
    integer base step); ``bound_value_literal`` is the bound as stated with
    the real prefactor. ``free_dimensions`` is the dimension of the tiled cube
    (the exponent in the q bound).
    """

    mode: str
    recurrence_time: float | int
    base_time: float | int
    multiplier: int
    phase_integers: tuple[int, ...]
    epsilon: float
    worst_case_at_tr: float
    witness_state: PureState
    witness_time: float | int
    bound_used: str
    bound_value: float
    bound_value_literal: float = math.nan
    method: str = SIMPLEX_HULL
    N: int = 0
    max_phase_error: float = 0.0
    free_dimensions: int = 0
    extra: dict = field(default_factory=dict)


def _bound_for(s: Spectrum, eps: float, method: str) -> tuple[str, float, float]:
    d = s.d
    if s.mode == CONTINUOUS:
        if method == HYPERCUBE or (method == TWO_CUBE and d < 3):
            r = _bounds.bound_T1(s.e_max, s.e_min, d, eps)
        else:
            a, b, _ = _bounds.bound_T3(s.e_max, s.e_min, d, eps)
            r = a if method == TWO_CUBE else b
        return r.theorem, r.value, r.value
    R = max_circle_distance(s)
    if method == HYPERCUBE:
        r = _bounds.bound_T2(R, d, eps)
    else:
        a, b, _ = _bounds.bound_T4(R, d, eps)
        r = a if method == TWO_CUBE else b
    return r.theorem, r.adjusted_value, r.value


def _alphas(s: Spectrum, base) -> list:
    """Scaled eigenvalues whose pairwise differences must be near integers."""
    if s.mode == CONTINUOUS:
        if s.exact_values is not None:
            ex = s.exact_values
            return [(r - ex[0]) / (ex[-1] - ex[0]) for r in ex]
        v = s.values
        return list((v - v[0]) / s.span)
    if s.exact_values is not None:
        return [r * base for r in s.exact_values]
    return list(s.values * base / TWO_PI)


def phase_errors(s: Spectrum, t, l: Sequence[int]) -> float:
    """Largest ``|(E_j - E_k) t - 2 pi (l_j - l_k)|`` over distinct eigenvalues."""
    v = s.values
    lv = np.asarray(l, dtype=float)
    if s.mode == CONTINUOUS:
        v = v - v[0]
    resid = v * t - TWO_PI * lv
    return float(resid.max() - resid.min())


def _approximate(s: Spectrum, eps: float, method: str) -> tuple[DiffApproximation, float | int, int]:
    N = _bounds.ceil_pi_over(eps)
    if s.mode == CONTINUOUS:
        base = TWO_PI / s.span
        approx = diff_approx(_alphas(s, None), N, method, integer_pair=(s.d - 1, 0))
        return approx, base, s.d - 2
    base = _bounds.base_step(max_circle_distance(s))
    approx = diff_approx(_alphas(s, base), N, method)
    return approx, base, s.d - 1


def find_recurrence_constructive(
    s: Spectrum, eps: float, tile_method: str = SIMPLEX_HULL
) -> RecurrenceCertificate:
    """Construct and verify a system epsilon-recurrence time.

    Continuous time: with base period ``t0 = 2 pi / span`` the scaled
    energies ``alpha_k = (E_k - E_min) t0 / (2 pi)`` have
    ``alpha_max - alpha_min = 1``, so that coordinate is eliminated and the
    remaining ``d - 2`` differences are approximated with ``N = ceil(pi/eps)``;
    then ``t_r = q t0``.

    Discrete time: base step ``m0 = ceil(pi / max_R)`` and
    ``alpha_k = phi_k m0 / (2 pi)``, all ``d - 1`` differences approximated,
    ``m_r = q m0``.

    ``tile_method="all"`` runs every tiling and keeps the smallest ``q``
    (ties go to the earlier entry of ``METHODS``); the certificate then
    carries the smallest of the corresponding bounds.
    """
    s.require_recurrence_ready()
    if s.mode == CONTINUOUS and not 0 < eps < 1:
        raise PreconditionError("continuous recurrence needs 0 < eps < 1")
    if s.mode == DISCRETE and not 0 < eps <= 0.5:
        raise PreconditionError("discrete recurrence needs 0 < eps <= 1/2")

    methods = METHODS if tile_method == "all" else (normalize_method(tile_method),)
    best = None
    for method in methods:
        approx, base, free = _approximate(s, eps, method)
        if best is None or approx.q < best[0].q:
            best = (approx, base, free, method)
    approx, base, free, method = best

    q = approx.q
    t_r = q * base
    witness, t_prime = witness_nontrivial(s, eps)
    # with every tiling tried, q is below each tiling's bound, so the smallest applies
    theorem, bound_value, literal = min((_bound_for(s, eps, m) for m in methods), key=lambda b: b[1])
    cert = RecurrenceCertificate(
        mode=s.mode,
        recurrence_time=t_r,
        base_time=base,
        multiplier=q,
        phase_integers=tuple(approx.l),
        epsilon=float(eps),
        worst_case_at_tr=worst_case_trace_distance(s, t_r),
        witness_state=witness,
        witness_time=t_prime,
        bound_used=theorem,
        bound_value=bound_value,
        bound_value_literal=literal,
        method=method,
        N=approx.N,
        max_phase_error=phase_errors(s, t_r, approx.l),
        free_dimensions=free,
        extra={"collision": list(approx.collision), "q_bound": approx.q_bound},
    )
    ok, violations = verify_certificate(cert, s)
    if not ok:
        raise VerificationError(f"constructed certificate failed verification: {violations}")
    return cert


def _close(a: float, b: float, rtol: float = 1e-12) -> bool:
    return abs(a - b) <= rtol * max(1.0, abs(a), abs(b))


def verify_certificate(cert: RecurrenceCertificate, s: Spectrum) -> tuple[bool, list[str]]:
    """Re-check every clause of a certificate against the spectrum.

    Returns ``(ok, violations)``, one short message per failed clause.
    """
    bad: list[str] = []
    eps = cert.epsilon
    t_r = cert.recurrence_time
    if cert.mode != s.mode:
        bad.append(f"mode: certificate is {cert.mode}, spectrum is {s.mode}")
        return False, bad
    if not 0 < eps < 1 or (s.mode == DISCRETE and eps > 0.5):
        bad.append(f"epsilon: {eps!r} outside the admissible range")
    if s.mode == DISCRETE:
        for name in ("recurrence_time", "base_time", "witness_time"):
            v = getattr(cert, name)
            if int(v) != v:
                bad.append(f"{name}: discrete times must be integers, got {v!r}")
    if cert.multiplier < 1 or not _close(t_r, cert.multiplier * cert.base_time):
        bad.append(f"multiplier: {t_r!r} != {cert.multiplier} * {cert.base_time!r}")
    if not cert.base_time <= t_r * (1 + 1e-12):
        bad.append(f"base_time: {cert.base_time!r} exceeds recurrence time {t_r!r}")
    if not t_r <= cert.bound_value * (1 + 1e-12):
        bad.append(f"bound: recurrence time {t_r!r} exceeds {cert.bound_used} bound {cert.bound_value!r}")
    if len(cert.phase_integers) != s.d:
        bad.append(f"phase_integers: expected {s.d} integers, got {len(cert.phase_integers)}")
    else:
        err = phase_errors(s, t_r, cert.phase_integers)
        scale = max(1.0, abs(s.span * t_r) if s.mode == CONTINUOUS else TWO_PI * abs(t_r))
        if err > 2 * eps + 1e-12 * scale:
            bad.append(f"phase_condition: max pair phase error {err:.6g} > 2 eps = {2 * eps:.6g}")
    worst = worst_case_trace_distance(s, t_r)
    if worst > eps or cert.worst_case_at_tr > eps:
        bad.append(f"worst_case: trace distance {worst:.6g} at recurrence time exceeds eps = {eps:.6g}")
    if not cert.witness_time < t_r:
        bad.append(f"witness_order: witness time {cert.witness_time!r} is not before {t_r!r}")
    try:
        wd = trace_distance_pure(cert.witness_state, s, cert.witness_time)
    except PreconditionError as exc:
        bad.append(f"witness_excursion: {exc}")
    else:
        if not wd > eps:
            bad.append(f"witness_excursion: witness distance {wd:.6g} does not exceed eps")
    return not bad, bad


def exact_alphas(s: Spectrum, base=None) -> list[Fraction]:
    """Exact rational alphas used by the construction (for inspection and tests)."""
    return [Fraction(a) for a in _alphas(s, base)]
