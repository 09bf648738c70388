"""Finite spectra, pure and mixed states, and trace distances under evolution.

Two evolution modes are supported. In ``"continuous"`` mode the spectrum holds
energies and a state evolves as ``exp(-i E_k t) c_k``. In ``"discrete"`` mode the
spectrum holds eigenphases ``phi_k`` of a unitary and a state evolves as
``exp(i phi_k m) c_k`` for integer steps ``m``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import NormalizationWarning, PreconditionError

TWO_PI = 2.0 * math.pi

CONTINUOUS = "continuous"
DISCRETE = "discrete"
MODES = (CONTINUOUS, DISCRETE)

#: relative tolerance used to merge nearly equal spectral values
DEDUP_RTOL = 1e-12
#: tolerance on the norm of states and ensemble weights
NORM_TOL = 1e-9
#: tolerance for cross-formula agreement and Hermiticity residue
NUM_TOL = 1e-9
#: default cap on the Hilbert-space dimension for dense mixed-state routines
MAX_DIM = 256


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise PreconditionError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of an evolution generator together with their degeneracies.

    ``distinct_values`` is strictly increasing. ``degeneracy_map[i]`` is the
    index in ``distinct_values`` of raw eigenvalue ``i``. When the spectrum was
    built from exact rationals, ``exact_values`` holds the distinct values in
    units of ``scale`` (so ``distinct_values[k] == scale * exact_values[k]`` up
    to rounding); otherwise it is ``None``.
    """

    raw_values: tuple[float, ...]
    mode: str
    distinct_values: tuple[float, ...]
    degeneracy_map: tuple[int, ...]
    exact_values: tuple[Fraction, ...] | None = None
    scale: float = 1.0

    @property
    def d(self) -> int:
        """Number of distinct eigenvalues."""
        return len(self.distinct_values)

    @property
    def dim(self) -> int:
        """Hilbert-space dimension (number of raw eigenvalues)."""
        return len(self.raw_values)

    @property
    def values(self) -> np.ndarray:
        return np.array(self.distinct_values)

    @property
    def raw(self) -> np.ndarray:
        return np.array(self.raw_values)

    @property
    def e_min(self) -> float:
        return self.distinct_values[0]

    @property
    def e_max(self) -> float:
        return self.distinct_values[-1]

    @property
    def span(self) -> float:
        return self.e_max - self.e_min

    def representative(self, k: int) -> int:
        """First raw index carrying distinct value ``k``."""
        return self.degeneracy_map.index(k)

    def require_recurrence_ready(self) -> None:
        if self.d < 2:
            raise PreconditionError(
                f"recurrence analysis needs at least 2 distinct eigenvalues, got {self.d}"
            )


def _dedup(sorted_vals: Sequence[float], tol: float) -> list[float]:
    out = [sorted_vals[0]]
    for v in sorted_vals[1:]:
        if v - out[-1] > tol:
            out.append(v)
    return out


def _index_into(values: Sequence[float], distinct: Sequence[float], tol: float) -> tuple[int, ...]:
    dist = np.asarray(distinct)
    idx = []
    for v in values:
        k = int(np.argmin(np.abs(dist - v)))
        if abs(dist[k] - v) > tol:  # pragma: no cover - cluster representative drift
            raise AssertionError("value does not map to a distinct representative")
        idx.append(k)
    return tuple(idx)


def make_spectrum(values: Iterable[float], mode: str = CONTINUOUS) -> Spectrum:
    """Build a :class:`Spectrum` from real eigenvalues.

    Values closer than ``DEDUP_RTOL * max(1, max|v|)`` are merged, the smallest
    member of each cluster becoming the representative. In discrete mode the
    phases are first reduced into ``[0, 2*pi)``; a phase within tolerance of
    ``2*pi`` is identified with ``0``.

    >>> make_spectrum([0, 0.5, 1, 1]).d
    3
    """
    _check_mode(mode)
    vals = [float(v) for v in values]
    if not vals:
        raise PreconditionError("spectrum needs at least one value")
    if not all(math.isfinite(v) for v in vals):
        raise PreconditionError("spectrum values must be finite")
    tol = DEDUP_RTOL * max(1.0, max(abs(v) for v in vals))
    if mode == DISCRETE:
        vals = [math.fmod(v, TWO_PI) for v in vals]
        vals = [v + TWO_PI if v < 0 else v for v in vals]
        tol = DEDUP_RTOL * TWO_PI
        vals = [0.0 if TWO_PI - v <= tol else v for v in vals]
    distinct = _dedup(sorted(vals), tol)
    return Spectrum(
        raw_values=tuple(vals),
        mode=mode,
        distinct_values=tuple(distinct),
        degeneracy_map=_index_into(vals, distinct, tol),
    )


def spectrum_from_rationals(
    rationals: Iterable[Fraction | int | tuple[int, int]],
    mode: str = CONTINUOUS,
    scale: float | None = None,
) -> Spectrum:
    """Build a spectrum whose values are exact rationals times a common scale.

    Degeneracies are detected exactly. In continuous mode ``scale`` defaults to
    1. In discrete mode the rationals are read as fractions of a full turn
    when ``scale`` is omitted (phase ``2*pi*r``, reduced exactly mod 1); with
    an explicit discrete ``scale`` the exact form is dropped and the phases are
    handled as ordinary floats.
    """
    _check_mode(mode)
    rs = []
    for r in rationals:
        if isinstance(r, (tuple, list)):
            r = Fraction(int(r[0]), int(r[1]))
        rs.append(Fraction(r))
    if not rs:
        raise PreconditionError("spectrum needs at least one value")
    if mode == DISCRETE and scale is not None:
        return make_spectrum([float(scale) * float(r) for r in rs], DISCRETE)
    if mode == DISCRETE:
        rs = [r - math.floor(r) for r in rs]
        scale = TWO_PI
    elif scale is None:
        scale = 1.0
    scale = float(scale)
    if not (math.isfinite(scale) and scale > 0):
        raise PreconditionError("scale must be a positive finite real")
    distinct = sorted(set(rs))
    lookup = {r: k for k, r in enumerate(distinct)}
    return Spectrum(
        raw_values=tuple(scale * float(r) for r in rs),
        mode=mode,
        distinct_values=tuple(scale * float(r) for r in distinct),
        degeneracy_map=tuple(lookup[r] for r in rs),
        exact_values=tuple(distinct),
        scale=scale,
    )


class PureState:
    """Amplitudes ``c_k`` of a pure state in the eigenbasis of a spectrum.

    Inputs whose squared norm differs from 1 by more than ``NORM_TOL`` are
    rescaled and flagged through ``renormalized`` plus a
    :class:`NormalizationWarning`.
    """

    def __init__(self, amplitudes: Iterable[complex]):
        c = np.asarray(list(amplitudes), dtype=complex).ravel()
        if c.size == 0 or not np.all(np.isfinite(c)):
            raise PreconditionError("amplitudes must be a nonempty finite vector")
        norm2 = float(np.vdot(c, c).real)
        if norm2 == 0.0:
            raise PreconditionError("the zero vector is not a state")
        self.renormalized = abs(norm2 - 1.0) > NORM_TOL
        if self.renormalized:
            warnings.warn(f"state norm^2 = {norm2!r}; renormalizing", NormalizationWarning, stacklevel=2)
        c = c / math.sqrt(norm2)
        c.flags.writeable = False
        self.amplitudes = c

    def __len__(self) -> int:
        return self.amplitudes.size

    def __repr__(self) -> str:
        return f"PureState({self.amplitudes.tolist()!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PureState):
            return NotImplemented
        return np.array_equal(self.amplitudes, other.amplitudes)

    __hash__ = None

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @classmethod
    def basis(cls, dim: int, k: int) -> "PureState":
        c = np.zeros(dim, dtype=complex)
        c[k] = 1.0
        return cls(c)

    @classmethod
    def equal_superposition(cls, dim: int, indices: Sequence[int]) -> "PureState":
        c = np.zeros(dim, dtype=complex)
        c[list(indices)] = 1.0 / math.sqrt(len(indices))
        return cls(c)


class MixedEnsemble:
    """A convex mixture ``sum_i p_i |psi_i><psi_i|`` of pure states."""

    def __init__(self, components: Iterable[tuple[float, PureState | Sequence[complex]]]):
        comps = list(components)
        if not comps:
            raise PreconditionError("ensemble needs at least one component")
        p = np.array([float(w) for w, _ in comps])
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise PreconditionError("ensemble weights must be nonnegative and finite")
        total = p.sum()
        if total == 0:
            raise PreconditionError("ensemble weights sum to zero")
        self.renormalized = abs(total - 1.0) > NORM_TOL
        if self.renormalized:
            warnings.warn(f"ensemble weights sum to {total!r}; renormalizing", NormalizationWarning, stacklevel=2)
        self.weights = p / total
        self.states = [s if isinstance(s, PureState) else PureState(s) for _, s in comps]
        dims = {len(s) for s in self.states}
        if len(dims) != 1:
            raise PreconditionError("ensemble components have different dimensions")

    @property
    def dim(self) -> int:
        return len(self.states[0])

    def density_matrix(self) -> np.ndarray:
        rho = np.zeros((self.dim, self.dim), dtype=complex)
        for p, s in zip(self.weights, self.states):
            rho += p * np.outer(s.amplitudes, s.amplitudes.conj())
        return rho


def _check_dim(n: int, s: Spectrum) -> None:
    if n != s.dim:
        raise PreconditionError(f"state has dimension {n} but spectrum has {s.dim} eigenvalues")


def _sign(s: Spectrum) -> float:
    # continuous: exp(-iEt); discrete: exp(+i phi m)
    return -1.0 if s.mode == CONTINUOUS else 1.0


def grouped_probabilities(state: PureState, s: Spectrum) -> np.ndarray:
    """Total weight of ``state`` on each distinct eigenvalue."""
    _check_dim(len(state), s)
    return np.bincount(np.array(s.degeneracy_map), weights=state.probabilities, minlength=s.d)


def survival_amplitude(state: PureState, s: Spectrum, t: float) -> complex:
    """Overlap ``<psi(t)|psi(0)>`` of the evolved state with the initial one.

    >>> s = make_spectrum([0, 1])
    >>> round(abs(survival_amplitude(PureState([1, 1]), s, math.pi)), 12)
    0.0
    """
    _check_dim(len(state), s)
    phase = -_sign(s) * s.raw * t
    return complex(np.sum(state.probabilities * np.exp(1j * phase)))


def _pair_sin2(values: np.ndarray, t: float) -> np.ndarray:
    diff = (values[:, None] - values[None, :]) * t
    return np.sin(diff / 2.0) ** 2


def trace_distance_pure(state: PureState, s: Spectrum, t: float) -> float:
    """Trace distance between a pure state and its evolution to time ``t``.

    Evaluated as ``sqrt(sum_jk p_j p_k 2 sin^2((E_j - E_k) t / 2))`` over
    distinct eigenvalues, which equals ``sqrt(1 - |<psi(t)|psi(0)>|^2)`` but
    keeps full relative precision near zero.
    """
    p = grouped_probabilities(state, s)
    t2 = 2.0 * float(p @ _pair_sin2(s.values, t) @ p)
    return math.sqrt(min(1.0, max(0.0, t2)))


def trace_distance_mixed(e: MixedEnsemble, s: Spectrum, t: float, *, max_dim: int = MAX_DIM) -> float:
    """Trace distance ``||rho(t) - rho(0)||_1 / 2`` for a mixed ensemble."""
    _check_dim(e.dim, s)
    if e.dim > max_dim:
        raise PreconditionError(f"dimension {e.dim} exceeds max_dim={max_dim}")
    rho = e.density_matrix()
    v = s.raw
    phase = np.exp(1j * _sign(s) * (v[:, None] - v[None, :]) * t)
    delta = rho * phase - rho
    residue = np.max(np.abs(delta - delta.conj().T))
    if residue > NUM_TOL:
        raise PreconditionError(f"difference operator is not Hermitian (residue {residue:.3g})")
    eig = np.linalg.eigvalsh(0.5 * (delta + delta.conj().T))
    return float(min(1.0, 0.5 * np.sum(np.abs(eig))))


def circle_distance(theta1: float, theta2: float) -> float:
    """Distance ``min(|a - b|, 2*pi - |a - b|)`` between two angles.

    Inputs outside ``[0, 2*pi)`` are reduced mod ``2*pi`` first rather than
    rejected.
    """
    a = math.fmod(theta1, TWO_PI) % TWO_PI
    b = math.fmod(theta2, TWO_PI) % TWO_PI
    diff = abs(a - b)
    return min(diff, TWO_PI - diff)


def max_circle_distance(s: Spectrum) -> float:
    """Largest circle distance between two distinct eigenphases."""
    vals = s.distinct_values
    return max(
        (circle_distance(a, b) for i, a in enumerate(vals) for b in vals[i + 1:]),
        default=0.0,
    )


def max_circle_pair(s: Spectrum) -> tuple[int, int]:
    """Indices ``(j, k)`` of distinct eigenphases attaining :func:`max_circle_distance`."""
    vals = s.distinct_values
    best, pair = -1.0, (0, 1)
    for j in range(len(vals)):
        for k in range(j + 1, len(vals)):
            r = circle_distance(vals[j], vals[k])
            if r > best:
                best, pair = r, (j, k)
    return pair
