"""Brute-force and Monte Carlo references for checking the constructive results.

Random draws use the counter-based Philox generator. Samples are produced in
fixed blocks of ``BLOCK`` and block ``b`` is keyed by ``(seed, b)``, so the
result for a given seed never depends on how the work is split.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .diophantine import Number, to_fraction
from .errors import PreconditionError
from .recurrence import evolved_phases, worst_case_many
from .spectral import DISCRETE, Spectrum
from .tiling import (
    HYPERCUBE,
    TWO_CUBE,
    normalize_method,
    simplex_hull_rows,
    tile_T_membership_rows,
    two_cube_rows,
)

BLOCK = 1 << 16


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block])))


def _blocks(samples: int):
    for b, start in enumerate(range(0, samples, BLOCK)):
        yield b, min(BLOCK, samples - start)


# --- difference approximation ----------------------------------------------

def _min_spread(fracs: Sequence[Fraction]) -> tuple[Fraction, int]:
    """Smallest width of a window holding every point of ``fracs`` mod 1.

    Returns the width and the index (into the sorted order) where the
    window starts.
    """
    pts = sorted(fracs)
    gaps = [pts[i + 1] - pts[i] for i in range(len(pts) - 1)] + [1 - (pts[-1] - pts[0])]
    k = max(range(len(gaps)), key=gaps.__getitem__)
    return 1 - gaps[k], (k + 1) % len(pts)


def _exact_check(deltas: list[Fraction], q: int, N: int) -> list[int] | None:
    fr = [(q * dl) % 1 for dl in deltas]
    width, start = _min_spread(fr)
    if not width < Fraction(1, N):
        return None
    lo = sorted(fr)[start]
    # residual r_i = q delta_i - l_i placed in [lo, lo + width]
    out = []
    for dl in deltas:
        x = q * dl
        r = (x - lo) % 1 + lo
        out.append(int(x - r))
    return out


def brute_min_q(alphas: Sequence[Number], N: int, M_max: int) -> tuple[int, tuple[int, ...]] | None:
    """Smallest ``q <= M_max`` with integers ``l`` meeting the strict pair bound.

    Checks every ``q`` in order for ``|(a_i - a_j) - (l_i - l_j)/q| < 1/(N q)``.
    For each ``q`` the best ``l`` is found exactly: the residuals
    ``q (a_i - a_1) mod 1`` are covered by the shortest window on the circle.
    Floats screen candidates; the decision is made in rational arithmetic.
    Returns ``(q, l)`` with ``l_1 = 0``, or ``None``.
    """
    if M_max < 1 or N < 1:
        raise PreconditionError("brute_min_q needs M_max >= 1 and N >= 1")
    ex = [to_fraction(a) for a in alphas]
    deltas = [a - ex[0] for a in ex]
    if len(deltas) < 2:
        return 1, (0,) * len(deltas)
    dv = np.array([float(dl) for dl in deltas[1:]])
    amax = float(np.max(np.abs(dv))) if dv.size else 0.0
    chunk = 4096
    for start in range(1, M_max + 1, chunk):
        qs = np.arange(start, min(M_max, start + chunk - 1) + 1, dtype=float)
        F = np.mod(np.outer(qs, dv), 1.0)
        F = np.sort(np.column_stack([np.zeros_like(qs), F]), axis=1)
        gaps = np.column_stack([np.diff(F, axis=1), 1.0 - (F[:, -1] - F[:, 0])])
        width = 1.0 - gaps.max(axis=1)
        guard = 64 * np.finfo(float).eps * (qs * amax + 1.0)
        for k in np.flatnonzero(width < 1.0 / N + guard):
            q = int(qs[k])
            l = _exact_check(deltas, q, N)
            if l is not None:
                return q, tuple(li - l[0] for li in l)
    return None


# --- grid scans ------------------------------------------------------------

@dataclass
class ScanReport:
    """Worst-case distance sampled on a uniform time grid.

    ``first_recurrence`` is the earliest grid time with worst case ``<= eps``
    that follows a grid time with worst case ``> eps``. This is a grid
    heuristic, not a certificate.
    """

    grid_step: float
    t_max: float
    epsilon: float
    mode: str
    first_recurrence: float | None
    excursion_seen: bool
    times: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    first_excursion: float | None = None

    @property
    def worst_case_trace(self) -> list[tuple[float, float]]:
        return list(zip(self.times.tolist(), self.values.tolist()))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["time", "worst_case"])
        for t, v in zip(self.times.tolist(), self.values.tolist()):
            w.writerow([repr(t), repr(v)])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "mode": self.mode,
            "epsilon": self.epsilon,
            "grid_step": self.grid_step,
            "t_max": self.t_max,
            "n_samples": int(self.times.size),
            "excursion_seen": self.excursion_seen,
            "first_excursion": self.first_excursion,
            "first_recurrence": self.first_recurrence,
        }

    def summary_json(self) -> str:
        return json.dumps(self.summary(), indent=2)


def scan_first_recurrence(s: Spectrum, eps: float, t_step: float, t_max: float) -> ScanReport:
    """Scan ``t = 0, t_step, 2 t_step, ... <= t_max`` for the first recurrence.

    Discrete spectra are scanned on integer steps, so ``t_step`` must be 1.
    """
    if not 0 <= eps < 1:
        raise PreconditionError("epsilon must lie in [0, 1)")
    if s.mode == DISCRETE:
        if t_step != 1:
            raise PreconditionError("discrete scans use t_step = 1")
        times = np.arange(0, int(t_max) + 1, dtype=float)
    else:
        if not t_step > 0:
            raise PreconditionError("t_step must be positive")
        times = t_step * np.arange(0, math.floor(t_max / t_step + 1e-9) + 1)
    values = worst_case_many(s, times)
    above = values > eps
    first_out = int(np.argmax(above)) if above.any() else None
    first_rec = None
    if first_out is not None:
        back = np.flatnonzero(~above[first_out:])
        if back.size:
            first_rec = float(times[first_out + back[0]])
    cast = int if s.mode == DISCRETE else float
    return ScanReport(
        grid_step=float(t_step),
        t_max=float(t_max),
        epsilon=float(eps),
        mode=s.mode,
        first_recurrence=None if first_rec is None else cast(first_rec),
        excursion_seen=first_out is not None,
        times=times,
        values=values,
        first_excursion=None if first_out is None else cast(times[first_out]),
    )


# --- Monte Carlo -----------------------------------------------------------

def mc_volume_T(d: int, N: int, samples: int, seed: int) -> tuple[float, float]:
    """Monte Carlo volume of ``T`` from uniform draws in its bounding box.

    The box is ``[-1/(2N), 1/(2N))^(d-1)``. Returns ``(estimate, std_error)``.
    """
    if d < 2 or N < 1:
        raise PreconditionError("mc_volume_T needs d >= 2 and N >= 1")
    if samples < 1000:
        raise PreconditionError("mc_volume_T needs at least 1000 samples")
    D = d - 1
    h = 1.0 / (2 * N)
    hits = 0
    for b, n in _blocks(samples):
        X = block_rng(seed, b).uniform(-h, h, size=(n, D))
        hits += int(tile_T_membership_rows(X, N).sum())
    box = (2 * h) ** D
    p = hits / samples
    return box * p, box * math.sqrt(p * (1 - p) / samples)


def sample_states_sup(s: Spectrum, t: float, samples: int, seed: int) -> float:
    """Largest pure-state trace distance at ``t`` over sampled states.

    Draws ``samples`` Haar-random states (normalized complex Gaussian
    amplitudes) and adds every equal-weight two-level superposition of
    distinct eigenvalues. This is a lower bound for
    :func:`~qrecurrence.recurrence.worst_case_trace_distance`.
    """
    if samples < 1:
        raise PreconditionError("sample_states_sup needs samples >= 1")
    theta = evolved_phases(s, t)
    # 1 - |sum_k p_k z_k|^2 = 2 sum_jk p_j p_k sin^2((theta_j - theta_k) / 2), no cancellation
    S = np.sin(np.subtract.outer(theta, theta) / 2.0) ** 2
    best = float(np.sqrt(S.max()))
    onehot = np.zeros((s.dim, s.d))
    onehot[np.arange(s.dim), s.degeneracy_map] = 1.0
    for b, n in _blocks(samples):
        g = block_rng(seed, b).standard_normal(size=(n, 2 * s.dim))
        P = g[:, : s.dim] ** 2 + g[:, s.dim:] ** 2
        P = (P / P.sum(axis=1, keepdims=True)) @ onehot
        t2 = 2.0 * np.einsum("ij,jk,ik->i", P, S, P)
        best = max(best, float(np.sqrt(np.maximum(t2, 0.0)).max()))
    return best


# --- tile shapes -----------------------------------------------------------

def _uniform_in_T(rng: np.random.Generator, n: int, D: int, N: int) -> np.ndarray:
    h = 1.0 / (2 * N)
    out = np.empty((0, D))
    while out.shape[0] < n:
        X = rng.uniform(-h, h, size=(2 * n, D))
        out = np.vstack([out, X[tile_T_membership_rows(X, N)]])
    return out[:n]


def same_tile_pairs(method: str, D: int, N: int, pairs: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Random point pairs ``(y, z)`` that share one tile of the given shape.

    ``y`` is uniform in ``[0, 1)^D``; ``z`` is uniform in the tile holding ``y``.
    """
    method = normalize_method(method)
    rng = block_rng(seed, 0)
    Y = rng.uniform(0.0, 1.0, size=(pairs, D))
    h = 1.0 / (2 * N)
    if method == HYPERCUBE:
        Z = (np.floor(Y / h) + rng.uniform(size=Y.shape)) * h
    elif method == TWO_CUBE:
        if D == 1:
            Z = (np.floor(Y * N) + rng.uniform(size=Y.shape)) / N
        else:
            lab, _ = two_cube_rows(Y, N)
            upper = rng.integers(0, 2, size=(pairs, 1))
            base = np.column_stack([lab[:, :-1] * h, lab[:, -1:] / N])
            Z = base + (upper + rng.uniform(size=Y.shape)) * h
    else:
        n, _ = simplex_hull_rows(Y, N)
        off = (n + n.sum(axis=1, keepdims=True)) * h
        Z = off + _uniform_in_T(rng, pairs, D, N)
    return Y, Z


def two_point_violations(Y: np.ndarray, Z: np.ndarray, N: int) -> int:
    """Rows breaking ``|z_i - y_i| < 1/N`` or ``|(z_i - y_i) - (z_j - y_j)| < 1/N``."""
    diff = Z - Y
    bad = np.abs(diff).max(axis=1) >= 1.0 / N
    if diff.shape[1] > 1:
        spread = diff.max(axis=1) - diff.min(axis=1)
        bad |= spread >= 1.0 / N
    return int(bad.sum())
