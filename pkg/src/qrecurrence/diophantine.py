"""Simultaneous Diophantine approximation by pigeonhole over tilings.

:func:`diff_approx` finds ``q`` and integers ``l`` with

    |(alpha_i - alpha_j) - (l_i - l_j) / q| < 1 / (N q)    for all i, j

by walking ``m = 0, 1, 2, ...``, locating the fractional parts of
``m (alpha_i - alpha_min)`` in a tiling of the unit cube, and stopping at the
first two values of ``m`` that share a tile. :func:`dirichlet_simultaneous`
does the same for the classical simultaneous approximation of each
``alpha_i`` on its own.

Inputs may be floats or exact rationals. Floats are taken at their exact
binary value, so every returned certificate is exact: the walk runs in float64
and any step whose point falls within the rounding guard band of a cell
boundary is relocated with rational arithmetic.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import PreconditionError, VerificationError
from .tiling import (
    HYPERCUBE,
    SIMPLEX_HULL,
    TWO_CUBE,
    _cells_rows,
    _two_cube_from_cells,
    hypercube_rows,
    normalize_method,
    simplex_hull_rows,
    tile_decompose_T,
    two_cube_rows,
)

Number = float | int | Fraction

_EPS = 2.0 ** -52
_FIRST_CHUNK = 512
_MAX_CHUNK = 1 << 20


class BoundExceededWarning(UserWarning):
    """A simplex-hull collision came later than the volume-ratio tile count."""


@dataclass(frozen=True)
class DiffApproximation:
    """A certified difference approximation.

    ``max_pair_error`` is the largest ``|(a_i - a_j) - (l_i - l_j)/q|``
    (rounded from its exact value) and is strictly below ``1/(N q)``.
    ``collision`` holds the two walk indices ``(m, n)`` with ``q = n - m``.
    ``bound_exceeded`` is only ever set for ``simplex_hull`` when the walk ran
    past ``q_bound``.
    """

    q: int
    l: tuple[int, ...]
    N: int
    method: str
    max_pair_error: float
    q_bound: int
    reduced: bool
    collision: tuple[int, int] = (0, 1)
    bound_exceeded: bool = False


def to_fraction(x: Number | tuple[int, int] | str) -> Fraction:
    """Exact rational value of a float, int, ``Fraction``, ``(num, den)`` or decimal string."""
    if isinstance(x, (tuple, list)):
        return Fraction(int(x[0]), int(x[1]))
    if isinstance(x, float) and not math.isfinite(x):
        raise PreconditionError("alphas must be finite")
    return Fraction(x)


def _floor_frac(v: Fraction) -> tuple[int, Fraction]:
    k = math.floor(v)
    return k, v - k


def fractional_decompose(
    alphas: Sequence[Number], m: int, *, return_order: bool = False
):
    """Split ``(alpha_i - alpha_min) m`` into fractional and integer parts.

    The alphas are sorted internally; ``x`` and ``k`` are listed for the
    non-minimal alphas in ascending order (``order[1:]`` when
    ``return_order`` is set, ``order[0]`` being the minimum). Exact
    arithmetic throughout, so ``x`` is a tuple of ``Fraction`` in ``[0, 1)``.

    >>> fractional_decompose([0, 0.25, 0.75], 2)
    ((Fraction(1, 2), Fraction(1, 2)), (0, 1))
    """
    if m < 0:
        raise PreconditionError("m must be nonnegative")
    ex = [to_fraction(a) for a in alphas]
    order = sorted(range(len(ex)), key=lambda i: ex[i])
    ref = ex[order[0]]
    ks, xs = [], []
    for i in order[1:]:
        k, x = _floor_frac((ex[i] - ref) * m)
        ks.append(k)
        xs.append(x)
    if return_order:
        return tuple(xs), tuple(ks), tuple(order)
    return tuple(xs), tuple(ks)


# --- the pigeonhole walk ---------------------------------------------------

class _Scheme:
    """Float and exact cell location for one tiling of ``[0,1)^D``."""

    def __init__(self, rows: Callable, exact: Callable, scale: int, lo: int, hi: int):
        self.rows = rows          # X (R x D float) -> (labels int64, margin)
        self.exact = exact        # list[Fraction] -> labels (1-D int array)
        self.scale = scale        # cell coordinates are in units of 1/scale
        self.lo, self.hi = lo, hi  # every label component lies in [lo, hi]


def _scheme(method: str, N: int, D: int) -> _Scheme:
    if method == HYPERCUBE:
        return _Scheme(
            lambda X: hypercube_rows(X, N),
            lambda x: np.array([math.floor(2 * N * v) for v in x], dtype=np.int64),
            2 * N, 0, 2 * N,
        )
    if method == TWO_CUBE:
        def exact(x):
            cells = np.array([[math.floor(2 * N * v) for v in x]], dtype=np.int64)
            return _two_cube_from_cells(cells, N)[0]
        return _Scheme(lambda X: two_cube_rows(X, N), exact, 2 * N, -1, 2 * N)
    if method == SIMPLEX_HULL:
        return _Scheme(
            lambda X: simplex_hull_rows(X, N),
            lambda x: np.array(tile_decompose_T(x, N).n, dtype=np.int64),
            2 * N * (D + 1), -2 * N - 3, 2 * N + 3,
        )
    raise PreconditionError(f"unknown method {method!r}")  # pragma: no cover


def _grid_scheme(N: int) -> _Scheme:
    return _Scheme(
        lambda X: _cells_rows(X, N),
        lambda x: np.array([math.floor(N * v) for v in x], dtype=np.int64),
        N, 0, N,
    )


def _first_collision(deltas: Sequence[Fraction], scheme: _Scheme, cap: int) -> tuple[int, int]:
    """Smallest ``n`` whose point shares a cell with an earlier ``m``.

    Points are ``frac(m * delta)`` for ``m = 0, 1, ..``. Returns ``(m, n)``.
    Chunks are processed in order and the first collision in walk order is
    reported, so the result is independent of chunk size.
    """
    D = len(deltas)
    df = np.array([float(v) for v in deltas])
    amax = float(np.max(np.abs(df))) if D else 0.0
    base = scheme.hi - scheme.lo + 1
    int_keys = base ** D < 2 ** 62
    powers = np.array([base ** k for k in range(D)], dtype=np.int64) if int_keys else None

    seen_keys = np.empty(0, dtype=np.int64)
    seen_m = np.empty(0, dtype=np.int64)
    seen_dict: dict[tuple, int] = {}
    start, chunk = 0, _FIRST_CHUNK
    while start <= cap:
        stop = min(start + chunk, cap + 1)
        m = np.arange(start, stop, dtype=np.int64)
        P = m[:, None].astype(float) * df[None, :]
        X = P - np.floor(P)
        labels, margin = scheme.rows(X)
        # rounding in X is below 2 eps |m delta|; cell coordinates amplify by scale
        err = scheme.scale * (4 * _EPS * (stop * amax + 1.0))
        guard = 16.0 * (D + 1) * err
        # frac() jumps at integers, which need not be a tile face (simplex tiles straddle 0)
        wrap = np.minimum(X, 1.0 - X).min(axis=1) * scheme.scale if D else np.full(X.shape[0], np.inf)
        for r in np.nonzero(~((margin > guard) & (wrap > guard)))[0]:
            mm = int(m[r])
            labels[r] = scheme.exact([_floor_frac(mm * dl)[1] for dl in deltas])
        if np.any(labels < scheme.lo) or np.any(labels > scheme.hi):
            raise VerificationError("tile label out of expected range")

        if int_keys:
            keys = (labels - scheme.lo) @ powers
            if seen_keys.size:
                pos_c = np.minimum(np.searchsorted(seen_keys, keys), seen_keys.size - 1)
                hit_prev = seen_keys[pos_c] == keys
            else:
                pos_c = np.zeros(keys.size, dtype=np.int64)
                hit_prev = np.zeros(keys.size, dtype=bool)
            _, first, inv = np.unique(keys, return_index=True, return_inverse=True)
            inv = inv.ravel()
            dup = first[inv] < np.arange(keys.size)
            hit = hit_prev | dup
            if hit.any():
                r = int(np.argmax(hit))
                n = int(m[r])
                earlier = int(seen_m[pos_c[r]]) if hit_prev[r] else int(m[first[inv[r]]])
                return earlier, n
            merged = np.concatenate([seen_keys, keys])
            merged_m = np.concatenate([seen_m, m])
            idx = np.argsort(merged, kind="stable")
            seen_keys, seen_m = merged[idx], merged_m[idx]
        else:
            for r in range(labels.shape[0]):
                key = tuple(labels[r].tolist())
                if key in seen_dict:
                    return seen_dict[key], int(m[r])
                seen_dict[key] = int(m[r])
        start = stop
        chunk = min(2 * chunk, _MAX_CHUNK)
    raise VerificationError(f"no pigeonhole collision within {cap + 1} steps")


# --- q bounds --------------------------------------------------------------

def method_q_bound(method: str, d: int, N: int) -> int:
    """Upper bound on ``q`` for ``d`` alphas under a tiling method."""
    method = normalize_method(method)
    if d <= 1:
        return 1
    if method == HYPERCUBE:
        return (2 * N) ** (d - 1)
    if method == TWO_CUBE:
        return N * (2 * N + 1) ** (d - 2)
    num = (2 * N + 2) ** (d - 1)
    return -(-num // d)


def _walk_cap(method: str, D: int, N: int) -> int:
    if method == SIMPLEX_HULL:
        # tiles meeting the unit cube sit inside [-1/N, 1 + 1/N]^D
        return -(-((2 * N + 4) ** D) // (D + 1)) + 1
    return method_q_bound(method, D + 1, N)


# --- public operations -----------------------------------------------------

def pair_errors(alphas: Sequence[Number], q: int, l: Sequence[int]) -> Fraction:
    """Exact ``max_ij |(a_i - a_j) - (l_i - l_j)/q|``."""
    ex = [to_fraction(a) for a in alphas]
    e = [a - Fraction(li, q) for a, li in zip(ex, l)]
    return max(e) - min(e) if e else Fraction(0)


def _solve(ex: list[Fraction], N: int, method: str) -> tuple[int, list[int], tuple[int, int]]:
    d = len(ex)
    if d == 1:
        return 1, [0], (0, 1)
    order = sorted(range(d), key=lambda i: ex[i])
    ref = order[0]
    deltas = [ex[i] - ex[ref] for i in order[1:]]
    D = d - 1
    m, n = _first_collision(deltas, _scheme(method, N, D), _walk_cap(method, D, N))
    q = n - m
    l = [0] * d
    for i, dl in zip(order[1:], deltas):
        l[i] = math.floor(n * dl) - math.floor(m * dl)
    return q, l, (m, n)


def diff_approx(
    alphas: Sequence[Number],
    N: int,
    method: str = SIMPLEX_HULL,
    integer_pair: tuple[int, int] | None = None,
) -> DiffApproximation:
    """Approximate all pairwise differences of ``alphas`` with a common denominator.

    ``integer_pair=(i, j)`` (0-based) declares ``alphas[i] - alphas[j]`` to be
    an integer; coordinate ``i`` is then dropped before tiling, which lowers
    the dimension in the q bound by one, and ``l_i = l_j + q (a_i - a_j)`` is
    restored exactly afterwards.
    """
    method = normalize_method(method)
    N = int(N)
    if N < 1:
        raise PreconditionError("N must be a positive integer")
    ex = [to_fraction(a) for a in alphas]
    d = len(ex)
    if d < 2:
        raise PreconditionError("diff_approx needs at least 2 alphas")

    if integer_pair is not None:
        i, j = (int(v) for v in integer_pair)
        if not (0 <= i < d and 0 <= j < d) or i == j:
            raise PreconditionError(f"invalid integer_pair {integer_pair!r} for {d} alphas")
        gap = ex[i] - ex[j]
        if gap.denominator != 1:
            raise PreconditionError(f"alphas[{i}] - alphas[{j}] = {gap} is not an integer")
        keep = [k for k in range(d) if k != i]
        q, sub_l, coll = _solve([ex[k] for k in keep], N, method)
        l = [0] * d
        for k, lk in zip(keep, sub_l):
            l[k] = lk
        l[i] = l[j] + q * int(gap)
        d_eff = d - 1
    else:
        q, l, coll = _solve(ex, N, method)
        d_eff = d

    err = pair_errors(ex, q, l)
    if not err < Fraction(1, N * q):
        raise VerificationError(f"pairwise error {err} not below 1/(N q) = 1/{N * q}")
    bound = method_q_bound(method, d_eff, N)
    exceeded = q > bound
    if exceeded:
        warnings.warn(
            f"{method} returned q={q} above the tile-count bound {bound}", BoundExceededWarning, stacklevel=2
        )
    return DiffApproximation(
        q=q, l=tuple(l), N=N, method=method, max_pair_error=float(err), q_bound=bound,
        reduced=integer_pair is not None, collision=coll, bound_exceeded=exceeded,
    )


def dirichlet_simultaneous(alphas: Sequence[Number], N: int) -> tuple[int, tuple[int, ...]]:
    """Classical simultaneous approximation ``|a_i - l_i/q| <= 1/(q N)``, ``q <= N^d``.

    Pigeonhole over the ``N^d`` grid cells of side ``1/N`` visited by
    ``frac(q a)``.
    """
    N = int(N)
    if N < 1:
        raise PreconditionError("N must be a positive integer")
    ex = [to_fraction(a) for a in alphas]
    if not ex:
        raise PreconditionError("need at least one alpha")
    m, n = _first_collision(ex, _grid_scheme(N), N ** len(ex))
    q = n - m
    l = tuple(math.floor(n * a) - math.floor(m * a) for a in ex)
    for a, li in zip(ex, l):
        if abs(a - Fraction(li, q)) > Fraction(1, q * N):
            raise VerificationError("Dirichlet certificate failed its own check")
    return q, l
