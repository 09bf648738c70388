"""Pigeonhole tilings of the unit cube ``[0, 1)^D``.

Three cell shapes are provided, all scaled by ``h = 1 / (2N)``:

* ``hypercube``: the grid of cubes ``[0, h)^D``, ``(2N)^D`` cells.
* ``two_cube``: translates of ``P = [0, h)^D  U  [h, 2h)^D``, covering a
  superset of the unit cube with ``N (2N+1)^(D-1)`` cells.
* ``simplex_hull``: the lattice tiling of ``R^D`` by the polytope ``T``
  (box ``-h <= x_i < h`` plus ``-h <= x_j - x_i < h`` for ``j > i``) under the
  translations ``v_i / (2N)`` where ``v_i`` is all-ones with a 2 in slot ``i``.

Any two points of one cell satisfy ``|z_i - y_i| < 1/N`` and
``|(z_i - y_i) - (z_j - y_j)| < 1/N``.

The public scalar functions work in exact rational arithmetic (floats are
converted to their exact binary value). The ``*_rows`` helpers are vectorized
float versions that also return, per row, a margin: the distance (in units of
``h``) from the point to the nearest cell boundary. A caller can trust the
float cell whenever the margin exceeds its rounding error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import PreconditionError, VerificationError

HYPERCUBE = "hypercube"
TWO_CUBE = "two_cube"
SIMPLEX_HULL = "simplex_hull"
METHODS = (HYPERCUBE, TWO_CUBE, SIMPLEX_HULL)

_HALF = Fraction(1, 2)


def normalize_method(method: str) -> str:
    m = method.replace("-", "_").lower()
    if m not in METHODS:
        raise PreconditionError(f"unknown tiling method {method!r}; expected one of {METHODS}")
    return m


def _fr(x: Sequence[float | Fraction]) -> list[Fraction]:
    return [Fraction(v) for v in x]


# --- hypercube -------------------------------------------------------------

def tile_index_hypercube(x: Sequence[float | Fraction], N: int) -> tuple[int, ...]:
    """Index ``floor(2N x_i)`` of the grid cube containing ``x``."""
    return tuple(math.floor(2 * N * v) for v in _fr(x))


def _cells_rows(X: np.ndarray, scale: int) -> tuple[np.ndarray, np.ndarray]:
    Y = X * scale
    C = np.floor(Y)
    F = Y - C
    margin = np.minimum(F, 1.0 - F).min(axis=1) if X.shape[1] else np.full(X.shape[0], np.inf)
    return C.astype(np.int64), margin


def hypercube_rows(X: np.ndarray, N: int) -> tuple[np.ndarray, np.ndarray]:
    return _cells_rows(X, 2 * N)


# --- union of two cubes ----------------------------------------------------

def _two_cube_from_cells(C: np.ndarray, N: int) -> np.ndarray:
    """Map grid-cell indices (step ``h``) to ``[a_1..a_{D-1}, b]`` tile labels."""
    D = C.shape[1]
    if D == 1:
        # 1-D fallback: intervals [k/N, (k+1)/N)
        return C // 2
    last = C[:, -1]
    layer = last % 2
    a = C[:, :-1] - layer[:, None]
    return np.column_stack([a, last // 2])


def tile_index_two_cube(x: Sequence[float | Fraction], N: int) -> tuple[int, int]:
    """Tile of the two-cube tessellation containing ``x``, as ``(a_id, b)``.

    ``b`` in ``0..N-1`` selects the slab translation along the last axis and
    ``a_id`` in ``0..(2N+1)^(D-1) - 1`` encodes the translation
    ``a = h (n_1, .., n_{D-1}, 0)`` with ``n_k in {-1, .., 2N-1}``. For
    ``D = 1`` the unit interval is split into ``[k/N, (k+1)/N)`` and the id is
    ``(0, k)``.
    """
    xs = _fr(x)
    if not xs:
        raise PreconditionError("two-cube tiling needs at least one coordinate")
    for v in xs:
        if not 0 <= v < 1:
            raise PreconditionError("point must lie in [0, 1)^D")
    cells = np.array([[math.floor(2 * N * v) for v in xs]], dtype=np.int64)
    label = _two_cube_from_cells(cells, N)[0]
    if len(xs) == 1:
        return 0, int(label[0])
    base = 2 * N + 1
    a_id = sum(int(a + 1) * base ** k for k, a in enumerate(label[:-1]))
    return a_id, int(label[-1])


def two_cube_rows(X: np.ndarray, N: int) -> tuple[np.ndarray, np.ndarray]:
    C, margin = _cells_rows(X, 2 * N)
    return _two_cube_from_cells(C, N), margin


def in_two_cube_region(x: Sequence[float | Fraction], N: int) -> bool:
    """Membership in ``P = [0, h)^D  U  [h, 2h)^D``."""
    y = [2 * N * v for v in _fr(x)]
    return all(0 <= v < 1 for v in y) or all(1 <= v < 2 for v in y)


def two_cube_offset(a_id: int, b: int, D: int, N: int) -> list[Fraction]:
    """Translation vector of tile ``(a_id, b)`` (inverse of the tile label)."""
    h = Fraction(1, 2 * N)
    if D == 1:
        return [Fraction(b, N)]
    base = 2 * N + 1
    ns = []
    for _ in range(D - 1):
        a_id, r = divmod(a_id, base)
        ns.append(r - 1)
    return [h * n for n in ns] + [Fraction(b, N)]


# --- the polytope T --------------------------------------------------------

def tile_T_membership(x: Sequence[float | Fraction], N: int) -> bool:
    """Whether ``x`` lies in the half-open polytope ``T`` at scale ``1/(2N)``."""
    y = [2 * N * v for v in _fr(x)]
    if not all(-1 <= v < 1 for v in y):
        return False
    return all(-1 <= y[j] - y[i] < 1 for i in range(len(y)) for j in range(i + 1, len(y)))


def tile_T_membership_rows(X: np.ndarray, N: int) -> np.ndarray:
    """Vectorized float form of :func:`tile_T_membership` (one point per row)."""
    Y = 2 * N * np.asarray(X, dtype=float)
    ok = np.all((Y >= -1) & (Y < 1), axis=1)
    i, j = np.triu_indices(Y.shape[1], k=1)
    diff = Y[:, j] - Y[:, i]
    return ok & np.all((diff >= -1) & (diff < 1), axis=1)


@dataclass(frozen=True)
class TileDecomposition:
    """Lattice coordinates locating a point's T-tile.

    ``2N x = sum_i (n_i + beta_i) v_i`` with the residual
    ``x - sum_i n_i v_i / (2N)`` inside ``T``.
    """

    n: tuple[int, ...]
    beta: tuple[Fraction, ...]
    N: int

    def offset(self) -> list[Fraction]:
        """The translation ``sum_i n_i v_i / (2N)``."""
        total = sum(self.n)
        return [Fraction(total + ni, 2 * self.N) for ni in self.n]

    def residual(self, x: Sequence[float | Fraction]) -> list[Fraction]:
        return [xi - oi for xi, oi in zip(_fr(x), self.offset())]


def _beta_conditions(beta: Sequence[Fraction]) -> bool:
    S = sum(beta)
    if not (max(beta) + S < 1 and min(beta) + S >= -1):
        return False
    D = len(beta)
    return all(-1 <= beta[j] - beta[i] < 1 for i in range(D) for j in range(i + 1, D))


def tile_decompose_T(x: Sequence[float | Fraction], N: int) -> TileDecomposition:
    """Locate the unique T-tile containing ``x`` (exact arithmetic).

    Solves ``(I + J) c = 2N x`` in closed form, rounds ``c`` into integer part
    plus ``beta`` in ``(-1/2, 1/2]``, then shifts a tail (or head) of the
    beta-sorted coordinates by one when the sum conditions fail, and finally
    swaps max/min betas that sit in the wrong index order.
    """
    y = [2 * N * v for v in _fr(x)]
    D = len(y)
    if D == 0:
        raise PreconditionError("need at least one coordinate")
    d = D + 1
    s = sum(y)
    c = [v - s / d for v in y]
    n = [math.ceil(ci - _HALF) for ci in c]
    beta = [ci - ni for ci, ni in zip(c, n)]

    order = sorted(range(D), key=lambda i: beta[i])
    S = sum(beta)
    if max(beta) + S >= 1:
        j = next(p for p in range(1, D + 1) if beta[order[p - 1]] + S >= d - p)
        for i in order[j - 1:]:
            beta[i] -= 1
            n[i] += 1
    elif min(beta) + S < -1:
        j = max(p for p in range(1, D + 1) if beta[order[p - 1]] + S < -p)
        for i in order[:j]:
            beta[i] += 1
            n[i] -= 1

    lo, hi = min(beta), max(beta)
    if hi - lo == 1:
        # max-valued betas must precede min-valued ones in index order
        idx = [i for i in range(D) if beta[i] in (lo, hi)]
        n_hi = sum(1 for i in idx if beta[i] == hi)
        for rank, i in enumerate(idx):
            want = hi if rank < n_hi else lo
            n[i] += int(beta[i] - want)
            beta[i] = want

    if not _beta_conditions(beta):
        raise VerificationError(f"T-decomposition failed for x={x!r}, N={N}")
    return TileDecomposition(tuple(n), tuple(beta), N)


def simplex_hull_rows(X: np.ndarray, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized float T-tile location; returns ``(n, margin)`` per row.

    Rows that fall on a face of ``T`` (where the tie-breaking swap would be
    needed) come back with a margin near zero and must be redone exactly.
    """
    Y = 2 * N * np.asarray(X, dtype=float)
    R, D = Y.shape
    d = D + 1
    C = Y - Y.sum(axis=1, keepdims=True) / d
    n = np.ceil(C - 0.5)
    B = C - n
    order = np.argsort(B, axis=1, kind="stable")
    Bs = np.take_along_axis(B, order, axis=1)
    S = B.sum(axis=1)
    pos = np.arange(1, D + 1)
    cols = np.arange(D)[None, :]

    fail1 = Bs[:, -1] + S >= 1
    j1 = np.argmax(Bs + S[:, None] >= d - pos, axis=1)
    down = fail1[:, None] & (cols >= j1[:, None])

    fail2 = ~fail1 & (Bs[:, 0] + S < -1)
    cond = Bs + S[:, None] < -pos
    j2 = D - 1 - np.argmax(cond[:, ::-1], axis=1)
    up = fail2[:, None] & (cols <= j2[:, None])

    shift_sorted = up.astype(float) - down.astype(float)
    shift = np.empty_like(shift_sorted)
    np.put_along_axis(shift, order, shift_sorted, axis=1)
    B = B + shift
    n = n - shift

    Yr = B + B.sum(axis=1, keepdims=True)
    margin = np.minimum(Yr + 1.0, 1.0 - Yr).min(axis=1)
    if D > 1:
        i, j = np.triu_indices(D, k=1)
        diff = B[:, j] - B[:, i]
        margin = np.minimum(margin, np.minimum(diff + 1.0, 1.0 - diff).min(axis=1))
    return n.astype(np.int64), margin


def volume_T(d: int, N: int) -> Fraction:
    """Exact ``(d-1)``-volume of ``T``, namely ``d / (2N)^(d-1)``."""
    if d < 2 or N < 1:
        raise PreconditionError("volume_T needs d >= 2 and N >= 1")
    return Fraction(d, (2 * N) ** (d - 1))


def _T_offsets(n: np.ndarray, N: int) -> np.ndarray:
    return (n + n.sum(axis=1, keepdims=True)) / (2.0 * N)


def check_T_partition_rows(X: np.ndarray, N: int, margin_tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Check the T-tiling at every row of ``X``.

    Returns two boolean arrays: the round trip (the residual lies in ``T``
    and decomposes to the zero translation) and uniqueness (none of the
    ``2D`` unit changes of ``n`` lands in ``T``). Rows within ``margin_tol``
    of a face are redone in exact arithmetic.
    """
    X = np.asarray(X, dtype=float)
    R_, D = X.shape
    n, margin = simplex_hull_rows(X, N)
    res = X - _T_offsets(n, N)
    n2, margin2 = simplex_hull_rows(res, N)
    roundtrip = tile_T_membership_rows(res, N) & ~n2.any(axis=1)
    unique = np.ones(R_, dtype=bool)
    eye = np.eye(D, dtype=np.int64)
    for sign in (1, -1):
        for k in range(D):
            shifted = X - _T_offsets(n + sign * eye[k], N)
            unique &= ~tile_T_membership_rows(shifted, N)
    for r in np.flatnonzero((margin < margin_tol) | (margin2 < margin_tol)):
        x = _fr(X[r])
        dec = tile_decompose_T(x, N)
        resid = dec.residual(x)
        roundtrip[r] = tile_T_membership(resid, N) and not any(tile_decompose_T(resid, N).n)
        ok = True
        for sign in (1, -1):
            for k in range(D):
                nn = list(dec.n)
                nn[k] += sign
                off = TileDecomposition(tuple(nn), dec.beta, N).offset()
                ok &= not tile_T_membership([a - b for a, b in zip(x, off)], N)
        unique[r] = ok
    return roundtrip, unique
