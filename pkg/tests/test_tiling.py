import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrecurrence.errors import PreconditionError
from qrecurrence.oracle import same_tile_pairs, two_point_violations
from qrecurrence.tiling import (
    METHODS,
    TileDecomposition,
    check_T_partition_rows,
    hypercube_rows,
    in_two_cube_region,
    normalize_method,
    simplex_hull_rows,
    tile_decompose_T,
    tile_index_hypercube,
    tile_index_two_cube,
    tile_T_membership,
    tile_T_membership_rows,
    two_cube_offset,
    two_cube_rows,
    volume_T,
)


def grid(D, G=60):
    pts = (np.arange(G) + 0.5) / G
    return np.array(list(itertools.product(pts, repeat=D)))


def test_method_names():
    assert normalize_method("simplex-hull") == "simplex_hull"
    with pytest.raises(PreconditionError):
        normalize_method("voronoi")


# --- hypercube ---------------------------------------------------------------

def test_hypercube_examples():
    assert tile_index_hypercube([0, 0, 0], 3) == (0, 0, 0)
    assert tile_index_hypercube([0.49, 0.51], 1) == (0, 1)


def test_hypercube_tile_count():
    ids = {tile_index_hypercube(x, 2) for x in grid(2, 40)}
    assert len(ids) == 16


def test_hypercube_rows_match_exact():
    rng = np.random.default_rng(0)
    X = rng.uniform(size=(500, 3))
    C, _ = hypercube_rows(X, 3)
    assert [tuple(c) for c in C.tolist()] == [tile_index_hypercube(x, 3) for x in X]


# --- union of two cubes --------------------------------------------------------

def test_two_cube_tile_count_2d():
    ids = {tile_index_two_cube(x, 2) for x in grid(2, 80)}
    assert len(ids) == 2 * 5


@pytest.mark.parametrize("D,N", [(2, 1), (2, 3), (3, 1), (3, 2)])
def test_two_cube_tile_count_within_bound(D, N):
    ids = {tile_index_two_cube(x, N) for x in grid(D, 12 * N)}
    assert len(ids) <= N * (2 * N + 1) ** (D - 1)


def test_two_cube_one_dimensional_fallback():
    ids = [tile_index_two_cube([x], 4) for x in (0.0, 0.2, 0.25, 0.6, 0.99)]
    assert ids == [(0, 0), (0, 0), (0, 1), (0, 2), (0, 3)]
    assert len({tile_index_two_cube([x], 4) for x in np.linspace(0, 0.999, 500)}) == 4


def test_two_cube_lower_cube_example():
    x = [Fraction(1, 10), Fraction(1, 10)]
    a_id, b = tile_index_two_cube(x, 2)
    off = two_cube_offset(a_id, b, 2, 2)
    resid = [xi - oi for xi, oi in zip(x, off)]
    assert in_two_cube_region(resid, 2)
    assert all(0 <= 4 * r < 1 for r in resid)


def test_two_cube_residual_always_in_region():
    rng = np.random.default_rng(1)
    for D in (1, 2, 3, 4):
        for N in (1, 2, 3):
            for x in rng.uniform(size=(200, D)):
                a_id, b = tile_index_two_cube(x, N)
                off = two_cube_offset(a_id, b, D, N)
                resid = [Fraction(xi) - oi for xi, oi in zip(x, off)]
                if D == 1:
                    assert 0 <= resid[0] < Fraction(1, N)
                else:
                    assert in_two_cube_region(resid, N)


def test_two_cube_rejects_points_outside_unit_cube():
    with pytest.raises(PreconditionError):
        tile_index_two_cube([1.0, 0.5], 2)


def test_two_cube_rows_match_exact():
    rng = np.random.default_rng(2)
    X = rng.uniform(size=(300, 3))
    lab, _ = two_cube_rows(X, 2)
    for x, row in zip(X, lab):
        a_id, b = tile_index_two_cube(x, 2)
        assert b == row[-1]
        assert a_id == sum(int(a + 1) * 5 ** k for k, a in enumerate(row[:-1]))


# --- polytope T ----------------------------------------------------------------

def test_T_membership_examples():
    assert tile_T_membership([0, 0, 0], 2)
    assert not tile_T_membership([Fraction(1, 4), 0], 2)
    assert tile_T_membership([0, Fraction(-1, 4)], 2)
    assert not tile_T_membership([Fraction(-1, 4), 0], 2)
    assert not tile_T_membership([0.4, -0.4], 1)


def test_T_membership_rows_match_exact():
    rng = np.random.default_rng(3)
    X = rng.uniform(-0.6, 0.6, size=(2000, 3))
    fast = tile_T_membership_rows(X, 1)
    assert fast.tolist() == [tile_T_membership(x, 1) for x in X]


def test_decompose_origin_and_lattice_points():
    for D in (1, 2, 3, 4):
        for N in (1, 2, 3):
            assert tile_decompose_T([0] * D, N).n == (0,) * D
            v1 = [Fraction(2 if i == 0 else 1, 2 * N) for i in range(D)]
            dec = tile_decompose_T(v1, N)
            assert dec.n == (1,) + (0,) * (D - 1)
            assert dec.residual(v1) == [0] * D


def test_decompose_random_round_trip_exact():
    rng = np.random.default_rng(4)
    for D in (2, 3, 4):
        for N in (1, 2, 3):
            for x in rng.uniform(-2, 2, size=(150, D)):
                dec = tile_decompose_T(x, N)
                resid = dec.residual(x)
                assert tile_T_membership(resid, N)
                assert tile_decompose_T(resid, N).n == (0,) * D


rational_points = st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=12), min_size=1, max_size=5)


@settings(max_examples=300, deadline=None)
@given(rational_points, st.integers(1, 4))
def test_decompose_unique_on_faces(x, N):
    # small denominators land on faces and edges of T often
    dec = tile_decompose_T(x, N)
    assert tile_T_membership(dec.residual(x), N)
    D = len(x)
    for k in range(D):
        for sign in (1, -1):
            n = list(dec.n)
            n[k] += sign
            other = TileDecomposition(tuple(n), dec.beta, N)
            assert not tile_T_membership(other.residual(x), N)


def test_beta_conditions_hold():
    rng = np.random.default_rng(5)
    for x in rng.uniform(-1, 1, size=(500, 4)):
        b = tile_decompose_T(x, 2).beta
        s = sum(b)
        assert max(b) + s < 1 and min(b) + s >= -1
        assert all(-1 <= b[j] - b[i] < 1 for i in range(4) for j in range(i + 1, 4))


def test_vectorized_decomposition_matches_exact():
    rng = np.random.default_rng(6)
    X = rng.uniform(-2, 2, size=(1000, 3))
    n, margin = simplex_hull_rows(X, 2)
    for x, row, m in zip(X, n, margin):
        if m > 1e-9:
            assert tuple(row) == tile_decompose_T(x, 2).n


def test_partition_rows():
    rng = np.random.default_rng(7)
    for D in (1, 2, 3, 4):
        X = rng.uniform(-2, 2, size=(5000, D))
        roundtrip, unique = check_T_partition_rows(X, 2)
        assert roundtrip.all() and unique.all()


# --- shared tile property --------------------------------------------------------

@pytest.mark.parametrize("method", METHODS)
@pytest.mark.parametrize("D", [1, 2, 3, 4])
def test_two_points_in_one_tile_are_close(method, D):
    for N in (1, 2, 3):
        Y, Z = same_tile_pairs(method, D, N, 10_000, seed=11)
        assert two_point_violations(Y, Z, N) == 0


# --- volume ------------------------------------------------------------------

def test_volume_examples():
    assert volume_T(3, 1) == Fraction(3, 4)
    assert volume_T(2, 1) == 1
    assert volume_T(4, 2) == Fraction(1, 16)


def test_volume_tiles_space():
    # a fundamental domain of the lattice spanned by v_i / (2N) has volume d / (2N)^(d-1)
    for d in range(2, 7):
        basis = (np.ones((d - 1, d - 1)) + np.eye(d - 1)) / 4
        assert float(volume_T(d, 2)) == pytest.approx(abs(np.linalg.det(basis)))
