import dataclasses
import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from qrecurrence.errors import PreconditionError
from qrecurrence.recurrence import (
    arc_width,
    find_recurrence_constructive,
    is_state_recurrent_at,
    is_system_recurrent_at,
    verify_certificate,
    witness_nontrivial,
    worst_case_many,
    worst_case_trace_distance,
)
from qrecurrence.spectral import (
    MixedEnsemble,
    PureState,
    make_spectrum,
    spectrum_from_rationals,
    trace_distance_mixed,
    trace_distance_pure,
)
from qrecurrence.tiling import METHODS

PI = math.pi


def hull_distance(points):
    """Distance from the origin to the convex hull of planar points, by brute force."""
    P = [np.array([z.real, z.imag]) for z in points]
    for a, b, c in itertools.combinations(P, 3):
        M = np.column_stack([b - a, c - a])
        if abs(np.linalg.det(M)) < 1e-14:
            continue
        u, v = np.linalg.solve(M, -a)
        if u >= -1e-12 and v >= -1e-12 and u + v <= 1 + 1e-12:
            return 0.0
    best = min(np.linalg.norm(p) for p in P)
    for a, b in itertools.combinations(P, 2):
        ab = b - a
        t = np.clip(-a @ ab / (ab @ ab), 0, 1) if ab @ ab > 0 else 0
        best = min(best, np.linalg.norm(a + t * ab))
    return best


# --- worst case over states -------------------------------------------------------

def test_worst_case_examples():
    assert worst_case_trace_distance(make_spectrum([2.0]), 1.3) == 0
    assert worst_case_trace_distance(make_spectrum([0, PI], "discrete"), 1) == pytest.approx(1)
    assert worst_case_trace_distance(make_spectrum([0, PI / 2], "discrete"), 1) == pytest.approx(1 / math.sqrt(2))


def test_worst_case_matches_hull_oracle():
    rng = np.random.default_rng(1)
    for _ in range(300):
        d = int(rng.integers(1, 7))
        s = make_spectrum(rng.uniform(-3, 3, d))
        t = rng.uniform(0, 5)
        z = np.exp(1j * (s.values - s.values[0]) * t)
        r = hull_distance(z)
        assert worst_case_trace_distance(s, t) == pytest.approx(math.sqrt(max(0.0, 1 - r * r)), abs=1e-9)


def test_worst_case_dominates_random_states():
    rng = np.random.default_rng(2)
    for _ in range(100):
        d = int(rng.integers(2, 7))
        s = make_spectrum(rng.uniform(-3, 3, d))
        t = rng.uniform(0, 20)
        wc = worst_case_trace_distance(s, t)
        for _ in range(20):
            c = rng.normal(size=d) + 1j * rng.normal(size=d)
            assert trace_distance_pure(PureState(c / np.linalg.norm(c)), s, t) <= wc + 1e-9


def test_worst_case_vectorized():
    s = make_spectrum([0, 0.4, 2.2, 3.1])
    ts = np.linspace(0, 30, 301)
    assert np.allclose(worst_case_many(s, ts), [worst_case_trace_distance(s, t) for t in ts], atol=1e-15)


def test_arc_width():
    assert arc_width(np.array([0.1, 0.3])) == pytest.approx(0.2)
    assert arc_width(np.array([6.2, 0.1])) == pytest.approx(0.1 + 2 * PI - 6.2)
    assert arc_width(np.array([1.0])) == 0


# --- definitions ---------------------------------------------------------------

def test_state_recurrence_examples():
    s = make_spectrum([0, 1])
    plus = PureState.equal_superposition(2, [0, 1])
    r = is_state_recurrent_at(plus, s, 0.5, 2 * PI, [PI])
    assert r.recurrent and r.witness_time == PI and r.status == "recurrent"
    r = is_state_recurrent_at(PureState.basis(2, 0), s, 0.1, 5.0, [1.0, 2.0])
    assert not r.recurrent and r.status == "trivial"
    r = is_state_recurrent_at(plus, s, 0.99, 2 * PI, [0.01])
    assert not r.recurrent


def test_state_recurrence_flags():
    s = make_spectrum([0, 1])
    plus = PureState.equal_superposition(2, [0, 1])
    assert is_state_recurrent_at(plus, s, 0.5, 2 * PI, []).status == "trivial_or_not_recurrent"
    assert is_state_recurrent_at(plus, s, 0.5, PI, [1.0]).status == "not_recurrent"
    with pytest.raises(PreconditionError):
        is_state_recurrent_at(plus, s, 0.5, 2 * PI, [2 * PI])
    with pytest.raises(PreconditionError):
        is_state_recurrent_at(plus, make_spectrum([0, 1], "discrete"), 0.5, 6, [1.5])


def test_system_recurrence_examples():
    s = make_spectrum([0, 1])
    r = is_system_recurrent_at(s, 0.5, 2 * PI, [PI])
    assert r.recurrent and r.witness_worst_case == pytest.approx(1)
    r = is_system_recurrent_at(s, 0.5, 0.0, [])
    assert not r.recurrent and r.status == "trivial_or_not_recurrent"
    s3 = make_spectrum([0, 1 / 3, 1])
    grid = np.arange(1, 189) * 0.1
    r = is_system_recurrent_at(s3, 0.2, 6 * PI, grid)
    assert r.recurrent and r.worst_case_at_t < 1e-12 and not r.heuristic


def test_system_recurrence_default_grid_is_heuristic():
    r = is_system_recurrent_at(make_spectrum([0, 1]), 0.3, 2 * PI)
    assert r.recurrent and r.heuristic and 0 < r.witness_time < 2 * PI


def test_system_not_recurrent_when_far():
    r = is_system_recurrent_at(make_spectrum([0, 1]), 0.3, PI, [1.0])
    assert not r.recurrent and r.status == "not_recurrent"


def test_witness_continuous():
    state, t = witness_nontrivial(make_spectrum([0, 1]), 0.5)
    assert t == pytest.approx(PI)
    assert trace_distance_pure(state, make_spectrum([0, 1]), t) == pytest.approx(1)
    s = make_spectrum([0, 0.7, 2])
    state, t = witness_nontrivial(s, 0.9)
    assert math.sin(2 * t / 2) > 0.9 and t < 2 * PI / 2
    assert trace_distance_pure(state, s, t) > 0.9


def test_witness_discrete():
    s = make_spectrum([0, PI], "discrete")
    state, m = witness_nontrivial(s, 0.5)
    assert m == 1 and trace_distance_pure(state, s, m) == pytest.approx(1)
    with pytest.raises(PreconditionError):
        witness_nontrivial(s, 0.6)


def test_witness_discrete_random():
    rng = np.random.default_rng(3)
    for _ in range(200):
        s = make_spectrum(rng.uniform(0, 2 * PI, int(rng.integers(2, 7))), "discrete")
        state, m = witness_nontrivial(s, 0.5)
        assert isinstance(m, int) and m >= 1
        assert trace_distance_pure(state, s, m) > 0.5


# --- certificates --------------------------------------------------------------

def test_qubit_certificate():
    s = make_spectrum([0, 1])
    c = find_recurrence_constructive(s, 0.3)
    assert c.multiplier == 1 and c.recurrence_time == pytest.approx(2 * PI)
    assert c.worst_case_at_tr < 1e-12
    assert c.witness_time == pytest.approx(PI)
    assert verify_certificate(c, s) == (True, [])


def test_commensurate_three_levels():
    s = make_spectrum([0, 0.5, 1])
    c = find_recurrence_constructive(s, 0.1)
    assert c.multiplier == 2 and c.max_phase_error == pytest.approx(0, abs=1e-12)


def test_rational_spectrum_certificate():
    s = spectrum_from_rationals([(0, 1), (1, 3), (1, 1)])
    c = find_recurrence_constructive(s, 0.05)
    assert c.multiplier == 3 and c.worst_case_at_tr < 1e-12


def test_discrete_example_against_scan():
    s = make_spectrum([0, 2 * PI * (math.sqrt(2) - 1), PI], "discrete")
    c = find_recurrence_constructive(s, 0.4)
    assert isinstance(c.recurrence_time, int)
    assert c.recurrence_time <= c.bound_value
    assert worst_case_trace_distance(s, c.recurrence_time) <= 0.4
    m = np.arange(1, c.recurrence_time)
    assert (worst_case_many(s, m) > 0.4).any()


def test_corrupted_certificates():
    s = make_spectrum([0, 1])
    c = find_recurrence_constructive(s, 0.3)
    halved = dataclasses.replace(c, recurrence_time=c.recurrence_time / 2)
    ok, bad = verify_certificate(halved, s)
    assert not ok
    assert any(v.startswith("phase_condition") for v in bad)
    assert any(v.startswith("worst_case") for v in bad)
    late = dataclasses.replace(c, witness_time=c.recurrence_time)
    ok, bad = verify_certificate(late, s)
    assert not ok and any(v.startswith("witness_order") for v in bad)
    weak = dataclasses.replace(c, witness_state=PureState.basis(2, 0))
    assert any(v.startswith("witness_excursion") for v in verify_certificate(weak, s)[1])
    low = dataclasses.replace(c, bound_value=1.0)
    assert any(v.startswith("bound") for v in verify_certificate(low, s)[1])


def test_certificate_mode_mismatch():
    c = find_recurrence_constructive(make_spectrum([0, 1]), 0.3)
    ok, bad = verify_certificate(c, make_spectrum([0, 1], "discrete"))
    assert not ok and bad[0].startswith("mode")


def test_preconditions():
    with pytest.raises(PreconditionError):
        find_recurrence_constructive(make_spectrum([1.0]), 0.3)
    with pytest.raises(PreconditionError):
        find_recurrence_constructive(make_spectrum([0, 1], "discrete"), 0.6)
    with pytest.raises(PreconditionError):
        find_recurrence_constructive(make_spectrum([0, 1]), 1.0)


def test_theorem_labels():
    s2 = make_spectrum([0, 1])
    assert find_recurrence_constructive(s2, 0.3, "two_cube").bound_used == "T1"
    s3 = make_spectrum([0, 0.3, 1])
    labels = [find_recurrence_constructive(s3, 0.3, m).bound_used for m in METHODS]
    assert labels == ["T1", "T3a", "T3b"]
    sd = make_spectrum([0, 1, 2], "discrete")
    labels = [find_recurrence_constructive(sd, 0.3, m).bound_used for m in METHODS]
    assert labels == ["T2", "T4a", "T4b"]


def test_all_methods_keeps_smallest_q():
    rng = np.random.default_rng(4)
    for _ in range(20):
        s = make_spectrum(rng.uniform(-2, 2, 5))
        qs = [find_recurrence_constructive(s, 0.2, m).multiplier for m in METHODS]
        c = find_recurrence_constructive(s, 0.2, "all")
        assert c.multiplier == min(qs)
        assert c.recurrence_time <= c.bound_value


@pytest.mark.parametrize("mode", ["continuous", "discrete"])
def test_random_certificates_and_mixed_states(mode):
    rng = np.random.default_rng(5)
    for _ in range(40):
        d = int(rng.integers(2, 6))
        eps = float(rng.choice([0.5, 0.3, 0.2]))
        vals = rng.uniform(-3, 3, d) if mode == "continuous" else rng.uniform(0, 2 * PI, d)
        s = make_spectrum(vals, mode)
        c = find_recurrence_constructive(s, eps)
        assert verify_certificate(c, s)[0]
        assert c.max_phase_error <= 2 * eps + 1e-9
        # every mixed state is back within eps at the certified time
        for _ in range(3):
            comps = []
            for w in rng.dirichlet(np.ones(3)):
                a = rng.normal(size=d) + 1j * rng.normal(size=d)
                comps.append((w, a / np.linalg.norm(a)))
            assert trace_distance_mixed(MixedEnsemble(comps), s, c.recurrence_time) <= eps + 1e-9


def test_free_dimension_count():
    c = find_recurrence_constructive(make_spectrum([0, 0.3, 0.5, 1]), 0.3)
    assert c.free_dimensions == 2
    c = find_recurrence_constructive(make_spectrum([0, 0.3, 0.5, 1], "discrete"), 0.3)
    assert c.free_dimensions == 3


def test_exact_boundary_phase():
    # eps exactly at a reachable distance: classification uses <= for recurrence
    s = spectrum_from_rationals([Fraction(0), Fraction(1)])
    c = find_recurrence_constructive(s, 0.5)
    assert c.recurrence_time == pytest.approx(2 * PI)
