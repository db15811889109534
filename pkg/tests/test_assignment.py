import numpy as np
import pytest

from graphdiff.assignment import Assignment, WorkCounter, solve_rlap, solve_rlap_indices

from _oracles import brute_rlap


def test_identity_cheap():
    c = 1.0 - np.eye(3)
    a = solve_rlap(c)
    assert a.assign == (0, 1, 2) and a.total_cost == 0.0


def test_one_by_one():
    a = solve_rlap(np.array([[5.0]]))
    assert a.assign == (0,) and a.total_cost == 5.0


def test_rectangular_matches_enumeration():
    rng = np.random.default_rng(2024)
    c = rng.random((5, 4))
    best, _ = brute_rlap(c)
    assert solve_rlap(c).total_cost == pytest.approx(best, abs=1e-12)


@pytest.mark.parametrize("n2", range(1, 8))
def test_all_small_shapes_match_enumeration(n2):
    rng = np.random.default_rng(n2)
    for n1 in range(1, n2 + 1):
        for _ in range(3):
            c = rng.integers(0, 6, size=(n2, n1)).astype(float)
            best, _ = brute_rlap(c)
            a = solve_rlap(c)
            assert a.total_cost == best
            assert len(set(a.assign)) == n1


def test_rejects_wide_or_bad_matrices():
    with pytest.raises(ValueError):
        solve_rlap(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        solve_rlap(np.zeros(3))
    with pytest.raises(ValueError):
        solve_rlap(np.array([[np.inf]]))


def test_counter_records_cubic_work():
    w = WorkCounter()
    solve_rlap_indices(np.ones((4, 2)), w)
    solve_rlap_indices(np.ones((3, 3)), w)
    assert (w.units, w.calls) == (64 + 27, 2)
    other = WorkCounter(1.0, 1)
    w.merge(other)
    assert w.as_dict() == {"units": 92.0, "calls": 3}


def test_assignment_must_be_injective():
    with pytest.raises(ValueError):
        Assignment((1, 1), 0.0)
    assert Assignment((0, 2), 1.0).same_matching([0, 2])
