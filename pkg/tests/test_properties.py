
import numpy as np
from hypothesis import given, strategies as st

from graphdiff.assignment import solve_rlap
from graphdiff.bounds import spectral_lower_bound
from graphdiff.exponential import exp_cost, fixed_alpha_exp_distance
from graphdiff.graphs import box_product, laplacian, random_bernoulli_graph
from graphdiff.linear import (CostCoeffs, crossing_alpha, fixed_alpha_linear_distance, linear_distance,
                              linear_frontier, tsgdd)
from graphdiff.results import ordered_spectra
from graphdiff.spectra import decompose, heat_kernel, spectrum

from _oracles import brute_rlap, lap_value

seeds = st.integers(0, 2**32 - 1)
probs = st.sampled_from([0.2, 0.35, 0.5, 0.75])


@st.composite
def graphs(draw, lo=1, hi=12):
    n = draw(st.integers(lo, hi))
    return random_bernoulli_graph(n, draw(probs), draw(seeds))


@st.composite
def ordered_triplet(draw, hi=10, span=5):
    n1 = draw(st.integers(2, hi))
    n2 = draw(st.integers(n1, n1 + span))
    n3 = draw(st.integers(n2, n2 + span))
    p = draw(probs)
    return [random_bernoulli_graph(n, p, draw(seeds)) for n in (n1, n2, n3)]


@given(st.integers(1, 6).flatmap(lambda n2: st.tuples(st.just(n2), st.integers(1, n2))), seeds)
def test_rlap_is_optimal(shape, seed):
    n2, n1 = shape
    c = np.random.default_rng(seed).normal(size=(n2, n1))
    a = solve_rlap(c)
    best, _ = brute_rlap(c)
    assert abs(a.total_cost - best) <= 1e-9 * max(1.0, abs(best))


@given(graphs(), graphs())
def test_frontier_matchings_are_monotone_and_ordered(g1, g2):
    f = linear_frontier(g1, g2)
    prev = None
    for e in sorted(f.entries, key=lambda e: e.alpha_found):
        m = np.array(e.matching.assign)
        assert np.all(np.diff(m) > 0)
        if prev is not None:
            assert np.all(prev <= m)
        prev = m


@given(graphs(2, 10), graphs(2, 14))
def test_frontier_envelope_equals_cold_lap(g1, g2):
    f = linear_frontier(g1, g2)
    grid = np.geomspace(1e-6, 10, 60)
    oracle = np.array([lap_value(f.s1, f.s2, a) for a in grid])
    env = f.envelope(grid)
    np.testing.assert_allclose(env, oracle, rtol=1e-9, atol=1e-9 * np.abs(oracle).max())


@given(graphs(), graphs())
def test_distance_symmetry(g1, g2):
    assert linear_distance(g1, g2).value == linear_distance(g2, g1).value
    assert tsgdd(g1, g2, 0.5).value == tsgdd(g2, g1, 0.5).value


@given(graphs(), graphs(), st.floats(0.05, 5.0))
def test_free_alpha_below_fixed_alpha(g1, g2, alpha):
    assert linear_distance(g1, g2).squared <= fixed_alpha_linear_distance(g1, g2, alpha).squared + 1e-9


@given(ordered_triplet())
def test_fixed_alpha_triangle(gs):
    d = lambda a, b: fixed_alpha_linear_distance(gs[a], gs[b], 1.0).value
    assert d(0, 2) <= d(0, 1) + d(1, 2) + 1e-9


@given(ordered_triplet(), st.sampled_from([0.5, 1.0]))
def test_time_scaled_triangle(gs, r):
    d = lambda a, b: tsgdd(gs[a], gs[b], r).value
    assert d(0, 2) <= d(0, 1) + d(1, 2) + 1e-9


@given(ordered_triplet(hi=7, span=3))
def test_fixed_alpha_exponential_triangle(gs):
    d = lambda a, b: fixed_alpha_exp_distance(gs[a], gs[b], 1.0).value
    assert d(0, 2) <= d(0, 1) + d(1, 2) + 1e-9


@given(graphs(), graphs(), st.floats(0.1, 4.0))
def test_lower_bound_property(g1, g2, alpha):
    l1, l2, _ = ordered_spectra(g1, g2)
    assert spectral_lower_bound(g1, g2, alpha) <= lap_value(l1, l2, alpha) + 1e-9


@given(st.tuples(*[st.floats(0, 20)] * 4))
def test_crossing_is_a_root(c):
    a1, a2, c1, c2 = c
    p, q = CostCoeffs(a1, 1.0, c1), CostCoeffs(a2, 1.0, c2)
    x = crossing_alpha(p, q)
    if x is not None:
        assert x > 0
        assert abs(p.value(x) - q.value(x)) <= 1e-9 * max(1.0, p.value(x), a1 * x * x, c1)


@given(graphs(), graphs(), st.floats(0.1, 5), st.floats(0, 3))
def test_exp_cost_nonnegative_and_zero_at_t0(g1, g2, alpha, t):
    l1, l2 = sorted((spectrum(g1).values, spectrum(g2).values), key=len)
    m = np.arange(l1.size)
    assert exp_cost(m, l1, l2, alpha, t) >= 0
    assert exp_cost(m, l1, l2, alpha, 0.0) == 0


@given(graphs(1, 8), st.floats(0, 2), st.floats(0, 2))
def test_heat_kernel_semigroup(g, s, t):
    d = decompose(laplacian(g))
    np.testing.assert_allclose(heat_kernel(d, s) @ heat_kernel(d, t), heat_kernel(d, s + t), atol=1e-10)


@given(graphs(1, 6), graphs(1, 6))
def test_box_product_spectrum_is_sum(g, h):
    prod = spectrum(box_product(g, h)).values
    sums = np.sort((spectrum(g).values[:, None] + spectrum(h).values[None, :]).ravel())
    np.testing.assert_allclose(prod, sums, atol=1e-9)
