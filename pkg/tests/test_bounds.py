import math

import numpy as np
import pytest

from graphdiff.bounds import (ProductBoundInputs, kronecker_witness_cost, product_special_case_bound,
                              product_upper_bound, regularized_objective, spectral_lower_bound)
from graphdiff.exponential import exp_cost, exp_distance, lap_solve_exponential
from graphdiff.graphs import Graph, box_product, complete_graph, cycle_graph, path_graph, random_bernoulli_graph
from graphdiff.linear import fixed_alpha_linear_distance
from graphdiff.results import ordered_spectra
from graphdiff.spectra import spectrum

from _oracles import exp_lap_value, lap_value

# 2/e - 1/e^2 + 1/e^3 - 2/e^6, summed by hand from the three eigenvalue terms.
REGULARIZED_PA2_PA3 = 0.6452531631208032


def test_lower_bound_examples():
    g = random_bernoulli_graph(10, 0.4, seed=1)
    assert spectral_lower_bound(g, g, 1.0) == 0.0
    assert spectral_lower_bound(path_graph(2), path_graph(3), 1.0) == pytest.approx(1.0)
    assert spectral_lower_bound(cycle_graph(3), complete_graph(4), 1.0) == pytest.approx(2.0)
    assert fixed_alpha_linear_distance(cycle_graph(3), complete_graph(4), 1.0).squared == pytest.approx(2.0)


def test_lower_bound_below_lap():
    for seed in range(30):
        rng = np.random.default_rng(seed)
        n1 = int(rng.integers(2, 15))
        g1 = random_bernoulli_graph(n1, 0.5, seed=seed)
        g2 = random_bernoulli_graph(n1 + int(rng.integers(0, 10)), 0.4, seed=seed + 100)
        alpha = float(rng.uniform(0.2, 3.0))
        l1, l2, _ = ordered_spectra(g1, g2)
        assert spectral_lower_bound(g1, g2, alpha) <= lap_value(l1, l2, alpha) + 1e-9


def test_lower_bound_rejects_bad_alpha():
    with pytest.raises(ValueError):
        spectral_lower_bound(path_graph(2), path_graph(3), 0.0)


def _inputs(ga, gb, ha, hb, t, a, mix=0.5):
    p1 = lap_solve_exponential(spectrum(ga).values, spectrum(ha).values, a, t).assign
    p2 = lap_solve_exponential(spectrum(gb).values, spectrum(hb).values, a, t).assign
    return ProductBoundInputs(ga, gb, ha, hb, t, a, p1, p2, mix)


def test_identical_factors_give_zero_bound():
    g, h = cycle_graph(4), path_graph(3)
    inp = ProductBoundInputs(g, h, g, h, 0.5, 1.0, tuple(range(4)), tuple(range(3)))
    assert product_upper_bound(inp) == 0.0
    assert kronecker_witness_cost(inp) == 0.0


def test_mix_one_keeps_first_term_only():
    g, h = path_graph(3), path_graph(4)
    full = _inputs(g, g, h, h, 0.4, 1.1, mix=1.0)
    assert product_upper_bound(full) > 0
    same_second = ProductBoundInputs(g, g, h, h, 0.4, 1.1, full.p1, tuple(range(3)), 1.0)
    assert product_upper_bound(same_second) == product_upper_bound(full)


def test_inputs_are_validated():
    g, h = path_graph(2), path_graph(3)
    with pytest.raises(ValueError):
        ProductBoundInputs(g, g, h, h, 0.5, 1.0, (0, 2), (0, 2), mix=1.5)
    with pytest.raises(ValueError):
        ProductBoundInputs(g, g, h, h, 0.5, 1.0, (0, 5), (0, 2))
    with pytest.raises(ValueError):
        ProductBoundInputs(g, g, h, h, -0.5, 1.0, (0, 2), (0, 2))


def test_product_bound_chain_on_paths():
    # Witness cost on the product pair bounds the product distance at (t, a),
    # and the factor bound dominates the witness cost.
    pa7, pa8 = path_graph(7), path_graph(8)
    opt = exp_distance(pa7, pa8)
    t, a = opt.t_star, opt.alpha_star
    inp = _inputs(pa7, pa7, pa8, pa8, t, a)
    sq7, sq8 = box_product(pa7, pa7), box_product(pa8, pa8)
    direct = math.sqrt(exp_lap_value(spectrum(sq7).values, spectrum(sq8).values, a, t))
    witness = kronecker_witness_cost(inp)
    bound = product_upper_bound(inp)
    assert math.isfinite(bound)
    assert direct <= witness + 1e-12
    assert witness <= bound + 1e-12


def test_witness_cost_matches_product_spectra():
    g1, g2 = path_graph(3), path_graph(4)
    inp = _inputs(g1, g1, g2, g2, 0.7, 0.9)
    l1, l2 = spectrum(g1).values, spectrum(g2).values
    x = (l1[:, None] + l1[None, :]).ravel()
    y = (l2[:, None] + l2[None, :])[np.ix_(inp.p1, inp.p2)].ravel()
    d = np.exp(0.7 / 0.9 * x) - np.exp(0.7 * 0.9 * y)
    assert kronecker_witness_cost(inp) == pytest.approx(np.linalg.norm(d), rel=1e-12)


def test_special_case_bound():
    g = path_graph(5)
    assert product_special_case_bound(g, g, 0.5, 1.0) == 0.0
    assert product_special_case_bound(Graph(1), Graph(1), 0.5, 1.0) == 0.0
    pa5, pa6 = path_graph(5), path_graph(6)
    t, a = 0.4, 1.05
    sq5, sq6 = box_product(pa5, pa5), box_product(pa6, pa6)
    direct = math.sqrt(exp_lap_value(spectrum(sq5).values, spectrum(sq6).values, a, t))
    assert product_special_case_bound(pa5, pa6, t, a) >= direct
    # The smaller-norm form is not a bound here.
    assert product_special_case_bound(pa5, pa6, t, a, form="min") < direct
    with pytest.raises(ValueError):
        product_special_case_bound(pa5, pa6, 0.4, 0.0)
    with pytest.raises(ValueError):
        product_special_case_bound(pa5, pa6, 0.4, 1.0, form="max")


def test_regularized_collapses_at_alpha_one():
    g1, g2 = path_graph(3), path_graph(5)
    m = (1, 3, 4)
    l1, l2 = spectrum(g1).values, spectrum(g2).values
    assert regularized_objective(g1, g2, m, 1.0, 0.8) == pytest.approx(math.sqrt(exp_cost(m, l1, l2, 1.0, 0.8)))


def test_regularized_vanishes_at_zero_time():
    assert regularized_objective(path_graph(3), path_graph(5), (0, 2, 4), 1.7, 0.0) == 0.0


def test_regularized_frozen_value():
    assert regularized_objective(path_graph(2), path_graph(3), (0, 2), 2.0, 1.0) == pytest.approx(
        REGULARIZED_PA2_PA3, rel=1e-13)
    e = math.exp
    assert REGULARIZED_PA2_PA3 == pytest.approx(2 * e(-1) - e(-2) + e(-3) - 2 * e(-6), rel=1e-15)


def test_regularized_rejects_bad_arguments():
    with pytest.raises(ValueError):
        regularized_objective(path_graph(2), path_graph(3), (0, 2), 0.0, 1.0)
