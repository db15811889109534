"""Spectral diffusion distances between graphs of possibly different sizes."""
from .assignment import Assignment, WorkCounter, solve_rlap
from .bounds import (ProductBoundInputs, kronecker_witness_cost, product_special_case_bound,
                     product_upper_bound, regularized_objective, spectral_lower_bound)
from .exponential import (ExpFrontier, exp_cost, exp_distance, fixed_alpha_exp_distance,
                          hammond_distance, lap_solve_exponential, minimize_alpha_for_matching,
                          t_step)
from .graphs import (Graph, LineageFamily, box_product, complete_graph, cycle_graph, laplacian,
                     lineage_member, parse_edge_list, path_graph, random_bernoulli_graph,
                     read_edge_list, write_edge_list)
from .linear import (CostCoeffs, Frontier, FrontierEntry, cost_coeffs, crossing_alpha,
                     fixed_alpha_linear_distance, lap_solve_linear, linear_distance,
                     linear_frontier, merge_solutions, tsgdd)
from .results import DistanceResult, Variant
from .spectra import Spectrum, closed_form_spectrum, decompose, heat_kernel, spectrum

__all__ = [
    "Assignment", "WorkCounter", "solve_rlap",
    "ProductBoundInputs", "kronecker_witness_cost", "product_special_case_bound",
    "product_upper_bound", "regularized_objective", "spectral_lower_bound",
    "ExpFrontier", "exp_cost", "exp_distance", "fixed_alpha_exp_distance", "hammond_distance",
    "lap_solve_exponential", "minimize_alpha_for_matching", "t_step",
    "Graph", "LineageFamily", "box_product", "complete_graph", "cycle_graph", "laplacian",
    "lineage_member", "parse_edge_list", "path_graph", "random_bernoulli_graph",
    "read_edge_list", "write_edge_list",
    "CostCoeffs", "Frontier", "FrontierEntry", "cost_coeffs", "crossing_alpha",
    "fixed_alpha_linear_distance", "lap_solve_linear", "linear_distance", "linear_frontier",
    "merge_solutions", "tsgdd",
    "DistanceResult", "Variant",
    "Spectrum", "closed_form_spectrum", "decompose", "heat_kernel", "spectrum",
]
