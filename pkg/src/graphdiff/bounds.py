"""Cheap bounds on the diffusion distance and the regularized objective.

All quantities are evaluated from Laplacian spectra. Heat kernels of box
products factor as Kronecker products, so product-graph costs reduce to sums
over pairs of factor eigenvalues.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .assignment import Assignment
from .exponential import exp_cost
from .results import ordered_spectra
from .spectra import kernel_frobenius_norm, spectrum


def spectral_lower_bound(g1, g2, alpha: float) -> float:
    """Linear cost with every small-graph eigenvalue sent to its nearest scaled partner.

    Collisions are allowed, so this relaxes the assignment and bounds the
    fixed-alpha linear objective from below.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    l1, l2, _ = ordered_spectra(g1, g2)
    target = l1 / alpha ** 2  # (l1/alpha - alpha l2)^2 = alpha^2 (l1/alpha^2 - l2)^2
    pos = np.searchsorted(l2, target)
    left = l2[np.clip(pos - 1, 0, l2.size - 1)]
    right = l2[np.clip(pos, 0, l2.size - 1)]
    nearest = np.where(np.abs(target - left) <= np.abs(target - right), left, right)
    return float(np.sum((l1 / alpha - alpha * nearest) ** 2))


@dataclass(frozen=True)
class ProductBoundInputs:
    """Factors of G1 = g1a x g1b and G2 = g2a x g2b, with witnesses for the two factor pairs.

    Each factor pair is passed smaller graph first; ``p1`` matches g1a into
    g2a and ``p2`` matches g1b into g2b.
    """
    g1a: object
    g1b: object
    g2a: object
    g2b: object
    t_c: float
    alpha_c: float
    p1: tuple
    p2: tuple
    mix: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.mix <= 1.0:
            raise ValueError(f"mixing weight must lie in [0, 1], got {self.mix}")
        if self.t_c < 0 or self.alpha_c <= 0:
            raise ValueError("need t_c >= 0 and alpha_c > 0")
        for p, a, b in ((self.p1, self.g1a, self.g2a), (self.p2, self.g1b, self.g2b)):
            na, nb = spectrum(a).n, spectrum(b).n
            idx = Assignment(tuple(p), math.nan).array
            if idx.size != na or (idx.size and (idx.min() < 0 or idx.max() >= nb)):
                raise ValueError("witness does not fit its factor pair")


def _factor_distance(m, a, b, t, alpha) -> float:
    return math.sqrt(exp_cost(m, spectrum(a).values, spectrum(b).values, alpha, t))


def product_upper_bound(inp: ProductBoundInputs) -> float:
    t, a = inp.t_c, inp.alpha_c
    d1 = _factor_distance(inp.p1, inp.g1a, inp.g2a, t, a)
    d2 = _factor_distance(inp.p2, inp.g1b, inp.g2b, t, a)
    norms_b = kernel_frobenius_norm(inp.g1b, t / a) + kernel_frobenius_norm(inp.g2b, t * a)
    norms_a = kernel_frobenius_norm(inp.g1a, t / a) + kernel_frobenius_norm(inp.g2a, t * a)
    return inp.mix * norms_b * d1 + (1.0 - inp.mix) * norms_a * d2


def kronecker_witness_cost(inp: ProductBoundInputs) -> float:
    """Unsquared cost of the product pair under the witness p1 (x) p2.

    Product eigenvalues are sums of factor eigenvalues, so the kernels are
    outer products of the factor kernel diagonals.
    """
    t, a = inp.t_c, inp.alpha_c
    x = np.exp((t / a) * spectrum(inp.g1a).values)
    y = np.exp((t / a) * spectrum(inp.g1b).values)
    u = np.exp((t * a) * spectrum(inp.g2a).values)[np.asarray(inp.p1, dtype=np.intp)]
    v = np.exp((t * a) * spectrum(inp.g2b).values)[np.asarray(inp.p2, dtype=np.intp)]
    diff = np.outer(x, y) - np.outer(u, v)
    return float(np.sqrt(np.sum(diff * diff)))


def product_special_case_bound(g1, g2, t_c: float, alpha_c: float, matching=None,
                               form: str = "sum") -> float:
    """Bound on the distance between g1 x g1 and g2 x g2 from the factor pair alone.

    ``form="sum"`` multiplies the factor distance by the sum of the two kernel
    norms, which is what the two-term product inequality gives when both
    factors coincide. ``form="min"`` uses the smaller norm instead; that value
    is not an upper bound in general and is kept for comparison only.
    Without a witness the factor distance is the best assignment at (t_c, alpha_c).
    """
    from .exponential import lap_solve_exponential

    if t_c < 0 or alpha_c <= 0:
        raise ValueError("need t_c >= 0 and alpha_c > 0")
    if form not in ("sum", "min"):
        raise ValueError(f"form must be 'sum' or 'min', got {form!r}")
    l1, l2, _ = ordered_spectra(g1, g2)
    if matching is None:
        matching = lap_solve_exponential(l1, l2, alpha_c, t_c).array
    d = math.sqrt(exp_cost(matching, l1, l2, alpha_c, t_c))
    n1, n2 = kernel_frobenius_norm(l1, t_c / alpha_c), kernel_frobenius_norm(l2, t_c * alpha_c)
    return (n1 + n2) * d if form == "sum" else min(n1, n2) * d


def regularized_objective(g1, g2, m, alpha: float, t: float) -> float:
    """Kernel mismatch plus the cost of rescaling time on each side.

    Terms: ||P e^{t/a L1} - e^{t a L2} P||, ||e^{t/a L1} - e^{t L1}||, and
    ||e^{t L2} P - e^{t a L2} P||, all Frobenius and evaluated on eigenvalues.
    """
    if alpha <= 0 or t < 0:
        raise ValueError(f"need alpha > 0 and t >= 0, got alpha={alpha}, t={t}")
    l1, l2, _ = ordered_spectra(g1, g2)
    idx = m.array if isinstance(m, Assignment) else np.asarray(m, dtype=np.intp)
    mismatch = math.sqrt(exp_cost(idx, l1, l2, alpha, t))
    reg1 = np.exp((t / alpha) * l1) - np.exp(t * l1)
    matched = l2[idx]
    reg2 = np.exp(t * matched) - np.exp((t * alpha) * matched)
    return mismatch + float(np.sqrt(np.dot(reg1, reg1))) + float(np.sqrt(np.dot(reg2, reg2)))
