"""Experiment harness: triplet census, lineage tables, sweeps and the golden-section baseline.

Every experiment is a pure function of its config. Rows are sorted by key
before they are written, so serial and parallel runs produce the same bytes.
"""
from __future__ import annotations

import csv
import io
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .assignment import WorkCounter
from .bounds import product_special_case_bound
from .exponential import exp_distance, fixed_alpha_exp_distance, hammond_distance
from .graphs import LineageFamily, lineage_member, random_bernoulli_graph
from .linear import (fixed_alpha_linear_distance, frontier_from_spectra, lap_solve_linear,
                     linear_distance, tsgdd)
from .results import ALPHA_HIGH, ALPHA_LOW, ordered_spectra

CSV_VERSION = "# graphdiff-csv v1"
VARIANTS = ("linear", "linear-fixed", "tsgdd", "exp", "exp-fixed", "hammond")
ORDERINGS = ("123", "213", "321")


@dataclass
class ExperimentConfig:
    kind: str = "triplets"
    seed: int = 0
    variant: str = "linear"
    count: int = 2000
    p_list: tuple = (0.25, 0.5, 0.75)
    n1_range: tuple = (5, 30)
    span: int = 30
    families: tuple = ("grid", "path", "cycle", "barbell")
    index_range: tuple = (1, 12)
    n_range: tuple = (20, 60)
    alpha: float = 1.0
    r: float = 0.5
    dt: float = 0.01
    alpha_window: tuple = (ALPHA_LOW, ALPHA_HIGH)
    out: str | None = None
    jobs: int = 1
    squared: bool = False

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.count < 1 or not self.p_list:
            raise ValueError("need at least one triplet and one edge probability")
        for lo, hi in (self.n1_range, self.index_range, self.n_range):
            if lo > hi:
                raise ValueError(f"empty range ({lo}, {hi})")
        if not 0 < self.alpha_window[0] < self.alpha_window[1]:
            raise ValueError(f"bad alpha window {self.alpha_window}")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")


def distance(variant: str, g1, g2, cfg: ExperimentConfig | None = None, counter=None):
    """Dispatch to one distance variant with the config's parameters."""
    cfg = cfg or ExperimentConfig(variant=variant)
    lo, hi = cfg.alpha_window
    if variant == "linear":
        return linear_distance(g1, g2, lo, hi, counter)
    if variant == "linear-fixed":
        return fixed_alpha_linear_distance(g1, g2, cfg.alpha, counter)
    if variant == "tsgdd":
        return tsgdd(g1, g2, cfg.r, counter)
    if variant == "exp":
        return exp_distance(g1, g2, dt=cfg.dt, alpha_window=(lo, hi), counter=counter)
    if variant == "exp-fixed":
        return fixed_alpha_exp_distance(g1, g2, cfg.alpha, counter)
    if variant == "hammond":
        return hammond_distance(g1, g2)
    raise ValueError(f"unknown variant {variant!r}")


def _map(fn, items, jobs: int) -> list:
    if jobs <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


# -- triangle-inequality census -----------------------------------------------

@dataclass(frozen=True)
class Triplet:
    index: int
    sizes: tuple
    p: float
    seeds: tuple


def triplet_plan(cfg: ExperimentConfig) -> list:
    """Sizes n1 <= n2 <= n3, each at most ``span`` above the last, with per-graph seeds."""
    plan = []
    for k in range(cfg.count):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([cfg.seed, k])))
        n1 = int(rng.integers(cfg.n1_range[0], cfg.n1_range[1] + 1))
        n2 = int(rng.integers(n1, n1 + cfg.span + 1))
        n3 = int(rng.integers(n2, n2 + cfg.span + 1))
        p = float(cfg.p_list[k % len(cfg.p_list)])
        seeds = tuple(int(s) for s in rng.integers(0, 2**63 - 1, size=3))
        plan.append(Triplet(k, (n1, n2, n3), p, seeds))
    return plan


def _triplet_distances(args):
    trip, cfg = args
    graphs = [random_bernoulli_graph(n, trip.p, s) for n, s in zip(trip.sizes, trip.seeds)]
    d = {}
    for a, b in ((0, 1), (1, 2), (0, 2)):
        d[a, b] = d[b, a] = distance(cfg.variant, graphs[a], graphs[b], cfg).value
    return trip, d


def discrepancy(d_ab: float, d_bc: float, d_ac: float):
    """d_ac / (d_ab + d_bc); None when the denominator vanishes."""
    den = d_ab + d_bc
    if den <= 0:
        return None
    return d_ac / den


def triplet_discrepancy_experiment(cfg: ExperimentConfig, orderings=("123",)) -> list:
    """One row per triplet and ordering. Each pair is computed once and reused."""
    for o in orderings:
        if o not in ORDERINGS:
            raise ValueError(f"ordering must be one of {ORDERINGS}, got {o!r}")
    results = _map(_triplet_distances, [(s, cfg) for s in triplet_plan(cfg)], cfg.jobs)
    rows = []
    for trip, d in results:
        for o in orderings:
            a, b, c = (int(ch) - 1 for ch in o)
            d_ab, d_bc, d_ac = d[a, b], d[b, c], d[a, c]
            if cfg.squared:
                d_ab, d_bc, d_ac = d_ab ** 2, d_bc ** 2, d_ac ** 2
            disc = discrepancy(d_ab, d_bc, d_ac)
            rows.append({
                "index": trip.index, "ordering": o,
                "n1": trip.sizes[a], "n2": trip.sizes[b], "n3": trip.sizes[c],
                "p": trip.p, "seed": cfg.seed, "variant": cfg.variant,
                "d12": d_ab, "d23": d_bc, "d13": d_ac,
                "disc": math.nan if disc is None else disc,
                "flag": "zero-denominator" if disc is None else "",
            })
    rows.sort(key=lambda r: (r["ordering"], r["index"]))
    return rows


def discrepancy_summary(rows) -> dict:
    discs = [r["disc"] for r in rows if not r["flag"]]
    if not discs:
        return {"rows": len(rows), "valid": 0, "flagged": len(rows)}
    return {
        "rows": len(rows),
        "valid": len(discs),
        "flagged": len(rows) - len(discs),
        "fraction_satisfied": sum(x <= 1.0 for x in discs) / len(discs),
        "max_disc": max(discs),
        "median_disc": statistics.median(discs),
    }


# -- lineages -----------------------------------------------------------------

def lineage_graph(family, i: int):
    """Member i of a family at matched size: Sq_i, Pa_{i^2}, Cy_{i^2} and Ba_i all have i^2 vertices."""
    family = LineageFamily.parse(family) if isinstance(family, str) else family
    if family in (LineageFamily.PATH, LineageFamily.CYCLE):
        return lineage_member(family, i * i, allow_degenerate=True)
    return lineage_member(family, i, allow_degenerate=True)


def _lineage_cell(args):
    fa, fb, i, cfg = args
    r = distance("exp", lineage_graph(fa, i), lineage_graph(fb, i + 1), cfg)
    return (fa, fb, i), r.value


def lineage_table(cfg: ExperimentConfig) -> dict:
    """Mean over i of D(F_i, G_{i+1}) for every ordered pair of families.

    Returns {"cells": {(F, G): mean}, "squared_cells": ..., "rows": per-i rows}.
    """
    fams = [LineageFamily.parse(f).value for f in cfg.families]
    lo, hi = cfg.index_range
    jobs = [(fa, fb, i, cfg) for fa in fams for fb in fams for i in range(lo, hi + 1)]
    values = dict(_map(_lineage_cell, jobs, cfg.jobs))
    cells, squared = {}, {}
    rows = []
    for fa in fams:
        for fb in fams:
            ds = [values[fa, fb, i] for i in range(lo, hi + 1)]
            cells[fa, fb] = float(np.mean(ds))
            squared[fa, fb] = float(np.mean(np.square(ds)))
            rows.extend({"row": fa, "col": fb, "i": i, "distance": values[fa, fb, i]}
                        for i in range(lo, hi + 1))
    return {"cells": cells, "squared_cells": squared, "rows": rows, "families": fams}


def diagonal_dominance(cells: dict, families) -> dict:
    """For each row family, whether its diagonal cell is strictly smallest in the row."""
    out = {}
    for fa in families:
        diag = cells[fa, fa]
        out[fa] = all(diag < cells[fa, fb] for fb in families if fb != fa)
    return out


def _convergence_row(args):
    fa, fb, n, cfg = args
    r = distance("exp", lineage_member(fa, n), lineage_member(fb, n + 1), cfg)
    return {"n": n, "distance": r.value, "alpha_star": r.alpha_star, "t_star": r.t_star}


def convergence_sweep(family_a, family_b, n_range, cfg: ExperimentConfig | None = None) -> list:
    """exp distance between member n of one family and member n+1 of another."""
    cfg = cfg or ExperimentConfig()
    fa, fb = (LineageFamily.parse(f) if isinstance(f, str) else f for f in (family_a, family_b))
    rows = _map(_convergence_row, [(fa, fb, n, cfg) for n in range(n_range[0], n_range[1] + 1)],
                cfg.jobs)
    return sorted(rows, key=lambda r: r["n"])


def _product_row(args):
    n, cfg = args
    direct = distance("exp", lineage_member("grid", n), lineage_member("grid", n + 1), cfg)
    t_c, a_c = direct.t_star, direct.alpha_star
    bound = product_special_case_bound(lineage_member("path", n), lineage_member("path", n + 1), t_c, a_c)
    factor = distance("exp", lineage_member("path", n), lineage_member("path", n + 1), cfg)
    factor_bound = product_special_case_bound(lineage_member("path", n), lineage_member("path", n + 1),
                                              factor.t_star, factor.alpha_star, factor.matching)
    bound_min = product_special_case_bound(lineage_member("path", n), lineage_member("path", n + 1),
                                           t_c, a_c, form="min")
    return {"n": n, "direct": direct.value, "bound": bound, "bound_min_form": bound_min,
            "t_c": t_c, "alpha_c": a_c,
            "factor_distance": factor.value, "bound_at_factor_optimum": factor_bound}


def product_bound_sweep(n_range, cfg: ExperimentConfig | None = None) -> list:
    """D(Sq_n, Sq_{n+1}) next to the box-product bound built from (Pa_n, Pa_{n+1}).

    ``bound`` is evaluated at the grids' own optimum (t_c, alpha_c), the point
    where the product inequality applies to ``direct``; ``bound_at_factor_optimum``
    uses the paths' optimum instead, and ``bound_min_form`` the smaller-norm
    variant, which can fall below ``direct``.
    """
    cfg = cfg or ExperimentConfig()
    rows = _map(_product_row, [(n, cfg) for n in range(n_range[0], n_range[1] + 1)], cfg.jobs)
    return sorted(rows, key=lambda r: r["n"])


# -- golden-section baseline --------------------------------------------------

@dataclass
class BaselineResult:
    frontier_distance: float
    baseline_distance: float
    frontier_work: WorkCounter
    baseline_work: WorkCounter
    searches: int = 0

    @property
    def speedup(self) -> float:
        return self.baseline_work.units / max(self.frontier_work.units, 1.0)


def _golden_section(f, a: float, b: float, tol: float):
    g = (math.sqrt(5.0) - 1.0) / 2.0
    x1, x2 = b - g * (b - a), a + g * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - g * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + g * (b - a)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def golden_section_baseline(g1, g2, tol: float = 1e-12,
                            alpha_window=(ALPHA_LOW, ALPHA_HIGH)) -> BaselineResult:
    """Frontier search against golden section in alpha with a cold assignment per probe.

    One search per local minimum of the frontier, each started from
    [0.618 a*, 1.618 a*].
    """
    l1, l2, _ = ordered_spectra(g1, g2)
    f_work, b_work = WorkCounter(), WorkCounter()
    front = frontier_from_spectra(l1, l2, alpha_window[0], alpha_window[1], f_work)
    best = min(front.entries, key=lambda e: e.min_value)
    f_dist = math.sqrt(max(best.min_value, 0.0))

    def cost(a):
        return lap_solve_linear(l1, l2, a, b_work).total_cost

    minima = [e for e in front.local_minima() if math.isfinite(e.alpha_opt)] or [best]
    values = []
    for e in minima:
        a_star = e.alpha_opt if math.isfinite(e.alpha_opt) else e.alpha_found
        _, v = _golden_section(cost, 0.618 * a_star, 1.618 * a_star, tol)
        values.append(v)
    b_dist = math.sqrt(max(min(values), 0.0))
    return BaselineResult(f_dist, b_dist, f_work, b_work, len(minima))


def _baseline_row(args):
    k, n1, n2, p, s1, s2 = args
    g1, g2 = random_bernoulli_graph(n1, p, s1), random_bernoulli_graph(n2, p, s2)
    res = golden_section_baseline(g1, g2)
    return {"index": k, "n1": n1, "n2": n2, "p": p,
            "frontier_distance": res.frontier_distance, "baseline_distance": res.baseline_distance,
            "frontier_work": res.frontier_work.units, "baseline_work": res.baseline_work.units,
            "frontier_calls": res.frontier_work.calls, "baseline_calls": res.baseline_work.calls,
            "searches": res.searches, "speedup": res.speedup}


def baseline_pairs(cfg: ExperimentConfig, n1_range=(5, 120), span: int = 60) -> list:
    """Seeded pairs for the baseline comparison: n1 in n1_range, n2 in [n1, n1 + span]."""
    jobs = []
    for k in range(cfg.count):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([cfg.seed, k, 7])))
        n1 = int(rng.integers(n1_range[0], n1_range[1] + 1))
        n2 = int(rng.integers(n1, n1 + span + 1))
        p = float(cfg.p_list[k % len(cfg.p_list)])
        s1, s2 = (int(s) for s in rng.integers(0, 2**63 - 1, size=2))
        jobs.append((k, n1, n2, p, s1, s2))
    return sorted(_map(_baseline_row, jobs, cfg.jobs), key=lambda r: r["index"])


# -- CSV ----------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    if v is None:
        return ""
    return str(v)


def format_csv(rows, columns=None, meta: dict | None = None) -> str:
    """Versioned CSV: a schema comment, optional ``# key=value`` lines, header, rows."""
    buf = io.StringIO()
    buf.write(CSV_VERSION + "\n")
    for k, v in (meta or {}).items():
        buf.write(f"# {k}={_fmt(v)}\n")
    if not rows:
        return buf.getvalue()
    columns = columns or list(rows[0])
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def write_csv(rows, path, columns=None, meta=None) -> None:
    Path(path).write_text(format_csv(rows, columns, meta))


def read_csv(text: str) -> list:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def config_meta(cfg: ExperimentConfig) -> dict:
    return {k: (v if not isinstance(v, tuple) else ":".join(map(str, v)))
            for k, v in asdict(cfg).items() if k not in ("out", "jobs")}
