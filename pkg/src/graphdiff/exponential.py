"""Diffusion distance with exponential kernels, optimized jointly over t, alpha and matchings.

For a matching m the objective at (alpha, t) is

    sum_j (exp(t / alpha * l1[j]) - exp(alpha * t * l2[m[j]]))**2,

the squared Frobenius norm of P exp(t/alpha L1) - exp(alpha t L2) P written in
the eigenbases. The distance squared is sup over t of the min over alpha and m.

The search follows the matching frontier in t: it starts from the linear
frontier (the t -> 0 limit), minimizes each retained matching over alpha at
every t, probes crossings between neighbouring winners with small assignment
problems, and stops stepping once the objective turns down.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .assignment import Assignment, WorkCounter, solve_rlap_indices
from .linear import frontier_from_spectra, monotone
from .results import ALPHA_HIGH, ALPHA_LOW, DistanceResult, Variant, graph_size, ordered_spectra
from .spectra import decompose, heat_kernel
from .graphs import Graph, laplacian

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
ALPHA_TOL = 1e-12


# -- costs --------------------------------------------------------------------

def exp_cost(m, s1, s2, alpha: float, t: float) -> float:
    """Objective of one matching; unmatched rows of the larger graph contribute nothing."""
    if alpha <= 0 or t < 0:
        raise ValueError(f"need alpha > 0 and t >= 0, got alpha={alpha}, t={t}")
    l1, l2 = np.asarray(s1, dtype=float), np.asarray(s2, dtype=float)
    idx = m.array if isinstance(m, Assignment) else np.asarray(m, dtype=np.intp)
    d = np.exp((t / alpha) * l1) - np.exp((alpha * t) * l2[idx])
    return float(np.dot(d, d))


def batch_exp_cost(l1, matched, alpha, t: float) -> np.ndarray:
    """Costs of K matchings at K alphas; ``matched`` is the (K, n1) array l2[M]."""
    alpha = np.asarray(alpha, dtype=float)[:, None]
    d = np.exp((t / alpha) * l1[None, :]) - np.exp((alpha * t) * matched)
    return np.einsum("ij,ij->i", d, d)


def grid_exp_cost(l1, matched, alphas, t: float) -> np.ndarray:
    """Costs of K matchings on a (K, P) array of alphas, in one vectorized pass."""
    a = np.asarray(alphas, dtype=float)[:, :, None]
    d = np.exp((t / a) * l1[None, None, :]) - np.exp((a * t) * matched[:, None, :])
    return np.einsum("kpj,kpj->kp", d, d)


def exp_cost_matrix(s1, s2, alpha: float, t: float) -> np.ndarray:
    """C[i, j] = (exp(t/alpha l1[j]) - exp(alpha t l2[i]))**2, rows index the larger graph."""
    l1, l2 = np.asarray(s1, dtype=float), np.asarray(s2, dtype=float)
    return (np.exp((t / alpha) * l1)[None, :] - np.exp((alpha * t) * l2)[:, None]) ** 2


def lap_solve_exponential(s1, s2, alpha: float, t: float,
                          counter: WorkCounter | None = None) -> Assignment:
    if alpha <= 0 or t < 0:
        raise ValueError(f"need alpha > 0 and t >= 0, got alpha={alpha}, t={t}")
    l1, l2 = np.asarray(s1, dtype=float), np.asarray(s2, dtype=float)
    if l1.size > l2.size:
        raise ValueError("first spectrum must not be longer than the second")
    # Both kernels are increasing in the eigenvalue, so uncrossing never hurts.
    m = monotone(solve_rlap_indices(exp_cost_matrix(l1, l2, alpha, t), counter))
    return Assignment(tuple(m.tolist()), exp_cost(m, l1, l2, alpha, t))


# -- alpha minimization -------------------------------------------------------

def minimize_alpha_batch(l1, l2, matchings: np.ndarray, t: float, warm=None,
                         alpha_window=(ALPHA_LOW, ALPHA_HIGH), tol: float = ALPHA_TOL):
    """Best alpha for each row of ``matchings`` (shape (K, n1)) at time t.

    Rows with a warm start are searched on a local grid around it; the rest,
    and any whose local minimum sits on the grid edge, get a global log grid.
    The winning grid cell is then narrowed by parabolic interpolation.
    """
    matchings = np.atleast_2d(np.asarray(matchings, dtype=np.intp))
    k = matchings.shape[0]
    if t == 0:
        return np.ones(k), np.zeros(k)
    l1 = np.asarray(l1, dtype=float)
    matched = np.asarray(l2, dtype=float)[matchings]
    lo_w, hi_w = math.log(alpha_window[0]), math.log(alpha_window[1])

    def grid_search(rows, centers, half_width, points):
        offsets = np.linspace(-half_width, half_width, points)
        u = np.clip(centers[:, None] + offsets[None, :], lo_w, hi_w)
        vals = grid_exp_cost(l1, matched[rows], np.exp(u), t)
        best = np.argmin(vals, axis=1)
        r = np.arange(rows.size)
        lo = u[r, np.maximum(best - 1, 0)]
        hi = u[r, np.minimum(best + 1, points - 1)]
        interior = (best > 0) & (best < points - 1)
        at_wall = ((best == 0) & (u[r, 0] <= lo_w)) | ((best == points - 1) & (u[r, -1] >= hi_w))
        return lo, hi, interior | at_wall, u[r, best], vals[r, best]

    lo, hi, u0, v0 = np.empty(k), np.empty(k), np.empty(k), np.empty(k)
    todo = np.ones(k, dtype=bool)
    if warm is not None:
        centers = np.log(np.clip(np.asarray(warm, dtype=float), *alpha_window))
        rows = np.arange(k)
        lo[:], hi[:], ok, u0[:], v0[:] = grid_search(rows, centers, math.log(2.0), 5)
        todo = ~ok
    if todo.any():
        rows = np.flatnonzero(todo)
        mid = 0.5 * (lo_w + hi_w)
        chunk = max(1, 2_000_000 // (64 * max(l1.size, 1)))
        for start in range(0, rows.size, chunk):
            sel = rows[start:start + chunk]
            lo[sel], hi[sel], _, u0[sel], v0[sel] = grid_search(
                sel, np.full(sel.size, mid), 0.5 * (hi_w - lo_w), 64)

    def f_rows(sel):
        m_sel = matched[sel]
        return lambda u, r=slice(None): batch_exp_cost(l1, m_sel[r], np.exp(u), t)

    # Only rows near the best are refined; the rest keep their grid optimum,
    # which is an attained cost and a good warm start for the next call.
    sel = np.flatnonzero(v0 <= 1.5 * v0.min())
    if sel.size < min(k, 8):
        sel = np.argsort(v0, kind="stable")[:8]
    u, val = u0.copy(), v0.copy()
    u[sel], val[sel] = _parabolic_min(f_rows(sel), u0[sel], v0[sel], lo[sel], hi[sel], tol)
    return np.exp(u), val


def _parabolic_min(f, x, fx, lo, hi, tol, max_iter=100):
    """Successive parabolic interpolation inside [lo, hi], golden steps as fallback.

    Rows stop once a step is shorter than tol or three steps in a row fail to
    lower the cost. Keeps the best point seen, so the result never exceeds
    the starting value. ``f(x, rows)`` evaluates only the listed rows.
    """
    a, c = lo.copy(), hi.copy()
    fa, fc = f(a), f(c)
    b, fb = x.copy(), fx.copy()
    done = np.zeros(b.size, dtype=bool)
    stall = np.zeros(b.size, dtype=int)
    for _ in range(max_iter):
        if done.all():
            break
        num = (b - a) ** 2 * (fb - fc) - (b - c) ** 2 * (fb - fa)
        den = (b - a) * (fb - fc) - (b - c) * (fb - fa)
        with np.errstate(divide="ignore", invalid="ignore"):
            xp = b - 0.5 * num / den
        wide_right = (c - b) > (b - a)
        golden = np.where(wide_right, b + (1 - GOLDEN) * (c - b), b - (1 - GOLDEN) * (b - a))
        bad = ~np.isfinite(xp) | (xp <= a) | (xp >= c)
        xn = np.where(bad, golden, xp)
        done |= (np.abs(xn - b) < tol) | (c - a < tol)
        xn = np.where(done, b, xn)
        active = np.flatnonzero(~done)
        fn = fb.copy()
        fn[active] = f(xn[active], active)
        better = (fn < fb) & ~done
        # Near the minimum the cost is flat to rounding; stop once it stalls.
        stall = np.where(better, 0, stall + 1)
        done |= stall >= 3
        left = xn < b
        # Shrink the bracket around whichever point is now best.
        na = np.where(better, np.where(left, a, b), np.where(left, xn, a))
        nc = np.where(better, np.where(left, b, c), np.where(left, c, xn))
        nfa = np.where(better, np.where(left, fa, fb), np.where(left, fn, fa))
        nfc = np.where(better, np.where(left, fb, fc), np.where(left, fc, fn))
        keep = done
        a, c = np.where(keep, a, na), np.where(keep, c, nc)
        fa, fc = np.where(keep, fa, nfa), np.where(keep, fc, nfc)
        b, fb = np.where(better, xn, b), np.where(better, fn, fb)
    return b, fb


def minimize_alpha_for_matching(m, s1, s2, t: float,
                                alpha_window=(ALPHA_LOW, ALPHA_HIGH)) -> tuple[float, float]:
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    idx = m.array if isinstance(m, Assignment) else np.asarray(m, dtype=np.intp)
    a, v = minimize_alpha_batch(s1, s2, idx[None, :], t, None, alpha_window)
    return float(a[0]), float(v[0])


# -- frontier continuation in t -----------------------------------------------

@dataclass
class ExpFrontier:
    """Every matching ever found optimal, with its best alpha at the current t."""
    l1: np.ndarray
    l2: np.ndarray
    keys: dict = field(default_factory=dict)
    matchings: list = field(default_factory=list)
    alphas: list = field(default_factory=list)
    values: list = field(default_factory=list)
    t: float = 0.0
    alpha_window: tuple = (ALPHA_LOW, ALPHA_HIGH)
    work: WorkCounter = field(default_factory=WorkCounter)

    def __len__(self):
        return len(self.matchings)

    def add(self, m: np.ndarray, alpha: float) -> bool:
        key = tuple(int(i) for i in m)
        if key in self.keys:
            return False
        self.keys[key] = len(self.matchings)
        self.matchings.append(np.asarray(key, dtype=np.intp))
        self.alphas.append(float(alpha))
        self.values.append(math.inf)
        return True

    def refresh(self, t: float, slack: float = 4.0) -> None:
        """Re-minimize retained matchings over alpha at time t.

        Matchings whose cost at their stored alpha stays above ``slack`` times
        the best are only re-evaluated there, so every stored value is still
        an attained cost; the rest are fully minimized.
        """
        self.t = t
        m = np.array(self.matchings)
        alphas = np.array(self.alphas)
        values = batch_exp_cost(self.l1, self.l2[m], alphas, t)
        cutoff = slack * values.min()
        active = np.flatnonzero(values <= cutoff)
        if active.size < min(len(m), 8):
            active = np.argsort(values, kind="stable")[:8]
        a, v = minimize_alpha_batch(self.l1, self.l2, m[active], t, alphas[active], self.alpha_window)
        alphas[active], values[active] = a, v
        self.alphas = alphas.tolist()
        self.values = values.tolist()

    def _set_one(self, idx: int) -> None:
        a, v = minimize_alpha_batch(self.l1, self.l2, self.matchings[idx][None, :], self.t,
                                    np.array([self.alphas[idx]]), self.alpha_window)
        self.alphas[idx], self.values[idx] = float(a[0]), float(v[0])

    def best(self) -> int:
        return int(np.argmin(self.values))

    def cost(self, idx: int, alpha: float) -> float:
        return exp_cost(self.matchings[idx], self.l1, self.l2, alpha, self.t)

    def envelope_winners(self, candidates: int = 16, points: int = 64) -> list:
        """Switch points of the lower envelope on a log alpha grid, in alpha order.

        Returns (left, right, a_lo, a_hi) for each change of winner between
        neighbouring grid points.
        """
        order = np.argsort(self.values, kind="stable")[:candidates]
        grid = np.geomspace(*self.alpha_window, points)
        matched = self.l2[np.array([self.matchings[i] for i in order])]
        costs = grid_exp_cost(self.l1, matched, np.broadcast_to(grid, (order.size, points)), self.t)
        winners = order[np.argmin(costs, axis=0)]
        switches = np.flatnonzero(winners[1:] != winners[:-1])
        return [(int(winners[c]), int(winners[c + 1]), grid[c], grid[c + 1]) for c in switches]


def _crossing(front: ExpFrontier, i: int, j: int, a_lo: float, a_hi: float,
              tol: float = 1e-10, max_iter: int = 200) -> float | None:
    """Alpha in [a_lo, a_hi] where matchings i and j cost the same, bracketed in log alpha."""
    def diff(u):
        a = math.exp(u)
        return front.cost(i, a) - front.cost(j, a)
    lo, hi = math.log(a_lo), math.log(a_hi)
    d_lo, d_hi = diff(lo), diff(hi)
    if d_lo == 0:
        return a_lo
    if d_hi == 0:
        return a_hi
    if d_lo * d_hi > 0:
        return None
    return math.exp(brentq(diff, lo, hi, xtol=tol, maxiter=max_iter))


def _merge_exponential(front: ExpFrontier, i: int, j: int, alpha: float) -> np.ndarray | None:
    """Sub-assignment on the pairs where i and j disagree; a strictly better matching or None."""
    m1, m2 = front.matchings[i], front.matchings[j]
    agree = m1 == m2
    cols = np.flatnonzero(~agree)
    if cols.size == 0:
        return None
    free = np.ones(front.l2.size, dtype=bool)
    free[m1[agree]] = False
    rows = np.flatnonzero(free)
    sub = solve_rlap_indices(exp_cost_matrix(front.l1[cols], front.l2[rows], alpha, front.t), front.work)
    m = m1.copy()
    m[cols] = rows[sub]
    m = monotone(m)
    value = exp_cost(m, front.l1, front.l2, alpha, front.t)
    incumbent = min(front.cost(i, alpha), front.cost(j, alpha))
    if value < incumbent - 1e-12 * max(incumbent, 1e-300):
        return m
    return None


def t_step(front: ExpFrontier, t: float, max_rounds: int = 50) -> ExpFrontier:
    """Advance to time t: refresh alphas, then merge neighbouring envelope winners until stable."""
    front.refresh(t)
    if len(front) < 2:
        return front
    for _ in range(max_rounds):
        inserted = []
        for i, j, a_lo, a_hi in front.envelope_winners():
            a_star = _crossing(front, i, j, a_lo, a_hi)
            if a_star is None:
                continue
            m = _merge_exponential(front, i, j, a_star)
            if m is not None and front.add(m, a_star):
                inserted.append(len(front) - 1)
        for idx in inserted:
            front._set_one(idx)
        if not inserted:
            break
    return front


def _polish(front: ExpFrontier, max_rounds: int = 5) -> None:
    """Cold assignment at the current best (alpha, t) until it stops improving."""
    for _ in range(max_rounds):
        b = front.best()
        alpha, value = front.alphas[b], front.values[b]
        m = lap_solve_exponential(front.l1, front.l2, alpha, front.t, front.work)
        if not (m.total_cost < value - 1e-12 * max(value, 1e-300)):
            return
        if not front.add(m.array, alpha):
            return
        front._set_one(len(front) - 1)


def _objective(front: ExpFrontier, t: float) -> float:
    t_step(front, t)
    _polish(front)
    return front.values[front.best()]


def init_exp_frontier(l1, l2, alpha_window=(ALPHA_LOW, ALPHA_HIGH),
                      counter: WorkCounter | None = None) -> ExpFrontier:
    counter = counter if counter is not None else WorkCounter()
    lin = frontier_from_spectra(l1, l2, alpha_window[0], alpha_window[1], counter)
    front = ExpFrontier(np.asarray(l1, dtype=float), np.asarray(l2, dtype=float),
                        alpha_window=alpha_window, work=counter)
    for e in lin.entries:
        a = e.alpha_opt if math.isfinite(e.alpha_opt) else e.alpha_found
        front.add(e.matching.array, min(max(a, alpha_window[0]), alpha_window[1]))
    return front


@dataclass
class ExpTrace:
    ts: list = field(default_factory=list)
    values: list = field(default_factory=list)


def _maximize(f, a: float, b: float, tol: float):
    """Bounded Brent search (golden section with parabolic steps) for a max of f on [a, b]."""
    res = minimize_scalar(lambda x: -f(x), bounds=(a, b), method="bounded",
                          options={"xatol": tol, "maxiter": 500})
    return float(res.x), float(-res.fun)


def exp_distance(g1, g2, dt: float = 0.01, t_init: float = 1e-3, t_max: float = 100.0,
                 sweep: bool = False, alpha_window=(ALPHA_LOW, ALPHA_HIGH),
                 counter: WorkCounter | None = None, trace: ExpTrace | None = None,
                 t_tol: float = 1e-8) -> DistanceResult:
    """sup over t of the per-t optimum, found by continuation from small t.

    Stepping stops at the first t where the objective fails to rise (a flat
    tail counts as a stop) or at ``t_max``. With ``sweep`` it runs to ``t_max``
    regardless and refines around the largest sample.
    """
    l1, l2, swapped = ordered_spectra(g1, g2)
    counter = counter if counter is not None else WorkCounter()
    front = init_exp_frontier(l1, l2, alpha_window, counter)

    best = {"value": -1.0}

    def evaluate(t):
        v = _objective(front, t)
        if trace is not None:
            trace.ts.append(t)
            trace.values.append(v)
        if v > best["value"]:
            b = front.best()
            best.update(value=v, t=t, alpha=front.alphas[b], m=tuple(front.matchings[b].tolist()))
        return v

    ts, vals = [t_init], [evaluate(t_init)]
    while ts[-1] + dt <= t_max:
        t = t_init + len(ts) * dt
        v = evaluate(t)
        ts.append(t)
        vals.append(v)
        if not sweep and not v > vals[-2] * (1 + 1e-9):
            break

    k = int(np.argmax(vals))
    lo = max(0.0, ts[k] - dt)
    hi = ts[k] + dt
    if vals[k] > 0:
        # Walk the retained set back to the low end of the bracket before refining.
        _maximize(evaluate, lo, hi, t_tol)

    value2 = max(best["value"], 0.0)
    return DistanceResult(math.sqrt(value2), Variant.EXP_FREE, alpha_star=best.get("alpha"),
                          t_star=best.get("t"), matching=best.get("m"), swapped=swapped,
                          work=counter)


# -- fixed-alpha and equal-size variants --------------------------------------

def _sup_over_t(f, t_lo: float = 1e-3, t_hi: float = 1e2, points: int = 100, tol: float = 1e-10):
    ts = np.geomspace(t_lo, t_hi, points)
    vals = np.array([f(t) for t in ts])
    k = int(np.argmax(vals))
    a = ts[max(k - 1, 0)]
    b = ts[min(k + 1, points - 1)]
    t_star, v_star = _maximize(f, a, b, tol)
    if vals[k] > v_star:
        return float(ts[k]), float(vals[k])
    return float(t_star), float(v_star)


def fixed_alpha_exp_distance(g1, g2, alpha: float = 1.0,
                             counter: WorkCounter | None = None) -> DistanceResult:
    """sup over t of the optimal matching cost with alpha held fixed."""
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    l1, l2, swapped = ordered_spectra(g1, g2)
    counter = counter if counter is not None else WorkCounter()
    t_star, v = _sup_over_t(lambda t: lap_solve_exponential(l1, l2, alpha, t, counter).total_cost)
    m = lap_solve_exponential(l1, l2, alpha, t_star)
    return DistanceResult(math.sqrt(max(v, 0.0)), Variant.EXP_FIXED, alpha_star=alpha,
                          t_star=t_star, matching=m.assign, swapped=swapped, work=counter)


def hammond_objective(d1, d2, t: float) -> float:
    diff = heat_kernel(d1, t) - heat_kernel(d2, t)
    return float(np.sum(diff * diff))


def hammond_distance(g1: Graph, g2: Graph) -> DistanceResult:
    """sup over t of ||exp(t L1) - exp(t L2)||_F^2 on graphs of equal size, no matching."""
    if graph_size(g1) != graph_size(g2):
        raise ValueError(f"sizes differ: {graph_size(g1)} vs {graph_size(g2)}")
    if not isinstance(g1, Graph) or not isinstance(g2, Graph):
        raise TypeError("needs graphs, not spectra: the value depends on vertex labels")
    d1, d2 = decompose(laplacian(g1)), decompose(laplacian(g2))
    t_star, v = _sup_over_t(lambda t: hammond_objective(d1, d2, t))
    return DistanceResult(math.sqrt(max(v, 0.0)), Variant.HAMMOND, t_star=t_star)
