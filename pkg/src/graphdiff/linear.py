"""Early-time ("linear") distance: exact joint optimization over matchings and alpha.

For a fixed matching m the objective is a curve in alpha,

    f_m(alpha) = B / alpha**2 + A * alpha**2 - C,

with A = sum(l2[m]**2), B = sum(l1**2), C = 2 * sum(l1 * l2[m]). Two curves
cross at most once for alpha > 0, and matchings optimal at two values of alpha
fix every pair they agree on for all alphas in between. The frontier search
below uses both facts to recover the whole lower envelope over a window of
alpha with a shrinking sequence of small assignment problems.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .assignment import Assignment, WorkCounter, solve_rlap_indices
from .results import ALPHA_HIGH, ALPHA_LOW, DistanceResult, Variant, ordered_spectra

NEW = "new"
CLOSED = "closed"


@dataclass(frozen=True)
class CostCoeffs:
    A: float
    B: float
    C: float

    def value(self, alpha: float) -> float:
        return self.B / alpha ** 2 + self.A * alpha ** 2 - self.C

    @property
    def alpha_opt(self) -> float:
        if self.A <= 0:
            return math.inf
        return (self.B / self.A) ** 0.25

    @property
    def min_value(self) -> float:
        return 2.0 * math.sqrt(self.A * self.B) - self.C


@dataclass(frozen=True)
class FrontierEntry:
    matching: Assignment
    coeffs: CostCoeffs
    alpha_found: float
    alpha_opt: float
    min_value: float
    optimal_on: tuple = (math.nan, math.nan)


@dataclass
class Frontier:
    entries: list
    searched: list
    alpha_window: tuple
    work: WorkCounter = field(default_factory=WorkCounter)
    s1: np.ndarray | None = None
    s2: np.ndarray | None = None

    def __len__(self):
        return len(self.entries)

    def matchings(self) -> list:
        return [e.matching.assign for e in self.entries]

    def envelope(self, alpha) -> np.ndarray:
        """Pointwise minimum of the entries' cost curves."""
        alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        vals = np.array([linear_curve(self.s1, self.s2, e.matching.array, alpha)
                         for e in self.entries])
        return vals.min(axis=0)

    def covered(self) -> bool:
        lo, hi = self.alpha_window
        spans = sorted(self.searched)
        reach = lo
        for a, b in spans:
            if a > reach + 1e-15 * max(1.0, abs(reach)):
                return False
            reach = max(reach, b)
        return reach >= hi

    def local_minima(self) -> list:
        """Entries whose own optimum lies inside the alpha-range they win on."""
        return [e for e in self.entries
                if e.optimal_on[0] <= e.alpha_opt <= e.optimal_on[1]]


# -- cost evaluation ----------------------------------------------------------

def linear_cost_matrix(s1, s2, alpha: float) -> np.ndarray:
    """C[i, j] = (l1[j] / alpha - alpha * l2[i])**2, rows index the larger graph."""
    l1, l2 = np.asarray(s1, dtype=float), np.asarray(s2, dtype=float)
    return (l1[None, :] / alpha - alpha * l2[:, None]) ** 2


def _reduced_linear_cost(l1, l2, alpha):
    # Drops the column constant l1[j]**2 / alpha**2, which is the same for every
    # choice of row; keeps the assignment problem well conditioned at tiny alpha.
    c = alpha ** 2 * l2[:, None] ** 2 - 2.0 * l2[:, None] * l1[None, :]
    return c - c.min(axis=0, keepdims=True)


def linear_curve(s1, s2, m, alpha) -> np.ndarray | float:
    """f_m(alpha) evaluated pair by pair (no cancellation-prone expansion)."""
    l1, l2 = np.asarray(s1, dtype=float), np.asarray(s2, dtype=float)
    m = np.asarray(m, dtype=np.intp)
    a = np.asarray(alpha, dtype=float)
    diff = l1[None, :] / a.reshape(-1, 1) - a.reshape(-1, 1) * l2[m][None, :]
    out = np.sum(diff ** 2, axis=1)
    return float(out[0]) if a.ndim == 0 else out


def monotone(m: np.ndarray) -> np.ndarray:
    """Uncross a matching: sorted eigenvalues pair best in sorted order."""
    return np.sort(np.asarray(m, dtype=np.intp))


def cost_coeffs(m, s1, s2) -> CostCoeffs:
    l1, l2 = np.asarray(s1, dtype=float), np.asarray(s2, dtype=float)
    idx = m.array if isinstance(m, Assignment) else np.asarray(m, dtype=np.intp)
    matched = l2[idx]
    return CostCoeffs(
        A=float(np.sum(matched ** 2)),
        B=float(np.sum(l1 ** 2)),
        C=float(2.0 * np.sum(l1 * matched)),
    )


def crossing_alpha(c1: CostCoeffs, c2: CostCoeffs) -> float | None:
    """The unique alpha > 0 where two cost curves meet, if any.

    f1 - f2 = alpha**2 (A1 - A2) - (C1 - C2), so alpha**2 = (C1 - C2) / (A1 - A2).
    """
    d_a = c1.A - c2.A
    if abs(d_a) <= 1e-12 * max(c1.A, c2.A, 1.0):
        return None
    radicand = (c1.C - c2.C) / d_a
    if not (radicand > 0 and math.isfinite(radicand)):
        return None
    return math.sqrt(radicand)


def _entries(l1, l2, found) -> list:
    """Frontier entries for (alpha_found, matching) pairs, coefficients computed in bulk."""
    if not found:
        return []
    alphas = np.array([a for a, _ in found])
    ms = np.array([m for _, m in found], dtype=np.intp).reshape(len(found), l1.size)
    matched = l2[ms]
    A = np.sum(matched ** 2, axis=1)
    B = float(np.dot(l1, l1))
    C = 2.0 * matched @ l1
    with np.errstate(divide="ignore"):
        a_opt = np.where(A > 0, (B / np.where(A > 0, A, 1.0)) ** 0.25, np.inf)
    usable = np.isfinite(a_opt) & (a_opt > 0)
    a_eval = np.where(usable, a_opt, 1.0)[:, None]
    min_value = np.sum((l1[None, :] / a_eval - a_eval * matched) ** 2, axis=1)
    # Values at rounding level of the two positive terms are an exact zero.
    scale = B / a_eval[:, 0] ** 2 + A * a_eval[:, 0] ** 2
    min_value = np.where(usable & (min_value > 64 * np.finfo(float).eps * scale), min_value, 0.0)
    af = alphas[:, None]
    found_value = np.sum((l1[None, :] / af - af * matched) ** 2, axis=1)
    return [FrontierEntry(Assignment(tuple(ms[k].tolist()), float(found_value[k])),
                          CostCoeffs(float(A[k]), B, float(C[k])), float(alphas[k]),
                          float(a_opt[k]), float(min_value[k]))
            for k in range(len(found))]


def lap_solve_linear(s1, s2, alpha: float, counter: WorkCounter | None = None) -> Assignment:
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    l1, l2 = np.asarray(s1, dtype=float), np.asarray(s2, dtype=float)
    if l1.size > l2.size:
        raise ValueError("first spectrum must not be longer than the second")
    m = monotone(solve_rlap_indices(_reduced_linear_cost(l1, l2, alpha), counter))
    return Assignment(tuple(m.tolist()), float(linear_curve(l1, l2, m, alpha)))


# -- frontier search ----------------------------------------------------------

@dataclass(frozen=True)
class MergeResult:
    matching: Assignment
    alpha_star: float | None
    status: str


def _as_index(m) -> np.ndarray:
    return m.array if isinstance(m, Assignment) else np.asarray(m, dtype=np.intp)


def disagreement(m1: np.ndarray, m2: np.ndarray, n2: int, windowed: bool):
    """Columns and candidate rows left free once agreeing pairs are fixed.

    With ``windowed`` the rows are restricted to the union of [m1[j], m2[j]]
    over the free columns, which is where any matching optimal between the two
    alphas must place them.
    """
    agree = m1 == m2
    cols = np.flatnonzero(~agree)
    taken = np.zeros(n2, dtype=bool)
    taken[m1[agree]] = True
    if windowed and cols.size:
        lo = np.minimum(m1[cols], m2[cols])
        hi = np.maximum(m1[cols], m2[cols])
        allowed = np.bincount(lo, minlength=n2 + 1) - np.bincount(hi + 1, minlength=n2 + 1)
        free = (np.cumsum(allowed)[:n2] > 0) & ~taken
    else:
        free = ~taken
    return cols, np.flatnonzero(free)


def _window_blocks(m1, m2, cols, rows):
    """Split the windowed sub-problem into independent blocks.

    Columns whose row windows [min(m1, m2), max(m1, m2)] do not overlap can
    never compete for a row, so each overlapping run is its own assignment.
    Returns None when some block has fewer rows than columns (ties).
    """
    lo = np.minimum(m1[cols], m2[cols])
    hi = np.maximum(m1[cols], m2[cols])
    reach = np.maximum.accumulate(hi)
    brk = np.empty(cols.size, dtype=bool)
    brk[0] = True
    np.greater(lo[1:], reach[:-1], out=brk[1:])
    starts = np.flatnonzero(brk)
    ends = np.append(starts[1:], cols.size)
    blocks = []
    for s, e in zip(starts, ends):
        r = rows[(rows >= lo[s]) & (rows <= reach[e - 1])]
        if r.size < e - s:
            return None
        blocks.append((cols[s:e], r))
    return blocks


def _coeffs_ac(l1, l2, m):
    matched = l2[m]
    return float(np.dot(matched, matched)), float(2.0 * np.dot(l1, matched))


def _merge(l1, l2, i1, ac1, i2, ac2, a1, a2, counter, windowed, b=None):
    """Core of the merge step on index arrays and (A, C) pairs; B is shared."""
    (A1, C1), (A2, C2) = ac1, ac2
    b = float(np.dot(l1, l1)) if b is None else b
    a_star = crossing_alpha(CostCoeffs(A1, b, C1), CostCoeffs(A2, b, C2))
    if a_star is None or not (a1 <= a_star <= a2):
        return None, None, a_star, CLOSED
    cols, rows = disagreement(i1, i2, l2.size, windowed)
    if cols.size == 0:
        return None, None, a_star, CLOSED
    blocks = _window_blocks(i1, i2, cols, rows) if windowed else None
    if blocks is None:
        cols, rows = disagreement(i1, i2, l2.size, False)
        blocks = [(cols, rows)]
    m = i1.copy()
    for bc, br in blocks:
        sub = solve_rlap_indices(_reduced_linear_cost(l1[bc], l2[br], a_star), counter)
        m[bc] = br[sub]
    m.sort()
    A3, C3 = _coeffs_ac(l1, l2, m)
    # Differences of the curves at a_star involve no large cancelling terms;
    # a result equal to either input gives a zero difference and stays closed.
    sq = a_star * a_star
    d1 = sq * (A3 - A1) - (C3 - C1)
    d2 = sq * (A3 - A2) - (C3 - C2)
    scale = max(1.0, b / sq + A1 * sq - C1)
    if max(d1, d2) < -1e-12 * scale:
        return m, (A3, C3), a_star, NEW
    return m, None, a_star, CLOSED


def merge_solutions(m1, m2, s1, s2, interval, counter: WorkCounter | None = None,
                    windowed: bool = True) -> MergeResult:
    """Probe the crossing of two optimal matchings' curves for a better matching.

    Returns the new matching with status ``new`` when it strictly beats both
    inputs at the crossing alpha; otherwise m1 with status ``closed``.
    """
    l1, l2 = np.asarray(s1, dtype=float), np.asarray(s2, dtype=float)
    i1, i2 = _as_index(m1), _as_index(m2)
    m, ac, a_star, status = _merge(l1, l2, i1, _coeffs_ac(l1, l2, i1), i2, _coeffs_ac(l1, l2, i2),
                                   interval[0], interval[1], counter, windowed)
    if status == NEW:
        return MergeResult(Assignment(tuple(m.tolist()), float(linear_curve(l1, l2, m, a_star))),
                           a_star, NEW)
    keep = m1 if isinstance(m1, Assignment) else Assignment(tuple(i1.tolist()), math.nan)
    return MergeResult(keep, a_star, CLOSED)


def linear_frontier(g1, g2, alpha_low: float = ALPHA_LOW, alpha_high: float = ALPHA_HIGH,
                    counter: WorkCounter | None = None, windowed: bool = True) -> Frontier:
    """All matchings on the lower envelope of the linear cost over [alpha_low, alpha_high].

    Operands are put smaller-first. The two end matchings are exact assignment
    solutions at the window edges.
    """
    l1, l2, _ = ordered_spectra(g1, g2)
    return frontier_from_spectra(l1, l2, alpha_low, alpha_high, counter, windowed)


def frontier_from_spectra(l1, l2, alpha_low=ALPHA_LOW, alpha_high=ALPHA_HIGH,
                          counter=None, windowed=True) -> Frontier:
    if not 0 < alpha_low < alpha_high:
        raise ValueError(f"bad alpha window [{alpha_low}, {alpha_high}]")
    l1, l2 = np.asarray(l1, dtype=float), np.asarray(l2, dtype=float)
    counter = counter if counter is not None else WorkCounter()
    m_lo = lap_solve_linear(l1, l2, alpha_low, counter).array
    m_hi = lap_solve_linear(l1, l2, alpha_high, counter).array
    ac_lo, ac_hi = _coeffs_ac(l1, l2, m_lo), _coeffs_ac(l1, l2, m_hi)
    b = float(np.dot(l1, l1))

    points = [(alpha_low, m_lo), (alpha_high, m_hi)]
    searched = []
    stack = [(alpha_low, m_lo, ac_lo, alpha_high, m_hi, ac_hi)]
    while stack:
        a1, m1, ac1, a2, m2, ac2 = stack.pop()
        m3, ac3, a3, status = _merge(l1, l2, m1, ac1, m2, ac2, a1, a2, counter, windowed, b)
        if status == NEW:
            points.append((a3, m3))
            stack.append((a3, m3, ac3, a2, m2, ac2))
            stack.append((a1, m1, ac1, a3, m3, ac3))
        else:
            searched.append((a1, a2))

    points.sort(key=lambda p: p[0])
    seen, unique = set(), []
    for a, m in points:
        key = tuple(m.tolist())
        if key not in seen:
            seen.add(key)
            unique.append((a, m))

    entries = _entries(l1, l2, unique)
    entries = _attach_ranges(entries, alpha_low, alpha_high)
    return Frontier(entries, sorted(searched), (alpha_low, alpha_high), counter, l1, l2)


def _attach_ranges(entries, lo, hi):
    bounds = [lo]
    for left, right in zip(entries, entries[1:]):
        x = crossing_alpha(left.coeffs, right.coeffs)
        if x is None or not (left.alpha_found <= x <= right.alpha_found):
            x = right.alpha_found
        bounds.append(x)
    bounds.append(hi)
    return [FrontierEntry(e.matching, e.coeffs, e.alpha_found, e.alpha_opt, e.min_value,
                          (bounds[k], bounds[k + 1]))
            for k, e in enumerate(entries)]


# -- distances ----------------------------------------------------------------

def linear_distance(g1, g2, alpha_low: float = ALPHA_LOW, alpha_high: float = ALPHA_HIGH,
                    counter: WorkCounter | None = None) -> DistanceResult:
    l1, l2, swapped = ordered_spectra(g1, g2)
    counter = counter if counter is not None else WorkCounter()
    front = frontier_from_spectra(l1, l2, alpha_low, alpha_high, counter)
    best = min(front.entries, key=lambda e: e.min_value)
    value2 = max(best.min_value, 0.0)
    return DistanceResult(math.sqrt(value2), Variant.LINEAR_FREE, alpha_star=best.alpha_opt,
                          matching=best.matching.assign, swapped=swapped, work=counter)


def fixed_alpha_linear_distance(g1, g2, alpha: float, counter: WorkCounter | None = None) -> DistanceResult:
    l1, l2, swapped = ordered_spectra(g1, g2)
    counter = counter if counter is not None else WorkCounter()
    m = lap_solve_linear(l1, l2, alpha, counter)
    return DistanceResult(math.sqrt(max(m.total_cost, 0.0)), Variant.LINEAR_FIXED, alpha_star=alpha,
                          matching=m.assign, swapped=swapped, work=counter)


def tsgdd(g1, g2, r: float, counter: WorkCounter | None = None) -> DistanceResult:
    """Time-scaled distance: alpha pinned to (n1/n2)**r, scaled by (n1 n2)**(-2r)."""
    l1, l2, swapped = ordered_spectra(g1, g2)
    n1, n2 = l1.size, l2.size
    alpha = (n1 / n2) ** r
    counter = counter if counter is not None else WorkCounter()
    m = lap_solve_linear(l1, l2, alpha, counter)
    value2 = (n1 * n2) ** (-2.0 * r) * m.total_cost
    return DistanceResult(math.sqrt(max(value2, 0.0)), Variant.TSGDD, alpha_star=alpha,
                          matching=m.assign, swapped=swapped, work=counter)
