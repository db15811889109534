"""Rectangular linear assignment.

Rows are larger-graph eigen-indices, columns are smaller-graph eigen-indices;
every column gets exactly one distinct row. The inner solve is scipy's
shortest-augmenting-path (Jonker-Volgenant family) routine, which is exact.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment


@dataclass(frozen=True)
class Assignment:
    assign: tuple
    total_cost: float

    def __post_init__(self):
        object.__setattr__(self, "assign", tuple(int(i) for i in self.assign))
        if len(set(self.assign)) != len(self.assign):
            raise ValueError("assignment is not injective")

    def __len__(self):
        return len(self.assign)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.assign, dtype=np.intp)

    def same_matching(self, other) -> bool:
        other = other.assign if isinstance(other, Assignment) else tuple(other)
        return self.assign == tuple(int(i) for i in other)


@dataclass
class WorkCounter:
    """LAP work in units of n^3 per solve of an n x n (zero-augmented) problem."""
    units: float = 0.0
    calls: int = 0

    def record(self, rows: int, cols: int) -> None:
        n = max(rows, cols)
        self.units += float(n) ** 3
        self.calls += 1

    def merge(self, other: "WorkCounter") -> None:
        self.units += other.units
        self.calls += other.calls

    def as_dict(self) -> dict:
        return {"units": self.units, "calls": self.calls}


def solve_rlap_indices(cost: np.ndarray, counter: WorkCounter | None = None) -> np.ndarray:
    """Optimal row for every column of an (n2 x n1) cost matrix, n1 <= n2."""
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2:
        raise ValueError(f"cost matrix must be 2-D, got shape {cost.shape}")
    n2, n1 = cost.shape
    if n1 > n2:
        raise ValueError(f"need at least as many rows as columns, got {n2} x {n1}")
    if not np.isfinite(cost).all():
        raise ValueError("cost matrix has non-finite entries")
    if counter is not None:
        counter.record(n2, n1)
    if n1 == 0:
        return np.zeros(0, dtype=np.intp)
    # Solving on the transpose gives one row per column directly; scipy pads
    # the rectangular problem internally, equivalent to zero augmentation.
    cols, rows = linear_sum_assignment(cost.T)
    out = np.empty(n1, dtype=np.intp)
    out[cols] = rows
    return out


def solve_rlap(cost: np.ndarray, counter: WorkCounter | None = None) -> Assignment:
    idx = solve_rlap_indices(cost, counter)
    cost = np.asarray(cost, dtype=float)
    total = float(cost[idx, np.arange(idx.size)].sum())
    return Assignment(tuple(idx.tolist()), total)

