"""Graph construction, Laplacians, box products and lineage generators.

Graphs are small, unweighted and undirected. A self-loop is allowed (the
lineage base case is a single vertex carrying one) and counts twice toward
both the adjacency diagonal and the degree, so Laplacian row sums stay zero.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset = field(default_factory=frozenset)
    name: str = ""

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"vertex count must be nonnegative, got {self.n}")
        normalized = set()
        for i, j in self.edges:
            i, j = int(i), int(j)
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={self.n}")
            normalized.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, name: str = "") -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges), name)

    def __len__(self):
        return self.n

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        return adjacency(self).sum(axis=1)

    def relabel(self, perm) -> "Graph":
        """Return the graph with vertex v renamed perm[v]."""
        perm = list(perm)
        if sorted(perm) != list(range(self.n)):
            raise ValueError("perm must be a permutation of range(n)")
        return Graph(self.n, frozenset((perm[i], perm[j]) for i, j in self.edges), self.name)


def adjacency(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=np.int64)
    for i, j in g.edges:
        if i == j:
            a[i, i] += 2
        else:
            a[i, j] += 1
            a[j, i] += 1
    return a


def laplacian(g: Graph) -> np.ndarray:
    """L = A - D, negative semidefinite. Built in integers, then cast."""
    a = adjacency(g)
    lap = a - np.diag(a.sum(axis=1))
    return lap.astype(float)


def box_product(g: Graph, h: Graph) -> Graph:
    """Cartesian product; vertex (a, b) is indexed a * h.n + b."""
    m = h.n
    edges = set()
    for a1, a2 in g.edges:
        for b in range(m):
            edges.add((a1 * m + b, a2 * m + b))
    for b1, b2 in h.edges:
        for a in range(g.n):
            edges.add((a * m + b1, a * m + b2))
    name = f"{g.name}x{h.name}" if g.name and h.name else ""
    return Graph(g.n * m, frozenset(edges), name)


def path_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)), f"Pa{n}")


def cycle_graph(n: int) -> Graph:
    # n=1 is the lineage seed (one vertex, one self-loop); n=2 is a single edge.
    if n == 1:
        return Graph(1, frozenset({(0, 0)}), "Cy1")
    return Graph(n, frozenset((i, (i + 1) % n) for i in range(n)), f"Cy{n}")


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n)), f"K{n}")


def empty_graph(n: int) -> Graph:
    return Graph(n, frozenset(), f"E{n}")


class LineageFamily(enum.Enum):
    PATH = "path"
    CYCLE = "cycle"
    SQUARE_GRID = "grid"
    MULTI_BARBELL = "barbell"

    @classmethod
    def parse(cls, text: str) -> "LineageFamily":
        key = text.strip().lower().replace("-", "").replace("_", "")
        aliases = {
            "path": cls.PATH, "paths": cls.PATH, "pa": cls.PATH,
            "cycle": cls.CYCLE, "cycles": cls.CYCLE, "cy": cls.CYCLE,
            "grid": cls.SQUARE_GRID, "squaregrid": cls.SQUARE_GRID,
            "squaregrids": cls.SQUARE_GRID, "sq": cls.SQUARE_GRID,
            "barbell": cls.MULTI_BARBELL, "multibarbell": cls.MULTI_BARBELL,
            "multibarbells": cls.MULTI_BARBELL, "ba": cls.MULTI_BARBELL,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown lineage family {text!r}") from None


_MIN_SIZE = {
    LineageFamily.PATH: 1,
    LineageFamily.CYCLE: 3,
    LineageFamily.SQUARE_GRID: 1,
    LineageFamily.MULTI_BARBELL: 3,
}


def lineage_member(family: LineageFamily, n: int, allow_degenerate: bool = False) -> Graph:
    """The n-th member of a lineage.

    Cycle and MultiBarbell need n >= 3. ``allow_degenerate`` admits n = 1, 2
    for those two families (self-loop vertex and single edge as the cycle),
    which the lineage table needs at its first index.
    """
    family = LineageFamily.parse(family) if isinstance(family, str) else family
    minimum = 1 if allow_degenerate else _MIN_SIZE[family]
    if n < minimum:
        raise ValueError(f"{family.value} lineage needs n >= {minimum}, got {n}")
    if family is LineageFamily.PATH:
        return path_graph(n)
    if family is LineageFamily.CYCLE:
        return cycle_graph(n)
    if family is LineageFamily.SQUARE_GRID:
        p = path_graph(n)
        return Graph(n * n, box_product(p, p).edges, f"Sq{n}")
    g = box_product(cycle_graph(n), complete_graph(n))
    return Graph(g.n, g.edges, f"Ba{n}")


def random_bernoulli_graph(n: int, p: float, seed: int) -> Graph:
    """Each unordered pair {i, j}, i < j, is an edge with probability p.

    Pairs are drawn in row-major upper-triangle order from a PCG64 stream,
    so a given (n, p, seed) yields the same graph on every platform.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = np.random.Generator(np.random.PCG64(seed))
    rows, cols = np.triu_indices(n, k=1)
    keep = rng.random(rows.size) < p
    edges = frozenset(zip(rows[keep].tolist(), cols[keep].tolist()))
    return Graph(n, edges, f"G({n},{p},{seed})")


# -- edge-list text format ----------------------------------------------------

class EdgeListError(ValueError):
    pass


def parse_edge_list(text: str, name: str = "") -> Graph:
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    if not lines:
        raise EdgeListError("edge list is empty")
    try:
        n = int(lines[0])
    except ValueError:
        raise EdgeListError(f"first line must be the vertex count, got {lines[0]!r}") from None
    edges = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(f"line {lineno}: expected 'i j', got {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(f"line {lineno}: non-integer vertex in {line!r}") from None
        edges.append((i, j))
    try:
        return Graph.from_edges(n, edges, name)
    except ValueError as exc:
        raise EdgeListError(str(exc)) from None


def read_edge_list(path) -> Graph:
    path = Path(path)
    return parse_edge_list(path.read_text(), name=path.stem)


def format_edge_list(g: Graph) -> str:
    lines = []
    if g.name:
        lines.append(f"# {g.name}")
    lines.append(str(g.n))
    lines.extend(f"{i} {j}" for i, j in sorted(g.edges))
    return "\n".join(lines) + "\n"


def write_edge_list(g: Graph, path) -> None:
    Path(path).write_text(format_edge_list(g))
