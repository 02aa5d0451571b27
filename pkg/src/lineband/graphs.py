"""Target intersection graphs, 1-based to match line indices."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.n < 1:
            raise GraphError(f"vertex count must be >= 1, got {self.n}")
        for i, j in self.edges:
            if not (1 <= i < j <= self.n):
                raise GraphError(f"bad edge {i}-{j} for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        seen: set[tuple[int, int]] = set()
        for i, j in edges:
            if i == j:
                raise GraphError(f"self-loop at vertex {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise GraphError(f"edge {i}-{j} out of range 1..{n}")
            e = (min(i, j), max(i, j))
            if e in seen:
                raise GraphError(f"duplicate edge {e[0]}-{e[1]}")
            seen.add(e)
        return cls(n, frozenset(seen))

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def pairs(self):
        return combinations(range(1, self.n + 1), 2)

    def non_edges(self) -> list[tuple[int, int]]:
        return [p for p in self.pairs() if p not in self.edges]

    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for i, j in self.edges:
            deg[i - 1] += 1
            deg[j - 1] += 1
        return tuple(deg)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __str__(self):
        return format_graph(self)


def format_graph(g: Graph) -> str:
    return f"n={g.n};edges=" + ",".join(f"{i}-{j}" for i, j in g.sorted_edges())


_SPEC = re.compile(r"^n=(\d+);edges=(.*)$")


def graph_from_spec(spec: str) -> Graph:
    """Parse a catalog name or ``n=<k>;edges=<i-j,...>``."""
    text = spec.strip().replace(" ", "")
    m = _SPEC.match(text)
    if not m:
        return catalog(text)
    n = int(m.group(1))
    body = m.group(2)
    edges = []
    if body:
        for tok in body.split(","):
            parts = tok.split("-")
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise GraphError(f"malformed edge {tok!r}")
            edges.append((int(parts[0]), int(parts[1])))
    return Graph.from_edges(n, edges)


# Figure readings: a stroke through an intermediate vertex yields its sub-edges.
_NAMED = {
    "G1": (5, [(1, 4), (4, 5), (5, 2), (1, 2), (2, 3)]),
    "G2": (5, [(1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]),
    "G3": (5, [(1, 2), (2, 3), (1, 4), (4, 2), (2, 5), (5, 3)]),
    "G6": (6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)] + [(i, 6) for i in range(1, 6)]),
}

# Long strokes read as single edges instead.
ALTERNATE_READINGS = {
    "G1": (5, [(1, 4), (4, 5), (5, 2), (1, 3)]),
    "G2": (5, [(1, 4), (3, 5), (5, 4)]),
    "G3": (5, [(1, 3), (1, 4), (4, 2), (2, 5), (5, 3)]),
}


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycles need n >= 3")
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset(combinations(range(1, n + 1), 2)))


def empty_graph(n: int) -> Graph:
    return Graph(n, frozenset())


def catalog(name: str) -> Graph:
    key = name.strip().upper().replace("_", "")
    if key in _NAMED:
        n, edges = _NAMED[key]
        return Graph.from_edges(n, edges)
    m = re.fullmatch(r"([ACKE])(\d+)", key)
    if m:
        kind, n = m.group(1), int(m.group(2))
        if kind == "A":
            if n < 2:
                raise GraphError("A_n needs n >= 2")
            return path_graph(n)
        if kind == "C":
            return cycle_graph(n)
        if n < 1:
            raise GraphError(f"{kind}_n needs n >= 1")
        return complete_graph(n) if kind == "K" else empty_graph(n)
    raise GraphError(f"unknown graph {name!r}")


def alternate_reading(name: str) -> Graph:
    n, edges = ALTERNATE_READINGS[name.upper()]
    return Graph.from_edges(n, edges)


def complement(g: Graph) -> Graph:
    return Graph(g.n, frozenset(p for p in g.pairs() if p not in g.edges))
