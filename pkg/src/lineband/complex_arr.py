"""Complex line arrangements in C^2 and the Menelaus parity obstruction.

Complex work is double precision with explicit residual and conditioning
checks; the polygon computations are exact over Q.
"""

from __future__ import annotations

import cmath
import math
import random
import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from gmpy2 import mpq

from .exact import Scalar
from .graphs import Graph

BOUNDARY_TOL = 1e-9
AMBIGUITY_TOL = 1e-6
COND_LIMIT = 1e12


class NearParallel(ValueError):
    pass


class BoundaryAmbiguity(UserWarning):
    pass


class DegeneratePolygon(ValueError):
    def __init__(self, edge: int, reason: str):
        super().__init__(f"edge {edge}: {reason}")
        self.edge = edge


@dataclass(frozen=True)
class ComplexLine:
    """``u*x + v*y = w``."""

    u: complex
    v: complex
    w: complex

    def __post_init__(self):
        if self.u == 0 and self.v == 0:
            raise ValueError("(u, v) must not both vanish")

    @classmethod
    def through(cls, p: tuple[complex, complex], q: tuple[complex, complex]) -> "ComplexLine":
        u = q[1] - p[1]
        v = -(q[0] - p[0])
        return cls(u, v, u * p[0] + v * p[1])

    def residual(self, p: tuple[complex, complex]) -> float:
        scale = max(abs(self.u), abs(self.v))
        return abs(self.u * p[0] + self.v * p[1] - self.w) / scale


@dataclass(frozen=True)
class ComplexArrangement:
    lines: tuple[ComplexLine, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.lines) != len(self.labels):
            raise ValueError("one label per line")
        for (i, a), (j, b) in combinations(enumerate(self.lines, 1), 2):
            if _proportional(a, b):
                raise ValueError(f"lines {i} and {j} coincide")


def _proportional(a: ComplexLine, b: ComplexLine) -> bool:
    va = (a.u, a.v, a.w)
    vb = (b.u, b.v, b.w)
    k = max(range(3), key=lambda t: abs(va[t]))
    if vb[k] == 0:
        return False
    f = va[k] / vb[k]
    scale = max(abs(t) for t in va)
    return all(abs(x - f * y) <= 1e-12 * scale for x, y in zip(va, vb))


def g6_points() -> list[tuple[complex, complex]]:
    omega = cmath.exp(2j * math.pi / 5)
    return [(1 + 0j, 1 + 0j)] + [(omega**i, omega ** (5 - i)) for i in range(1, 5)]


# Lines (P_a P_b) listed so that consecutive labels meet at interior points.
G6_CHORDS = ((0, 2), (4, 1), (3, 0), (2, 4), (1, 3))


def build_g6() -> ComplexArrangement:
    """Five pentagram lines through the points ``P_i`` plus ``6x - 4y = 1``."""
    P = g6_points()
    lines = [ComplexLine.through(P[a], P[b]) for a, b in G6_CHORDS]
    labels = [f"P{a}P{b}" for a, b in G6_CHORDS]
    lines.append(ComplexLine(6, -4, 1))
    labels.append("L")
    for ln, (a, b) in zip(lines, G6_CHORDS):
        if ln.residual(P[a]) > 1e-12 or ln.residual(P[b]) > 1e-12:
            raise ArithmeticError("pentagram line misses its defining points")
    return ComplexArrangement(tuple(lines), tuple(labels))


def intersect(l1: ComplexLine, l2: ComplexLine) -> tuple[complex, complex]:
    det = l1.u * l2.v - l1.v * l2.u
    n1 = math.hypot(abs(l1.u), abs(l1.v))
    n2 = math.hypot(abs(l2.u), abs(l2.v))
    if det == 0 or n1 * n2 / abs(det) > COND_LIMIT:
        raise NearParallel("lines are (nearly) parallel")
    x = (l1.w * l2.v - l1.v * l2.w) / det
    y = (l1.u * l2.w - l1.w * l2.u) / det
    return x, y


def ball_norm(p: tuple[complex, complex]) -> float:
    return math.sqrt(abs(p[0]) ** 2 + abs(p[1]) ** 2)


def intersection_table(arr: ComplexArrangement) -> list[dict]:
    """Every pairwise intersection with its 4-ball norm, sorted by norm then pair."""
    rows = []
    for i, j in combinations(range(1, len(arr.lines) + 1), 2):
        p = intersect(arr.lines[i - 1], arr.lines[j - 1])
        rows.append({"pair": (i, j), "point": p, "norm": ball_norm(p)})
    rows.sort(key=lambda r: (r["norm"], r["pair"]))
    return rows


def complex_ball_graph(arr: ComplexArrangement, r: float) -> Graph:
    if r <= 0:
        raise ValueError("radius must be positive")
    edges = []
    for row in intersection_table(arr):
        gap = row["norm"] ** 2 - r * r
        if abs(row["norm"] - r) <= AMBIGUITY_TOL:
            warnings.warn(
                f"intersection {row['pair']} has norm {row['norm']:.12g} within {AMBIGUITY_TOL} of r={r}",
                BoundaryAmbiguity,
                stacklevel=2,
            )
        if gap <= BOUNDARY_TOL:
            edges.append(row["pair"])
    return Graph(len(arr.lines), frozenset(edges))


def _clustered_norms(arr: ComplexArrangement) -> list[float]:
    out: list[float] = []
    for row in intersection_table(arr):
        if out and row["norm"] - out[-1] <= BOUNDARY_TOL:
            continue
        out.append(row["norm"])
    return out


def separating_radii(arr: ComplexArrangement, target: Graph) -> Optional[tuple[float, float]]:
    """Interval ``[lo, hi)`` of radii whose ball graph equals ``target``.

    The ends are consecutive distinct intersection norms (0 and inf at the
    extremes); None when no radius produces ``target``.
    """
    norms = _clustered_norms(arr)
    bounds = [0.0] + norms + [math.inf]
    tbl = intersection_table(arr)
    for lo, hi in zip(bounds, bounds[1:]):
        probe = lo + 1.0 if math.isinf(hi) else (lo + hi) / 2
        edges = frozenset(r["pair"] for r in tbl if r["norm"] <= probe)
        if Graph(len(arr.lines), edges) == target:
            return lo, hi
    return None


def g6_report(arr: Optional[ComplexArrangement] = None, target: Optional[Graph] = None) -> dict:
    from .graphs import catalog, format_graph

    arr = arr or build_g6()
    target = target or catalog("G6")
    tbl = intersection_table(arr)
    interval = separating_radii(arr, target)
    graph = None
    if interval is not None:
        lo, hi = interval
        graph = complex_ball_graph(arr, lo + 1.0 if math.isinf(hi) else (lo + hi) / 2)
    return {
        "labels": list(arr.labels),
        "intersections": [
            {
                "pair": f"{r['pair'][0]}-{r['pair'][1]}",
                "x": [r["point"][0].real, r["point"][0].imag],
                "y": [r["point"][1].real, r["point"][1].imag],
                "norm": r["norm"],
            }
            for r in tbl
        ],
        "sorted_norms": [r["norm"] for r in tbl],
        "separating_interval": None if interval is None else [interval[0], interval[1] if math.isfinite(interval[1]) else "inf"],
        "graph": None if graph is None else format_graph(graph),
        "target": format_graph(target),
        "matches": graph == target,
    }


# ----------------------------------------------------------------------
# Menelaus for polygons


@dataclass(frozen=True)
class PolygonInstance:
    """Vertices ``P_1..P_k`` and a transversal ``p*x + q*y = r``, all rational."""

    vertices: tuple[tuple[mpq, mpq], ...]
    line: tuple[mpq, mpq, mpq]

    def __post_init__(self):
        verts = tuple((mpq(x), mpq(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "line", tuple(mpq(t) for t in self.line))
        if len(verts) < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        if self.line[0] == 0 and self.line[1] == 0:
            raise ValueError("transversal has no direction")

    def edge_parameters(self) -> list[mpq]:
        """``t_i`` with ``Q_i = P_i + t_i (P_{i+1} - P_i)``."""
        p, q, r = self.line
        vals = [p * x + q * y for x, y in self.vertices]
        k = len(vals)
        out = []
        for i in range(k):
            li, lj = vals[i], vals[(i + 1) % k]
            if li == lj:
                raise DegeneratePolygon(i + 1, "edge is parallel to the transversal")
            t = (r - li) / (lj - li)
            if t == 0 or t == 1:
                raise DegeneratePolygon(i + 1, "transversal passes through a vertex")
            out.append(t)
        return out


def menelaus_product(inst: PolygonInstance) -> Scalar:
    """Product of the signed ratios ``Q_iP_i / Q_iP_{i+1} = t_i / (t_i - 1)``."""
    prod = mpq(1)
    for t in inst.edge_parameters():
        prod *= t / (t - 1)
    return Scalar(prod)


def crossing_parity(inst: PolygonInstance) -> tuple[int, bool]:
    """Number of polygon segments the transversal crosses, and whether it is even."""
    count = sum(1 for t in inst.edge_parameters() if 0 < t < 1)
    return count, count % 2 == 0


def random_instance(rng: random.Random, k: int = 5, span: int = 50) -> PolygonInstance:
    """A random rational k-gon and transversal in general position."""
    while True:
        verts = [(mpq(rng.randint(-span, span), rng.randint(1, 7)), mpq(rng.randint(-span, span), rng.randint(1, 7))) for _ in range(k)]
        line = (mpq(rng.randint(-9, 9)), mpq(rng.randint(-9, 9)), mpq(rng.randint(-span, span), rng.randint(1, 5)))
        if line[0] == 0 and line[1] == 0:
            continue
        inst = PolygonInstance(tuple(verts), line)
        try:
            inst.edge_parameters()
        except DegeneratePolygon:
            continue
        return inst


def seeded_instances(seed: int, count: int, k: int = 5) -> Sequence[PolygonInstance]:
    rng = random.Random(seed)
    return [random_instance(rng, k) for _ in range(count)]
