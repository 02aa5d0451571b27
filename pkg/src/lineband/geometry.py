"""Real non-vertical lines ``y = a*x + c``, bands, discs and intersection graphs.

Edge pairs must meet in the *closed* inner region; non-edge pairs must be
parallel or meet *strictly* outside the outer region.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Literal, Optional, Union

from gmpy2 import mpq

from .exact import Scalar, common_extension, format_scalar, parse_scalar
from .graphs import Graph


class GeometryError(ValueError):
    pass


class _Parallel:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "PARALLEL"


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"


PARALLEL = _Parallel()
INFINITY = _Infinity()


@dataclass(frozen=True)
class Line:
    a: Scalar
    c: Scalar

    def __post_init__(self):
        object.__setattr__(self, "a", Scalar.coerce(self.a))
        object.__setattr__(self, "c", Scalar.coerce(self.c))

    def at(self, x) -> Scalar:
        return self.a * x + self.c

    def __str__(self):
        return f"y = ({format_scalar(self.a)})*x + ({format_scalar(self.c)})"


@dataclass(frozen=True)
class Configuration:
    lines: tuple[Line, ...]
    d: int = 0

    def __post_init__(self):
        lines = tuple(self.lines)
        object.__setattr__(self, "lines", lines)
        vals = [v for ln in lines for v in (ln.a, ln.c)]
        d = common_extension(vals)
        if d and self.d and d != self.d:
            raise GeometryError(f"configuration declares d={self.d} but uses sqrt({d})")
        if self.d == 0 and d:
            object.__setattr__(self, "d", d)
        seen = set()
        for i, ln in enumerate(lines, start=1):
            key = (ln.a, ln.c)
            if key in seen:
                raise GeometryError(f"line {i} duplicates an earlier line")
            seen.add(key)

    def __len__(self):
        return len(self.lines)

    def line(self, i: int) -> Line:
        """1-based access."""
        return self.lines[i - 1]


@dataclass(frozen=True)
class Region:
    kind: Literal["band", "ball"]
    r: Scalar

    def __post_init__(self):
        kind = self.kind.lower()
        if kind not in ("band", "ball"):
            raise GeometryError(f"unknown region kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        r = Scalar.coerce(self.r)
        if r.sign() <= 0:
            raise GeometryError("region radius must be positive")
        object.__setattr__(self, "r", r)


def Band(r) -> Region:
    return Region("band", r)


def Ball(r) -> Region:
    return Region("ball", r)


# ----------------------------------------------------------------------
# intersections


def intersection_abscissa(l1: Line, l2: Line):
    """Exact ``x_ij = -(c_i - c_j)/(a_i - a_j)`` or PARALLEL."""
    if l1 == l2:
        raise GeometryError("identical lines have no single intersection")
    da = l1.a - l2.a
    if not da:
        return PARALLEL
    return -(l1.c - l2.c) / da


def intersection_point(l1: Line, l2: Line):
    x = intersection_abscissa(l1, l2)
    if x is PARALLEL:
        return PARALLEL
    return x, l1.at(x)


def in_region(p, reg: Region) -> bool:
    x, y = (Scalar.coerce(v) for v in p)
    if reg.kind == "band":
        return abs(x) <= reg.r
    return x * x + y * y <= reg.r * reg.r


def _strictly_outside(p, reg: Region) -> bool:
    x, y = p
    if reg.kind == "band":
        return abs(x) > reg.r
    return x * x + y * y > reg.r * reg.r


def intersection_graph(cfg: Configuration, reg: Region) -> Graph:
    n = len(cfg)
    edges = []
    for i, j in combinations(range(1, n + 1), 2):
        p = intersection_point(cfg.line(i), cfg.line(j))
        if p is not PARALLEL and in_region(p, reg):
            edges.append((i, j))
    return Graph(n, frozenset(edges))


@dataclass
class Violation:
    pair: tuple[int, int]
    reason: str

    def __str__(self):
        return f"{self.pair[0]}-{self.pair[1]}: {self.reason}"


@dataclass
class VerifyResult:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def verify_realization(
    cfg: Configuration,
    g: Graph,
    r_in,
    r_out,
    kind: str = "band",
) -> VerifyResult:
    """Check every pair of ``cfg`` against ``g`` for the radii ``(r_in, r_out)``."""
    if len(cfg) != g.n:
        raise GeometryError(f"configuration has {len(cfg)} lines but graph has {g.n} vertices")
    r_in = Scalar.coerce(r_in)
    r_out = Scalar.coerce(r_out)
    if not (1 <= r_in <= r_out):
        raise GeometryError("need 1 <= r_in <= r_out")
    inner = Region(kind, r_in)
    outer = Region(kind, r_out)
    out = VerifyResult()
    for i, j in g.pairs():
        p = intersection_point(cfg.line(i), cfg.line(j))
        if g.has_edge(i, j):
            if p is PARALLEL:
                out.violations.append(Violation((i, j), "edge: lines are parallel"))
            elif not in_region(p, inner):
                out.violations.append(Violation((i, j), f"edge: intersection outside {kind} {r_in}"))
        elif p is not PARALLEL and not _strictly_outside(p, outer):
            out.violations.append(
                Violation((i, j), f"non-edge: intersection not strictly outside {kind} {r_out}")
            )
    return out


def achieved_radii(cfg: Configuration, g: Graph):
    """``(edge_max, nonedge_min)`` of ``|x_ij|`` under band semantics.

    ``edge_max`` is None without edges; parallel non-edges count as INFINITY.
    The configuration realizes ``g`` for every ``R < nonedge_min``.
    """
    check = verify_realization(cfg, g, 1, 1, "band")
    if not check:
        raise GeometryError(f"configuration does not realize the graph at r_in = 1: {check.violations[0]}")
    edge_max: Optional[Scalar] = None
    nonedge_min: Union[Scalar, _Infinity] = INFINITY
    for i, j in g.pairs():
        x = intersection_abscissa(cfg.line(i), cfg.line(j))
        if g.has_edge(i, j):
            ax = abs(x)
            if edge_max is None or ax > edge_max:
                edge_max = ax
        elif x is not PARALLEL:
            ax = abs(x)
            if nonedge_min is INFINITY or ax < nonedge_min:
                nonedge_min = ax
    return edge_max, nonedge_min


def flatten_to_ball(cfg: Configuration, g: Graph, R, eps, max_halvings: int = 200) -> Configuration:
    """Turn a band realization for ``(1, R)`` into a ball realization for ``(1, R(1-eps))``.

    Vertical squashing by a dyadic ``lambda`` keeps every abscissa, then the
    homothety of ratio ``1 - eps`` pulls the inner points into the unit disc.
    ``lambda`` is halved from 1 until the exact ball check passes.
    """
    R = Scalar.coerce(R)
    eps = Scalar.coerce(eps)
    if not (0 < eps < 1):
        raise GeometryError("eps must lie in (0, 1)")
    band = verify_realization(cfg, g, 1, R, "band")
    if not band:
        raise GeometryError(f"input is not band-feasible for (1, {R}): {band.violations[0]}")
    shrink = 1 - eps
    target = R * shrink
    lam = mpq(1)
    for _ in range(max_halvings + 1):
        out = Configuration(
            tuple(Line(ln.a * lam, ln.c * lam * shrink) for ln in cfg.lines), cfg.d
        )
        if verify_realization(out, g, 1, target, "ball"):
            return out
        lam /= 2
    raise GeometryError(f"no admissible flattening factor found after {max_halvings} halvings")


# ----------------------------------------------------------------------
# configuration files


def config_to_json(cfg: Configuration) -> str:
    doc = {
        "d": cfg.d,
        "lines": [{"a": format_scalar(ln.a), "c": format_scalar(ln.c)} for ln in cfg.lines],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def config_from_json(text: str) -> Configuration:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GeometryError(f"invalid configuration JSON: {exc}") from None
    if not isinstance(doc, dict) or "lines" not in doc:
        raise GeometryError("configuration needs a 'lines' list")
    d = int(doc.get("d", 0))
    lines = []
    for k, entry in enumerate(doc["lines"], start=1):
        try:
            lines.append(Line(parse_scalar(entry["a"], d), parse_scalar(entry["c"], d)))
        except KeyError as exc:
            raise GeometryError(f"line {k} lacks field {exc}") from None
    return Configuration(tuple(lines), d)


def load_config(path) -> Configuration:
    with open(path, encoding="utf-8") as fh:
        return config_from_json(fh.read())


def save_config(cfg: Configuration, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(config_to_json(cfg))
