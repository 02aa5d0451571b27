"""SVG figures for line configurations and the complex G6 schematic."""

from __future__ import annotations

import math
from itertools import combinations
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Circle  # noqa: E402

from .exact import to_float  # noqa: E402
from .geometry import PARALLEL, Configuration, intersection_point  # noqa: E402
from .graphs import Graph  # noqa: E402

EDGE_COLOR = "red"
NONEDGE_COLOR = "blue"
_RC = {
    "svg.hashsalt": "lineband",
    "svg.fonttype": "none",
    "font.size": 9,
    "axes.linewidth": 0.6,
}


def _f(x) -> float:
    if isinstance(x, (int, float)):
        return float(x)
    return to_float(x)[0]


def _points(cfg: Configuration, g: Graph):
    edge_pts, other_pts = [], []
    for i, j in combinations(range(1, len(cfg.lines) + 1), 2):
        p = intersection_point(cfg.line(i), cfg.line(j))
        if p is PARALLEL:
            continue
        xy = (_f(p[0]), _f(p[1]))
        (edge_pts if g.has_edge(i, j) else other_pts).append(xy)
    return edge_pts, other_pts


def _viewport(points, radii, ball: bool):
    span = max([abs(x) for x, _ in points] + [float(r) for r in radii] + [1.0])
    half = 1.15 * span
    if ball:
        return (-half, half), (-half, half)
    ys = [y for _, y in points] or [0.0]
    ylo, yhi = min(ys), max(ys)
    pad = max(0.15 * (yhi - ylo), 0.5)
    return (-half, half), (ylo - pad, yhi + pad)


def _save(fig, path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None, "Creator": "lineband"})
    plt.close(fig)


def emit_svg(cfg: Configuration, g: Graph, radii, path, region: str = "band", title: Optional[str] = None) -> None:
    """Draw ``cfg`` with its region boundaries and intersection markers.

    ``radii`` is ``(r_in, r_out)``; edge intersections get red dots and
    non-edge intersections blue squares.
    """
    if len(cfg.lines) != g.n:
        raise ValueError(f"graph has {g.n} vertices but configuration has {len(cfg.lines)} lines")
    ball = region == "ball"
    rin, rout = (_f(r) for r in radii)
    edge_pts, other_pts = _points(cfg, g)
    (xlo, xhi), (ylo, yhi) = _viewport(edge_pts + other_pts, (rin, rout), ball)

    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6, 4.5))
        for k, ln in enumerate(cfg.lines, 1):
            a, c = _f(ln.a), _f(ln.c)
            ax.plot([xlo, xhi], [a * xlo + c, a * xhi + c], color="0.2", lw=0.9, label=f"$\\ell_{{{k}}}$")
        if ball:
            for r, style in ((rin, "-"), (rout, "--")):
                ax.add_patch(Circle((0, 0), r, fill=False, ls=style, lw=0.7, color="0.45"))
        else:
            for r, style in ((rin, "-"), (rout, "--")):
                for s in (-1, 1):
                    ax.axvline(s * r, ls=style, lw=0.7, color="0.45")
        if edge_pts:
            ax.scatter(*zip(*edge_pts), marker="o", s=22, color=EDGE_COLOR, zorder=3)
        if other_pts:
            ax.scatter(*zip(*other_pts), marker="s", s=22, color=NONEDGE_COLOR, zorder=3)
        ax.set_xlim(xlo, xhi)
        ax.set_ylim(ylo, yhi)
        if ball:
            ax.set_aspect("equal")
        if title:
            ax.set_title(title)
        ax.legend(loc="upper left", fontsize=7, frameon=False)
        _save(fig, path)


def emit_g6_svg(radius: float, path) -> None:
    """Real schematic of the pentagram-plus-line arrangement with a bounding circle.

    Vertices are drawn at the x-coordinates of the points ``P_i`` so the
    five chords form a pentagram; the sixth line crosses every chord inside.
    """
    from .complex_arr import G6_CHORDS, g6_points

    pts = [(p[0].real, p[0].imag) for p in g6_points()]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5, 5))
        for a, b in G6_CHORDS:
            (x1, y1), (x2, y2) = pts[a], pts[b]
            dx, dy = x2 - x1, y2 - y1
            ax.plot([x1 - 0.4 * dx, x2 + 0.4 * dx], [y1 - 0.4 * dy, y2 + 0.4 * dy], color="0.2", lw=0.9)
        ax.plot([-1.6, 1.6], [-0.12, 0.08], color="0.2", lw=0.9, ls="-.")
        ax.scatter(*zip(*pts), marker="s", s=22, color=NONEDGE_COLOR, zorder=3)
        scale = radius / math.sqrt(2)
        inner = []
        segs = [(pts[a], pts[b]) for a, b in G6_CHORDS] + [((-1.6, -0.12), (1.6, 0.08))]
        for (p1, p2), (q1, q2) in combinations(segs, 2):
            d1 = (p2[0] - p1[0], p2[1] - p1[1])
            d2 = (q2[0] - q1[0], q2[1] - q1[1])
            det = d1[0] * d2[1] - d1[1] * d2[0]
            if abs(det) < 1e-12:
                continue
            t = ((q1[0] - p1[0]) * d2[1] - (q1[1] - p1[1]) * d2[0]) / det
            x, y = p1[0] + t * d1[0], p1[1] + t * d1[1]
            if math.hypot(x, y) < scale:
                inner.append((x, y))
        if inner:
            ax.scatter(*zip(*inner), marker="o", s=18, color=EDGE_COLOR, zorder=3)
        ax.add_patch(Circle((0, 0), scale, fill=False, ls="--", lw=0.7, color="0.45"))
        ax.set_xlim(-1.7, 1.7)
        ax.set_ylim(-1.7, 1.7)
        ax.set_aspect("equal")
        ax.set_axis_off()
        _save(fig, path)
