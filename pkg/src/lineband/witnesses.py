"""Explicit line configurations used as exact witnesses."""

from __future__ import annotations

import math
from fractions import Fraction

from gmpy2 import mpq

from .exact import Scalar
from .geometry import PARALLEL, Configuration, Line, intersection_point
from .graphs import cycle_graph


def a4_configuration() -> Configuration:
    """Four lines over Q(sqrt 2) whose near points sit at |x| = 1 and far points at |x| = 3+2*sqrt(2)."""
    r2 = Scalar.sqrt(2)
    half = mpq(1, 2)
    return Configuration(
        (
            Line(0, 0),
            Line(1 + half * r2, -1 - half * r2),
            Line(-half * r2, -2 - 3 * half * r2),
            Line(1, -3 - 2 * r2),
        ),
        2,
    )


def a5_printed_configuration() -> Configuration:
    """Five lines over Q(sqrt 5) as printed next to the A5 radius claim."""
    r5 = Scalar.sqrt(5)
    half = mpq(1, 2)
    return Configuration(
        (
            Line(0, 0),
            Line(0, 3 + r5),
            Line(1, 0),
            Line(1, 2 + r5),
            Line(-half * (r5 - 1), half * (3 + r5)),
        ),
        5,
    )


def _rational_on_circle(angle: float, denom: int = 10_000) -> tuple[mpq, mpq]:
    t = Fraction(math.tan(angle / 2)).limit_denominator(denom)
    t = mpq(t.numerator, t.denominator)
    s = 1 + t * t
    return (1 - t * t) / s, 2 * t / s


def pentagram_configuration():
    """Rational near-regular pentagram realizing C5 in the unit disc.

    Tips lie on a rational circle; the whole figure is scaled so that the
    inner pentagon fits in the closed unit disc. Returns the configuration
    and the squared norm of the nearest tip (every non-edge point lies
    exactly at that squared norm).
    """
    tips = [_rational_on_circle(math.pi / 2 + 2 * math.pi * k / 5) for k in range(5)]
    raw = []
    for k in range(5):
        (x1, y1), (x2, y2) = tips[k], tips[(k + 2) % 5]
        a = (y2 - y1) / (x2 - x1)
        raw.append((a, y1 - a * x1))
    cfg = Configuration(tuple(Line(a, c) for a, c in raw))
    g = cycle_graph(5)
    inner = 0
    for i, j in g.edges:
        x, y = intersection_point(cfg.line(i), cfg.line(j))
        inner = max(inner, (x * x + y * y).rational())
    # largest simple rational s with s^2 * inner <= 1
    s = Fraction(1 / math.sqrt(float(inner))).limit_denominator(1000)
    s = mpq(s.numerator, s.denominator)
    while s * s * inner > 1:
        s -= mpq(1, 1000)
    scaled = Configuration(tuple(Line(a, s * c) for a, c in raw))
    tip_norm2 = None
    for i, j in g.non_edges():
        p = intersection_point(scaled.line(i), scaled.line(j))
        if p is PARALLEL:
            continue
        x, y = p
        n2 = (x * x + y * y).rational()
        tip_norm2 = n2 if tip_norm2 is None else min(tip_norm2, n2)
    return scaled, tip_norm2
