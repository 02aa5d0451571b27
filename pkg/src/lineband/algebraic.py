"""Interval Newton refinement of real polynomial roots in exact rational arithmetic."""

from __future__ import annotations

from gmpy2 import mpq


def poly_eval(coeffs, x):
    """Horner evaluation; ``coeffs`` run from the leading term down."""
    acc = mpq(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def poly_derivative(coeffs):
    deg = len(coeffs) - 1
    return [c * (deg - k) for k, c in enumerate(coeffs[:-1])]


def interval_eval(coeffs, lo, hi):
    """Enclosure of the polynomial over ``[lo, hi]`` via interval Horner."""
    alo = ahi = mpq(0)
    for c in coeffs:
        prods = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(prods) + c, max(prods) + c
    return alo, ahi


def interval_newton(coeffs, lo, hi, width=mpq(1, 10**12), max_iter=200):
    """Shrink ``[lo, hi]`` around its unique simple root below ``width``.

    Raises ValueError if the derivative enclosure contains 0 or the interval
    provably holds no root.
    """
    lo, hi = mpq(lo), mpq(hi)
    dcoeffs = poly_derivative(coeffs)
    for _ in range(max_iter):
        if hi - lo <= width:
            return lo, hi
        dlo, dhi = interval_eval(dcoeffs, lo, hi)
        if dlo <= 0 <= dhi:
            raise ValueError("derivative enclosure contains 0; bisect first")
        mid = (lo + hi) / 2
        fm = poly_eval(coeffs, mid)
        if fm == 0:
            return mid, mid
        cands = (mid - fm / dlo, mid - fm / dhi)
        nlo, nhi = max(lo, min(cands)), min(hi, max(cands))
        if nlo > nhi:
            raise ValueError("no root in interval")
        if (nlo, nhi) == (lo, hi):
            # no progress: fall back to a bisection step
            if poly_eval(coeffs, lo) * fm <= 0:
                nhi = mid
            else:
                nlo = mid
        lo, hi = nlo, nhi
    raise ValueError("interval Newton did not converge")


G3_CUBIC = (mpq(1), mpq(1), mpq(-9), mpq(-1))


def g3_root(width=mpq(1, 10**10)):
    """Root of x^3 + x^2 - 9x - 1 in (2.60, 2.61) as a rational enclosure."""
    return interval_newton(G3_CUBIC, mpq(260, 100), mpq(261, 100), width)
