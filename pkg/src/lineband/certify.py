"""Independent exact checks of LP certificates.

Deliberately self-contained: it re-reads the constraint rows of a
:class:`~lineband.lp.LinearProgram` and recomputes every identity from
scratch, sharing no code with the pivoting engine.
"""

from __future__ import annotations

from .lp import LinearProgram


class CertificateError(AssertionError):
    pass


def _zero_like():
    from gmpy2 import mpq

    return mpq(0)


def _combination(lp: LinearProgram, y) -> tuple[dict, object]:
    if len(y) != len(lp.constraints):
        raise CertificateError(f"{len(y)} multipliers for {len(lp.constraints)} rows")
    total = {v: _zero_like() for v in lp.variables}
    rhs = _zero_like()
    for mult, con in zip(y, lp.constraints):
        if mult < 0:
            raise CertificateError(f"negative multiplier on {con.label}")
        if mult == 0:
            continue
        for v, c in con.coeffs:
            total[v] = total[v] + mult * c
        rhs = rhs + mult * con.rhs
    return total, rhs


def row_slack(con, point):
    lhs = _zero_like()
    for v, c in con.coeffs:
        lhs = lhs + c * point[v]
    return con.rhs - lhs


def check_primal(lp: LinearProgram, point: dict) -> None:
    for con in lp.constraints:
        if row_slack(con, point) < 0:
            raise CertificateError(f"row {con.label} violated")


def check_optimal(lp: LinearProgram, value, point: dict, y) -> None:
    """Primal feasibility, dual feasibility, strong duality, complementarity."""
    check_primal(lp, point)
    if point[lp.objective] != value:
        raise CertificateError("reported value differs from the primal objective")
    total, rhs = _combination(lp, y)
    for v in lp.variables:
        want = 1 if v == lp.objective else 0
        if total[v] != want:
            raise CertificateError(f"dual combination has coefficient {total[v]} on {v}")
    if rhs != value:
        raise CertificateError("strong duality fails")
    for mult, con in zip(y, lp.constraints):
        if mult != 0 and row_slack(con, point) != 0:
            raise CertificateError(f"complementary slackness fails on {con.label}")


def check_farkas(lp: LinearProgram, y) -> None:
    """``y >= 0``, ``A^T y = 0`` and ``b^T y < 0``: the rows imply ``0 <= negative``."""
    total, rhs = _combination(lp, y)
    for v, c in total.items():
        if c != 0:
            raise CertificateError(f"Farkas combination leaves {c} on {v}")
    if not rhs < 0:
        raise CertificateError("Farkas combination has non-negative right-hand side")


def check_margin_farkas(lp: LinearProgram, y, weight) -> None:
    """The rows imply ``weight * delta <= b^T y`` with ``b^T y <= 0``.

    Adding ``weight`` times ``-delta <= -eps`` then gives ``0 <= -weight*eps``
    for every ``eps > 0``: no point of the program has a positive margin.
    """
    total, rhs = _combination(lp, y)
    if not weight > 0:
        raise CertificateError("margin weight must be positive")
    for v, c in total.items():
        if v == lp.objective:
            c = c - weight
        if c != 0:
            raise CertificateError(f"margin certificate leaves {c} on {v}")
    if not rhs <= 0:
        raise CertificateError("margin certificate does not force delta <= 0")


def is_valid(check, *args) -> bool:
    try:
        check(*args)
    except CertificateError:
        return False
    return True
