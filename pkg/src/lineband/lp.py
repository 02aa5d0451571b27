"""Sign cases and the max-margin linear program for the band problem.

A sign case fixes, for every pair ``i < j``, the signs ``sigma`` of
``a_i - a_j`` and ``tau`` of ``c_i - c_j``. With the signs fixed the
absolute values disappear and the realization conditions become linear.
Strict inequalities get a common margin ``delta`` which is maximized; the
case is feasible exactly when the optimal margin is positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional, Sequence

from gmpy2 import mpq

from .exact import Scalar, format_scalar, lift
from .graphs import Graph


def pair_list(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(1, n + 1), 2))


@dataclass(frozen=True)
class SignCase:
    """Per-pair signs in lexicographic pair order; ``None`` marks an unassigned sign."""

    n: int
    sigma: tuple[Optional[int], ...]
    tau: tuple[Optional[int], ...]

    def __post_init__(self):
        m = self.n * (self.n - 1) // 2
        if len(self.sigma) != m or len(self.tau) != m:
            raise ValueError(f"sign case for n={self.n} needs {m} signs per family")
        for s in self.sigma + self.tau:
            if s not in (1, -1, None):
                raise ValueError(f"sign must be +1, -1 or None, got {s!r}")

    @property
    def canonical(self) -> bool:
        return self.sigma[0] == 1 and self.tau[0] == 1

    @property
    def complete(self) -> bool:
        return None not in self.sigma and None not in self.tau

    def flip_sigma(self) -> "SignCase":
        return SignCase(self.n, tuple(None if s is None else -s for s in self.sigma), self.tau)

    def flip_tau(self) -> "SignCase":
        return SignCase(self.n, self.sigma, tuple(None if t is None else -t for t in self.tau))

    def to_dict(self) -> dict:
        pairs = pair_list(self.n)
        return {
            "sigma": {f"{i}-{j}": s for (i, j), s in zip(pairs, self.sigma)},
            "tau": {f"{i}-{j}": t for (i, j), t in zip(pairs, self.tau)},
        }

    def __str__(self):
        def fmt(v):
            return "".join("." if s is None else ("+" if s > 0 else "-") for s in v)

        return f"sigma={fmt(self.sigma)} tau={fmt(self.tau)}"


def case_count(n: int) -> int:
    m = n * (n - 1) // 2
    return 4 ** (m - 1) if m else 1


def _signs_from_index(idx: int, m: int) -> tuple[int, ...]:
    # pair 0 is fixed to +1; bit k of idx is pair k+1, with 1 meaning -1
    return (1,) + tuple(-1 if (idx >> (m - 2 - k)) & 1 else 1 for k in range(m - 1))


def sign_case_at(n: int, index: int) -> SignCase:
    """Decode the ``index``-th canonical case (sigma is the major key)."""
    m = n * (n - 1) // 2
    half = 1 << (m - 1)
    if not (0 <= index < half * half):
        raise IndexError(index)
    return SignCase(n, _signs_from_index(index // half, m), _signs_from_index(index % half, m))


def enumerate_sign_cases(n: int, start: int = 0, stop: Optional[int] = None) -> Iterator[SignCase]:
    """Canonical sign cases (``sigma_12 = tau_12 = +1``) in a fixed order."""
    if n < 2:
        raise ValueError("sign cases need n >= 2")
    total = case_count(n)
    stop = total if stop is None else min(stop, total)
    for idx in range(start, stop):
        yield sign_case_at(n, idx)


def split_ranges(total: int, k: int) -> list[tuple[int, int]]:
    """Split ``range(total)`` into ``k`` contiguous, nearly equal chunks."""
    k = max(1, min(k, total)) if total else 1
    base, extra = divmod(total, k)
    out, lo = [], 0
    for i in range(k):
        hi = lo + base + (1 if i < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


# ----------------------------------------------------------------------
# linear programs


@dataclass(frozen=True)
class Constraint:
    """``sum(coef * var) <= rhs`` with exact coefficients."""

    coeffs: tuple[tuple[str, object], ...]
    rhs: object
    label: str

    def coeff(self, var: str):
        for v, c in self.coeffs:
            if v == var:
                return c
        return mpq(0)


@dataclass
class LinearProgram:
    variables: tuple[str, ...]
    objective: str
    constraints: list[Constraint]
    d: int = 0

    def index(self) -> dict[str, int]:
        return {v: k for k, v in enumerate(self.variables)}

    def dump(self) -> str:
        lines = [f"maximize {self.objective}"]
        for con in self.constraints:
            terms = " ".join(f"{_fmt_coef(c)}*{v}" for v, c in con.coeffs)
            lines.append(f"{terms} <= {format_scalar(con.rhs)}")
        return "\n".join(lines) + "\n"


def _fmt_coef(c) -> str:
    s = format_scalar(c)
    return f"({s})" if "s" in s else s


def _row(coeffs: dict, rhs, label: str, order: dict[str, int]) -> Constraint:
    items = tuple(sorted(((v, c) for v, c in coeffs.items() if c != 0), key=lambda t: order[t[0]]))
    return Constraint(items, rhs, label)


def lp_variables(n: int) -> tuple[str, ...]:
    names: list[str] = []
    for i in range(1, n + 1):
        names += [f"a{i}", f"c{i}"]
    return tuple(names) + ("delta",)


def build_margin_lp(g: Graph, R, sc: SignCase, box=1, include_box: bool = True) -> LinearProgram:
    """Max-margin LP for graph ``g`` at radius ``R`` in sign case ``sc``.

    Rows (all in ``<=`` form): sign consistency for assigned signs, per edge
    ``sigma*(a_i-a_j) >= tau*(c_i-c_j)`` and ``sigma*(a_i-a_j) >= delta``, per
    non-edge ``tau*(c_i-c_j) - R*sigma*(a_i-a_j) >= delta``, and box bounds.
    Rows whose signs are unassigned in a partial case are left out.
    """
    if sc.n != g.n:
        raise ValueError("sign case and graph disagree on n")
    R = lift(R)
    box = lift(box)
    if R < 1:
        raise ValueError("R must be >= 1")
    if box <= 0:
        raise ValueError("box must be positive")
    d = R.d if isinstance(R, Scalar) else 0
    variables = lp_variables(g.n)
    order = {v: k for k, v in enumerate(variables)}
    one = mpq(1)
    zero = mpq(0)
    rows: list[Constraint] = []
    for (i, j), s, t in zip(pair_list(g.n), sc.sigma, sc.tau):
        ai, aj, ci, cj = f"a{i}", f"a{j}", f"c{i}", f"c{j}"
        if s is not None:
            rows.append(_row({ai: -s * one, aj: s * one}, zero, f"sign_a({i},{j})", order))
        if t is not None:
            rows.append(_row({ci: -t * one, cj: t * one}, zero, f"sign_c({i},{j})", order))
        if g.has_edge(i, j):
            if s is not None and t is not None:
                rows.append(
                    _row({ai: -s * one, aj: s * one, ci: t * one, cj: -t * one}, zero, f"edge_in({i},{j})", order)
                )
            if s is not None:
                rows.append(_row({ai: -s * one, aj: s * one, "delta": one}, zero, f"edge_gap({i},{j})", order))
        elif s is not None and t is not None:
            rows.append(
                _row(
                    {ci: -t * one, cj: t * one, ai: R * s, aj: -R * s, "delta": one},
                    zero,
                    f"nonedge_out({i},{j})",
                    order,
                )
            )
    if include_box:
        for v in variables[:-1]:
            rows.append(_row({v: one}, box, f"box_hi({v})", order))
            rows.append(_row({v: -one}, box, f"box_lo({v})", order))
        rows.append(_row({"delta": one}, box, "box_hi(delta)", order))
        rows.append(_row({"delta": -one}, zero, "box_lo(delta)", order))
    return LinearProgram(variables, "delta", rows, d)


def partial_case(n: int, sigma: Optional[Sequence[int]] = None, tau: Optional[Sequence[int]] = None) -> SignCase:
    m = n * (n - 1) // 2
    return SignCase(
        n,
        tuple(sigma) if sigma is not None else (None,) * m,
        tuple(tau) if tau is not None else (None,) * m,
    )
