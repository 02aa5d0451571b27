"""Exact dense-tableau simplex with Bland's rule.

Works over any exact ordered field whose elements support ``+ - * /`` and
comparison with 0 (``gmpy2.mpq`` or :class:`~lineband.exact.Scalar`).
Variables of a :class:`~lineband.lp.LinearProgram` are free; a single-variable
row ``-k*x <= r`` is used as a lower bound to shift the variable, any other
variable is split into positive and negative parts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from gmpy2 import mpq

from .exact import lift
from .lp import LinearProgram


class SimplexError(RuntimeError):
    pass


@dataclass
class LpOutcome:
    status: str  # "optimal" | "infeasible"
    value: object = None
    primal: dict = field(default_factory=dict)
    dual: Optional[list] = None
    farkas: Optional[list] = None
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def simplex_solve(lp: LinearProgram, max_pivots: int = 100_000) -> LpOutcome:
    """Maximize ``lp.objective`` exactly.

    On optimality the outcome carries the primal point and non-negative row
    multipliers ``y`` with ``A^T y = e_obj`` and ``b^T y = value``. On
    infeasibility it carries ``y >= 0`` with ``A^T y = 0`` and ``b^T y < 0``.
    """
    return _Tableau(lp, max_pivots).run()


class _Tableau:
    def __init__(self, lp: LinearProgram, max_pivots: int):
        self.lp = lp
        self.max_pivots = max_pivots
        self.pivots = 0
        idx = lp.index()
        nv = len(lp.variables)
        rows = lp.constraints
        m = len(rows)
        zero = mpq(0)

        A = [[zero] * nv for _ in range(m)]
        b = []
        for k, con in enumerate(rows):
            for v, c in con.coeffs:
                A[k][idx[v]] = lift(c)
            b.append(lift(con.rhs))

        # tightest lower bound per variable from single-variable rows
        lower: dict[int, tuple[object, int]] = {}
        for k, con in enumerate(rows):
            if len(con.coeffs) == 1:
                v, c = con.coeffs[0]
                c = lift(c)
                if c < 0:
                    lb = b[k] / c
                    j = idx[v]
                    if j not in lower or lb > lower[j][0]:
                        lower[j] = (lb, k)
        self.lower = lower

        # columns: (variable index, sign)
        cols: list[tuple[int, int]] = []
        for j in range(nv):
            cols.append((j, 1))
            if j not in lower:
                cols.append((j, -1))
        self.cols = cols
        ncol = len(cols)

        shifted_b = []
        for k in range(m):
            r = b[k]
            for j, (lb, _) in lower.items():
                if A[k][j] != 0:
                    r = r - A[k][j] * lb
            shifted_b.append(r)

        self.m = m
        self.ncol = ncol
        self.art = ncol + m  # artificial column index
        width = ncol + m + 1
        T = []
        for k in range(m):
            row = [zero] * width
            for c, (j, s) in enumerate(cols):
                if A[k][j] != 0:
                    row[c] = A[k][j] if s > 0 else -A[k][j]
            row[ncol + k] = mpq(1)
            row[self.art] = mpq(-1)
            T.append(row)
        self.T = T
        self.rhs = shifted_b
        self.basis = [ncol + k for k in range(m)]
        self.A = A
        self.obj_col = idx[lp.objective]
        self.width = width

    # ------------------------------------------------------------------

    def _pivot(self, p: int, q: int) -> None:
        self.pivots += 1
        if self.pivots > self.max_pivots:
            raise SimplexError("pivot limit exceeded")
        T, rhs = self.T, self.rhs
        prow = T[p]
        piv = prow[q]
        prow = [v / piv if v != 0 else v for v in prow]
        T[p] = prow
        rhs[p] = rhs[p] / piv
        nz = [k for k, v in enumerate(prow) if v != 0]
        bp = rhs[p]
        for i in range(self.m):
            if i == p:
                continue
            row = T[i]
            f = row[q]
            if f == 0:
                continue
            for k in nz:
                row[k] = row[k] - f * prow[k]
            rhs[i] = rhs[i] - f * bp
        z = self.z
        f = z[q]
        if f != 0:
            for k in nz:
                z[k] = z[k] - f * prow[k]
            self.zval = self.zval - f * bp
        self.basis[p] = q

    def _bland(self, allow_art: bool) -> str:
        T, rhs, z = self.T, self.rhs, self.z
        while True:
            q = None
            for k in range(self.width):
                if k == self.art and not allow_art:
                    continue
                if z[k] < 0:
                    q = k
                    break
            if q is None:
                return "optimal"
            best = None
            for i in range(self.m):
                a = T[i][q]
                if a > 0:
                    ratio = rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or ratio < best[0] or (ratio == best[0] and self.basis[i] < best[1]):
                        best = (ratio, self.basis[i], i)
            if best is None:
                return "unbounded"
            self._pivot(best[2], q)

    def _set_objective(self, costs: dict[int, object]) -> None:
        # reduced-cost row r_j = c_B B^-1 A_j - c_j and value c_B B^-1 b
        zero = mpq(0)
        z = [zero] * self.width
        for k, c in costs.items():
            z[k] = -c
        val = zero
        for i, bv in enumerate(self.basis):
            c = costs.get(bv)
            if c:
                row = self.T[i]
                for k in range(self.width):
                    if row[k] != 0:
                        z[k] = z[k] + c * row[k]
                val = val + c * self.rhs[i]
        self.z = z
        self.zval = val

    def _row_multipliers(self) -> list:
        """Duals on the original rows, folding shifted-column reduced costs into bound rows."""
        y = [self.z[self.ncol + k] for k in range(self.m)]
        for c, (j, s) in enumerate(self.cols):
            if j in self.lower:
                r = self.z[c]
                if r != 0:
                    _, k0 = self.lower[j]
                    y[k0] = y[k0] + r / (-self.A[k0][j])
        return y

    def run(self) -> LpOutcome:
        m = self.m
        self.z = [mpq(0)] * self.width
        self.zval = mpq(0)
        neg = [i for i in range(m) if self.rhs[i] < 0]
        if neg:
            # phase 1: maximize -x0
            worst = min(neg, key=lambda i: (self.rhs[i], i))
            self._set_objective({self.art: mpq(-1)})
            self._pivot(worst, self.art)
            status = self._bland(allow_art=True)
            if status != "optimal":
                raise SimplexError("phase 1 reported unbounded")
            if self.zval < 0:
                farkas = self._row_multipliers()
                return LpOutcome("infeasible", farkas=farkas, pivots=self.pivots)
            for i, bv in enumerate(self.basis):
                if bv == self.art:
                    row = self.T[i]
                    for k in range(self.art):
                        if row[k] != 0:
                            self._pivot(i, k)
                            break
        for i in range(m):
            self.T[i][self.art] = mpq(0)
        costs = {}
        for c, (j, s) in enumerate(self.cols):
            if j == self.obj_col:
                costs[c] = mpq(s)
        self._set_objective(costs)
        status = self._bland(allow_art=False)
        if status != "optimal":
            raise SimplexError("LP is unbounded; margin programs are boxed so this is a bug")

        values = [mpq(0)] * len(self.lp.variables)
        colval = [mpq(0)] * self.ncol
        for i, bv in enumerate(self.basis):
            if bv < self.ncol:
                colval[bv] = self.rhs[i]
        for c, (j, s) in enumerate(self.cols):
            if colval[c] != 0:
                values[j] = values[j] + colval[c] if s > 0 else values[j] - colval[c]
        for j, (lb, _) in self.lower.items():
            values[j] = values[j] + lb
        primal = {v: values[k] for k, v in enumerate(self.lp.variables)}
        return LpOutcome(
            "optimal",
            value=primal[self.lp.objective],
            primal=primal,
            dual=self._row_multipliers(),
            pivots=self.pivots,
        )
