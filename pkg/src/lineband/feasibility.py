"""Feasibility of the band problem, maximal-radius bisection and exact boundary checks.

Every sign case ends in one of three ways:

* pruned: the sign pattern alone orders the slopes (or intercepts) around a
  cycle that contains a strict inequality. The cycle is turned into an exact
  margin certificate on the rows it touches.
* refuted: the float screen finds no positive margin. In certified mode the
  float dual is repaired into an exact certificate (falling back to the exact
  simplex when repair fails).
* solved positively: the exact simplex confirms a positive margin and the
  resulting lines are checked geometrically.

Floats only steer; every reported decision in certified mode is exact.
"""

from __future__ import annotations

import logging
import math
import multiprocessing as mp
import os
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from gmpy2 import mpq
from scipy.optimize import linprog

from . import certify
from .exact import Scalar, dyadic, format_scalar, lift, to_float
from .geometry import INFINITY, Configuration, Line, achieved_radii, verify_realization
from .graphs import Graph, format_graph
from .lp import (
    LinearProgram,
    SignCase,
    build_margin_lp,
    case_count,
    pair_list,
    partial_case,
    split_ranges,
)
from .simplex import simplex_solve

log = logging.getLogger(__name__)

DEFAULT_MAX_CASES = 4**9
FLOAT_MARGIN = 1e-9
SUPPORT_TOL = 1e-9


class ResourceCapExceeded(RuntimeError):
    pass


class NotRealizable(ValueError):
    pass


@dataclass
class Certificate:
    config: Configuration
    sign_case: SignCase
    margin: Scalar
    achieved: tuple
    case_index: int = -1

    def to_dict(self) -> dict:
        edge_max, nonedge_min = self.achieved
        return {
            "config": {
                "d": self.config.d,
                "lines": [{"a": format_scalar(ln.a), "c": format_scalar(ln.c)} for ln in self.config.lines],
            },
            "sign_case": self.sign_case.to_dict(),
            "margin": format_scalar(self.margin),
            "edge_max": None if edge_max is None else format_scalar(edge_max),
            "nonedge_min": "inf" if nonedge_min is INFINITY else format_scalar(nonedge_min),
        }


@dataclass
class FeasibilityResult:
    graph: Graph
    R: Scalar
    mode: str
    status: str
    certificate: Optional[Certificate] = None
    cases_total: int = 0
    cases_solved: int = 0
    cases_pruned: int = 0
    certificates_verified: int = 0
    exact_solves: int = 0
    wall_ms: int = 0

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    @property
    def advisory(self) -> bool:
        return self.status == "infeasible" and self.mode == "fast"

    def to_dict(self) -> dict:
        return {
            "graph": format_graph(self.graph),
            "R": format_scalar(self.R),
            "d": self.R.d,
            "status": self.status,
            "mode": self.mode,
            "advisory": self.advisory,
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
            "cases_total": self.cases_total,
            "cases_solved": self.cases_solved,
            "cases_pruned": self.cases_pruned,
            "certificates_verified": self.certificates_verified,
            "wall_ms": self.wall_ms,
        }


@dataclass
class RmaxResult:
    lo: float
    hi: float
    status: str  # "Bracketed" | "ExceedsCap"
    witness: Optional[Certificate]
    probes: list = field(default_factory=list)
    mode: str = "fast"

    @property
    def midpoint(self) -> float:
        return (self.lo + self.hi) / 2

    def to_dict(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "midpoint": self.midpoint,
            "status": self.status,
            "mode": self.mode,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "probes": [{"R": r, "feasible": f} for r, f in self.probes],
        }


# ----------------------------------------------------------------------
# sign-pattern order analysis


def _order_cycle(n: int, pairs, signs, strict_mask) -> Optional[list[int]]:
    """Pair indices of a cycle with a strict arc, or None if the pattern is orderable.

    Sign ``+1`` on pair ``(i, j)`` is the arc ``i -> j`` meaning value_i >= value_j.
    """
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(1, n + 1)}
    arcs = []
    for p, ((i, j), s) in enumerate(zip(pairs, signs)):
        u, v = (i, j) if s > 0 else (j, i)
        adj[u].append((v, p))
        arcs.append((u, v, p))
    for u, v, p in arcs:
        if not strict_mask[p]:
            continue
        # path v ~> u closes a cycle through the strict arc
        prev: dict[int, tuple[int, int]] = {v: (-1, -1)}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            if x == u:
                break
            for y, q in adj[x]:
                if y not in prev:
                    prev[y] = (x, q)
                    queue.append(y)
        if u in prev:
            cyc = [p]
            x = u
            while x != v:
                x, q = prev[x]
                cyc.append(q)
            return cyc
    return None


@dataclass(frozen=True)
class _CycleCert:
    family: str  # "sigma" | "tau"
    pairs: tuple[int, ...]


class _Scanner:
    """Solve canonical sign cases of ``g`` at radius ``R`` by index range."""

    def __init__(self, g: Graph, R, mode: str, audit: Optional[list] = None):
        self.g = g
        self.audit = audit
        self.R = lift(R)
        self.Rf = float(Scalar.coerce(R))
        self.mode = mode
        self.n = g.n
        self.pairs = pair_list(g.n)
        self.m = len(self.pairs)
        self.half = 1 << (self.m - 1)
        self.is_edge = [g.has_edge(i, j) for i, j in self.pairs]
        self._sigma_cache: dict[int, Optional[_CycleCert]] = {}
        self._tau_cache: dict[int, Optional[_CycleCert]] = {}
        self._verified: set = set()
        self.stats = {"solved": 0, "pruned": 0, "verified": 0, "exact": 0}
        self._build_float_template()

    # --- sign decoding ------------------------------------------------

    def signs(self, idx: int) -> tuple[int, ...]:
        m = self.m
        return (1,) + tuple(-1 if (idx >> (m - 2 - k)) & 1 else 1 for k in range(m - 1))

    def case(self, index: int) -> SignCase:
        return SignCase(self.n, self.signs(index // self.half), self.signs(index % self.half))

    def sigma_cycle(self, sidx: int) -> Optional[_CycleCert]:
        if sidx not in self._sigma_cache:
            cyc = _order_cycle(self.n, self.pairs, self.signs(sidx), self.is_edge)
            self._sigma_cache[sidx] = None if cyc is None else _CycleCert("sigma", tuple(cyc))
        return self._sigma_cache[sidx]

    def tau_cycle(self, tidx: int) -> Optional[_CycleCert]:
        if tidx not in self._tau_cache:
            strict = [not e for e in self.is_edge]
            cyc = _order_cycle(self.n, self.pairs, self.signs(tidx), strict)
            self._tau_cache[tidx] = None if cyc is None else _CycleCert("tau", tuple(cyc))
        return self._tau_cache[tidx]

    # --- cycle certificates -------------------------------------------

    def cycle_certificate(self, cert: _CycleCert, sigma, tau):
        """Partial LP restricted to the cycle's pairs plus its margin multipliers."""
        m = self.m
        sig = [None] * m
        ta = [None] * m
        for p in cert.pairs:
            sig[p] = sigma[p]
            if cert.family == "tau":
                ta[p] = tau[p]
        sc = SignCase(self.n, tuple(sig), tuple(ta))
        lp = build_margin_lp(self.g, self.R, sc, include_box=False)
        mult: dict[str, object] = {}
        weight = 0
        for p in cert.pairs:
            i, j = self.pairs[p]
            if cert.family == "sigma":
                if self.is_edge[p]:
                    mult[f"edge_gap({i},{j})"] = mpq(1)
                    weight += 1
                else:
                    mult[f"sign_a({i},{j})"] = mpq(1)
            else:
                if self.is_edge[p]:
                    mult[f"sign_c({i},{j})"] = mpq(1)
                else:
                    mult[f"nonedge_out({i},{j})"] = mpq(1)
                    mult[f"sign_a({i},{j})"] = self.R
                    weight += 1
        y = [mult.get(con.label, mpq(0)) for con in lp.constraints]
        return lp, y, mpq(weight), sc

    def verify_cycle(self, cert: _CycleCert, sigma, tau) -> None:
        key = (cert, tuple(sigma[p] for p in cert.pairs), tuple(tau[p] for p in cert.pairs) if cert.family == "tau" else ())
        if key in self._verified:
            return
        lp, y, weight, sc = self.cycle_certificate(cert, sigma, tau)
        certify.check_margin_farkas(lp, y, weight)
        self._verified.add(key)
        if self.audit is not None:
            self.audit.append(("margin", lp, y, weight, sc))
        self.stats["verified"] += 1

    # --- float screen -------------------------------------------------

    def _build_float_template(self) -> None:
        rows, cols, base, kind, pidx, labels = [], [], [], [], [], []
        r = 0

        def add(entries, label):
            nonlocal r
            for col, b, k, p in entries:
                rows.append(r)
                cols.append(col)
                base.append(b)
                kind.append(k)
                pidx.append(p)
            labels.append(label)
            r += 1

        # kind 0: times sigma, 1: times tau, 2: times R*sigma, 3: constant
        nv = 2 * self.n + 1
        dl = nv - 1
        for p, (i, j) in enumerate(self.pairs):
            ai, aj, ci, cj = 2 * (i - 1), 2 * (j - 1), 2 * (i - 1) + 1, 2 * (j - 1) + 1
            add([(ai, -1, 0, p), (aj, 1, 0, p)], f"sign_a({i},{j})")
            add([(ci, -1, 1, p), (cj, 1, 1, p)], f"sign_c({i},{j})")
            if self.is_edge[p]:
                add([(ai, -1, 0, p), (aj, 1, 0, p), (ci, 1, 1, p), (cj, -1, 1, p)], f"edge_in({i},{j})")
                add([(ai, -1, 0, p), (aj, 1, 0, p), (dl, 1, 3, p)], f"edge_gap({i},{j})")
            else:
                add([(ci, -1, 1, p), (cj, 1, 1, p), (ai, 1, 2, p), (aj, -1, 2, p), (dl, 1, 3, p)], f"nonedge_out({i},{j})")
        self.f_rows = np.array(rows)
        self.f_cols = np.array(cols)
        self.f_base = np.array(base, dtype=float)
        self.f_kind = np.array(kind)
        self.f_pidx = np.array(pidx)
        self.f_labels = labels
        self.f_shape = (r, nv)
        self.f_cost = np.zeros(nv)
        self.f_cost[-1] = -1.0
        self.f_bounds = [(-1.0, 1.0)] * (nv - 1) + [(0.0, 1.0)]

    def float_solve(self, sigma, tau):
        sig = np.array(sigma, dtype=float)
        ta = np.array(tau, dtype=float)
        factor = np.select(
            [self.f_kind == 0, self.f_kind == 1, self.f_kind == 2],
            [sig[self.f_pidx], ta[self.f_pidx], self.Rf * sig[self.f_pidx]],
            1.0,
        )
        A = np.zeros(self.f_shape)
        A[self.f_rows, self.f_cols] = self.f_base * factor
        res = linprog(self.f_cost, A_ub=A, b_ub=np.zeros(self.f_shape[0]), bounds=self.f_bounds, method="highs")
        if res.status != 0:
            return None, None
        return -res.fun, -res.ineqlin.marginals

    # --- exact paths --------------------------------------------------

    def repair(self, sc: SignCase, duals) -> bool:
        """Turn the float dual support into an exact margin certificate."""
        support = [self.f_labels[k] for k in np.flatnonzero(duals > SUPPORT_TOL)]
        if not support:
            return False
        lp = build_margin_lp(self.g, self.R, sc, include_box=False)
        by_label = {con.label: k for k, con in enumerate(lp.constraints)}
        vidx = lp.index()
        cols = []
        for lab in support:
            vec = [mpq(0)] * len(lp.variables)
            for v, c in lp.constraints[by_label[lab]].coeffs:
                vec[vidx[v]] = c
            cols.append(vec)
        target = [mpq(0)] * len(lp.variables)
        target[vidx["delta"]] = mpq(1)
        sol = _solve_exact(cols, target)
        if sol is None or any(v < 0 for v in sol):
            return False
        y = [mpq(0)] * len(lp.constraints)
        for lab, v in zip(support, sol):
            y[by_label[lab]] = v
        if not certify.is_valid(certify.check_margin_farkas, lp, y, mpq(1)):
            return False
        self.stats["verified"] += 1
        if self.audit is not None:
            self.audit.append(("margin", lp, y, mpq(1), sc))
        return True

    def exact(self, sc: SignCase, index: int) -> Optional[Certificate]:
        self.stats["exact"] += 1
        lp = build_margin_lp(self.g, self.R, sc)
        out = simplex_solve(lp)
        certify.check_optimal(lp, out.value, out.primal, out.dual)
        self.stats["verified"] += 1
        if self.audit is not None:
            self.audit.append(("optimal", lp, out, None, sc))
        if out.value > 0:
            return self._certificate(sc, out, index)
        if self.mode == "certified":
            certify.check_margin_farkas(lp, out.dual, mpq(1))
        return None

    def _certificate(self, sc: SignCase, out, index: int) -> Certificate:
        lines = tuple(
            Line(Scalar.coerce(out.primal[f"a{i}"]), Scalar.coerce(out.primal[f"c{i}"]))
            for i in range(1, self.n + 1)
        )
        d = self.R.d if isinstance(self.R, Scalar) else 0
        cfg = Configuration(lines, d)
        check = verify_realization(cfg, self.g, 1, self.R, "band")
        if not check:
            raise certify.CertificateError(f"LP point fails geometric check: {check.violations[0]}")
        achieved = achieved_radii(cfg, self.g)
        if not (achieved[1] is INFINITY or achieved[1] > self.R):
            raise certify.CertificateError("witness does not clear the outer radius")
        return Certificate(cfg, sc, Scalar.coerce(out.value), achieved, index)

    def leaf(self, index: int) -> Optional[Certificate]:
        sidx, tidx = divmod(index, self.half)
        sigma, tau = self.signs(sidx), self.signs(tidx)
        cyc = self.sigma_cycle(sidx) or self.tau_cycle(tidx)
        if cyc is not None:
            self.stats["pruned"] += 1
            if self.mode == "certified":
                self.verify_cycle(cyc, sigma, tau)
            return None
        self.stats["solved"] += 1
        sc = SignCase(self.n, sigma, tau)
        margin, duals = self.float_solve(sigma, tau)
        if margin is not None and margin > FLOAT_MARGIN:
            return self.exact(sc, index)
        if self.mode == "fast":
            return None
        if margin is not None and self.repair(sc, duals):
            return None
        return self.exact(sc, index)

    def scan(self, lo: int, hi: int, stop=None) -> tuple[Optional[Certificate], dict]:
        """First feasible case in ``[lo, hi)``; ``stop(index)`` may cut the scan short."""
        index = lo
        while index < hi:
            if stop is not None and stop(index):
                break
            sidx, tidx = divmod(index, self.half)
            cyc = self.sigma_cycle(sidx)
            if cyc is not None:
                # the sigma prefix alone is contradictory: skip its whole block
                block_end = min(hi, (sidx + 1) * self.half)
                self.stats["pruned"] += block_end - index
                if self.mode == "certified":
                    self.verify_cycle(cyc, self.signs(sidx), self.signs(tidx))
                index = block_end
                continue
            found = self.leaf(index)
            if found is not None:
                return found, dict(self.stats)
            index += 1
        return None, dict(self.stats)


def _solve_exact(cols: Sequence[Sequence], target: Sequence) -> Optional[list]:
    """Solve ``sum_k x_k cols[k] = target`` exactly; free unknowns are set to 0."""
    nrow = len(target)
    ncol = len(cols)
    M = [[cols[k][r] for k in range(ncol)] + [target[r]] for r in range(nrow)]
    pivots = []
    row = 0
    for col in range(ncol):
        piv = next((r for r in range(row, nrow) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        p = M[row][col]
        M[row] = [v / p for v in M[row]]
        for r in range(nrow):
            if r != row and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
        if row == nrow:
            break
    for r in range(row, nrow):
        if M[r][ncol] != 0:
            return None
    x = [mpq(0)] * ncol
    for r, col in enumerate(pivots):
        x[col] = M[r][ncol]
    return x


# ----------------------------------------------------------------------
# worker pool

_STOP = None


def _init_worker(stop_value):
    global _STOP
    _STOP = stop_value


def _run_chunk(args):
    g, R, mode, lo, hi = args
    scanner = _Scanner(g, R, mode)

    def stop(index):
        return _STOP is not None and _STOP.value < index

    cert, stats = scanner.scan(lo, hi, stop)
    if cert is not None and _STOP is not None:
        with _STOP.get_lock():
            if cert.case_index < _STOP.value:
                _STOP.value = cert.case_index
    return cert, stats


def default_jobs() -> int:
    return os.cpu_count() or 1


def feasible(
    g: Graph,
    R,
    mode: str = "certified",
    jobs: Optional[int] = None,
    max_cases: int = DEFAULT_MAX_CASES,
    hint: Sequence[int] = (),
    audit: Optional[list] = None,
) -> FeasibilityResult:
    """Decide whether ``g`` has a band realization for ``(1, R)``.

    ``hint`` lists case indices tried before the ordered scan (used by the
    bisection to re-test the previous witness first). If ``audit`` is a list,
    every certificate checked along the way is appended to it as
    ``(kind, lp, payload, weight, sign_case)``; this forces a serial scan.
    """
    if mode not in ("fast", "certified"):
        raise ValueError(f"unknown mode {mode!r}")
    R = Scalar.coerce(R)
    if R < 1:
        raise ValueError("R must be >= 1")
    start = time.perf_counter()
    total = case_count(g.n) if g.n >= 2 else 1
    result = FeasibilityResult(g, R, mode, "infeasible", cases_total=total)
    if g.n == 1:
        cfg = Configuration((Line(0, 0),))
        result.status = "feasible"
        result.certificate = Certificate(cfg, SignCase(1, (), ()), Scalar(1), (None, INFINITY), 0)
        result.wall_ms = int((time.perf_counter() - start) * 1000)
        return result
    if total > max_cases:
        raise ResourceCapExceeded(
            f"{total} sign cases for n={g.n} exceed the cap of {max_cases}; "
            "exhaustive search is only practical with 4 or 5 lines"
        )
    jobs = default_jobs() if jobs is None else max(1, jobs)
    if audit is not None:
        jobs = 1

    cert = None
    stats_list = []
    scanner = _Scanner(g, R, mode, audit)
    for index in hint:
        if 0 <= index < total:
            found = scanner.leaf(index)
            if found is not None:
                cert = found
                break
    if cert is None:
        scanner.stats = {"solved": 0, "pruned": 0, "verified": scanner.stats["verified"], "exact": scanner.stats["exact"]}
        if jobs == 1:
            cert, stats = scanner.scan(0, total)
            stats_list.append(stats)
        else:
            cert, stats_list = _parallel_scan(g, R, mode, total, jobs)
            stats_list.append({"solved": 0, "pruned": 0, "verified": scanner.stats["verified"], "exact": scanner.stats["exact"]})
    else:
        stats_list.append(dict(scanner.stats))

    for s in stats_list:
        result.cases_solved += s["solved"]
        result.cases_pruned += s["pruned"]
        result.certificates_verified += s["verified"]
        result.exact_solves += s["exact"]
    if cert is not None:
        result.status = "feasible"
        result.certificate = cert
    result.wall_ms = int((time.perf_counter() - start) * 1000)
    return result


def _parallel_scan(g, R, mode, total, jobs):
    ranges = split_ranges(total, jobs * 4)
    ctx = mp.get_context("fork")
    stop_value = ctx.Value("q", total)
    with ProcessPoolExecutor(jobs, mp_context=ctx, initializer=_init_worker, initargs=(stop_value,)) as pool:
        outs = list(pool.map(_run_chunk, [(g, R, mode, lo, hi) for lo, hi in ranges]))
    found = [c for c, _ in outs if c is not None]
    cert = min(found, key=lambda c: c.case_index) if found else None
    return cert, [s for _, s in outs]


# ----------------------------------------------------------------------
# maximal radius


def rmax(
    g: Graph,
    tol: float = 1e-6,
    rcap: float = 100.0,
    mode: str = "fast",
    jobs: Optional[int] = None,
    max_cases: int = DEFAULT_MAX_CASES,
    progress=None,
) -> RmaxResult:
    """Bracket the supremum of feasible radii by bisection on ``[1, rcap]``.

    Radii are doubles converted exactly to dyadic rationals before each probe.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if rcap < 1:
        raise ValueError("rcap must be >= 1")
    probes = []

    def probe(r: float, hint=()):
        res = feasible(g, Scalar(dyadic(r)), mode, jobs, max_cases, hint)
        probes.append((r, res.feasible))
        if progress is not None:
            progress(r, res)
        return res

    base = probe(1.0)
    if not base.feasible:
        raise NotRealizable(f"graph {format_graph(g)} is not band-realizable even at R = 1")
    witness = base.certificate
    top = probe(float(rcap), (witness.case_index,))
    if top.feasible:
        return RmaxResult(float(rcap), math.inf, "ExceedsCap", top.certificate, probes, mode)
    lo, hi = 1.0, float(rcap)
    while hi - lo > tol:
        mid = lo + (hi - lo) / 2
        if mid <= lo or mid >= hi:
            break
        res = probe(mid, (witness.case_index,))
        if res.feasible:
            lo, witness = mid, res.certificate
        else:
            hi = mid
    return RmaxResult(lo, hi, "Bracketed", witness, probes, mode)


def check_exact_boundary(
    g: Graph,
    R,
    side: str = "at",
    gap=None,
    jobs: Optional[int] = None,
    max_cases: int = DEFAULT_MAX_CASES,
    audit: Optional[list] = None,
) -> FeasibilityResult:
    """Certified feasibility exactly at ``R`` or at ``R - gap``."""
    R = Scalar.coerce(R)
    if side == "below":
        if gap is None:
            raise ValueError("side 'below' needs a gap")
        R = R - Scalar.coerce(gap)
    elif side != "at":
        raise ValueError(f"unknown side {side!r}")
    return feasible(g, R, "certified", jobs, max_cases, audit=audit)


def float_of(x) -> float:
    return to_float(x)[0]
