"""Acceptance criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they
happen; they are also repeated in the terminal summary. Criteria known to
disagree with the published values are strict xfails: the assertion keeps
its stated tolerance, the line reads FAIL, and an unexpected pass turns the
suite red.
"""

import math
import random
import time
from itertools import combinations

import pytest
from gmpy2 import mpq

from lineband import certify
from lineband.algebraic import g3_root
from lineband.complex_arr import build_g6, crossing_parity, menelaus_product, seeded_instances, separating_radii
from lineband.exact import Scalar
from lineband.feasibility import NotRealizable, check_exact_boundary, feasible, rmax
from lineband.geometry import achieved_radii, flatten_to_ball, verify_realization
from lineband.graphs import Graph, alternate_reading, catalog
from lineband.lp import case_count
from lineband.witnesses import a4_configuration, pentagram_configuration

RESULTS: dict = {}
SQRT2 = Scalar.sqrt(2)
A4_RMAX = 3 + 2 * SQRT2
A4_FLOAT = 3 + 2 * math.sqrt(2)


def record(key, ok: bool, detail: str) -> None:
    line = f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[key] = line
    print(line, flush=True)


class Clock:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.s = time.perf_counter() - self.t0


# ----------------------------------------------------------------------
# shared expensive runs


@pytest.fixture(scope="module")
def a4_boundary():
    g = catalog("A4")
    below_audit, at_audit = [], []
    with Clock() as clk:
        below = check_exact_boundary(g, A4_RMAX, "below", mpq(1, 1000), audit=below_audit)
        at = check_exact_boundary(g, A4_RMAX, "at", audit=at_audit)
    return below, at, below_audit + at_audit, clk.s, at_audit


@pytest.fixture(scope="module")
def c5_certified():
    audit = []
    with Clock() as clk:
        res = feasible(catalog("C5"), 1, "certified", audit=audit)
    return res, audit, clk.s


# ----------------------------------------------------------------------


def test_01_a4_exact_witness():
    with Clock() as clk:
        cfg = a4_configuration()
        g = catalog("A4")
        radii = achieved_radii(cfg, g)
        ok_verify = verify_realization(cfg, g, 1, A4_RMAX - mpq(1, 1000), "band").ok
    ok = radii == (1, A4_RMAX) and ok_verify and clk.s < 1
    record(1, ok, f"achieved={tuple(str(r) for r in radii)} verify(R-1e-3)={ok_verify} t={clk.s:.3f}s")
    assert ok


def test_02_a4_boundary_pair(a4_boundary):
    below, at, _, secs, at_audit = a4_boundary
    covered = at.cases_solved + at.cases_pruned
    ok = below.feasible and at.status == "infeasible" and at.mode == "certified" and covered == 1024 and secs < 300
    record(
        2,
        ok,
        f"below 1e-3: {below.status}; at 3+2*sqrt2: {at.status} "
        f"(solved {at.cases_solved} + pruned {at.cases_pruned} = {covered}/1024, "
        f"{len(at_audit)} certificates) t={secs:.1f}s",
    )
    assert ok


def test_03_rmax_a4():
    g = catalog("A4")
    with Clock() as fast_clk:
        fast = rmax(g, 1e-6, 100, mode="fast")
    with Clock() as cert_clk:
        cert = rmax(g, 1e-6, 100, mode="certified")
    err_fast = abs(fast.midpoint - A4_FLOAT)
    err_cert = abs(cert.midpoint - A4_FLOAT)
    ok = (
        fast.lo < A4_FLOAT < fast.hi
        and cert.lo < A4_FLOAT < cert.hi
        and err_fast < 1e-5
        and err_cert < 1e-5
        and fast_clk.s < 60
        and cert_clk.s < 600
    )
    record(
        3,
        ok,
        f"fast [{fast.lo:.9f}, {fast.hi:.9f}] t={fast_clk.s:.1f}s; "
        f"certified [{cert.lo:.9f}, {cert.hi:.9f}] t={cert_clk.s:.1f}s; |mid-(3+2sqrt2)|={max(err_fast, err_cert):.2e}",
    )
    assert ok


def test_04_c5_band_infeasible(c5_certified):
    res, audit, secs = c5_certified
    total = case_count(5)
    with Clock() as fast_clk:
        fast = feasible(catalog("C5"), 1, "fast")
    coverage = _coverage(5, audit)
    ok = (
        res.status == "infeasible"
        and res.mode == "certified"
        and total == 4**9
        and res.cases_solved + res.cases_pruned == total
        and coverage == total
        and secs < 1800
        and fast.status == "infeasible"
        and fast.advisory
        and fast_clk.s < 120
    )
    record(
        4,
        ok,
        f"certified: {res.status}, {res.cases_solved} LP leaves + {res.cases_pruned} pruned, "
        f"{coverage}/{total} cases covered by exact certificates, t={secs:.1f}s; fast (advisory) t={fast_clk.s:.1f}s",
    )
    assert ok


def test_05_c5_ball_pentagram():
    with Clock() as clk:
        cfg, tip2 = pentagram_configuration()
        g = catalog("C5")
        # the largest simple rational below the nearest non-edge point
        r_out = mpq(math.floor(math.sqrt(float(tip2)) * 1000) - 1, 1000)
        ok_in = verify_realization(cfg, g, 1, 1, "ball").ok
        ok_out = verify_realization(cfg, g, 1, r_out, "ball").ok
    ok = ok_in and ok_out and r_out > mpq(5, 2) and clk.s < 1
    record(5, ok, f"pentagram verifies for (Ball 1, Ball {float(r_out):.3f}); non-edge norm {math.sqrt(float(tip2)):.6f} t={clk.s:.3f}s")
    assert ok


G1_TARGET = 3.0
G2_TARGET = A4_FLOAT


@pytest.mark.xfail(strict=True, reason="G1 under the figure reading brackets 3+2*sqrt2, not 3; see decisions ledger")
def test_06a_g1():
    g = catalog("G1")
    with Clock() as clk:
        res = rmax(g, 1e-4, 100, mode="fast")
        boundary = check_exact_boundary(g, 3)
    contains = res.lo - 1e-4 <= G1_TARGET <= res.hi + 1e-4
    alt = rmax(alternate_reading("G1"), 1e-4, 100, mode="fast")
    ok = contains and boundary.status == "infeasible"
    RESULTS["6-G1"] = (
        ok,
        f"G1 [{res.lo:.6f}, {res.hi:.6f}] (target 3), exact check at 3: {boundary.status}; "
        f"alternate reading [{alt.lo:.6f}, {alt.hi}] {alt.status}; t={clk.s:.0f}s",
    )
    _criterion6()
    assert ok


def test_06b_g2():
    g = catalog("G2")
    with Clock() as clk:
        res = rmax(g, 1e-4, 100, mode="fast")
        boundary = check_exact_boundary(g, A4_RMAX)
    contains = res.lo - 1e-4 <= G2_TARGET <= res.hi + 1e-4
    ok = contains and boundary.status == "infeasible"
    RESULTS["6-G2"] = (
        ok,
        f"G2 [{res.lo:.6f}, {res.hi:.6f}] (target {G2_TARGET:.6f}), exact check at 3+2*sqrt2: {boundary.status}; t={clk.s:.0f}s",
    )
    _criterion6()
    assert ok


def _criterion6():
    parts = [RESULTS.get(k) for k in ("6-G1", "6-G2")]
    if all(p is not None for p in parts):
        record(6, all(p[0] for p in parts), " | ".join(p[1] for p in parts))


@pytest.mark.xfail(strict=True, reason="G3 stays realizable at R = 100 (ExceedsCap) and its alternate reading is not realizable at all; see decisions ledger")
def test_07_g3_cubic():
    lo, hi = g3_root(mpq(1, 10**10))
    root = float((lo + hi) / 2)
    with Clock() as clk:
        res = rmax(catalog("G3"), 1e-6, 100, mode="fast")
    ok = res.status == "Bracketed" and abs(res.midpoint - root) < 1e-4
    try:
        alt = rmax(alternate_reading("G3"), 1e-4, 100, mode="fast")
        alt_text = f"[{alt.lo:.6f}, {alt.hi}] {alt.status}"
    except NotRealizable:
        alt_text = "not band-realizable at R = 1"
    record(
        7,
        ok,
        f"interval Newton root {root:.10f} (width {float(hi - lo):.1e}); rmax(G3) status {res.status}, "
        f"bracket [{res.lo}, {res.hi}]; alternate reading {alt_text} t={clk.s:.0f}s",
    )
    assert ok


def test_08_a5_adjudication():
    target = 2 + math.sqrt(3)
    with Clock() as clk:
        res = rmax(catalog("A5"), 1e-6, 100, mode="fast")
    agrees = res.lo <= target <= res.hi
    verdict = "agrees with" if agrees else "disagrees with"
    ok = res.status in ("Bracketed", "ExceedsCap")
    record(
        8,
        ok,
        f"rmax(A5) = [{res.lo:.7f}, {res.hi:.7f}] {res.status}; {verdict} the conjectured 2+sqrt3 = {target:.7f} t={clk.s:.0f}s",
    )
    assert ok


def test_09_flattening():
    eps = Scalar(mpq(1, 100))
    R = A4_RMAX - eps
    with Clock() as clk:
        cfg = a4_configuration()
        g = catalog("A4")
        flat = flatten_to_ball(cfg, g, R, eps)
        ok_ball = verify_realization(flat, g, 1, R * (1 - eps), "ball").ok
    ok = ok_ball and clk.s < 1
    record(9, ok, f"flattened A4 verifies in the ball for (1, R(1-eps)) with R = 3+2sqrt2-1/100 t={clk.s:.3f}s")
    assert ok


def test_10_complex_g6():
    with Clock() as clk:
        interval = separating_radii(build_g6(), catalog("G6"))
    ok = interval is not None and interval[0] < interval[1] <= math.sqrt(2) + 1e-9 and clk.s < 1
    record(10, ok, f"separating interval {interval} t={clk.s:.3f}s")
    assert ok


def _monotone_pairs(count=50, seed=11):
    rng = random.Random(seed)
    graphs = []
    for n in (3, 4):
        pairs = list(combinations(range(1, n + 1), 2))
        for mask in range(1 << len(pairs)):
            graphs.append(Graph.from_edges(n, [p for k, p in enumerate(pairs) if mask >> k & 1]))
    out = []
    for _ in range(count):
        g = rng.choice(graphs)
        r1, r2 = sorted(rng.sample(range(4, 36), 2))
        out.append((g, mpq(r1, 4), mpq(r2, 4)))
    return out


def test_11_property_suites(a4_boundary, c5_certified):
    bad_product = odd = 0
    with Clock() as clk:
        for inst in seeded_instances(20240611, 10_000, 5):
            if menelaus_product(inst) != 1:
                bad_product += 1
            if not crossing_parity(inst)[1]:
                odd += 1
    mono_fail = 0
    for g, r1, r2 in _monotone_pairs():
        if feasible(g, r2, "certified").feasible and not feasible(g, r1, "certified").feasible:
            mono_fail += 1
    cert_fail = 0
    audits = a4_boundary[2] + c5_certified[1]
    for kind, lp, payload, weight, _ in audits:
        if kind == "margin":
            ok = certify.is_valid(certify.check_margin_farkas, lp, payload, weight)
        else:
            ok = certify.is_valid(certify.check_optimal, lp, payload.value, payload.primal, payload.dual)
        cert_fail += not ok
    ok = bad_product == 0 and odd == 0 and mono_fail == 0 and cert_fail == 0
    record(
        11,
        ok,
        f"Menelaus failures {bad_product}/10000, odd crossings {odd}/10000 ({clk.s:.1f}s); "
        f"monotonicity failures {mono_fail}/50; certificate re-check failures {cert_fail}/{len(audits)}",
    )
    assert ok


# ----------------------------------------------------------------------
# coverage of the case space by audited certificates


def _coverage(n: int, audit) -> int:
    """Number of canonical case indices covered by a checked certificate."""
    m = n * (n - 1) // 2
    half = 1 << (m - 1)

    def pattern(signs):
        # (mask, value) over index bits; pair p >= 1 is bit m-1-p, set bit = negative
        mask = val = 0
        for p, s in enumerate(signs):
            if s is None:
                continue
            if p == 0:
                if s != 1:
                    return None
                continue
            bit = 1 << (m - 1 - p)
            mask |= bit
            if s == -1:
                val |= bit
        return mask, val

    sigma_only, mixed, leaves = [], [], set()
    for _, _, _, _, sc in audit:
        ps, pt = pattern(sc.sigma), pattern(sc.tau)
        if ps is None or pt is None:
            continue
        if sc.complete:
            leaves.add(ps[1] * half + pt[1])
        elif pt[0] == 0:
            sigma_only.append(ps)
        else:
            mixed.append((ps, pt))
    covered = 0
    for s in range(half):
        if any(s & mask == val for mask, val in sigma_only):
            covered += half
            continue
        rel = [pt for ps, pt in mixed if s & ps[0] == ps[1]]
        for t in range(half):
            if s * half + t in leaves or any(t & mask == val for mask, val in rel):
                covered += 1
    return covered
