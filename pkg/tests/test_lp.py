from itertools import combinations

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from lineband import certify
from lineband.exact import Scalar, sign
from lineband.graphs import Graph, catalog, empty_graph
from lineband.lp import (
    Constraint,
    LinearProgram,
    SignCase,
    build_margin_lp,
    case_count,
    enumerate_sign_cases,
    pair_list,
    sign_case_at,
    split_ranges,
)
from lineband.simplex import simplex_solve
from lineband.witnesses import a4_configuration

GOLDEN = __import__("pathlib").Path(__file__).parent / "golden"


def canonical(n):
    m = n * (n - 1) // 2
    return SignCase(n, (1,) * m, (1,) * m)


@pytest.mark.parametrize("n,count", [(2, 1), (3, 16), (4, 1024)])
def test_case_counts(n, count):
    cases = list(enumerate_sign_cases(n))
    assert len(cases) == case_count(n) == count
    assert len(set(cases)) == count
    assert all(c.canonical and c.complete for c in cases)


def test_case_order_and_chunks():
    assert sign_case_at(3, 0) == canonical(3)
    total = case_count(4)
    chunks = split_ranges(total, 7)
    assert chunks[0][0] == 0 and chunks[-1][1] == total
    assert all(a[1] == b[0] for a, b in zip(chunks, chunks[1:]))
    joined = [c for lo, hi in chunks for c in enumerate_sign_cases(4, lo, hi)]
    assert joined == list(enumerate_sign_cases(4))


def test_a2_example():
    lp = build_margin_lp(catalog("A2"), 2, canonical(2))
    labels = [c.label for c in lp.constraints]
    assert labels[:4] == ["sign_a(1,2)", "sign_c(1,2)", "edge_in(1,2)", "edge_gap(1,2)"]
    out = simplex_solve(lp)
    assert out.optimal and out.value == 1
    certify.check_optimal(lp, out.value, out.primal, out.dual)


def test_edgeless_example():
    # parallel lines with the largest intercept gap; the margin is capped by the box
    lp = build_margin_lp(empty_graph(2), 10, canonical(2))
    out = simplex_solve(lp)
    assert out.value == 1
    assert out.primal["a1"] == out.primal["a2"]
    assert out.primal["c1"] - out.primal["c2"] >= 1


def test_lp_dump_golden():
    sc = sign_case_at(3, 5)
    lp = build_margin_lp(catalog("A3"), Scalar(3, 2, 2), sc)
    assert lp.dump() == (GOLDEN / "a3_case5.lp").read_text()


def test_simplex_trivial():
    lp = LinearProgram(("delta",), "delta", [Constraint((("delta", mpq(1)),), mpq(1), "cap")])
    out = simplex_solve(lp)
    assert out.optimal and out.value == 1


def test_simplex_infeasible():
    rows = [
        Constraint((("x", mpq(-1)),), mpq(-1), "x>=1"),
        Constraint((("x", mpq(1)),), mpq(0), "x<=0"),
        Constraint((("delta", mpq(1)),), mpq(1), "cap"),
    ]
    lp = LinearProgram(("x", "delta"), "delta", rows)
    out = simplex_solve(lp)
    assert out.status == "infeasible"
    certify.check_farkas(lp, out.farkas)


def _own_sign_case(cfg):
    n = len(cfg.lines)
    pairs = pair_list(n)
    sig = [sign(cfg.line(i).a - cfg.line(j).a) for i, j in pairs]
    tau = [sign(cfg.line(i).c - cfg.line(j).c) for i, j in pairs]
    return SignCase(n, tuple(sig), tuple(tau))


def test_a4_own_case_at_r5():
    cfg = a4_configuration()
    sc = _own_sign_case(cfg)
    assert None not in sc.sigma and 0 not in sc.sigma
    lp = build_margin_lp(catalog("A4"), 5, sc, box=4)
    out = simplex_solve(lp)
    assert out.optimal and out.value > 0
    certify.check_optimal(lp, out.value, out.primal, out.dual)


def test_a4_r6_all_cases_zero():
    g = catalog("A4")
    for sc in list(enumerate_sign_cases(4))[::37]:
        out = simplex_solve(build_margin_lp(g, 6, sc))
        assert out.status == "infeasible" or out.value == 0


def _point(cfg, delta):
    pt = {"delta": delta}
    for i, ln in enumerate(cfg.lines, 1):
        pt[f"a{i}"] = ln.a
        pt[f"c{i}"] = ln.c
    return pt


def test_homogeneity():
    cfg = a4_configuration()
    sc = _own_sign_case(cfg)
    g = catalog("A4")
    lp = build_margin_lp(g, 5, sc, box=8, include_box=True)
    delta = mpq(1, 100)
    certify.check_primal(lp, _point(cfg, delta))
    for lam in (mpq(1, 2), mpq(3, 7)):
        scaled = build_margin_lp(g, 5, sc, box=8 * lam)
        pt = {k: v * lam for k, v in _point(cfg, delta).items()}
        certify.check_primal(scaled, pt)


def test_flip_symmetry():
    cfg = a4_configuration()
    sc = _own_sign_case(cfg)
    g = catalog("A4")
    pt = _point(cfg, mpq(1, 100))
    certify.check_primal(build_margin_lp(g, 5, sc, box=8), pt)
    flipped = {k: (-v if k.startswith("a") else v) for k, v in pt.items()}
    certify.check_primal(build_margin_lp(g, 5, sc.flip_sigma(), box=8), flipped)
    negc = {k: (-v if k.startswith("c") else v) for k, v in pt.items()}
    certify.check_primal(build_margin_lp(g, 5, sc.flip_tau(), box=8), negc)


# ----------------------------------------------------------------------
# simplex against an independent float LP solver

small = st.integers(-5, 5)


@st.composite
def random_lps(draw):
    nv = draw(st.integers(1, 3))
    variables = tuple(f"x{k}" for k in range(nv)) + ("delta",)
    rows = []
    for r in range(draw(st.integers(1, 5))):
        coeffs = tuple((v, mpq(draw(small))) for v in variables)
        rows.append(Constraint(tuple((v, c) for v, c in coeffs if c), mpq(draw(small)), f"r{r}"))
    for v in variables:
        rows.append(Constraint(((v, mpq(1)),), mpq(3), f"hi({v})"))
        rows.append(Constraint(((v, mpq(-1)),), mpq(3), f"lo({v})"))
    return LinearProgram(variables, "delta", rows)


@given(random_lps())
@settings(max_examples=150, deadline=None)
def test_simplex_matches_highs(lp):
    idx = lp.index()
    A = np.zeros((len(lp.constraints), len(lp.variables)))
    b = np.zeros(len(lp.constraints))
    for r, con in enumerate(lp.constraints):
        for v, c in con.coeffs:
            A[r, idx[v]] = float(c)
        b[r] = float(con.rhs)
    cost = np.zeros(len(lp.variables))
    cost[idx["delta"]] = -1
    ref = linprog(cost, A_ub=A, b_ub=b, bounds=[(None, None)] * len(lp.variables), method="highs")
    out = simplex_solve(lp)
    if ref.status == 2:
        assert out.status == "infeasible"
        certify.check_farkas(lp, out.farkas)
    else:
        assume(ref.status == 0)
        assert out.optimal
        assert float(out.value) == pytest.approx(-ref.fun, abs=1e-7)
        certify.check_optimal(lp, out.value, out.primal, out.dual)


@given(st.integers(0, 1023))
@settings(max_examples=40, deadline=None)
def test_surd_lp_certificates(index):
    lp = build_margin_lp(catalog("A4"), Scalar(3, 2, 2), sign_case_at(4, index))
    out = simplex_solve(lp)
    assert out.optimal
    certify.check_optimal(lp, out.value, out.primal, out.dual)
    assert out.value == 0


def test_simplex_deterministic():
    lp = build_margin_lp(catalog("A4"), 4, sign_case_at(4, 700))
    a, b = simplex_solve(lp), simplex_solve(lp)
    assert a.primal == b.primal and a.dual == b.dual and a.pivots == b.pivots
