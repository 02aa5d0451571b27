import numpy as np
import pytest
from gmpy2 import mpq

from lineband.algebraic import G3_CUBIC, g3_root, interval_eval, interval_newton, poly_eval
from lineband.exact import Scalar
from lineband.geometry import PARALLEL, Band, achieved_radii, intersection_abscissa, intersection_graph, verify_realization
from lineband.graphs import catalog
from lineband.witnesses import a4_configuration, a5_printed_configuration, pentagram_configuration

from conftest import A4_RMAX


def test_a4_witness(a4_graph, milli):
    cfg = a4_configuration()
    assert cfg.d == 2
    assert achieved_radii(cfg, a4_graph) == (1, A4_RMAX)
    assert verify_realization(cfg, a4_graph, 1, A4_RMAX - milli, "band")


def test_a5_printed_does_not_realize_path():
    cfg = a5_printed_configuration()
    g = catalog("A5")
    assert intersection_abscissa(cfg.line(1), cfg.line(2)) is PARALLEL
    assert intersection_abscissa(cfg.line(3), cfg.line(4)) is PARALLEL
    x35 = intersection_abscissa(cfg.line(3), cfg.line(5))
    assert x35 == (1 + Scalar.sqrt(5)) / 2
    assert not verify_realization(cfg, g, 1, 2, "band")
    assert intersection_graph(cfg, Band(1)) != g


def test_pentagram_ball_realization():
    cfg, tip2 = pentagram_configuration()
    g = catalog("C5")
    assert verify_realization(cfg, g, 1, 1, "ball")
    # every non-edge point sits at squared norm >= tip2, so any r_out below sqrt(tip2) works
    r_out = mpq(5, 2)
    assert r_out * r_out < tip2
    assert verify_realization(cfg, g, 1, r_out, "ball")


def test_interval_newton_cubic():
    lo, hi = g3_root()
    assert hi - lo <= mpq(1, 10**10)
    assert poly_eval(G3_CUBIC, lo) * poly_eval(G3_CUBIC, hi) <= 0
    roots = [r.real for r in np.roots([1, 1, -9, -1]) if abs(r.imag) < 1e-12 and 2.6 < r.real < 2.61]
    assert len(roots) == 1
    assert float(lo) <= roots[0] + 1e-12 and roots[0] - 1e-12 <= float(hi)


def test_interval_newton_sqrt2():
    lo, hi = interval_newton((1, 0, -2), 1, 2, mpq(1, 10**30))
    assert lo * lo <= 2 <= hi * hi


def test_interval_newton_errors():
    with pytest.raises(ValueError):
        interval_newton((1, 0, -2), -1, 2)
    with pytest.raises(ValueError):
        interval_newton((1, 0, -2), 3, 4)


def test_interval_eval_encloses():
    lo, hi = interval_eval(G3_CUBIC, mpq(2), mpq(3))
    for k in range(11):
        x = mpq(2) + mpq(k, 10)
        assert lo <= poly_eval(G3_CUBIC, x) <= hi
