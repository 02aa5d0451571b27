import pytest
from gmpy2 import mpq

from lineband.exact import Scalar
from lineband.graphs import catalog
from lineband.witnesses import a4_configuration

SQRT2 = Scalar.sqrt(2)
A4_RMAX = 3 + 2 * SQRT2


@pytest.fixture
def a4():
    return a4_configuration()


@pytest.fixture
def a4_graph():
    return catalog("A4")


@pytest.fixture
def milli():
    return Scalar(mpq(1, 1000))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    lines = [v for k, v in sorted(RESULTS.items(), key=lambda kv: str(kv[0]).zfill(3)) if isinstance(v, str)]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
