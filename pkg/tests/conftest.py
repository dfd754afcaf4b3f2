import pytest

from allab import catalog
from allab.lattice import direct_product


@pytest.fixture(scope="session")
def m3():
    return catalog.m3()


@pytest.fixture(scope="session")
def fig2_first():
    return catalog.fig2("first")


@pytest.fixture(scope="session")
def fig2_second():
    return catalog.fig2("second")


@pytest.fixture(scope="session")
def n5():
    return catalog.n5()


@pytest.fixture(scope="session")
def chain2():
    return catalog.chain(2)


@pytest.fixture(scope="session")
def boolean4(chain2):
    return direct_product(chain2, chain2)


@pytest.fixture(scope="session")
def variety_corpus():
    return catalog.variety_corpus()


@pytest.fixture(scope="session")
def complemented_corpus():
    return list(catalog.complemented_corpus(6))


# Per-criterion results from test_acceptance, printed at the end of the run.
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, title = ACCEPTANCE[k]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {k:2d}: {title}")
