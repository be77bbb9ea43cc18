import numpy as np
import pytest

from minkpoly import polygon as pg


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import CRITERIA, RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for c in CRITERIA:
        if c.number in RESULTS:
            terminalreporter.write_line(RESULTS[c.number].line())


@pytest.fixture(scope="session")
def polys():
    """A small mixed corpus: 5 random-frame polygons per signature."""
    from minkpoly.verification import sample_corpus

    return sample_corpus(5, 99)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def square():
    """The p = q = 2, r = 1/2 witness at k = 1."""
    return pg.witness(1)
