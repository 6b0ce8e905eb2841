import random

import pytest

from regtri import census, graph, minimizer
from regtri._backend import available_backends, get_kernels
from regtri.graph import Graph


@pytest.fixture(params=available_backends())
def backend(request, monkeypatch):
    """Run the test once per kernel backend."""
    k = get_kernels(request.param)
    for mod in (graph, census, minimizer):
        monkeypatch.setattr(mod, "kernels", k)
    return request.param


def gnp(n, p, rng):
    return Graph.from_edges(n, [(a, b) for a in range(n) for b in range(a + 1, n)
                                if rng.random() < p])


@pytest.fixture
def rng():
    return random.Random(20261016)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.summary_lines():
            terminalreporter.write_line(line)
