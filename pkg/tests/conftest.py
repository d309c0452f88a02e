import random
import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

from triclub.graph import Graph

DATA = Path(__file__).parent / "data"

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


def make_b6():
    # triangles {0,1,2} and {3,4,5} joined by the bridge 2-3
    return Graph(range(6), [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])


def make_bowtie():
    # a=0 shared by triangles {0,1,2} and {0,3,4}
    return Graph(range(5), [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])


def make_complete(n):
    return Graph(range(n), [(u, w) for u in range(n) for w in range(u + 1, n)])


def make_cycle(n):
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def make_book(pages):
    # spine 0-1, page vertices 2..pages+1 adjacent to both ends
    return Graph(range(pages + 2), [(0, 1)] + [(s, p) for p in range(2, pages + 2) for s in (0, 1)])


def random_graph(rng, n, p):
    return Graph(range(n), [(u, w) for u in range(n) for w in range(u + 1, n) if rng.random() < p])


@st.composite
def graphs(draw, min_n=0, max_n=12):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, w) for u in range(n) for w in range(u + 1, n)]
    p = draw(st.sampled_from([0.2, 0.4, 0.6, 0.8]))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    return Graph(range(n), [e for e in pairs if rng.random() < p])


@pytest.fixture
def b6():
    return make_b6()


@pytest.fixture
def bowtie():
    return make_bowtie()


@pytest.fixture
def k4():
    return make_complete(4)


# acceptance reporting: one line per criterion in the terminal summary

_ACCEPTANCE = {}


@pytest.fixture
def report(request):
    """Attach a human-readable detail string to the current acceptance test."""
    marker = request.node.get_closest_marker("criterion")
    entry = _ACCEPTANCE.setdefault(request.node.nodeid, {"criterion": marker.args, "detail": "", "outcome": None})

    def _report(detail):
        entry["detail"] = detail

    return _report


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when not in ("setup", "call"):
        return
    entry = _ACCEPTANCE.setdefault(item.nodeid, {"criterion": marker.args, "detail": "", "outcome": None})
    if rep.when == "call" or rep.failed or rep.skipped:
        entry["outcome"] = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for entry in sorted(_ACCEPTANCE.values(), key=lambda e: e["criterion"][0]):
        number, title = entry["criterion"]
        line = f"criterion {number} {entry['outcome'] or 'NOT RUN'}: {title}"
        if entry["detail"]:
            line += f" ({entry['detail']})"
        terminalreporter.write_line(line)
