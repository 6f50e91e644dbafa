from __future__ import annotations

import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from injhull.metric import Graph  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def connected_graphs(draw, min_n=1, max_n=7, extra=6):
    """Random spanning tree plus a few extra edges."""
    n = draw(st.integers(min_n, max_n))
    edges = {(draw(st.integers(0, i - 1)), i) for i in range(1, n)}
    if n >= 2:
        more = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=extra))
        edges |= {(min(u, v), max(u, v)) for u, v in more if u != v}
    return Graph(n, edges)


@st.composite
def trees(draw, min_n=1, max_n=9):
    n = draw(st.integers(min_n, max_n))
    return Graph(n, [(draw(st.integers(0, i - 1)), i) for i in range(1, n)])


# --------------------------------------------------------------------------
# acceptance report: one line per criterion at the end of the run

_ACCEPTANCE: dict = {}


@pytest.fixture
def criterion(request):
    """Context manager factory recording pass/fail for an acceptance criterion."""

    @contextmanager
    def record(number: int, title: str):
        start = time.perf_counter()
        notes: list[str] = []
        try:
            yield notes
        except BaseException:
            _ACCEPTANCE[number] = ("FAIL", title, time.perf_counter() - start, notes)
            raise
        _ACCEPTANCE[number] = ("PASS", title, time.perf_counter() - start, notes)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        status, title, secs, notes = _ACCEPTANCE[k]
        extra = f" [{'; '.join(notes)}]" if notes else ""
        terminalreporter.write_line(f"criterion {k:2d}: {status}  {title} ({secs:.1f}s){extra}")
