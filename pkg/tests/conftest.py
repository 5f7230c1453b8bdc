from functools import lru_cache

import pytest

from fanoforge import PolarityGraph
from fanoforge.algebra import field_presemifield, knuth_binary_presemifield
from fanoforge.plane import Plane


@lru_cache(maxsize=None)
def field_graph(k):
    return PolarityGraph(Plane(field_presemifield(k)))


@lru_cache(maxsize=None)
def knuth_graph(k):
    return PolarityGraph(Plane(knuth_binary_presemifield(k)))


@pytest.fixture(params=[1, 2, 3], ids=lambda k: f"n{1 << k}")
def small_graph(request):
    return field_graph(request.param)


@pytest.fixture
def gf4_plane():
    return field_graph(2).plane


def pytest_terminal_summary(terminalreporter):
    import re

    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    def natural(key):
        return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", key)]

    for key in sorted(RESULTS, key=natural):
        ok, detail = RESULTS[key]
        terminalreporter.write_line(f"criterion {key:<6} {'PASS' if ok else 'FAIL'}  {detail}")
