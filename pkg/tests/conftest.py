import random

import pytest

from maghom import graph as gr


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("MAGHOM_CACHE_DIR", str(tmp_path / "cache"))


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> gr.Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return gr.Graph(n, tuple(edges))


def random_map(rng, g, h):
    """A random graph map chosen greedily vertex by vertex; None if it gets stuck."""
    order = []
    for comp in g.components:
        order.extend(comp)
    vmap = [None] * g.n
    for v in order:
        options = list(range(h.n))
        rng.shuffle(options)
        for c in options:
            if all(vmap[u] is None or vmap[u] == c or h.has_edge(vmap[u], c)
                   for u in g.adjacency[v]):
                vmap[v] = c
                break
        else:
            return None
    return gr.validate_graph_map(g, h, vmap)


# one summary line per acceptance criterion

_ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    detail = "; ".join(v for k, v in item.user_properties if k == "detail")
    _ACCEPTANCE[number] = ("PASS" if report.passed else "FAIL", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        verdict, title, detail = _ACCEPTANCE[number]
        line = f"criterion {number:2d} {verdict}: {title}"
        if detail:
            line += f" [{detail}]"
        terminalreporter.write_line(line)
