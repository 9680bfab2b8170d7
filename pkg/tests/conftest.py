import functools
import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from abslab.tree import Tree  # noqa: E402


@st.composite
def trees(draw, min_order=1, max_order=12):
    """Uniform-ish labeled trees from random Pruefer sequences."""
    n = draw(st.integers(min_order, max_order))
    seq = draw(st.lists(st.integers(0, n - 1), min_size=max(n - 2, 0), max_size=max(n - 2, 0)))
    return Tree(n, oracles.prufer_decode(tuple(seq), n))


def double_hub(middle: int) -> Tree:
    """Two degree-3 hubs joined by a path with ``middle`` interior vertices, each hub carrying two legs of length 2."""
    edges = []
    hub_a, nxt = 0, 1
    prev = hub_a
    for _ in range(middle):
        edges.append((prev, nxt))
        prev, nxt = nxt, nxt + 1
    hub_b = nxt
    edges.append((prev, hub_b))
    nxt += 1
    for hub in (hub_a, hub_b):
        for _ in range(2):
            edges += [(hub, nxt), (nxt, nxt + 1)]
            nxt += 2
    return Tree(nxt, tuple(edges))


@functools.lru_cache(maxsize=None)
def oracle_classes(n: int) -> frozenset[str]:
    return frozenset(oracles.oracle_classes(n))


@pytest.fixture
def tree_file(tmp_path):
    def write(text: str, name: str = "tree.txt") -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path

    return write


# -- acceptance summary ---------------------------------------------------------------

ACCEPTANCE: dict[int, dict] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", mark.args))


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        num, title = props["criterion"]
        entry = ACCEPTANCE.setdefault(num, {"title": title, "parts": []})
        entry["parts"].append((report.nodeid.split("::")[-1], report.passed))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        entry = ACCEPTANCE[num]
        failed = [name for name, ok in entry["parts"] if not ok]
        status = "FAIL" if failed else "PASS"
        line = f"criterion {num}: {status} {entry['title']} ({len(entry['parts']) - len(failed)}/{len(entry['parts'])} parts)"
        if failed:
            line += " failing: " + ", ".join(failed)
        terminalreporter.write_line(line)
