import itertools
import os
import sys
from pathlib import Path

import numpy as np
import pytest

from coretruss.graph import Graph
from coretruss.randgen import generate_er

sys.path.insert(0, os.path.dirname(__file__))

DATA_DIR = Path(os.environ.get("CORETRUSS_DATA", Path(__file__).resolve().parent.parent / "data"))


def clique(k, offset=0):
    return [(offset + a, offset + b) for a, b in itertools.combinations(range(k), 2)]


def clique_graph(k):
    return Graph(k, clique(k))


def gatekeeper_edges():
    """Three disjoint 4-cliques (0-3, 4-7, 8-11) and hub 12 tied to 0, 4, 8."""
    edges = clique(4) + clique(4, 4) + clique(4, 8)
    edges += [(12, 0), (12, 4), (12, 8)]
    return 13, edges


def star_graph(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def er_graph(n, m, seed):
    return generate_er(n, m, seed)


@pytest.fixture
def k6():
    return clique_graph(6)


@pytest.fixture
def gatekeeper():
    n, e = gatekeeper_edges()
    return Graph(n, e)


def dataset_path(name):
    for cand in (DATA_DIR / name, DATA_DIR / f"{name}.txt"):
        if cand.is_file():
            return cand
    return None


DATASETS = {
    # name: (candidate file names, comment prefixes)
    "hamster": (["hamster.txt", "out.petster-friendships-hamster-uniq",
                 "out.petster-friendships-hamster"], ("#", "%")),
    "as-733": (["as-733.txt", "as20000102.txt"], ("#",)),
    "oregon-2": (["oregon-2.txt", "oregon2_010526.txt"], ("#",)),
    "email-eu-core": (["email-eu-core.txt", "email-Eu-core.txt", "email-Eu-core.txt.gz"], ("#",)),
    "caida": (["caida.txt", "as-caida20071105.txt"], ("#",)),
    "berkstan": (["berkstan.txt", "web-BerkStan.txt", "web-BerkStan.txt.gz"], ("#",)),
}


def find_dataset(name):
    names, prefixes = DATASETS[name]
    for fn in names:
        p = DATA_DIR / fn
        if p.is_file():
            return p, prefixes
    return None, prefixes


def require_dataset(name):
    path, prefixes = find_dataset(name)
    if path is None:
        pytest.skip(f"dataset {name!r} not found in {DATA_DIR} "
                    f"(expected one of {DATASETS[name][0]}; set CORETRUSS_DATA)")
    return path, prefixes


_criteria = {}


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        prev = _criteria.get(crit)
        # one line per criterion: any failure wins, then skip, then pass
        rank = {"FAIL": 2, "SKIP": 1, "PASS": 0}
        if prev is None or rank[status] > rank[prev[0]]:
            reason = ""
            if report.outcome == "skipped" and isinstance(report.longrepr, tuple):
                reason = report.longrepr[2]
            _criteria[crit] = (status, reason)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for crit, (status, reason) in _criteria.items():
        line = f"{status:4}  {crit}"
        if reason:
            line += f"  ({reason})"
        terminalreporter.write_line(line)
