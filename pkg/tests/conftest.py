import itertools
import random

import pytest

from bergek4 import TripleSystem
from bergek4.core import all_triples

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_line():
    def record(number, text, passed):
        _ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {text}")
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(20261019)


def random_system(rng, n, m):
    ts = all_triples(n)
    return TripleSystem(n, frozenset(rng.sample(ts, min(m, len(ts)))))


def paper_labels(n, triples):
    """System on ``n`` vertices from 1-based labels such as ``"134"``."""
    return TripleSystem(n, frozenset(tuple(sorted(int(c) - 1 for c in t)) for t in triples))


def random_multigraph(rng, n_max=12, mu_max=3, core=(0, 1, 2)):
    """A trace-shaped multigraph on up to ``n_max`` vertices, every multiplicity at most ``mu_max``."""
    from bergek4.trace import TraceMultigraph

    n = rng.randint(1, n_max)
    vs = list(range(10, 10 + n))
    labels2 = list(itertools.combinations(core, 2))
    loops = [(v, rng.choice(labels2)) for v in vs for _ in range(rng.choice([0, 0, 0] + list(range(1, mu_max + 1))))]
    links = []
    p = rng.random() * 0.5
    for a, b in itertools.combinations(vs, 2):
        if rng.random() < p:
            links += [(a, b, (rng.choice(core),)) for _ in range(rng.randint(1, mu_max))]
    return TraceMultigraph(tuple(core), tuple(vs), tuple(loops), tuple(links))
