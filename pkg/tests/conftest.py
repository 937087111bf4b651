import random
from pathlib import Path

import pytest

from transum.themegraph import Hypergraph

DEMO = Path(__file__).resolve().parents[1] / "src" / "transum" / "data" / "demo"


def random_hypergraph(rng: random.Random, max_nodes=12, max_edges=10, integer_phi=False):
    n = rng.randint(1, max_nodes)
    m = rng.randint(1, max_edges)
    if integer_phi:
        phi = [rng.randint(1, 10) for _ in range(n)]
    else:
        phi = [rng.uniform(0.5, 10.0) for _ in range(n)]
    edges = [rng.sample(range(n), rng.randint(1, min(n, 4))) for _ in range(m)]
    weights = [rng.uniform(1e-3, 1.0) for _ in range(m)]
    return Hypergraph.from_sets(phi, edges, weights)


@pytest.fixture
def demo_dir():
    return DEMO


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Print and record one pass/fail line per acceptance criterion."""
    lines = request.config.stash.setdefault(ACCEPTANCE, [])

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {detail}"
        print(line)
        lines.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
