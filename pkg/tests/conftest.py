import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from flipkit import Graph


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
    return Graph.from_edges(n, edges)


def random_partition_labels(rng: random.Random, n: int, k_max: int) -> list[int]:
    k = rng.randint(1, min(k_max, n))
    labels = [rng.randrange(k) for _ in range(n)]
    labels[:k] = range(k)
    return labels


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
