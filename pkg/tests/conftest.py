import sys
from pathlib import Path

import numpy as np
import pytest

from corebreak.graph import Graph, generate_er, make_rng

sys.path.insert(0, str(Path(__file__).parent))

# Nine-node leaf-removal example, v1..v9 -> ids 0..8: leaves v1~v2 and v3~v4 go
# first, then v5~v6 becomes a leaf, leaving the triangle v7, v8, v9.
NINE_NODE_EDGES = [(0, 1), (2, 3), (1, 4), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 6)]


@pytest.fixture
def nine_node():
    return Graph(9, NINE_NODE_EDGES)


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def star_graph(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def random_tree(n, seed):
    rng = make_rng(seed)
    return Graph(n, [(int(rng.integers(i)), i) for i in range(1, n)])


def random_small_graph(seed, n_range=(4, 16), k_range=(1.0, 4.0)):
    rng = make_rng(seed)
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    k = float(rng.uniform(*k_range))
    k = min(k, n - 1.5)
    return generate_er(n, max(k, 0.5), seed)


@pytest.fixture
def triangle():
    return cycle_graph(3)


def caterpillar(seed):
    """Spine cycle with parallel chains of degree-two nodes bridging consecutive spine nodes."""
    rng = make_rng(seed)
    m = int(rng.integers(3, 9))
    edges = [(i, (i + 1) % m) for i in range(m)]
    nxt = m
    for i in range(m):
        for _ in range(int(rng.integers(0, 3))):
            length = int(rng.integers(2, 6))
            chain = list(range(nxt, nxt + length))
            nxt += length
            edges.append((i, chain[0]))
            edges.extend(zip(chain, chain[1:]))
            edges.append((chain[-1], (i + 1) % m))
    return Graph(nxt, edges)
