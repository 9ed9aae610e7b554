"""Vertex-cover leaf removal: a degree-one node is removed together with its neighbour."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractViolation
from .graph import Graph


@dataclass
class PeelResult:
    core_flags: np.ndarray
    peel_pairs: list[tuple[int, int]] = field(default_factory=list)
    isolated_survivors: list[int] = field(default_factory=list)

    @property
    def core(self) -> list[int]:
        return np.flatnonzero(self.core_flags).tolist()

    @property
    def core_free(self) -> bool:
        return not self.core_flags.any()


def _present(g: Graph, n) -> list[bool]:
    if n is None:
        return [True] * g.node_count
    if len(n) != g.node_count:
        raise ValueError(f"bit vector has length {len(n)}, graph has {g.node_count} nodes")
    return [bool(x) for x in n]


def peel(g: Graph, n: Sequence[int] | np.ndarray | None = None, order: Iterable[int] | None = None) -> PeelResult:
    """Exhaustive leaf removal on the subgraph induced by ``n`` (all nodes if None).

    Degree-one nodes are processed FIFO, seeded in ascending id unless ``order``
    gives another seeding permutation.  The resulting core does not depend on
    the order; ``peel_pairs`` does.
    """
    adj = g.adjacency
    alive = _present(g, n)
    if n is None:
        deg = g.degrees.tolist()
    else:
        deg = [sum(1 for v in adj[u] if alive[v]) if alive[u] else 0 for u in range(g.node_count)]

    seed = range(g.node_count) if order is None else order
    queue = deque(u for u in seed if alive[u] and deg[u] == 1)
    pairs: list[tuple[int, int]] = []
    while queue:
        u = queue.popleft()
        if not alive[u] or deg[u] != 1:
            continue
        w = next(v for v in adj[u] if alive[v])
        pairs.append((u, w))
        alive[u] = alive[w] = False
        deg[u] = deg[w] = 0
        for x in adj[w]:
            if alive[x]:
                deg[x] -= 1
                if deg[x] == 1:
                    queue.append(x)

    core = np.zeros(g.node_count, dtype=np.int8)
    isolated = []
    for i in range(g.node_count):
        if alive[i]:
            if deg[i]:
                core[i] = 1
            else:
                isolated.append(i)
    return PeelResult(core, pairs, isolated)


def is_core_free(g: Graph, n=None) -> bool:
    return peel(g, n).core_free


def leaf_pairing_matching(g: Graph, n=None) -> list[tuple[int, int]]:
    """Maximum matching of a core-free graph as the (leaf, neighbour) peel pairs."""
    res = peel(g, n)
    if not res.core_free:
        raise ContractViolation(f"graph has a leaf-removal core of {int(res.core_flags.sum())} nodes")
    return res.peel_pairs
