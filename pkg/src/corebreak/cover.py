"""Vertex covers from deletion traces, and an exact solver for small graphs."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .breaker import DeletionTrace, MethodSpec, iter_deletions
from .errors import CoverValidationError
from .graph import Graph
from .leafremoval import leaf_pairing_matching, peel


@dataclass
class CoverResult:
    deleted: list[int]
    matching: list[tuple[int, int]]
    cover: list[int]
    valid: bool = True

    @property
    def size(self) -> int:
        return len(self.cover)


@dataclass
class ExactCover:
    size: int | None
    cover: list[int] = field(default_factory=list)
    nodes_searched: int = 0
    elapsed: float = 0.0
    timed_out: bool = False


def uncovered_edges(g: Graph, cover) -> list[tuple[int, int]]:
    inside = set(cover)
    return [(u, v) for u, v in g.edges if u not in inside and v not in inside]


def cover_from_trace(g: Graph, trace: DeletionTrace) -> CoverResult:
    """Deleted nodes plus the covering endpoint of each residual matching edge."""
    deleted = list(trace.deleted[: trace.transition])
    n = trace.bit_vector(trace.transition, g.node_count)
    matching = leaf_pairing_matching(g, n)
    # the non-leaf endpoint covers the leaf's only edge and everything peeled with it
    cover = sorted(set(deleted) | {w for _, w in matching})
    if len(cover) != len(deleted) + len(matching):
        raise CoverValidationError("matching endpoints overlap the deleted set")
    missing = uncovered_edges(g, cover)
    if missing:
        raise CoverValidationError(f"{len(missing)} edge(s) left uncovered, e.g. {missing[0]}")
    return CoverResult(deleted, matching, cover, True)


def maximum_matching_size(g: Graph, n=None) -> int:
    """Maximum matching of the induced subgraph (peel pairs when core-free, blossom otherwise)."""
    res = peel(g, n)
    if res.core_free:
        return len(res.peel_pairs)
    present = np.ones(g.node_count, dtype=bool) if n is None else np.asarray(n, dtype=bool)
    h = nx.Graph()
    h.add_edges_from((u, v) for u, v in g.edges if present[u] and present[v])
    return len(nx.max_weight_matching(h, maxcardinality=True))


# exact minimum vertex cover ------------------------------------------------------------


class _Timeout(Exception):
    pass


def _remove(adj: dict[int, set[int]], v: int) -> None:
    for x in adj.pop(v):
        adj[x].discard(v)


def _reduce(adj: dict[int, set[int]], chosen: list[int]) -> None:
    """Drop isolated nodes and apply the leaf rule until neither fires."""
    stack = list(adj)
    while stack:
        u = stack.pop()
        if u not in adj:
            continue
        d = len(adj[u])
        if d == 0:
            del adj[u]
        elif d == 1:
            (w,) = adj[u]
            chosen.append(w)
            touched = adj[w]
            _remove(adj, w)
            stack.extend(touched)


def _matching_bound(adj: dict[int, set[int]]) -> int:
    used: set[int] = set()
    size = 0
    for u in sorted(adj, key=lambda x: (len(adj[x]), x)):
        if u in used:
            continue
        for v in sorted(adj[u]):
            if v not in used:
                used.add(u)
                used.add(v)
                size += 1
                break
    return size


def _greedy_cover(adj: dict[int, set[int]]) -> list[int]:
    adj = {k: set(v) for k, v in adj.items()}
    chosen: list[int] = []
    while True:
        _reduce(adj, chosen)
        if not adj:
            return chosen
        v = max(adj, key=lambda x: (len(adj[x]), -x))
        chosen.append(v)
        _remove(adj, v)


def exact_mvc(g: Graph, budget: float | None = None) -> ExactCover:
    """Minimum vertex cover by branch and bound.

    Reductions: isolated nodes are dropped and a degree-one node forces its
    neighbour into the cover.  Branching is on a maximum-degree node ``v``:
    either ``v`` is in the cover or all of its neighbours are.  A greedy
    maximal matching of the residual bounds the remaining cover from below.
    ``budget`` is wall time in seconds; exceeding it yields ``timed_out=True``
    and no size.
    """
    start = time.perf_counter()
    deadline = None if budget is None else start + budget
    root = {v: set(g.adjacency[v]) for v in range(g.node_count) if g.adjacency[v]}
    best = sorted(_greedy_cover(root))
    searched = 0

    def search(adj: dict[int, set[int]], chosen: list[int]) -> None:
        nonlocal best, searched
        searched += 1
        if deadline is not None and searched % 64 == 0 and time.perf_counter() > deadline:
            raise _Timeout
        _reduce(adj, chosen)
        if not adj:
            if len(chosen) < len(best):
                best = sorted(chosen)
            return
        if len(chosen) + _matching_bound(adj) >= len(best):
            return
        v = max(adj, key=lambda x: (len(adj[x]), -x))
        nbrs = sorted(adj[v])

        a = {k: set(s) for k, s in adj.items()}
        _remove(a, v)
        search(a, chosen + [v])

        if len(chosen) + len(nbrs) < len(best):
            b = {k: set(s) for k, s in adj.items()}
            for x in nbrs:
                _remove(b, x)
            b.pop(v, None)
            search(b, chosen + nbrs)

    try:
        search({k: set(s) for k, s in root.items()}, [])
    except _Timeout:
        return ExactCover(None, [], searched, time.perf_counter() - start, True)
    return ExactCover(len(best), best, searched, time.perf_counter() - start, False)


# property harnesses -----------------------------------------------------------------


def proposition_chain(g: Graph, method: MethodSpec | str, extra_steps: int) -> tuple[int, list[int]]:
    """Cover sizes ``i + M(G(n_i))`` for ``i = t .. t + extra_steps``.

    Returns the transition index and the chain of sizes.
    """
    if isinstance(method, str):
        method = MethodSpec(method)
    n = np.ones(g.node_count, dtype=np.int8)
    sizes: list[int] = []
    t = None
    if peel(g, n).core_free:
        t = 0
        sizes.append(maximum_matching_size(g, n))
    if t is None or extra_steps > 0:
        for i, (v, res) in enumerate(iter_deletions(g, method), start=1):
            n[v] = 0
            if t is None:
                if not res.core_free:
                    continue
                t = i
            sizes.append(i + maximum_matching_size(g, n))
            if len(sizes) > extra_steps:
                break
    return t, sizes


def verify_proposition(g: Graph, method: MethodSpec | str, extra_steps: int) -> bool:
    """Cover size ``i + M(G(n_i))`` never decreases after the transition point."""
    _, sizes = proposition_chain(g, method, extra_steps)
    return all(a <= b for a, b in zip(sizes, sizes[1:]))


@dataclass
class TheoremCheck:
    optimum: int
    transition: int
    matching: int
    holds: bool
    bound_holds: bool


def theorem_decomposition(g: Graph, budget: float | None = None) -> TheoremCheck:
    """Delete the nodes of an optimal cover in id order and check ``|C_m| = t + M(G(n_t))``."""
    exact = exact_mvc(g, budget)
    if exact.timed_out:
        raise TimeoutError("exact solver exceeded its budget")
    s = exact.size
    n = np.ones(g.node_count, dtype=np.int8)
    t = 0
    res = peel(g, n)
    for v in exact.cover:
        if res.core_free:
            break
        n[v] = 0
        t += 1
        res = peel(g, n)
    matching = len(res.peel_pairs)
    return TheoremCheck(s, t, matching, s == t + matching, t >= max(0, 2 * s - g.node_count))


def verify_theorem_decomposition(g: Graph) -> bool:
    check = theorem_decomposition(g)
    return check.holds and check.bound_holds
