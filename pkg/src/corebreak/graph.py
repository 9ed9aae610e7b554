"""Undirected simple graphs, random generators and edge-list I/O."""

from __future__ import annotations

import logging
import math
from functools import cached_property
from typing import IO, Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import GraphFormatError

log = logging.getLogger(__name__)


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator; the only RNG used anywhere in the package."""
    return np.random.Generator(np.random.PCG64(seed))


class Graph:
    """Immutable undirected simple graph on nodes ``0..N-1``.

    ``labels[i]`` is the external id of node ``i`` (identity for generated graphs).
    """

    def __init__(
        self,
        node_count: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[int] | None = None,
        meta: dict | None = None,
    ):
        if node_count < 0:
            raise ValueError("node_count must be nonnegative")
        canon = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValueError(f"edge ({u}, {v}) out of range for N={node_count}")
            canon.add((u, v) if u < v else (v, u))
        self.node_count = node_count
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(canon))
        adj: list[list[int]] = [[] for _ in range(node_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adj)
        if labels is None:
            labels = range(node_count)
        self.labels: tuple[int, ...] = tuple(int(x) for x in labels)
        if len(self.labels) != node_count:
            raise ValueError("labels length must equal node_count")
        self.meta = dict(meta or {})

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adjacency], dtype=np.int64)

    @cached_property
    def csr(self) -> sp.csr_matrix:
        """Adjacency matrix as CSR with unit entries."""
        n = self.node_count
        if not self.edges:
            return sp.csr_matrix((n, n), dtype=np.float64)
        e = np.asarray(self.edges, dtype=np.int64)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        data = np.ones(rows.size, dtype=np.float64)
        return sp.csr_matrix((data, (rows, cols)), shape=(n, n))

    @cached_property
    def directed(self) -> "DirectedEdgeIndex":
        return DirectedEdgeIndex(self)

    def to_networkx(self):
        import networkx as nx

        h = nx.Graph()
        h.add_nodes_from(range(self.node_count))
        h.add_edges_from(self.edges)
        return h

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.node_count == other.node_count and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.node_count, self.edges))

    def __repr__(self) -> str:
        return f"Graph(N={self.node_count}, M={self.edge_count})"


class DirectedEdgeIndex:
    """Both orientations of every edge, densely indexed ``0..2M-1``.

    Directed edges are grouped by source node (CSR order), so ``src`` is sorted.
    ``rev[e]`` is the index of the opposite orientation.
    """

    def __init__(self, g: Graph):
        m = g.csr
        m.sort_indices()
        indptr = m.indptr.astype(np.int64)
        self.dst = m.indices.astype(np.int64)
        self.src = np.repeat(np.arange(g.node_count, dtype=np.int64), np.diff(indptr))
        self.indptr = indptr
        order = np.lexsort((self.src, self.dst))  # sorted by (dst, src)
        # position of (v -> u) in src-major order equals position of (u -> v) in dst-major order
        rev = np.empty_like(order)
        rev[order] = np.arange(order.size)
        self.rev = rev
        self._lookup = {(int(u), int(v)): k for k, (u, v) in enumerate(zip(self.src, self.dst))}

    def __len__(self) -> int:
        return int(self.src.size)

    def index(self, u: int, v: int) -> int:
        return self._lookup[(u, v)]


def _parse_pair(line_no: int, tokens: list[str]) -> tuple[int, int]:
    if len(tokens) < 2:
        raise GraphFormatError(f"line {line_no}: expected two node ids, got {len(tokens)} token(s)")
    try:
        u, v = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise GraphFormatError(f"line {line_no}: non-integer node id in {tokens[:2]!r}") from None
    if u < 0 or v < 0:
        raise GraphFormatError(f"line {line_no}: negative node id")
    return u, v


def load_edge_list(stream: IO[bytes] | IO[str] | bytes | str) -> Graph:
    """Parse a SNAP-style edge list.

    Lines starting with ``#`` are comments, except ``# isolated=a,b,...`` which
    declares edgeless nodes (written by :func:`write_edge_list`).  External ids
    are remapped to dense indices in ascending id order; self-loops and repeated
    edges (in either orientation) are dropped with a logged count.
    """
    if isinstance(stream, (bytes, str)):
        data = stream
    else:
        data = stream.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")

    raw: list[tuple[int, int]] = []
    extra: set[int] = set()
    for line_no, line in enumerate(data.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            if stripped.startswith("# isolated="):
                for tok in stripped[len("# isolated="):].split(","):
                    extra.add(_parse_pair(line_no, [tok, tok])[0])
            continue
        raw.append(_parse_pair(line_no, stripped.split()))
    if not raw and not extra:
        raise GraphFormatError("edge list contains no data lines")

    labels = sorted({x for e in raw for x in e} | extra)
    remap = {x: k for k, x in enumerate(labels)}
    seen: set[tuple[int, int]] = set()
    loops = dups = 0
    for a, b in raw:
        u, v = remap[a], remap[b]
        if u == v:
            loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            dups += 1
            continue
        seen.add(key)
    if loops or dups:
        log.warning("dropped %d self-loop(s) and %d duplicate edge(s)", loops, dups)
    meta = {"self_loops_dropped": loops, "duplicates_dropped": dups}
    return Graph(len(labels), seen, labels=labels, meta=meta)


def write_edge_list(g: Graph, stream: IO[str], header: dict | None = None) -> None:
    """Write ``g`` in the format read by :func:`load_edge_list`, using external labels."""
    stream.write(f"# N={g.node_count} M={g.edge_count}\n")
    for key, value in (header if header is not None else g.meta).items():
        stream.write(f"# {key}={value}\n")
    lab = g.labels
    isolated = [i for i in range(g.node_count) if not g.adjacency[i]]
    if isolated:
        stream.write("# isolated=" + ",".join(str(lab[i]) for i in isolated) + "\n")
    for u, v in g.edges:
        stream.write(f"{lab[u]}\t{lab[v]}\n")


def _pair_from_index(k: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # row-major enumeration of pairs u < v
    rows = np.arange(n, dtype=np.int64)
    starts = rows * n - rows * (rows + 1) // 2
    u = np.searchsorted(starts, k, side="right") - 1
    v = k - starts[u] + u + 1
    return u, v


def generate_er(n: int, avg_degree: float, seed: int) -> Graph:
    """Uniform G(N, M) graph with ``M = round(n * avg_degree / 2)`` edges."""
    if n < 2:
        raise ValueError("ER graph needs n >= 2")
    if not avg_degree > 0:
        raise ValueError("avg_degree must be positive")
    capacity = n * (n - 1) // 2
    m = int(round(n * avg_degree / 2))
    if m > capacity:
        raise ValueError(f"{m} edges requested but K_{n} has only {capacity}")
    rng = make_rng(seed)
    picks = rng.choice(capacity, size=m, replace=False)
    u, v = _pair_from_index(np.sort(picks), n)
    meta = {"model": "er", "nodes": n, "avg_degree": avg_degree, "seed": seed}
    return Graph(n, zip(u.tolist(), v.tolist()), meta=meta)


def generate_sf(n: int, avg_degree: float, seed: int) -> Graph:
    """Preferential-attachment graph (degree tail exponent 3).

    Growth starts from a clique on ``ceil(avg_degree/2) + 1`` nodes; every new
    node attaches to ``m`` distinct existing nodes chosen proportionally to
    degree, where ``m`` is ``floor(avg_degree/2)`` or one more, mixed so that
    its mean is ``avg_degree/2``.
    """
    if avg_degree < 2:
        raise ValueError("SF growth needs avg_degree >= 2 (at least one link per new node)")
    if n < 4:
        raise ValueError("SF graph needs n >= 4")
    half = avg_degree / 2
    m_lo = math.floor(half)
    frac = half - m_lo
    m0 = math.ceil(half) + 1
    if m0 > n:
        raise ValueError("avg_degree too large for n")
    rng = make_rng(seed)
    edges = [(u, v) for u in range(m0) for v in range(u + 1, m0)]
    # one entry per edge endpoint: sampling uniformly from it is degree-proportional
    endpoints = [x for e in edges for x in e]
    for new in range(m0, n):
        m = m_lo + (1 if rng.random() < frac else 0)
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(endpoints[int(rng.integers(len(endpoints)))])
        for t in sorted(targets):
            edges.append((t, new))
            endpoints.extend((t, new))
    meta = {"model": "sf", "nodes": n, "avg_degree": avg_degree, "seed": seed}
    return Graph(n, edges, meta=meta)


def generate(model: str, n: int, avg_degree: float, seed: int) -> Graph:
    if model == "er":
        return generate_er(n, avg_degree, seed)
    if model == "sf":
        return generate_sf(n, avg_degree, seed)
    raise ValueError(f"unknown graph model {model!r}")


def induced_subgraph(g: Graph, n: Sequence[int] | np.ndarray) -> tuple[Graph, list[int]]:
    """Subgraph on nodes with ``n[i] == 1``.

    Returns the graph (relabelled densely) and the list mapping new ids to old ids.
    """
    n = np.asarray(n)
    if n.shape != (g.node_count,):
        raise ValueError(f"bit vector has length {n.size}, graph has {g.node_count} nodes")
    keep = [i for i in range(g.node_count) if n[i]]
    new_id = {old: k for k, old in enumerate(keep)}
    edges = [(new_id[u], new_id[v]) for u, v in g.edges if n[u] and n[v]]
    labels = [g.labels[i] for i in keep]
    return Graph(len(keep), edges, labels=labels), keep
