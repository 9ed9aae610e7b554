"""Baseline node rankings: static centralities and the adaptive HDA / CI scores."""

from __future__ import annotations

import networkx as nx
import numpy as np
import scipy.sparse as sp

from .errors import ConvergenceError
from .graph import Graph

STATIC_KINDS = ("DC", "KC", "BC", "CC", "PR", "EC")
MAX_POWER_STEPS = 100_000


def _order(scores, places: int = 12) -> list[int]:
    # rounding absorbs float noise so symmetric nodes tie and fall back to id order
    vals = np.round(np.asarray(scores, dtype=np.float64), places)
    return sorted(range(len(vals)), key=lambda i: (-vals[i], i))


def pagerank(g: Graph, damping: float = 0.85, tol: float = 1e-10) -> np.ndarray:
    """PageRank with uniform teleport; dangling mass is spread uniformly."""
    n = g.node_count
    deg = g.degrees.astype(np.float64)
    dangling = deg == 0
    inv = np.divide(1.0, deg, out=np.zeros(n), where=~dangling)
    a = g.csr
    x = np.full(n, 1.0 / n)
    for _ in range(MAX_POWER_STEPS):
        nxt = damping * (a @ (x * inv)) + (damping * x[dangling].sum() + 1.0 - damping) / n
        if np.abs(nxt - x).sum() < tol:
            return nxt
        x = nxt
    raise ConvergenceError(f"PageRank did not converge on {g!r}")


def eigenvector_centrality(g: Graph, tol: float = 1e-10) -> np.ndarray:
    """Leading adjacency eigenvector by power iteration on ``A + I``.

    The shift keeps the same eigenvector and avoids the period-2 oscillation
    plain iteration shows on bipartite graphs.
    """
    n = g.node_count
    a = g.csr + sp.identity(n, format="csr")
    x = np.full(n, 1.0 / np.sqrt(n))
    for _ in range(MAX_POWER_STEPS):
        nxt = a @ x
        nxt /= np.linalg.norm(nxt)
        if np.abs(nxt - x).sum() < tol:
            return nxt
        x = nxt
    raise ConvergenceError(f"eigenvector centrality did not converge on {g!r}")


def closeness(g: Graph) -> np.ndarray:
    h = g.to_networkx()
    if g.node_count > 1 and nx.is_connected(h):
        c = nx.closeness_centrality(h)
    else:
        c = nx.harmonic_centrality(h)
    return np.array([c[i] for i in range(g.node_count)])


def rank_static(g: Graph, kind: str, damping: float = 0.85, tol: float = 1e-10) -> list[int]:
    """Full node ranking, best first; ties go to the lower id."""
    if kind == "DC":
        return _order(g.degrees)
    if kind == "KC":
        core = nx.core_number(g.to_networkx())
        return _order([core[i] for i in range(g.node_count)])
    if kind == "BC":
        bc = nx.betweenness_centrality(g.to_networkx())
        return _order([bc[i] for i in range(g.node_count)])
    if kind == "CC":
        return _order(closeness(g))
    if kind == "PR":
        return _order(pagerank(g, damping, tol))
    if kind == "EC":
        return _order(eigenvector_centrality(g, tol))
    raise ValueError(f"{kind!r} is not a static ranking")


def hda_scores(g: Graph, degree: np.ndarray, n: np.ndarray) -> np.ndarray:
    return np.where(n > 0, degree, -1).astype(np.float64)


def ci_scores(g: Graph, degree: np.ndarray, n: np.ndarray, radius: int = 2) -> np.ndarray:
    """Collective Influence ``(d_i - 1) * sum_{j at distance radius} (d_j - 1)``."""
    nodes = g.node_count
    mask = sp.diags(n.astype(np.float64))
    a = (mask @ g.csr @ mask).tocsr()
    q = np.maximum(degree - 1, 0).astype(np.float64) * (n > 0)
    reach = sp.identity(nodes, format="csr")
    frontier = reach
    for _ in range(radius):
        nxt = (frontier @ a).astype(bool).astype(np.float64)
        nxt = (nxt - nxt.multiply(reach)).tocsr()
        nxt.eliminate_zeros()
        reach = (reach + nxt).tocsr()
        frontier = nxt
    ci = q * (frontier @ q)
    return np.where(n > 0, ci, -1.0)


def argmax_present(scores: np.ndarray, n: np.ndarray) -> int:
    """Highest score among present nodes, lowest id on ties."""
    masked = np.where(n > 0, scores, -np.inf)
    return int(np.argmax(masked))
