"""Modified non-backtracking operator and the Core Influence score.

The operator acts on vectors indexed by directed edges of the present
subgraph::

    R[(w->x), (y->z)] = s_y   if x == y and w != z, else 0

with ``s_y = c_y * n_y``.  It is only ever applied as a sparse operator except
in :func:`build_r_matrix`, which exists for small-graph cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ContractViolation
from .graph import Graph
from .state import NodeState

DENSE_LIMIT = 20000

Family = Literal["odd", "even"]


@dataclass(frozen=True)
class SpectralEstimate:
    order: int
    value: float
    family: Family = "odd"


def excess_degrees(state: NodeState) -> np.ndarray:
    """``d_i - 1`` clamped at zero (only isolated present nodes would go negative)."""
    return np.maximum(state.degree - 1, 0).astype(np.float64)


class EdgeOperator:
    """Sparse application of R and its transpose for one (graph, state) pair."""

    def __init__(self, g: Graph, state: NodeState):
        d = g.directed
        self.g = g
        self.src, self.dst, self.rev = d.src, d.dst, d.rev
        n = state.n.astype(np.float64)
        self.mask = n[self.src] * n[self.dst]
        self.s = state.s.astype(np.float64)
        self.two_m = float(self.mask.sum())

    def ones(self) -> np.ndarray:
        return self.mask.copy()

    def apply(self, v: np.ndarray) -> np.ndarray:
        """``(R v)[w->x] = s_x * (sum_z v[x->z] - v[x->w])``."""
        v = v * self.mask
        out = np.bincount(self.src, weights=v, minlength=self.g.node_count)
        return self.mask * self.s[self.dst] * (out[self.dst] - v[self.rev])

    def apply_transpose(self, v: np.ndarray) -> np.ndarray:
        """``(R^T v)[y->z] = s_y * (sum_w v[w->y] - v[z->y])``."""
        v = v * self.mask
        inc = np.bincount(self.dst, weights=v, minlength=self.g.node_count)
        return self.mask * self.s[self.src] * (inc[self.src] - v[self.rev])


def build_r_matrix(g: Graph, state: NodeState, limit: int = DENSE_LIMIT) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Dense R over the directed edges of the present subgraph.

    Returns the matrix and the directed edge (row/column) labels.
    """
    d = g.directed
    n = state.n
    keep = np.flatnonzero((n[d.src] > 0) & (n[d.dst] > 0))
    size = keep.size
    if size > limit:
        raise ContractViolation(
            f"2M = {size} exceeds the dense limit {limit}; use lambda_power / lambda_closed_form instead"
        )
    labels = [(int(d.src[k]), int(d.dst[k])) for k in keep]
    s = state.s
    r = np.zeros((size, size))
    out: dict[int, list[int]] = {}
    for i, (y, z) in enumerate(labels):
        out.setdefault(y, []).append(i)
    for i, (w, x) in enumerate(labels):
        if not s[x]:
            continue
        for j in out.get(x, ()):
            if labels[j][1] != w:
                r[i, j] = s[x]
    return r, labels


def spectral_radius(r: np.ndarray) -> float:
    if r.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(r))))


def _present_adjacency(g: Graph, state: NodeState) -> list[list[int]]:
    n = state.n
    return [[v for v in g.adjacency[u] if n[v]] if n[u] else [] for u in range(g.node_count)]


def lambda_closed_form(g: Graph, state: NodeState, l: int) -> SpectralEstimate:
    """Orders 1-3 by explicit enumeration of non-backtracking walks with 2l nodes."""
    if l not in (1, 2, 3):
        raise ValueError("closed form is available for l = 1, 2, 3 only")
    adj = _present_adjacency(g, state)
    two_m = sum(len(a) for a in adj)
    if two_m == 0:
        return SpectralEstimate(l, 0.0)
    s = state.s
    q = excess_degrees(state)
    total = 0.0
    if l == 1:
        for w in range(g.node_count):
            if s[w]:
                for x in adj[w]:
                    if s[x]:
                        total += q[w] * q[x]
    elif l == 2:
        for w in range(g.node_count):
            if not s[w]:
                continue
            for x in adj[w]:
                if not s[x]:
                    continue
                for y in adj[x]:
                    if y == w or not s[y]:
                        continue
                    for z in adj[y]:
                        if z != x and s[z]:
                            total += q[w] * q[z]
    else:
        for u in range(g.node_count):
            if not s[u]:
                continue
            for v in adj[u]:
                if not s[v]:
                    continue
                for w in adj[v]:
                    if w == u or not s[w]:
                        continue
                    for x in adj[w]:
                        if x == v or not s[x]:
                            continue
                        for y in adj[x]:
                            if y == w or not s[y]:
                                continue
                            for z in adj[y]:
                                if z != x and s[z]:
                                    total += q[u] * q[z]
    return SpectralEstimate(l, (total / two_m) ** (1.0 / (2 * l)))


def walk_sum(g: Graph, state: NodeState, k: int) -> float:
    """``<1| R^k |1>`` over the present directed edges, via k sparse applications."""
    op = EdgeOperator(g, state)
    left = op.ones()
    right = op.ones()
    for _ in range(k // 2):
        left = op.apply_transpose(left)
    for _ in range(k - k // 2):
        right = op.apply(right)
    return float(left @ right)


def lambda_power(g: Graph, state: NodeState, l: int, family: Family = "odd") -> SpectralEstimate:
    """Power-method estimate of the largest eigenvalue of R.

    ``odd``:  ``(<v_l^L | v_l^R> / 2M) ** (1 / 2l)``, walks of length ``2l - 1``;
    ``even``: ``(<v_l^L | R | v_l^R> / 2M) ** (1 / (2l + 1))``, walks of length ``2l``;
    where ``v_l^R = R^l 1`` and ``v_l^L = (R^T)^l 1``.
    """
    if l < 1:
        raise ValueError("order l must be >= 1")
    op = EdgeOperator(g, state)
    if op.two_m == 0:
        return SpectralEstimate(l, 0.0, family)
    left = op.ones()
    right = op.ones()
    for _ in range(l):
        left = op.apply_transpose(left)
        right = op.apply(right)
    if family == "odd":
        total, power = float(left @ right), 2 * l
    elif family == "even":
        total, power = float(left @ op.apply(right)), 2 * l + 1
    else:
        raise ValueError(f"unknown family {family!r}")
    return SpectralEstimate(l, (max(total, 0.0) / op.two_m) ** (1.0 / power), family)


def core_influence(g: Graph, state: NodeState, l: int = 1) -> np.ndarray:
    """Core Influence ``H(v_i)`` for every node at walk length ``l``.

    ``H(v_i) = q_i * sum over non-backtracking walks i, x_1, ..., x_l of
    s_i s_{x_1} ... s_{x_l} q_{x_l}``; zero wherever ``s_i = 0``.
    """
    if l < 1:
        raise ValueError("order l must be >= 1")
    if g.edge_count == 0:
        return np.zeros(g.node_count)
    op = EdgeOperator(g, state)
    w = op.ones()
    for _ in range(l):
        w = op.apply(w)
    per_node = np.bincount(op.src, weights=w, minlength=g.node_count)
    return op.s * excess_degrees(state) * per_node


def lambda_table(g: Graph, state: NodeState, max_order: int) -> list[SpectralEstimate]:
    rows = []
    for l in range(1, max_order + 1):
        rows.append(lambda_power(g, state, l, "odd"))
        rows.append(lambda_power(g, state, l, "even"))
    return rows


def lambda_from_dense(r: np.ndarray, l: int, family: Family = "odd") -> float:
    """Same estimate as :func:`lambda_power`, but from the explicit matrix."""
    size = r.shape[0]
    if size == 0:
        return 0.0
    k = 2 * l if family == "odd" else 2 * l + 1
    ones = np.ones(size)
    total = ones @ np.linalg.matrix_power(r, k) @ ones
    return math.pow(max(total, 0.0) / size, 1.0 / k)
