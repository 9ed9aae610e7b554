"""Per-node deletion / core indicators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .leafremoval import peel


@dataclass
class NodeState:
    """``n`` marks present nodes, ``c`` core membership, ``degree`` counts present neighbours."""

    n: np.ndarray
    c: np.ndarray
    degree: np.ndarray

    @property
    def s(self) -> np.ndarray:
        return self.c * self.n

    @property
    def q(self) -> np.ndarray:
        """Excess degree; -1 on isolated present nodes, 0 on deleted ones."""
        return np.where(self.n > 0, self.degree - 1, 0)

    def copy(self) -> "NodeState":
        return NodeState(self.n.copy(), self.c.copy(), self.degree.copy())

    @classmethod
    def exact(cls, g: Graph, n=None) -> "NodeState":
        n = np.ones(g.node_count, dtype=np.int8) if n is None else np.asarray(n, dtype=np.int8).copy()
        if n.shape != (g.node_count,):
            raise ValueError("bit vector length does not match graph")
        c = peel(g, n).core_flags
        return cls(n, c, present_degrees(g, n))

    @classmethod
    def from_flags(cls, g: Graph, n, c) -> "NodeState":
        n = np.asarray(n, dtype=np.int8).copy()
        c = np.asarray(c, dtype=np.int8).copy()
        return cls(n, c, present_degrees(g, n))


def present_degrees(g: Graph, n: np.ndarray) -> np.ndarray:
    if g.edge_count == 0:
        return np.zeros(g.node_count, dtype=np.int64)
    d = g.csr @ n.astype(np.float64)
    return np.rint(d).astype(np.int64) * (n > 0)
