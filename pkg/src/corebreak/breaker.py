"""Greedy deletion loops that drive a graph to the core-free state."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Iterator

import numpy as np

from .centrality import STATIC_KINDS, argmax_present, ci_scores, hda_scores, rank_static
from .errors import ContractViolation
from .graph import Graph, induced_subgraph
from .leafremoval import PeelResult, peel
from .spectral import core_influence
from .state import NodeState, present_degrees

KINDS = ("HL", "HL_APPROX", "DC", "KC", "BC", "CC", "CI", "HDA", "PR", "EC")
ADAPTIVE_KINDS = ("HL", "HL_APPROX", "HDA", "CI")


@dataclass(frozen=True)
class MethodSpec:
    kind: str = "HL"
    order: int = 1
    radius: int = 2
    damping: float = 0.85
    tol: float = 1e-10
    # approximate-update variant for HL_APPROX: "text" zeroes both new leaf and its neighbour,
    # "literal" assigns c_j=0, c_victim=1, c_k=1
    approx_mode: str = "text"
    # static baselines only: re-rank the residual graph after every deletion
    recompute: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown method {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.approx_mode not in ("text", "literal"):
            raise ValueError(f"unknown approx mode {self.approx_mode!r}")
        if self.order < 1 or self.radius < 1:
            raise ValueError("order and radius must be >= 1")
        if self.recompute and self.kind not in STATIC_KINDS:
            raise ValueError(f"{self.kind} is already adaptive; recompute applies to static baselines")

    @property
    def ranking(self) -> str:
        return "adaptive" if self.kind in ADAPTIVE_KINDS or self.recompute else "static"

    @property
    def update(self) -> str:
        if self.kind == "HL":
            return "exact"
        if self.kind == "HL_APPROX":
            return "approx"
        return ""

    def describe(self) -> dict:
        d = asdict(self)
        d["ranking"] = self.ranking
        return d


@dataclass
class DeletionTrace:
    deleted: list[int]
    present_counts: list[int]
    transition: int
    method: MethodSpec
    elapsed: float = 0.0
    final_n: np.ndarray = field(default=None, repr=False)

    def bit_vector(self, step: int, node_count: int) -> np.ndarray:
        """Presence vector after ``step`` deletions."""
        n = np.ones(node_count, dtype=np.int8)
        n[self.deleted[:step]] = 0
        return n


def approx_state_update(g: Graph, state: NodeState, victim: int, mode: str = "text") -> NodeState:
    """Patch core flags around ``victim`` without a full peel, then delete it.

    Every present neighbour ``j`` of degree two is about to become a leaf; it and
    its other neighbour ``k`` leave the core.
    """
    if not state.n[victim]:
        raise ContractViolation(f"node {victim} is already deleted")
    new = state.copy()
    n, c = new.n, new.c
    for j in g.adjacency[victim]:
        if not n[j] or state.degree[j] != 2:
            continue
        k = next((x for x in g.adjacency[j] if x != victim and n[x]), None)
        c[j] = 0
        if mode == "text":
            if k is not None:
                c[k] = 0
        else:
            c[victim] = 1
            if k is not None:
                c[k] = 1
    n[victim] = 0
    for j in g.adjacency[victim]:
        if n[j]:
            new.degree[j] -= 1
    new.degree[victim] = 0
    return new


def rank_adaptive_step(g: Graph, state: NodeState, kind: str, radius: int = 2) -> int:
    if not state.n.any():
        raise ContractViolation("no present node left")
    if kind == "HDA":
        scores = hda_scores(g, state.degree, state.n)
    elif kind == "CI":
        scores = ci_scores(g, state.degree, state.n, radius)
    else:
        raise ValueError(f"{kind!r} is not an adaptive baseline")
    return argmax_present(scores, state.n)


def iter_deletions(g: Graph, method: MethodSpec) -> Iterator[tuple[int, PeelResult]]:
    """Yield ``(victim, exact peel of the residual)`` for successive deletions.

    Runs until every node is deleted; callers stop when they have what they need.
    """
    n = np.ones(g.node_count, dtype=np.int8)
    kind = method.kind

    if kind in STATIC_KINDS and method.recompute:
        while n.any():
            sub, keep = induced_subgraph(g, n)
            v = keep[rank_static(sub, kind, method.damping, method.tol)[0]]
            n[v] = 0
            yield v, peel(g, n)
        return

    if kind in STATIC_KINDS:
        for v in rank_static(g, kind, method.damping, method.tol):
            n[v] = 0
            yield v, peel(g, n)
        return

    state = NodeState.exact(g, n)
    while state.n.any():
        if kind in ("HL", "HL_APPROX"):
            scores = core_influence(g, state, method.order)
            v = argmax_present(scores, state.n)
        else:
            v = rank_adaptive_step(g, state, kind, method.radius)
        if kind == "HL_APPROX":
            state = approx_state_update(g, state, v, method.approx_mode)
            res = peel(g, state.n)
            if not (state.c * state.n).any():
                # patched flags lost every core node while an exact core remains: resync
                state.c = res.core_flags.copy()
        else:
            state.n[v] = 0
            res = peel(g, state.n)
            state = NodeState(state.n, res.core_flags.copy(), present_degrees(g, state.n))
        yield v, res


def break_core(g: Graph, method: MethodSpec | str = "HL") -> DeletionTrace:
    """Delete nodes greedily until the residual graph has no leaf-removal core."""
    if isinstance(method, str):
        method = MethodSpec(method)
    start = time.perf_counter()
    deleted: list[int] = []
    counts: list[int] = []
    n = np.ones(g.node_count, dtype=np.int8)
    if not peel(g, n).core_free:
        for v, res in iter_deletions(g, method):
            deleted.append(v)
            n[v] = 0
            counts.append(g.node_count - len(deleted))
            if res.core_free:
                break
    return DeletionTrace(deleted, counts, len(deleted), method, time.perf_counter() - start, n)
