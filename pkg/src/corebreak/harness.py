"""Experiment drivers: single runs, degree sweeps, exact-gap tables, lambda tables.

Trial seeds are ``derive_seed(base_seed, model, avg_degree, trial)``: the first
eight bytes (little endian) of SHA-256 over ``"{base_seed}|{model}|{avg_degree:g}|{trial}"``.
Any single trial can therefore be regenerated in isolation.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .breaker import MethodSpec, break_core
from .centrality import STATIC_KINDS
from .cover import cover_from_trace, exact_mvc
from .graph import Graph, generate
from .spectral import DENSE_LIMIT, build_r_matrix, lambda_table, spectral_radius
from .state import NodeState


def derive_seed(base_seed: int, model: str, avg_degree: float, trial: int) -> int:
    key = f"{base_seed}|{model}|{float(avg_degree):g}|{trial}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "little")


METHOD_ALIASES = {
    "hl": "HL",
    "hl-approx": "HL_APPROX",
    "hl_approx": "HL_APPROX",
}


def parse_method(name: str, update: str = "exact", ranking: str = "static", **params) -> MethodSpec:
    """Map CLI names (``hl``, ``dc``, ``dc-adaptive``, ...) to a MethodSpec.

    ``hl`` honours ``update``; ``ranking="adaptive"`` (or an ``-adaptive``
    suffix) re-ranks a static baseline after every deletion.
    """
    name = name.lower()
    if name.endswith("-adaptive"):
        name, ranking = name[: -len("-adaptive")], "adaptive"
    if ranking not in ("static", "adaptive"):
        raise ValueError(f"unknown ranking mode {ranking!r}")
    kind = METHOD_ALIASES.get(name, name.upper())
    if kind == "HL" and update == "approx":
        kind = "HL_APPROX"
    recompute = ranking == "adaptive" and kind in STATIC_KINDS
    return MethodSpec(kind, recompute=recompute, **params)


def method_label(m: MethodSpec) -> str:
    label = m.kind.lower().replace("_", "-")
    return label + "-adaptive" if m.recompute else label


@dataclass
class ResultRecord:
    model: str
    n: int
    m: int
    avg_degree: float
    seed: int | None
    method: str
    deleted: int
    matching: int
    cover: int
    elapsed_ms: float | None
    update: str
    trial: int | None = None

    def __post_init__(self):
        if self.cover != self.deleted + self.matching:
            raise ValueError("cover size must equal deleted + matching")


def run_method(g: Graph, method: MethodSpec):
    trace = break_core(g, method)
    cover = cover_from_trace(g, trace)
    return trace, cover


def record_for(g: Graph, method: MethodSpec, model: str, avg_degree: float, seed, trial=None, timing=True):
    start = time.perf_counter()
    trace, cover = run_method(g, method)
    elapsed = (time.perf_counter() - start) * 1000.0
    rec = ResultRecord(
        model=model,
        n=g.node_count,
        m=g.edge_count,
        avg_degree=avg_degree,
        seed=seed,
        method=method_label(method),
        deleted=trace.transition,
        matching=len(cover.matching),
        cover=cover.size,
        elapsed_ms=round(elapsed, 3) if timing else None,
        update=method.update,
        trial=trial,
    )
    return rec, trace, cover


# sweeps --------------------------------------------------------------------------------

SWEEP_COLUMNS = [
    "row_type", "model", "n", "avg_degree", "trial", "seed", "method", "update",
    "m", "deleted", "matching", "cover", "elapsed_ms",
]
STAT_ROWS = ("mean", "std", "sem")


@dataclass
class SweepConfig:
    models: Sequence[str] = ("er", "sf")
    degrees: Sequence[float] = tuple(range(3, 11))
    trials: int = 30
    nodes: int = 1000
    methods: Sequence[str] = ("hl", "hl-approx", "dc", "kc", "bc", "cc", "ci", "hda", "pr", "ec")
    base_seed: int = 0
    output: str | None = None
    jobs: int = 1
    record_timing: bool = False

    def specs(self) -> list[MethodSpec]:
        return [parse_method(m) for m in self.methods]

    def echo(self) -> str:
        d = asdict(self)
        d.pop("output")
        d.pop("jobs")
        d["models"] = list(d["models"])
        d["degrees"] = [float(x) for x in d["degrees"]]
        d["methods"] = [method_label(s) for s in self.specs()]
        return json.dumps(d, sort_keys=True)

    def tasks(self) -> list[tuple[str, float, int]]:
        return [(model, float(k), t) for model in self.models for k in self.degrees for t in range(self.trials)]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(round(x, 6)) if math.isfinite(x) else ""
    return str(x)


def _trial_rows(args) -> list[list[str]]:
    model, degree, trial, base_seed, nodes, methods, timing = args
    seed = derive_seed(base_seed, model, degree, trial)
    g = generate(model, nodes, degree, seed)
    rows = []
    for name in methods:
        spec = parse_method(name)
        rec, _, _ = record_for(g, spec, model, degree, seed, trial, timing)
        rows.append(["trial", rec.model, rec.n, float(degree), trial, seed, rec.method, rec.update,
                     rec.m, rec.deleted, rec.matching, rec.cover, rec.elapsed_ms])
    return [[_fmt(v) for v in r] for r in rows]


def _preamble(kind: str, config_echo: str) -> str:
    return f"# corebreak {__version__}\n# command={kind}\n# config={config_echo}\n"


def _read_existing(path: Path, preamble: str, ncols: int) -> list[list[str]]:
    """Trial rows of an interrupted run with the same preamble; partial lines dropped."""
    text = path.read_text()
    if not text.startswith(preamble):
        raise ValueError(f"{path} was written with a different configuration; refusing to resume")
    body = [ln for ln in text[len(preamble):].splitlines() if ln and not ln.startswith("#")]
    if not text.endswith("\n") and body:
        body = body[:-1]
    rows = list(csv.reader(body))
    return [r for r in rows[1:] if len(r) == ncols and r[0] == "trial"]


def _stats(values: list[float]) -> tuple[float, float, float]:
    k = len(values)
    mean = sum(values) / k
    std = math.sqrt(sum((v - mean) ** 2 for v in values) / (k - 1)) if k > 1 else 0.0
    return mean, std, std / math.sqrt(k)


def sweep_aggregates(rows: list[list[str]]) -> list[list[str]]:
    """Per (model, degree, method) mean / sample std / standard error of the trial rows."""
    groups: dict[tuple[str, str, str, str], list[list[str]]] = {}
    for r in rows:
        groups.setdefault((r[1], r[2], r[3], r[6]), []).append(r)
    out = []
    for (model, n, degree, method), rs in groups.items():
        cols = {c: _stats([float(r[SWEEP_COLUMNS.index(c)]) for r in rs]) for c in ("m", "deleted", "matching", "cover")}
        for i, kind in enumerate(STAT_ROWS):
            out.append([kind, model, n, degree, str(len(rs)), "", method, rs[0][7],
                        _fmt(cols["m"][i]), _fmt(cols["deleted"][i]), _fmt(cols["matching"][i]),
                        _fmt(cols["cover"][i]), ""])
    return out


def _write_csv(path: Path | None, preamble: str, columns: list[str], rows: Iterable[list[str]]) -> str:
    buf = io.StringIO()
    buf.write(preamble)
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    text = buf.getvalue()
    if path is not None:
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(text)
        os.replace(tmp, path)
    return text


def _ordered_map(fn, args: list, jobs: int):
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            yield from pool.map(fn, args)
    else:
        yield from map(fn, args)


def run_sweep(config: SweepConfig) -> str:
    """Run every (model, degree, trial, method) cell; return the CSV text.

    With an output path, rows are appended and flushed as they complete, and a
    rerun with the same configuration skips trials already on disk.  The final
    file is rewritten in canonical order with aggregate rows appended.
    """
    methods = [method_label(s) for s in config.specs()]
    preamble = _preamble("sweep", config.echo())
    path = Path(config.output) if config.output else None
    tasks = config.tasks()

    done: dict[tuple[str, str, str], list[list[str]]] = {}
    if path is not None and path.exists():
        for r in _read_existing(path, preamble, len(SWEEP_COLUMNS)):
            done.setdefault((r[1], r[3], r[4]), []).append(r)
        done = {k: v for k, v in done.items() if [r[6] for r in v] == methods}

    def key(task):
        model, degree, trial = task
        return (model, _fmt(degree), str(trial))

    pending = [t for t in tasks if key(t) not in done]
    if path is not None:
        kept = [r for t in tasks if key(t) in done for r in done[key(t)]]
        _write_csv(path, preamble, SWEEP_COLUMNS, kept)
        fh = path.open("a", newline="")
    else:
        fh = None
    try:
        w = csv.writer(fh, lineterminator="\n") if fh else None
        args = [(m, d, t, config.base_seed, config.nodes, methods, config.record_timing) for m, d, t in pending]
        for task, rows in zip(pending, _ordered_map(_trial_rows, args, config.jobs)):
            done[key(task)] = rows
            if w is not None:
                w.writerows(rows)
                fh.flush()
    finally:
        if fh is not None:
            fh.close()

    trial_rows = [r for t in tasks for r in done[key(t)]]
    return _write_csv(path, preamble, SWEEP_COLUMNS, trial_rows + sweep_aggregates(trial_rows))


# exact gap -----------------------------------------------------------------------------

GAP_COLUMNS = ["row_type", "n", "avg_degree", "trial", "seed", "method", "heuristic_cover", "exact_cover",
               "gap_pct", "status"]


@dataclass
class ExactGapConfig:
    nodes: Sequence[int] = (80, 100, 120)
    degrees: Sequence[float] = (3, 4, 5, 6, 7)
    trials: int = 30
    base_seed: int = 0
    method: str = "hl"
    budget: float = 600.0
    output: str | None = None
    jobs: int = 1

    def echo(self) -> str:
        d = asdict(self)
        d.pop("output")
        d.pop("jobs")
        d["nodes"] = list(d["nodes"])
        d["degrees"] = [float(x) for x in d["degrees"]]
        return json.dumps(d, sort_keys=True)


def _gap_row(args) -> list[str]:
    n, degree, trial, base_seed, method, budget = args
    seed = derive_seed(base_seed, "er", degree, trial)
    g = generate("er", n, degree, seed)
    spec = parse_method(method)
    _, cover = run_method(g, spec)
    exact = exact_mvc(g, budget)
    if exact.timed_out:
        return ["trial", str(n), _fmt(degree), str(trial), str(seed), method_label(spec), str(cover.size), "", "", "timeout"]
    gap = 100.0 * (cover.size - exact.size) / n
    return ["trial", str(n), _fmt(degree), str(trial), str(seed), method_label(spec), str(cover.size),
            str(exact.size), _fmt(gap), "ok"]


def gap_aggregates(rows: list[list[str]]) -> list[list[str]]:
    groups: dict[tuple[str, str], list[list[str]]] = {}
    for r in rows:
        groups.setdefault((r[1], r[2]), []).append(r)
    out = []
    for (n, degree), rs in groups.items():
        ok = [float(r[8]) for r in rs if r[9] == "ok"]
        timeouts = len(rs) - len(ok)
        mean = _fmt(sum(ok) / len(ok)) if ok else ""
        out.append(["mean", n, degree, str(len(ok)), "", rs[0][5], "", "", mean, f"timeouts={timeouts}"])
    return out


def run_exact_gap(config: ExactGapConfig) -> str:
    args = [(n, float(k), t, config.base_seed, config.method, config.budget)
            for n in config.nodes for k in config.degrees for t in range(config.trials)]
    rows = list(_ordered_map(_gap_row, args, config.jobs))
    preamble = _preamble("exact-gap", config.echo())
    path = Path(config.output) if config.output else None
    return _write_csv(path, preamble, GAP_COLUMNS, rows + gap_aggregates(rows))


# lambda table --------------------------------------------------------------------------

LAMBDA_DENSE_LIMIT = 2000


def lambda_rows(g: Graph, max_order: int, dense: bool = True) -> tuple[list[str], list[list[str]]]:
    """(columns, rows) of power-method estimates for the full graph's exact state."""
    state = NodeState.exact(g)
    estimates = lambda_table(g, state, max_order)
    cols = ["order", "family", "value"]
    radius = None
    if dense:
        r, _ = build_r_matrix(g, state, limit=min(LAMBDA_DENSE_LIMIT, DENSE_LIMIT))
        radius = spectral_radius(r)
        cols.append("dense_radius")
    rows = []
    for est in estimates:
        row = [str(est.order), est.family, repr(est.value)]
        if radius is not None:
            row.append(repr(radius))
        rows.append(row)
    return cols, rows
