"""Searching for the minimum triangle count t(n, k) over k-regular graphs.

Two oracles: simulated annealing on the degree-preserving 2-switch chain
(any n, inexact) and exhaustive backtracking over labeled graphs (tiny n,
exact). A result below the closed form with a valid (n, k) would refute the
formula; such reports are flagged and their witness graphs persisted.
"""

from __future__ import annotations

import json
import logging
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from . import _pykernels
from ._backend import kernels
from .construct import build_extremal, formula_t, random_regular, validate_params, _check_degree_pair
from .errors import ParamsError, ValidationError
from .graph import Graph, count_triangles, is_bipartite, remove_vertices
from .graph6 import append_graph6, emit_graph6, parse_graph6

log = logging.getLogger(__name__)

COUNTEREXAMPLE_FILE = "counterexamples.g6"


def derive_seed(master: int, index: int) -> int:
    """Counter-based split of a master seed: independent stream per index."""
    _, z = _pykernels.splitmix64(index)
    _, s = _pykernels.splitmix64((master ^ z) & _pykernels.MASK64)
    return s


def worker_count(requested: int | None = None) -> int:
    cap = os.environ.get("REGTRI_THREADS")
    n = requested if requested else (os.cpu_count() or 1)
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


@dataclass
class SearchConfig:
    seed: int = 0
    restarts: int = 20
    steps_per_restart: int = 100_000
    t0: float | None = None          # None: use k
    decay: float = 0.999
    t_floor: float = 1e-3
    seed_mode: str = "random"        # random | extremal | provided
    seed_graph: Graph | None = None
    workers: int | None = None
    check_every: int = 1000          # 1 = debug mode, 0 = off

    def validate(self) -> None:
        if self.restarts <= 0 or self.steps_per_restart <= 0:
            raise ValidationError("restarts and steps_per_restart must be positive", code="config")
        if not 0 < self.decay < 1:
            raise ValidationError("decay must lie in (0, 1)", code="config")
        if self.t_floor <= 0 or (self.t0 is not None and self.t0 <= 0):
            raise ValidationError("temperatures must be positive", code="config")
        if self.seed_mode not in ("random", "extremal", "provided"):
            raise ValidationError(f"unknown seed mode {self.seed_mode!r}", code="config")
        if self.seed_mode == "provided" and self.seed_graph is None:
            raise ValidationError("seed_mode 'provided' needs seed_graph", code="config")
        if self.check_every < 0:
            raise ValidationError("check_every must be >= 0", code="config")


@dataclass
class SearchReport:
    n: int
    k: int
    best_count: int
    formula_value: int | None
    gap: int | None
    best_graph: str
    evaluations: int
    seed: int | None
    mode: str
    exact: bool
    counterexample: bool = False
    details: dict = field(default_factory=dict)
    minimizers: list = field(default_factory=list, repr=False, compare=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        del d["minimizers"]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _formula_or_none(n: int, k: int) -> int | None:
    try:
        return formula_t(validate_params(n, k))
    except ParamsError:
        return None


def _finish(report: SearchReport, witness: Graph, witness_path) -> SearchReport:
    """Flag and persist a sub-formula result. Written before anything else can fail."""
    if report.formula_value is not None and report.best_count < report.formula_value:
        report.counterexample = True
        path = witness_path or COUNTEREXAMPLE_FILE
        append_graph6(path, [witness])
        report.details["witness_path"] = str(path)
        log.warning("CONJECTURE-COUNTEREXAMPLE: n=%d k=%d T=%d < %d, witness in %s",
                    report.n, report.k, report.best_count, report.formula_value, path)
    return report


# ------------------------------------------------------------ switch chain

def switch_step(g: Graph, rng: random.Random, max_tries: int = 100) -> Graph:
    """One degree-preserving 2-switch ab, cd -> ac, bd; g itself if none found."""
    edges = g.edges()
    if len(edges) < 2:
        return g
    for _ in range(max_tries):
        (a, b), (c, d) = rng.sample(edges, 2)
        if rng.random() < 0.5:
            a, b = b, a
        if len({a, b, c, d}) < 4 or g.has_edge(a, c) or g.has_edge(b, d):
            continue
        rows = list(g.rows)
        for u, v in ((a, b), (c, d), (a, c), (b, d)):
            rows[u] ^= 1 << v
            rows[v] ^= 1 << u
        return Graph(g.n, rows, _trusted=True)
    return g


def switch_delta(g: Graph, a: int, b: int, c: int, d: int) -> int:
    """Triangle change of the switch ab, cd -> ac, bd, as the annealer computes it."""
    return int(kernels.switch_delta(g.bits, a, b, c, d))


def _anneal_restart(args):
    (n, k, index, start_rows, steps, t0, decay, t_floor, seed, check_every) = args
    g = Graph(n, start_rows, _trusted=True)
    edges = np.array(g.edges(), dtype=np.int64).reshape(-1, 2)
    best, best_bits, final, evals, acc, checks = kernels.anneal(
        g.bits, edges, steps, t0, decay, t_floor, seed, check_every, k)
    return index, int(best), Graph.from_bits(best_bits).rows, int(evals), int(acc), int(checks)


def _start_graph(n, k, cfg: SearchConfig, index: int) -> Graph:
    if cfg.seed_mode == "extremal":
        return build_extremal(validate_params(n, k), verify=False)
    if cfg.seed_mode == "provided":
        g = cfg.seed_graph
        if g.n != n or not g.is_regular(k):
            raise ValidationError(f"seed graph is not a {k}-regular graph on {n} vertices")
        return g
    return random_regular(n, k, derive_seed(cfg.seed, 2 * index))


def anneal_minimize(n: int, k: int, cfg: SearchConfig | None = None,
                    witness_path=None) -> SearchReport:
    """Simulated annealing over restarts; best triangle count found (exact=False).

    Each restart starts from its own seed graph and walks the 2-switch chain
    with Metropolis acceptance exp(-dT/temp); the triangle change is computed
    incrementally from the four touched rows.
    """
    cfg = cfg or SearchConfig()
    cfg.validate()
    _check_degree_pair(n, k)
    t0 = float(cfg.t0 if cfg.t0 is not None else max(k, 1))
    tasks = []
    for i in range(cfg.restarts):
        g0 = _start_graph(n, k, cfg, i)
        tasks.append((n, k, i, g0.rows, cfg.steps_per_restart, t0, cfg.decay,
                      cfg.t_floor, derive_seed(cfg.seed, 2 * i + 1), cfg.check_every))
    workers = min(worker_count(cfg.workers), len(tasks))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_anneal_restart, tasks))
    else:
        results = [_anneal_restart(t) for t in tasks]
    results.sort(key=lambda r: (r[1], r[0]))
    best_index, best, best_rows, _, _, _ = results[0]
    best_graph = Graph(n, best_rows, _trusted=True)
    formula = _formula_or_none(n, k)
    per_restart = [r[1] for r in sorted(results)]
    report = SearchReport(
        n=n, k=k, best_count=best, formula_value=formula,
        gap=None if formula is None else best - formula,
        best_graph=emit_graph6(best_graph),
        evaluations=sum(r[3] for r in results),
        seed=cfg.seed, mode=f"anneal/{cfg.seed_mode}", exact=False,
        details={
            "restarts": cfg.restarts,
            "steps_per_restart": cfg.steps_per_restart,
            "best_restart": best_index,
            "restart_best": per_restart,
            "accepted": sum(r[4] for r in results),
            "checks": sum(r[5] for r in results),
            "t0": t0, "decay": cfg.decay, "t_floor": cfg.t_floor,
        },
    )
    _finish(report, best_graph, witness_path)
    if count_triangles(best_graph).total != best or not best_graph.is_regular(k):
        raise AssertionError("annealer returned an inconsistent best graph")
    return report


# ------------------------------------------------------- exhaustive search

def _first_rows(n: int, k: int) -> list[int]:
    return [sum(1 << j for j in c) for c in combinations(range(1, n), k)]


def _search_task(args):
    n, k, mode, incumbent, fixed, collect_limit = args
    res = kernels.regular_search(n, k, mode, incumbent, fixed, (), 0, collect_limit, None)
    res["fixed"] = fixed
    return res


def _merge(results):
    best = -1
    best_rows = None
    minimizers = []
    mcount = 0
    for res in results:
        if res["best"] < 0:
            continue
        if best < 0 or res["best"] < best:
            best, best_rows = res["best"], res["best_rows"]
            minimizers = list(res["minimizers"])
            mcount = res["minimizer_count"]
        elif res["best"] == best:
            minimizers.extend(res["minimizers"])
            mcount += res["minimizer_count"]
    return best, best_rows, minimizers, mcount


def exhaustive_minimum(n: int, k: int, budget: int | None = None, *, workers: int | None = 1,
                       checkpoint: dict | None = None, collect: bool = False,
                       collect_limit: int = 1_000_000, witness_path=None) -> SearchReport:
    """Exact t(n, k) by branch-and-bound over labeled k-regular graphs.

    Rows of the adjacency matrix are filled in order, neighbour sets in
    lexicographic order; a branch is cut when a vertex can no longer reach
    degree k or when its partial triangle count reaches the incumbent. With
    ``collect`` ties are kept, so every minimizer is visited.

    ``budget`` caps search nodes; when it runs out the report is inexact and
    ``details["checkpoint"]`` resumes the run. Budgeted or resumed runs are
    sequential; otherwise the first row is split across ``workers``.
    """
    _check_degree_pair(n, k)
    if n > 64:
        raise ValidationError("exhaustive search is limited to n <= 64")
    mode = _pykernels.MODE_COLLECT if collect else _pykernels.MODE_MINIMIZE
    limit = collect_limit if collect else 0
    incumbent = -1
    prior_nodes = 0
    resume = ()
    prev_best_rows = None
    if checkpoint:
        if (checkpoint["n"], checkpoint["k"]) != (n, k):
            raise ValidationError("checkpoint belongs to a different (n, k)")
        incumbent = checkpoint["incumbent"]
        resume = tuple(checkpoint["fixed_rows_prefix"])
        prior_nodes = checkpoint.get("count_so_far", 0)
        if checkpoint.get("incumbent_graph6"):
            prev_best_rows = parse_graph6(checkpoint["incumbent_graph6"]).rows
        if collect and incumbent >= 0:
            raise ValidationError("collect mode cannot resume a checkpoint")
    nworkers = worker_count(workers)
    if budget or resume or nworkers == 1:
        res = kernels.regular_search(n, k, mode, incumbent, (), resume, budget or 0, limit, None)
        best, best_rows = res["best"], res["best_rows"]
        minimizers, mcount = res["minimizers"], res["minimizer_count"]
        nodes, finished, cp = res["nodes"], res["finished"], res["checkpoint"]
    else:
        tasks = [(n, k, mode, incumbent, (row,), limit) for row in _first_rows(n, k)]
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            results = list(pool.map(_search_task, tasks))
        best, best_rows, minimizers, mcount = _merge(results)
        nodes = sum(r["nodes"] for r in results)
        finished, cp = True, None
    if best < 0:
        # nothing beat the incumbent carried in from the checkpoint (or no graph exists)
        best = incumbent
        best_rows = prev_best_rows
    total_nodes = prior_nodes + nodes
    details = {"nodes": total_nodes, "finished": finished}
    if collect:
        details["minimizer_count"] = mcount
        details["minimizers_kept"] = len(minimizers)
    witness = Graph(n, best_rows, _trusted=True) if best_rows is not None else None
    if not finished:
        details["checkpoint"] = {
            "n": n, "k": k, "fixed_rows_prefix": list(cp), "incumbent": best,
            "incumbent_graph6": emit_graph6(witness) if witness is not None else None,
            "count_so_far": total_nodes,
        }
    formula = _formula_or_none(n, k)
    report = SearchReport(
        n=n, k=k, best_count=best, formula_value=formula,
        gap=None if (formula is None or best < 0) else best - formula,
        best_graph=emit_graph6(witness) if witness is not None else "",
        evaluations=total_nodes, seed=None, mode="exhaustive", exact=finished and best >= 0,
        details=details,
        minimizers=[Graph(n, r, _trusted=True) for r in minimizers],
    )
    if witness is not None:
        _finish(report, witness, witness_path)
    return report


def enumerate_regular(n: int, k: int, visitor=None) -> int:
    """Stream every labeled k-regular graph on n vertices to ``visitor``; return the count."""
    _check_degree_pair(n, k)
    cb = None
    if visitor is not None:
        def cb(rows):
            visitor(Graph(n, rows, _trusted=True))
    res = kernels.regular_search(n, k, _pykernels.MODE_ENUMERATE, -1, (), (), 0, 0, cb)
    return int(res["leaves"])


# -------------------------------------------------- conjecture checkpoints

def apex_conditions(g: Graph, k: int) -> dict:
    """Necessary conditions for membership in G(n, k).

    An apex is a vertex lying on every triangle whose removal leaves a
    bipartite graph.
    """
    census = count_triangles(g)
    apexes = [v for v in range(g.n)
              if census.per_vertex[v] == census.total
              and is_bipartite(remove_vertices(g, [v])).bipartite]
    return {
        "regular": g.is_regular(k),
        "apex_vertices": apexes,
        "unique_apex": len(apexes) == 1,
        "all_triangles_through_apex": bool(apexes),
    }


EXHAUSTIVE_LIMIT = {2: 14, 3: 12}


def exhaustive_feasible(n: int, k: int) -> bool:
    return n <= EXHAUSTIVE_LIMIT.get(k, 10)


def verify_conjecture_point(n: int, k: int, mode: str = "auto", *, cfg: SearchConfig | None = None,
                            workers: int | None = 1, witness_path=None) -> dict:
    """Compare the best available oracle against k(3k-n-1)/4 at one (n, k)."""
    _check_degree_pair(n, k)
    try:
        params = validate_params(n, k)
        in_range, reason = True, None
    except ParamsError as exc:
        params, in_range, reason = None, False, exc.code
    if mode == "auto":
        mode = "exhaustive" if exhaustive_feasible(n, k) else "anneal"
    out = {"n": n, "k": k, "in_range": in_range, "mode": mode,
           "formula": formula_t(params) if in_range else None}
    if mode == "exhaustive":
        rep = exhaustive_minimum(n, k, workers=workers, collect=True, witness_path=witness_path)
        checks = [apex_conditions(g, k) for g in rep.minimizers]
        out["minimizers_checked"] = len(checks)
        out["minimizer_count"] = rep.details["minimizer_count"]
        out["all_regular"] = all(c["regular"] for c in checks)
        out["all_unique_apex"] = all(c["unique_apex"] for c in checks)
        out["all_triangles_through_apex"] = all(c["all_triangles_through_apex"] for c in checks)
    elif mode == "anneal":
        rep = anneal_minimize(n, k, cfg, witness_path=witness_path)
    else:
        raise ValidationError(f"unknown mode {mode!r}")
    out.update(minimum=rep.best_count, exact=rep.exact, gap=rep.gap,
               counterexample=rep.counterexample, best_graph=rep.best_graph)
    if in_range:
        out["matches_formula"] = rep.best_count == out["formula"]
    else:
        out["note"] = f"out of theorem range ({reason}), t = {rep.best_count}"
    return out
