"""Batch command-line front end.

Subcommands: measure, attack, defend, netshield, sis, sir, cascade, sweep,
approx-error, scalability.  Inputs are edge-list files or generator specs
(``gen:csf:n=300,m=2,p=0.3,seed=7`` / ``gen:grid:rows=15,cols=20,...``).
Every output file gets a JSON manifest alongside it; seeds are mandatory for
stochastic commands and re-runs with the same config are byte-identical.

Exit codes: 0 success, 1 runtime failure, 2 usage error (nothing written).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import multiprocessing
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .attacks import SELECTOR_ALIASES, AttackStrategy, run_attack, select_targets
from .defenses import (HEURISTIC_KINDS, DefenseStrategy, netshield_select, run_defense)
from .errors import EdgeListParseError, ParameterError, RobustnetError
from .graph import (GeneratorParams, Graph, generate_clustered_scale_free,
                    generate_grid, load_edge_list)
from .measures import (APPROX_MEASURE_IDS, MEASURE_DIRECTIONS, SEEDED_MEASURE_IDS,
                       evaluate)
from .report import render_figure, rows_to_stdout, write_csv, write_json
from .simulate import (CascadeConfig, SirConfig, SisConfig, beta_for_strength,
                       run_cascade, run_sir, run_sis, sweep_cascade, sweep_sis)

APPROX_TO_EXACT = {
    "approx_avg_vertex_betweenness": "avg_vertex_betweenness",
    "approx_avg_edge_betweenness": "avg_edge_betweenness",
    "approx_natural_connectivity": "natural_connectivity",
    "approx_spanning_trees": "spanning_trees",
    "approx_effective_resistance": "effective_resistance",
}


class UsageError(RobustnetError):
    """Bad flags, files, or parameters; reported before any computation."""


# -- input handling ----------------------------------------------------------


def _parse_genspec(spec: str, fallback_seed: int | None) -> Graph:
    parts = spec.split(":")
    if len(parts) != 3 or parts[0] != "gen":
        raise UsageError(f"bad generator spec {spec!r}; expected gen:<family>:k=v,...")
    family, argstr = parts[1], parts[2]
    kv: dict[str, str] = {}
    for item in argstr.split(","):
        if "=" not in item:
            raise UsageError(f"bad generator parameter {item!r} in {spec!r}")
        key, val = item.split("=", 1)
        kv[key] = val
    try:
        if family == "csf":
            seed = int(kv["seed"]) if "seed" in kv else fallback_seed
            if seed is None:
                raise UsageError("generator spec needs a seed (seed=... or --seed)")
            params = GeneratorParams(n=int(kv["n"]), m_attach=int(kv.get("m", 2)),
                                     p_triangle=float(kv.get("p", 0.3)), seed=seed)
            return generate_clustered_scale_free(params)
        if family == "grid":
            seed = int(kv["seed"]) if "seed" in kv else (fallback_seed or 0)
            return generate_grid(int(kv["rows"]), int(kv["cols"]),
                                 n_shortcuts=int(kv.get("shortcuts", 0)), seed=seed)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad generator spec {spec!r}: {exc}") from None
    raise UsageError(f"unknown generator family {family!r}")


def _load_input(args) -> Graph:
    src = args.input
    if src.startswith("gen:"):
        return _parse_genspec(src, getattr(args, "seed", None))
    path = Path(src)
    if not path.exists():
        raise UsageError(f"input file not found: {path}")
    try:
        return load_edge_list(path.read_text())
    except EdgeListParseError as exc:
        raise UsageError(f"cannot parse {path}: {exc}") from None


def _resolve_out(out: str | None) -> Path | None:
    if out is None:
        return None
    path = Path(out)
    base = os.environ.get("ROBUSTNET_OUT_DIR")
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _parse_int_list(text: str, flag: str) -> list[int]:
    """Comma list ("1,2,3") or inclusive-exclusive range ("0:20")."""
    try:
        if ":" in text:
            lo, hi = text.split(":")
            return list(range(int(lo), int(hi)))
        return [int(t) for t in text.split(",") if t]
    except ValueError:
        raise UsageError(f"bad integer list for {flag}: {text!r}") from None


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t]
    except ValueError:
        raise UsageError(f"bad float list for {flag}: {text!r}") from None


def _parse_attack_spec(spec: str, g: Graph, seed: int) -> list[int]:
    """``<selector>:<count>`` node picks, e.g. id:4."""
    try:
        sel, count_s = spec.split(":")
        count = int(count_s)
    except ValueError:
        raise UsageError(f"bad attack spec {spec!r}; expected selector:count") from None
    selector = SELECTOR_ALIASES.get(sel, sel)
    try:
        return select_targets(g, AttackStrategy("node", selector, seed=seed), count)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None


def _load_monitor_file(path_str: str) -> frozenset[int]:
    path = Path(path_str)
    if not path.exists():
        raise UsageError(f"monitor file not found: {path}")
    try:
        data = json.loads(path.read_text())
        nodes = data["nodes"] if isinstance(data, dict) else data
        return frozenset(int(v) for v in nodes)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read node set from {path}: {exc}") from None


# -- output handling ------------------------------------------------------------


@dataclass
class RunContext:
    command: str
    config: dict
    graph: Graph | None
    started: float

    def manifest(self) -> dict:
        info = {
            "toolkit_version": __version__,
            "command": self.command,
            "config": self.config,
            "duration_seconds": round(time.time() - self.started, 6),
        }
        if self.graph is not None:
            text = self.graph.to_edge_list_text()
            info["graph"] = {
                "n": self.graph.n,
                "m": self.graph.m,
                "sha256": hashlib.sha256(text.encode()).hexdigest(),
            }
        return info


def _emit(args, ctx: RunContext, header: list[str], rows: list[dict],
          figure_kind: str | None = None) -> None:
    out = _resolve_out(args.out)
    if out is None:
        print(rows_to_stdout(header, rows))
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    if getattr(args, "format", "csv") == "json":
        write_json(out, header, rows)
    else:
        write_csv(out, header, rows)
    Path(f"{out}.manifest.json").write_text(json.dumps(ctx.manifest(), indent=2, sort_keys=True) + "\n")
    if ctx.graph is not None and ctx.graph.original_labels is not None:
        labels = ctx.graph.original_labels
        if list(labels) != list(range(len(labels))):
            mapping = {str(orig): dense for dense, orig in enumerate(labels)}
            Path(f"{out}.idmap.json").write_text(json.dumps(mapping, indent=2) + "\n")
    if figure_kind and getattr(args, "plot", False) and rows:
        render_figure(figure_kind, rows, out.with_suffix(".png"), title=ctx.command)


# -- command handlers -------------------------------------------------------------


def _require_seed_for_measure(args) -> None:
    if args.id in SEEDED_MEASURE_IDS and args.seed is None:
        raise UsageError(f"measure {args.id!r} is stochastic; --seed is mandatory")
    if args.input.startswith("gen:") and "seed=" not in args.input and args.seed is None:
        raise UsageError("generated inputs are stochastic; pass seed=... or --seed")


def _cmd_measure(args) -> int:
    if args.id != "all" and args.id not in MEASURE_DIRECTIONS:
        raise UsageError(f"unknown measure id {args.id!r}")
    _require_seed_for_measure(args)
    g = _load_input(args)
    ctx = RunContext("measure", {"input": args.input, "id": args.id, "k": args.k,
                                 "seed": args.seed, "format": args.format}, g, time.time())
    ids = list(MEASURE_DIRECTIONS) if args.id == "all" else [args.id]
    rows = []
    for mid in ids:
        if args.id == "all" and mid in SEEDED_MEASURE_IDS and args.seed is None:
            continue  # sampled measures are skipped from "all" unless seeded
        res = evaluate(g, mid, k=args.k, seed=args.seed, on_error="flag")
        rows.append({"measure_id": mid, "value": res.value, "exact": res.exact,
                     "higher_is_more_robust": res.higher_is_more_robust,
                     "k_used": res.k_used, "flagged": res.flagged})
    header = ["measure_id", "value", "exact", "higher_is_more_robust", "k_used", "flagged"]
    if args.out is None and args.id != "all":
        print(format(rows[0]["value"]))
        return 0
    _emit(args, ctx, header, rows)
    return 0


def _trace_rows(trace) -> list[dict]:
    rows = []
    for step, res in enumerate(trace.curve):
        action = "" if step == 0 else trace.actions[step - 1]
        if isinstance(action, tuple):
            action = f"{action[0]}-{action[1]}"
        rows.append({"step": step, "removed_id": action, "measure_value": res.value,
                     "flagged": res.flagged})
    return rows


def _cmd_attack(args) -> int:
    selector = SELECTOR_ALIASES.get(args.strategy, args.strategy)
    strategy = AttackStrategy(args.kind, selector, seed=args.seed)
    try:
        strategy.validate()
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    g = _load_input(args)
    ctx = RunContext("attack", {"input": args.input, "strategy": selector, "kind": args.kind,
                                "count": args.count, "measure": args.measure, "k": args.k,
                                "seed": args.seed, "format": args.format}, g, time.time())
    try:
        trace = run_attack(g, strategy, args.count, args.measure, k=args.k)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    _emit(args, ctx, ["step", "removed_id", "measure_value", "flagged"],
          _trace_rows(trace), figure_kind="curve")
    return 0


def _cmd_defend(args) -> int:
    if args.strategy not in HEURISTIC_KINDS:
        raise UsageError(f"defend expects one of {HEURISTIC_KINDS}; "
                         "netshield has its own subcommand")
    g = _load_input(args)
    strategy = DefenseStrategy(args.strategy, args.budget, seed=args.seed)
    ctx = RunContext("defend", {"input": args.input, "strategy": args.strategy,
                                "budget": args.budget, "measure": args.measure,
                                "seed": args.seed, "format": args.format}, g, time.time())
    trace = run_defense(g, strategy, args.measure, k=args.k)
    rows = []
    for step, res in enumerate(trace.curve):
        rows.append({"step": step, "action": "" if step == 0 else trace.actions[step - 1],
                     "measure_value": res.value, "flagged": res.flagged})
    _emit(args, ctx, ["step", "action", "measure_value", "flagged"], rows, figure_kind="curve")
    return 0


def _cmd_netshield(args) -> int:
    g = _load_input(args)
    if not 1 <= args.k <= g.n:
        raise UsageError(f"--k must lie in [1, {g.n}], got {args.k}")
    ctx = RunContext("netshield", {"input": args.input, "k": args.k}, g, time.time())
    result = netshield_select(g, args.k)
    payload = {"nodes": list(result.nodes), "shield_value": result.shield_value,
               "eigendrop": result.eigendrop}
    out = _resolve_out(args.out)
    if out is None:
        print(json.dumps(payload, indent=2))
        return 0
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(payload, indent=2) + "\n")
    Path(f"{out}.manifest.json").write_text(json.dumps(ctx.manifest(), indent=2, sort_keys=True) + "\n")
    return 0


def _epidemic_config(args, g: Graph, sir: bool):
    if (args.beta is None) == (args.s is None):
        raise UsageError("pass exactly one of --beta or --s")
    beta = args.beta
    if beta is None:
        try:
            beta = 0.0 if args.s == 0 else beta_for_strength(g, args.s, args.delta)
        except (ParameterError, RobustnetError) as exc:
            raise UsageError(str(exc)) from None
    monitored = _load_monitor_file(args.monitor) if args.monitor else frozenset()
    if (args.init_frac is None) == (args.init_nodes is None):
        raise UsageError("pass exactly one of --init-frac or --init-nodes")
    init = args.init_frac if args.init_frac is not None else \
        frozenset(_parse_int_list(args.init_nodes, "--init-nodes"))
    cls = SirConfig if sir else SisConfig
    cfg = cls(beta=beta, delta=args.delta, steps=args.steps, initially_infected=init,
              monitored=monitored, seed=args.seed)
    try:
        cfg.validate()
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    return cfg


def _cmd_epidemic(args, sir: bool) -> int:
    g = _load_input(args)
    cfg = _epidemic_config(args, g, sir)
    name = "sir" if sir else "sis"
    ctx = RunContext(name, {"input": args.input, "beta": cfg.beta, "delta": cfg.delta,
                            "steps": cfg.steps, "s": args.s,
                            "init": repr(sorted(cfg.initially_infected))
                            if not isinstance(cfg.initially_infected, float)
                            else cfg.initially_infected,
                            "monitored": sorted(cfg.monitored), "seed": args.seed,
                            "format": args.format}, g, time.time())
    trace = run_sir(g, cfg) if sir else run_sis(g, cfg)
    rows = []
    for step in range(len(trace.infected)):
        row = {"step": step, "susceptible": trace.susceptible[step],
               "infected": trace.infected[step]}
        if sir:
            row["recovered"] = trace.recovered[step]
        row["infected_fraction"] = trace.infected_fraction()[step]
        rows.append(row)
    header = ["step", "susceptible", "infected"] + (["recovered"] if sir else []) \
        + ["infected_fraction"]
    ctx.config["effective_strength"] = trace.strength
    _emit(args, ctx, header, rows, figure_kind="epidemic")
    return 0


def _cmd_cascade(args) -> int:
    g = _load_input(args)
    attacked = frozenset(_parse_attack_spec(args.attack, g, args.seed))
    defended = _load_monitor_file(args.defend) if args.defend else frozenset()
    cfg = CascadeConfig(l_max=args.lmax, r=args.r, attacked=attacked, defended=defended,
                        capacity_boost=args.boost, seed=args.seed, max_steps=args.max_steps)
    try:
        cfg.validate()
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    ctx = RunContext("cascade", {"input": args.input, "lmax": args.lmax, "r": args.r,
                                 "attack": args.attack, "attacked": sorted(attacked),
                                 "defended": sorted(defended), "boost": args.boost,
                                 "seed": args.seed, "format": args.format}, g, time.time())
    states = run_cascade(g, cfg)
    rows = [{"step": st.step, "failed_count": len(st.failed),
             "failed_fraction": len(st.failed) / g.n,
             "total_live_load": st.total_live_load} for st in states]
    _emit(args, ctx, ["step", "failed_count", "failed_fraction", "total_live_load"],
          rows, figure_kind="cascade")
    return 0


def _cmd_sweep(args) -> int:
    g = _load_input(args)
    seeds = _parse_int_list(args.seeds, "--seeds")
    if not seeds:
        raise UsageError("sweep needs a non-empty --seeds list")
    if args.model in ("sis", "sir"):
        if args.s_grid is None:
            raise UsageError("sweep --model sis/sir needs --s-grid")
        grid = _parse_float_list(args.s_grid, "--s-grid")
        if not grid:
            raise UsageError("--s-grid must not be empty")
        monitored = _load_monitor_file(args.monitor) if args.monitor else frozenset()
        if args.init_frac is None:
            raise UsageError("sweep --model sis/sir needs --init-frac")
        ctx = RunContext("sweep", {"input": args.input, "model": args.model,
                                   "s_grid": grid, "delta": args.delta, "steps": args.steps,
                                   "init_frac": args.init_frac, "seeds": seeds,
                                   "monitored": sorted(monitored), "format": args.format},
                         g, time.time())
        try:
            rows = sweep_sis(g, grid, args.delta, args.steps, args.init_frac, seeds,
                             monitored=monitored, sir=args.model == "sir", jobs=args.jobs)
        except ParameterError as exc:
            raise UsageError(str(exc)) from None
        header = ["model", "s", "beta", "delta", "seed", "final_infected_fraction",
                  "mean_tail_infected_fraction", "extinct", "steps_run"]
    elif args.model == "cascade":
        if args.r_grid is None:
            raise UsageError("sweep --model cascade needs --r-grid")
        grid = _parse_float_list(args.r_grid, "--r-grid")
        if not grid:
            raise UsageError("--r-grid must not be empty")
        if args.attack is None:
            raise UsageError("sweep --model cascade needs --attack selector:count")
        attacked = frozenset(_parse_attack_spec(args.attack, g, seeds[0]))
        defended = _load_monitor_file(args.defend) if args.defend else frozenset()
        ctx = RunContext("sweep", {"input": args.input, "model": "cascade",
                                   "r_grid": grid, "lmax": args.lmax, "attack": args.attack,
                                   "attacked": sorted(attacked), "defended": sorted(defended),
                                   "seeds": seeds, "format": args.format}, g, time.time())
        try:
            rows = sweep_cascade(g, grid, args.lmax, attacked, seeds, defended=defended,
                                 capacity_boost=args.boost, jobs=args.jobs)
        except ParameterError as exc:
            raise UsageError(str(exc)) from None
        header = ["model", "r", "l_max", "seed", "final_failed_fraction", "steps_run"]
    else:
        raise UsageError(f"unknown sweep model {args.model!r}")
    _emit(args, ctx, header, rows, figure_kind="sweep")
    return 0


# -- approximation error harness ------------------------------------------------------


def _approx_error_task(task) -> float:
    g, measure_id, k, seed = task
    return evaluate(g, measure_id, k=k, seed=seed).value


def approx_error_harness(g: Graph, measure_id: str, k_grid: list[int], runs: int,
                         seed: int, jobs: int = 1) -> list[dict]:
    """Mean |approximate - exact| per k, averaged over ``runs`` seeded repeats.

    Reproduces the error-vs-k protocol: the exact measure is computed once and
    each (k, run) cell re-evaluates the approximation with seed + run index.
    """
    if measure_id not in APPROX_TO_EXACT:
        raise UsageError(f"measure {measure_id!r} has no approximate variant to sweep")
    if runs < 1:
        raise UsageError(f"--runs must be >= 1, got {runs}")
    if not k_grid:
        raise UsageError("empty k grid")
    bad = [k for k in k_grid if not 1 <= k <= g.n]
    if bad:
        raise UsageError(f"k values outside [1, {g.n}]: {bad}")
    exact = evaluate(g, APPROX_TO_EXACT[measure_id]).value
    tasks = [(g, measure_id, k, seed + run) for k in k_grid for run in range(runs)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(_approx_error_task, tasks, chunksize=max(1, len(tasks) // jobs)))
    else:
        values = [_approx_error_task(t) for t in tasks]
    rows = []
    for i, k in enumerate(k_grid):
        vals = values[i * runs:(i + 1) * runs]
        abs_errs = [abs(v - exact) for v in vals]
        rows.append({"measure_id": measure_id, "k": k, "runs": runs,
                     "exact_value": exact,
                     "mean_abs_error": sum(abs_errs) / runs,
                     "mean_abs_rel_error": (sum(abs_errs) / runs / abs(exact))
                     if exact != 0 else float("nan")})
    return rows


def _default_k_grid(n: int) -> list[int]:
    ks = [5] + list(range(10, 301, 10))
    return [k for k in ks if k <= n]


def _cmd_approx_error(args) -> int:
    g = _load_input(args)
    k_grid = _parse_int_list(args.k_grid, "--k-grid") if args.k_grid else _default_k_grid(g.n)
    ctx = RunContext("approx-error", {"input": args.input, "measure": args.measure,
                                      "k_grid": k_grid, "runs": args.runs, "seed": args.seed,
                                      "jobs": args.jobs, "format": args.format}, g, time.time())
    rows = approx_error_harness(g, args.measure, k_grid, args.runs, args.seed, jobs=args.jobs)
    _emit(args, ctx, ["measure_id", "k", "runs", "exact_value", "mean_abs_error",
                      "mean_abs_rel_error"], rows, figure_kind="approx_error")
    return 0


# -- scalability harness ---------------------------------------------------------------


def _scalability_worker(conn, g: Graph, measure_id: str, k: int | None, seed: int) -> None:
    try:
        start = time.time()
        evaluate(g, measure_id, k=k, seed=seed)
        conn.send(time.time() - start)
    except Exception:
        conn.send(None)
    finally:
        conn.close()


def scalability_harness(measure_ids: list[str], sizes: list[int], budget_s: float,
                        seed: int) -> list[dict]:
    """Wall-clock per (measure, size) on generated clustered scale-free graphs.

    Each cell runs in a forked worker killed at the budget; cells that do not
    finish (timeout or infeasible at that size) carry the TIMEOUT marker.
    Betweenness approximations use k = 0.1 n, spectral ones k = 30.
    """
    if sizes != sorted(sizes):
        raise UsageError("--sizes must be ascending")
    if budget_s <= 0:
        raise UsageError("--budget must be positive")
    for mid in measure_ids:
        if mid not in MEASURE_DIRECTIONS:
            raise UsageError(f"unknown measure id {mid!r}")
    ctx = multiprocessing.get_context("fork")
    rows = []
    for n in sizes:
        g = generate_clustered_scale_free(GeneratorParams(n, 2, 0.3, seed))
        for mid in measure_ids:
            k = None
            if mid in SEEDED_MEASURE_IDS:
                k = max(1, round(0.1 * n))
            elif mid in APPROX_MEASURE_IDS:
                k = min(30, n)
            parent, child = ctx.Pipe()
            proc = ctx.Process(target=_scalability_worker, args=(child, g, mid, k, seed))
            proc.start()
            child.close()
            seconds: object = "TIMEOUT"
            if parent.poll(budget_s):
                got = parent.recv()
                if got is not None:
                    seconds = round(got, 6)
            proc.terminate()
            proc.join()
            parent.close()
            rows.append({"measure_id": mid, "n": n, "seconds": seconds})
    return rows


def _cmd_scalability(args) -> int:
    ids = list(MEASURE_DIRECTIONS) if args.measures == "all" else \
        [m for m in args.measures.split(",") if m]
    sizes = _parse_int_list(args.sizes, "--sizes")
    ctx = RunContext("scalability", {"measures": ids, "sizes": sizes,
                                     "budget": args.budget, "seed": args.seed,
                                     "format": args.format}, None, time.time())
    rows = scalability_harness(ids, sizes, args.budget, args.seed)
    _emit(args, ctx, ["measure_id", "n", "seconds"], rows, figure_kind="scalability")
    return 0


# -- parser ------------------------------------------------------------------------


def _add_io(p, seed_required: bool) -> None:
    p.add_argument("--in", dest="input", required=True,
                   help="edge-list file or generator spec gen:csf:n=...,m=...,p=...,seed=...")
    p.add_argument("--out", default=None, help="output file (stdout when omitted)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--plot", action="store_true",
                   help="render a PNG figure next to the output file")
    p.add_argument("--seed", type=int, required=seed_required, default=None,
                   help="RNG seed" + (" (mandatory: stochastic command)" if seed_required else ""))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="robustnet",
                                     description="Graph vulnerability and robustness toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="evaluate one robustness measure or all of them")
    _add_io(p, seed_required=False)
    p.add_argument("--id", required=True, help="measure id or 'all'")
    p.add_argument("--k", type=int, default=None, help="approximation parameter")

    p = sub.add_parser("attack", help="targeted removal campaign with a robustness curve")
    _add_io(p, seed_required=True)
    p.add_argument("--strategy", required=True,
                   help="rnd|id|rd|ib|rb or full selector name")
    p.add_argument("--kind", choices=("node", "edge"), default="node")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--measure", default="lcc")
    p.add_argument("--k", type=int, default=None)

    p = sub.add_parser("defend", help="heuristic edge defense with a recovery curve")
    _add_io(p, seed_required=True)
    p.add_argument("--strategy", required=True, help="|".join(HEURISTIC_KINDS))
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--measure", default="lcc")
    p.add_argument("--k", type=int, default=None)

    p = sub.add_parser("netshield", help="greedy Shield-value monitor set")
    _add_io(p, seed_required=False)
    p.add_argument("--k", type=int, required=True, help="monitored node count")

    for name in ("sis", "sir"):
        p = sub.add_parser(name, help=f"discrete-time {name.upper()} simulation")
        _add_io(p, seed_required=True)
        p.add_argument("--beta", type=float, default=None, help="per-step infection probability")
        p.add_argument("--s", type=float, default=None,
                       help="effective strength; beta is derived from it")
        p.add_argument("--delta", type=float, required=True, help="per-step recovery probability")
        p.add_argument("--steps", type=int, required=True)
        p.add_argument("--init-frac", type=float, default=None)
        p.add_argument("--init-nodes", default=None, help="comma list of node ids")
        p.add_argument("--monitor", default=None, help="JSON file with a 'nodes' list to remove")

    p = sub.add_parser("cascade", help="capacity/load cascading-failure simulation")
    _add_io(p, seed_required=True)
    p.add_argument("--lmax", type=float, required=True)
    p.add_argument("--r", type=float, required=True, help="network redundancy in [0, 1]")
    p.add_argument("--attack", required=True, help="selector:count, e.g. id:4")
    p.add_argument("--defend", default=None, help="JSON file with nodes to boost")
    p.add_argument("--boost", type=float, default=0.5)
    p.add_argument("--max-steps", type=int, default=None)

    p = sub.add_parser("sweep", help="summary table over a parameter grid")
    _add_io(p, seed_required=False)
    p.add_argument("--model", choices=("sis", "sir", "cascade"), required=True)
    p.add_argument("--seeds", required=True, help="comma list or lo:hi range")
    p.add_argument("--s-grid", default=None)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--steps", type=int, default=5000)
    p.add_argument("--init-frac", type=float, default=None)
    p.add_argument("--monitor", default=None)
    p.add_argument("--r-grid", default=None)
    p.add_argument("--lmax", type=float, default=0.8)
    p.add_argument("--attack", default=None)
    p.add_argument("--defend", default=None)
    p.add_argument("--boost", type=float, default=0.5)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("approx-error", help="error of an approximate measure across k")
    _add_io(p, seed_required=True)
    p.add_argument("--measure", required=True, help="approx_* measure id")
    p.add_argument("--k-grid", default=None, help="comma list (default 5,10,20..300 capped at n)")
    p.add_argument("--runs", type=int, default=30)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("scalability", help="wall-clock of measures across graph sizes")
    p.add_argument("--measures", default="all", help="comma list of measure ids or 'all'")
    p.add_argument("--sizes", default="100,1000,10000")
    p.add_argument("--budget", type=float, default=60.0, help="seconds per cell")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--plot", action="store_true")
    p.add_argument("--seed", type=int, required=True)

    return parser


_HANDLERS = {
    "measure": _cmd_measure,
    "attack": _cmd_attack,
    "defend": _cmd_defend,
    "netshield": _cmd_netshield,
    "sis": lambda a: _cmd_epidemic(a, sir=False),
    "sir": lambda a: _cmd_epidemic(a, sir=True),
    "cascade": _cmd_cascade,
    "sweep": _cmd_sweep,
    "approx-error": _cmd_approx_error,
    "scalability": _cmd_scalability,
}


def parse_and_dispatch(argv: list[str]) -> int:
    """Run one CLI invocation; returns the exit status (0/1/2)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RobustnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(parse_and_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
