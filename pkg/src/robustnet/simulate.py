"""Discrete-time spreading (SIS/SIR) and cascading-failure simulators.

Both simulators compose with the attack and defense modules: monitored nodes
from the Shield-value defense are removed before an epidemic run, and cascade
runs overload an attack-selected node set at t = 0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError
from .graph import Graph
from .measures import spectral_radius, vertex_betweenness_scores
from .spectral import adjacency_matrix

CAPACITY_FLOOR = 0.01


def effective_strength(g: Graph, beta: float, delta: float) -> float:
    """Virus strength s = lambda_1 * beta / delta; s > 1 is super-threshold."""
    if g.n < 1:
        raise ParameterError("graph is empty")
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    return spectral_radius(g) * beta / delta


def beta_for_strength(g: Graph, s: float, delta: float) -> float:
    """Infection probability realizing a target strength on this graph."""
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    lam1 = spectral_radius(g)
    if lam1 <= 0:
        raise DomainError("graph has no edges; strength is undefined")
    beta = s * delta / lam1
    if not 0.0 <= beta <= 1.0:
        raise ParameterError(f"strength {s} needs beta={beta:.4f} outside [0, 1]")
    return beta


@dataclass(frozen=True)
class SisConfig:
    """Flu-like model: infected nodes can heal back to susceptible.

    ``initially_infected`` is either an explicit node set or a fraction of the
    post-monitoring population.  Monitored nodes are removed before the run.
    """

    beta: float
    delta: float
    steps: int
    initially_infected: object  # set of ids | float fraction
    monitored: frozenset = frozenset()
    seed: int = 0

    def validate(self) -> None:
        if not 0.0 <= self.beta <= 1.0:
            raise ParameterError(f"beta must lie in [0, 1], got {self.beta}")
        if not 0.0 < self.delta <= 1.0:
            raise ParameterError(f"delta must lie in (0, 1], got {self.delta}")
        if self.steps < 0:
            raise ParameterError(f"steps must be >= 0, got {self.steps}")
        if isinstance(self.initially_infected, float):
            if not 0.0 < self.initially_infected <= 1.0:
                raise ParameterError("initial infection fraction must lie in (0, 1]")


@dataclass(frozen=True)
class SirConfig(SisConfig):
    """Vaccinated-like model: healed nodes become permanently immune."""


@dataclass
class SimulationTrace:
    """Per-step compartment counts; row 0 is the initial state.

    Runs stop early once infection dies out (no spontaneous reinfection), so
    the trace may be shorter than steps + 1; the remaining steps are implied
    all-susceptible/recovered with zero infected.
    """

    susceptible: list[int]
    infected: list[int]
    recovered: list[int]
    population: int
    strength: float  # lambda_1 * beta / delta on the unmonitored input graph
    config: SisConfig

    def infected_fraction(self) -> list[float]:
        if self.population == 0:
            return [0.0 for _ in self.infected]
        return [i / self.population for i in self.infected]

    @property
    def extinct(self) -> bool:
        return self.infected[-1] == 0


def _initial_infected(active: list[int], cfg: SisConfig, rng) -> set[int]:
    if isinstance(cfg.initially_infected, float):
        count = max(1, round(cfg.initially_infected * len(active)))
        return {int(v) for v in rng.choice(active, size=count, replace=False)}
    chosen = set(cfg.initially_infected) - set(cfg.monitored)
    if not chosen <= set(active):
        raise ParameterError("initially infected set contains unknown nodes")
    return chosen


def _run_epidemic(g: Graph, cfg: SisConfig, sir: bool) -> SimulationTrace:
    cfg.validate()
    strength = effective_strength(g, cfg.beta, cfg.delta) if g.m > 0 else 0.0
    work = g.remove_nodes(set(cfg.monitored) & set(g.nodes())) if cfg.monitored else g
    active = work.nodes()
    n = len(active)
    rng = np.random.default_rng(cfg.seed)
    seeds = _initial_infected(active, cfg, rng)
    if not seeds:
        raise ParameterError("no infected nodes remain after removing the monitored set")

    idx = {v: i for i, v in enumerate(active)}
    a = adjacency_matrix(work, sparse=True)
    infected = np.zeros(n, dtype=bool)
    infected[[idx[v] for v in sorted(seeds)]] = True
    recovered = np.zeros(n, dtype=bool)

    sus = [int(n - infected.sum())]
    inf = [int(infected.sum())]
    rec = [0]
    for _ in range(cfg.steps):
        # phase 1: each infected node tries to infect each susceptible
        # neighbor independently with probability beta; the per-node trial
        # aggregates to 1 - (1 - beta)^(infected neighbor count)
        counts = a @ infected.astype(float)
        p = 1.0 - (1.0 - cfg.beta) ** counts
        susceptible = ~infected & ~recovered
        new_inf = susceptible & (rng.random(n) < p)
        # phase 2: nodes infected before this step heal; fresh infections do not
        healed = infected & (rng.random(n) < cfg.delta)
        if sir:
            recovered |= healed
        infected = (infected & ~healed) | new_inf
        sus.append(int(n - infected.sum() - recovered.sum()))
        inf.append(int(infected.sum()))
        rec.append(int(recovered.sum()))
        if inf[-1] == 0:
            break
    return SimulationTrace(sus, inf, rec, n, strength, cfg)


def run_sis(g: Graph, cfg: SisConfig) -> SimulationTrace:
    """Synchronous SIS: infect-then-heal each step, seeded and reproducible."""
    return _run_epidemic(g, cfg, sir=False)


def run_sir(g: Graph, cfg: SirConfig) -> SimulationTrace:
    """SIS variant with absorbing recovery; always reaches infected = 0."""
    return _run_epidemic(g, cfg, sir=True)


def tail_mean_infected_fraction(trace: SimulationTrace, window: int) -> float:
    """Mean infected fraction over the last ``window`` steps of the configured
    horizon, counting steps after an early die-out as zero."""
    total_rows = trace.config.steps + 1
    fracs = trace.infected_fraction() + [0.0] * (total_rows - len(trace.infected))
    window = min(window, len(fracs))
    return float(np.mean(fracs[-window:]))


# -- cascading failures -------------------------------------------------------


@dataclass(frozen=True)
class CascadeConfig:
    """Capacity/load/redundancy cascade.

    Node capacity comes from normalized betweenness (floored at
    ``CAPACITY_FLOOR`` so leaves can carry load), initial load is the fraction
    U(0, l_max) of capacity, and redundancy r adds (1 + r) headroom.  Defended
    nodes get a (1 + capacity_boost) capacity multiplier.
    """

    l_max: float
    r: float
    attacked: frozenset
    defended: frozenset = frozenset()
    capacity_boost: float = 0.5
    seed: int = 0
    max_steps: int | None = None

    def validate(self) -> None:
        if not 0.0 < self.l_max <= 1.0:
            raise ParameterError(f"l_max must lie in (0, 1], got {self.l_max}")
        if not 0.0 <= self.r <= 1.0:
            raise ParameterError(f"redundancy r must lie in [0, 1], got {self.r}")
        if self.capacity_boost < 0:
            raise ParameterError(f"capacity_boost must be >= 0, got {self.capacity_boost}")


@dataclass
class CascadeState:
    """Snapshot after one redistribution round; load is indexed by the sorted
    node order of the input graph and failed nodes hold no load."""

    step: int
    capacity: np.ndarray
    load: np.ndarray
    failed: frozenset
    total_live_load: float


def run_cascade(g: Graph, cfg: CascadeConfig) -> list[CascadeState]:
    """Overload the attacked set at t = 0, then iterate: every newly failed
    node sheds its load equally onto live neighbors (dropped if none), and any
    live node pushed past its effective capacity fails next round.  Runs to a
    fixpoint or ``max_steps``."""
    cfg.validate()
    nodes = g.nodes()
    n = g.n
    idx = {v: i for i, v in enumerate(nodes)}
    unknown = (set(cfg.attacked) | set(cfg.defended)) - set(nodes)
    if unknown:
        raise ParameterError(f"unknown node(s) in attack/defense sets: {sorted(unknown)}")
    rng = np.random.default_rng(cfg.seed)

    bt = vertex_betweenness_scores(g).values
    b = np.array([bt[v] for v in nodes])
    spread = float(b.max() - b.min())
    if spread <= 0:
        capacity = np.ones(n)
    else:
        capacity = CAPACITY_FLOOR + (1.0 - CAPACITY_FLOOR) * (b - b.min()) / spread
    load = rng.uniform(0.0, cfg.l_max, size=n) * capacity
    boosted = capacity.copy()
    for v in cfg.defended:
        boosted[idx[v]] *= 1.0 + cfg.capacity_boost
    effective = boosted * (1.0 + cfg.r)

    failed: set[int] = set(cfg.attacked)
    alive = np.ones(n, dtype=bool)
    for v in failed:
        alive[idx[v]] = False
    states = [CascadeState(0, capacity, load.copy(), frozenset(failed),
                           float(load[alive].sum()))]
    newly = sorted(failed)
    max_steps = cfg.max_steps if cfg.max_steps is not None else n + 1
    step = 0
    while newly and step < max_steps:
        step += 1
        for v in newly:
            i = idx[v]
            live_nbrs = [idx[w] for w in g.neighbors(v) if alive[idx[w]]]
            if live_nbrs:
                load[live_nbrs] += load[i] / len(live_nbrs)
            load[i] = 0.0  # shed (or dropped when no live neighbor remains)
        over = alive & (load > effective)
        newly = sorted(nodes[i] for i in np.nonzero(over)[0])
        for v in newly:
            alive[idx[v]] = False
            failed.add(v)
        states.append(CascadeState(step, capacity, load.copy(), frozenset(failed),
                                   float(load[alive].sum())))
    return states


def final_failure_fraction(states: list[CascadeState], n: int) -> float:
    return len(states[-1].failed) / n if n else 0.0


# -- parameter sweeps ----------------------------------------------------------
#
# One summary row per configuration per seed.  Rows are independent pure
# function calls, so the ensembles parallelize across a worker pool with
# output order fixed by the task list.


def _sis_row(task) -> dict:
    g, s, beta, delta, steps, initially_infected, monitored, sir, seed, window = task
    cfg_cls = SirConfig if sir else SisConfig
    cfg = cfg_cls(beta=beta, delta=delta, steps=steps,
                  initially_infected=initially_infected, monitored=monitored, seed=seed)
    trace = run_sir(g, cfg) if sir else run_sis(g, cfg)
    fr = trace.infected_fraction()
    return {
        "model": "sir" if sir else "sis",
        "s": s, "beta": beta, "delta": delta, "seed": seed,
        "final_infected_fraction": fr[-1],
        "mean_tail_infected_fraction": tail_mean_infected_fraction(trace, window),
        "extinct": trace.extinct,
        "steps_run": len(fr) - 1,
    }


def _cascade_row(task) -> dict:
    g, r, l_max, attacked, defended, capacity_boost, seed = task
    cfg = CascadeConfig(l_max=l_max, r=r, attacked=attacked, defended=defended,
                        capacity_boost=capacity_boost, seed=seed)
    states = run_cascade(g, cfg)
    return {
        "model": "cascade",
        "r": r, "l_max": l_max, "seed": seed,
        "final_failed_fraction": final_failure_fraction(states, g.n),
        "steps_run": states[-1].step,
    }


def _run_tasks(worker, tasks, jobs: int) -> list[dict]:
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(worker, tasks))
    return [worker(t) for t in tasks]


def sweep_sis(g: Graph, strengths, delta: float, steps: int, initially_infected,
              seeds, monitored=frozenset(), sir: bool = False, jobs: int = 1) -> list[dict]:
    """One summary row per (strength, seed): final and tail-mean infected fraction."""
    strengths = list(strengths)
    seeds = list(seeds)
    if not strengths or not seeds:
        raise ParameterError("sweep grid must not be empty")
    window = max(1, steps // 10)
    tasks = []
    for s in strengths:
        beta = 0.0 if s == 0 else beta_for_strength(g, s, delta)
        tasks += [(g, s, beta, delta, steps, initially_infected, frozenset(monitored),
                   sir, seed, window) for seed in seeds]
    return _run_tasks(_sis_row, tasks, jobs)


def sweep_cascade(g: Graph, r_values, l_max: float, attacked, seeds,
                  defended=frozenset(), capacity_boost: float = 0.5,
                  jobs: int = 1) -> list[dict]:
    """One summary row per (redundancy, seed): final failure fraction."""
    r_values = list(r_values)
    seeds = list(seeds)
    if not r_values or not seeds:
        raise ParameterError("sweep grid must not be empty")
    tasks = [(g, r, l_max, frozenset(attacked), frozenset(defended), capacity_boost, seed)
             for r in r_values for seed in seeds]
    return _run_tasks(_cascade_row, tasks, jobs)
