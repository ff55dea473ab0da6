"""Seeded multi-trial experiment families with CSV-shaped results.

Five families: structural before/after comparison, capacity validation
against the identity prediction, load sweeps across routing policies,
targeted-attack delivery-rate curves, and an alpha/beta sensitivity grid.
Every family is reproducible bit-for-bit from (spec, seed base).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from .controller import SraConfig, run_relaxation
from .policies import make_policy
from .routing import betweenness, mean_route_hops
from .stability import capacity_metrics
from .topology import Graph, TopologySpec, generate
from .traffic import TrafficConfig, TrafficMetrics, UnboundedCapacityError, critical_load, simulate

log = logging.getLogger(__name__)

DEFAULT_ATTACK_LOAD = 0.8


@dataclass
class StructuralRow:
    metric: str
    initial_mean: float
    initial_std: float
    final_mean: float
    final_std: float

    @property
    def percent_change(self) -> float:
        return (self.final_mean - self.initial_mean) / self.initial_mean * 100.0

    def csv_row(self) -> str:
        return (f"{self.metric},{self.initial_mean!r},{self.initial_std!r},"
                f"{self.final_mean!r},{self.final_std!r},{self.percent_change!r}")


STRUCTURAL_HEADER = "metric,initial_mean,initial_std,final_mean,final_std,percent_change"


def structural_experiment(spec: TopologySpec, trials: int = 20, seed_base: int = 0,
                          sra_cfg: SraConfig = SraConfig()) -> list[StructuralRow]:
    """Before/after structural metrics (peak centrality, centrality spread,
    mean route hops), averaged over seeded trials."""
    init = {"peak_centrality": [], "std_centrality": [], "avg_path_length": []}
    final = {"peak_centrality": [], "std_centrality": [], "avg_path_length": []}
    for i in range(trials):
        g = generate(replace(spec, seed=seed_base + i))
        uniform = np.ones(g.n)
        before = betweenness(g, uniform)
        init["peak_centrality"].append(before.kappa.max())
        init["std_centrality"].append(before.kappa.std())
        init["avg_path_length"].append(mean_route_hops(g, uniform))
        trace = run_relaxation(g, sra_cfg)
        after = trace.final
        final["peak_centrality"].append(after.kappa.max())
        final["std_centrality"].append(after.kappa.std())
        final["avg_path_length"].append(mean_route_hops(g, after.c))
    return [
        StructuralRow(m, float(np.mean(init[m])), float(np.std(init[m])),
                      float(np.mean(final[m])), float(np.std(final[m])))
        for m in ("peak_centrality", "std_centrality", "avg_path_length")
    ]


@dataclass
class CapacitySample:
    model: str
    n: int
    seed: int
    x: float  # peak-centrality reduction ratio kappa_max / kappa'_max
    y: float  # measured capacity gain rho'_crit / rho_crit


@dataclass
class CapacityResult:
    samples: list[CapacitySample]
    r_squared: float  # against the identity line y = x
    skipped: int = 0


def identity_r_squared(xs, ys) -> float:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    ss_res = float(np.sum((ys - xs) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    if ss_tot == 0:
        return 1.0 if ss_res == 0 else 0.0
    return 1.0 - ss_res / ss_tot


def capacity_validation(n_samples: int = 30, n_range: tuple[int, int] = (30, 40),
                        seed_base: int = 0, sra_cfg: SraConfig = SraConfig(),
                        traffic: TrafficConfig | None = None,
                        loss_threshold: float = 0.05) -> CapacityResult:
    """Static peak-reduction ratio vs. independently measured capacity gain.

    Samples alternate BA and WS graphs with sizes drawn from `n_range`. The
    capacity of each cost landscape is measured with a static shortest-path
    policy under that landscape, so the two axes come from independent
    measurements (structure vs. packet simulation).
    """
    if traffic is None:
        # shorter horizon than the simulator default: each sample runs two
        # full load sweeps, and loss estimates stabilize well before 2000 steps
        traffic = TrafficConfig(total_timesteps=1200, warmup=200)
    picker = np.random.Generator(np.random.PCG64(seed_base + (7 << 40)))
    samples: list[CapacitySample] = []
    skipped = 0
    for i in range(n_samples):
        model = "ba" if i % 2 == 0 else "ws"
        n = int(picker.integers(n_range[0], n_range[1] + 1))
        spec = TopologySpec(model=model, n=n, seed=seed_base + i)
        g = generate(spec)
        uniform = np.ones(g.n)
        before = betweenness(g, uniform)
        trace = run_relaxation(g, sra_cfg)
        after = trace.final
        if after.kappa.max() == 0 or before.kappa.max() == 0:
            skipped += 1
            continue
        x = float(before.kappa.max() / after.kappa.max())
        hops = mean_route_hops(g, uniform)
        cfg = replace(traffic, seed=traffic.seed + 1000 * i)
        try:
            rho_base = critical_load(g, lambda: make_policy("dijkstra"), cfg,
                                     loss_threshold, mean_hops=hops)
            final_c = after.c
            rho_sra = critical_load(
                g, lambda: make_policy("sra", sra_cfg, sra_costs=final_c), cfg,
                loss_threshold, mean_hops=hops)
        except UnboundedCapacityError as exc:
            log.warning("sample %d (%s n=%d) skipped: %s", i, model, n, exc)
            skipped += 1
            continue
        samples.append(CapacitySample(model, n, spec.seed, x, rho_sra / rho_base))
    r2 = identity_r_squared([s.x for s in samples], [s.y for s in samples])
    return CapacityResult(samples, r2, skipped)


@dataclass
class SweepCell:
    policy: str
    load: float
    mean: TrafficMetrics
    std: TrafficMetrics
    trials: int


SWEEP_HEADER = ("policy,load,trials,"
                + ",".join(f"{f}_mean" for f in TrafficMetrics.CSV_FIELDS)
                + ","
                + ",".join(f"{f}_std" for f in TrafficMetrics.CSV_FIELDS))


def _aggregate(policy: str, load: float, runs: list[TrafficMetrics]) -> SweepCell:
    def stat(fn):
        vals = {f: fn([getattr(r, f) for r in runs]) for f in TrafficMetrics.CSV_FIELDS}
        return TrafficMetrics(**vals)

    return SweepCell(policy, load, stat(lambda v: float(np.mean(v))),
                     stat(lambda v: float(np.std(v))), len(runs))


def load_sweep(spec: TopologySpec, loads=tuple(round(0.2 * i, 2) for i in range(1, 11)),
               policies=("sra", "dijkstra", "lirpd", "qrouting"), trials: int = 20,
               seed_base: int = 0, traffic: TrafficConfig = TrafficConfig(),
               sra_cfg: SraConfig = SraConfig(), sra_live: bool = True) -> list[SweepCell]:
    """Full cross of policies x loads x trials on one topology family."""
    graphs = [generate(replace(spec, seed=seed_base + i)) for i in range(trials)]
    hops = [mean_route_hops(g, np.ones(g.n)) for g in graphs]
    sra_costs = [run_relaxation(g, sra_cfg).final.c for g in graphs]
    cells = []
    for policy in policies:
        for load in loads:
            runs = []
            for i, g in enumerate(graphs):
                cfg = replace(traffic, load=load, seed=seed_base + 10_000 + i)
                pol = make_policy(policy, sra_cfg, live=sra_live, sra_costs=sra_costs[i]) \
                    if policy == "sra" else make_policy(policy)
                runs.append(simulate(g, pol, cfg, hops[i]))
            cells.append(_aggregate(policy, load, runs))
    return cells


@dataclass
class AttackPoint:
    fraction: float
    removed: int
    pdr_sra_mean: float
    pdr_dijkstra_mean: float
    advantage_mean: float  # percent, relative to the dijkstra PDR
    advantage_std: float


ATTACK_HEADER = ("fraction,removed,pdr_sra_mean,pdr_dijkstra_mean,"
                 "advantage_mean,advantage_std")


def attack_experiment(spec: TopologySpec,
                      fractions=(0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30),
                      trials: int = 20, seed_base: int = 0,
                      traffic: TrafficConfig | None = None,
                      sra_cfg: SraConfig = SraConfig()) -> list[AttackPoint]:
    """Delivery-rate advantage of relaxed costs over uniform costs while
    nodes are removed in descending order of their initial centrality.

    The relaxed policy re-converges on each damaged graph; unreachable pairs
    on a disconnected remnant count against the delivery rate of both
    policies identically.
    """
    if traffic is None:
        traffic = TrafficConfig(total_timesteps=1200, warmup=200, load=DEFAULT_ATTACK_LOAD)
    per_fraction: dict[float, list[tuple[float, float]]] = {f: [] for f in fractions}
    for i in range(trials):
        g = generate(replace(spec, seed=seed_base + i))
        base = betweenness(g, np.ones(g.n))
        # descending initial centrality, ties broken toward the lower id
        order = sorted(range(g.n), key=lambda v: (-base.kappa[v], v))
        for frac in fractions:
            k = int(round(frac * g.n))
            damaged = g if k == 0 else g.without_nodes(set(order[:k]))[0]
            hops = mean_route_hops(damaged, np.ones(damaged.n))
            cfg = replace(traffic, seed=seed_base + 77_000 + i)
            pdr_d = simulate(damaged, make_policy("dijkstra"), cfg, hops).pdr
            costs = run_relaxation(damaged, sra_cfg).final.c
            pdr_s = simulate(damaged,
                             make_policy("sra", sra_cfg, sra_costs=costs),
                             cfg, hops).pdr
            per_fraction[frac].append((pdr_s, pdr_d))
    points = []
    for frac in fractions:
        pairs = per_fraction[frac]
        adv = [(s - d) / d * 100.0 for s, d in pairs if d > 0]
        points.append(AttackPoint(
            frac, int(round(frac * spec.n)),
            float(np.mean([s for s, _ in pairs])),
            float(np.mean([d for _, d in pairs])),
            float(np.mean(adv)) if adv else 0.0,
            float(np.std(adv)) if adv else 0.0,
        ))
    return points


@dataclass
class SensitivityCell:
    alpha: float
    beta_i: float
    peak_change_pct: float
    path_length_change_pct: float
    switches: float  # mean switch count per run
    metrics: TrafficMetrics  # one fixed-load simulation point, mean of trials


SENSITIVITY_HEADER = ("alpha,beta_i,peak_change_pct,path_length_change_pct,switches,"
                      + ",".join(TrafficMetrics.CSV_FIELDS))


def sensitivity_experiment(alphas=(0.05, 0.1, 0.3), betas=(2.0, 10.0, 20.0),
                           spec: TopologySpec = TopologySpec("ba", n=60),
                           trials: int = 5, seed_base: int = 0, load: float = 1.2,
                           traffic: TrafficConfig | None = None) -> list[SensitivityCell]:
    """Structural and one-load traffic response across an alpha/beta grid."""
    if traffic is None:
        traffic = TrafficConfig(total_timesteps=1200, warmup=200)
    graphs = [generate(replace(spec, seed=seed_base + i)) for i in range(trials)]
    hops = [mean_route_hops(g, np.ones(g.n)) for g in graphs]
    before = [betweenness(g, np.ones(g.n)) for g in graphs]
    cells = []
    for alpha in alphas:
        for beta in betas:
            cfg = SraConfig(alpha=alpha, beta_i=beta)
            peaks, apls, switches, runs = [], [], [], []
            for i, g in enumerate(graphs):
                if beta == 0.0:
                    peaks.append(0.0)
                    apls.append(0.0)
                    switches.append(0)
                    costs = np.ones(g.n)
                else:
                    trace = run_relaxation(g, cfg)
                    fin = trace.final
                    peaks.append((fin.kappa.max() - before[i].kappa.max())
                                 / before[i].kappa.max() * 100.0)
                    apl0 = mean_route_hops(g, np.ones(g.n))
                    apls.append((mean_route_hops(g, fin.c) - apl0) / apl0 * 100.0)
                    switches.append(sum(r.switched for r in trace.records))
                    costs = fin.c
                sim_cfg = replace(traffic, load=load, seed=seed_base + 31_000 + i)
                runs.append(simulate(g, make_policy("sra", cfg, sra_costs=costs),
                                     sim_cfg, hops[i]))
            cells.append(SensitivityCell(
                alpha, beta, float(np.mean(peaks)), float(np.mean(apls)),
                float(np.mean(switches)), _aggregate("sra", load, runs).mean))
    return cells
