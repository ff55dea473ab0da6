"""Timestepped packet-level traffic simulator.

Per timestep, in order:
  1. the policy's periodic update hook fires (every `update_interval` steps);
  2. K ~ Poisson(lambda) packets are generated with uniform random ordered
     (source, destination) pairs and enqueued at their sources, subject to
     queue capacity;
  3. each node dequeues up to `service_rate` packets FIFO and forwards them;
     arriving at the destination is delivery, arriving anywhere else
     enqueues subject to the per-timestep ingress budget (`proc_capacity`)
     and queue capacity;
  4. metrics accumulate for packets created at or after the warmup step.

The offered load rho is work-normalized: lambda = rho * N * mu / h_bar with
h_bar the mean selected-route hop count under uniform costs, so rho = 1
equates offered packet-hops to the aggregate service budget N * mu.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .routing import mean_route_hops
from .topology import Graph


@dataclass(frozen=True)
class TrafficConfig:
    total_timesteps: int = 2000
    warmup: int = 300
    service_rate: int = 1
    proc_capacity: int = 10
    queue_capacity: int = 50
    load: float = 1.0
    seed: int = 0

    def validate(self) -> None:
        if self.warmup >= self.total_timesteps:
            raise ValueError("warmup must be < total_timesteps")
        if min(self.service_rate, self.proc_capacity, self.queue_capacity) < 1:
            raise ValueError("all capacities must be >= 1")
        if self.load < 0:
            raise ValueError("load must be >= 0")


@dataclass
class Packet:
    source: int
    destination: int
    created_at: int
    hops: int = 0


@dataclass
class TrafficMetrics:
    throughput: float       # delivered per timestep, post-warmup generation
    loss_rate: float        # dropped / generated
    mean_latency: float     # delivered only; nan when nothing was delivered
    pdr: float              # delivered / (delivered + dropped + unreachable)
    generated: int = 0
    delivered: int = 0
    dropped: int = 0
    unreachable: int = 0
    in_flight: int = 0      # still queued at the horizon

    CSV_FIELDS = ("throughput", "loss_rate", "mean_latency", "pdr", "generated",
                  "delivered", "dropped", "unreachable", "in_flight")

    def csv_row(self) -> str:
        return ",".join(repr(getattr(self, f)) for f in self.CSV_FIELDS)


class UnboundedCapacityError(RuntimeError):
    """Loss never exceeded the threshold within the sweep's load ceiling."""


def simulate(g: Graph, policy, cfg: TrafficConfig,
             mean_hops: float | None = None) -> TrafficMetrics:
    """Run one seeded simulation of `policy` on `g`; fully deterministic.

    `mean_hops` may be passed to reuse a precomputed uniform-cost h_bar
    across runs on the same graph.
    """
    cfg.validate()
    if mean_hops is None:
        mean_hops = mean_route_hops(g, np.ones(g.n))
    lam = cfg.load * g.n * cfg.service_rate / mean_hops
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    policy.reset(g, cfg)

    n = g.n
    queues: list[deque[Packet]] = [deque() for _ in range(n)]
    queue_len = [0] * n
    policy.bind_queues(queue_len)

    generated = delivered = dropped = unreachable = 0
    latency_total = 0
    measured = lambda p: p.created_at >= cfg.warmup

    for t in range(cfg.total_timesteps):
        if policy.update_interval and t % policy.update_interval == 0:
            policy.update(t)

        k = rng.poisson(lam) if lam > 0 else 0
        for _ in range(k):
            s = int(rng.integers(n))
            d = int(rng.integers(n - 1))
            if d >= s:
                d += 1
            pkt = Packet(s, d, t)
            if pkt.created_at >= cfg.warmup:
                generated += 1
            if queue_len[s] < cfg.queue_capacity:
                queues[s].append(pkt)
                queue_len[s] += 1
            elif measured(pkt):
                dropped += 1

        ingress = [0] * n
        # snapshot so packets forwarded this step are not re-served this step
        budget = [min(cfg.service_rate, queue_len[v]) for v in range(n)]
        for v in range(n):
            for _ in range(budget[v]):
                pkt = queues[v].popleft()
                queue_len[v] -= 1
                nxt = policy.next_hop(v, pkt.destination)
                if nxt is None:
                    if measured(pkt):
                        unreachable += 1
                    continue
                pkt.hops += 1
                if nxt == pkt.destination:
                    if measured(pkt):
                        delivered += 1
                        latency_total += t + 1 - pkt.created_at
                    continue
                if ingress[nxt] >= cfg.proc_capacity or queue_len[nxt] >= cfg.queue_capacity:
                    if measured(pkt):
                        dropped += 1
                    continue
                ingress[nxt] += 1
                queues[nxt].append(pkt)
                queue_len[nxt] += 1

    in_flight = sum(1 for q in queues for p in q if measured(p))
    horizon = cfg.total_timesteps - cfg.warmup
    accounted = delivered + dropped + unreachable
    return TrafficMetrics(
        throughput=delivered / horizon,
        loss_rate=dropped / generated if generated else 0.0,
        mean_latency=latency_total / delivered if delivered else float("nan"),
        pdr=delivered / accounted if accounted else 1.0,
        generated=generated,
        delivered=delivered,
        dropped=dropped,
        unreachable=unreachable,
        in_flight=in_flight,
    )


def critical_load(g: Graph, policy_factory, cfg: TrafficConfig,
                  loss_threshold: float = 0.05, n_seeds: int = 5,
                  resolution: float = 0.02, load_ceiling: float = 10.0,
                  mean_hops: float | None = None) -> float:
    """Smallest load at which mean loss over `n_seeds` seeds exceeds the
    threshold, located by a doubling sweep then bisection to `resolution`.

    `policy_factory` builds a fresh policy per run so per-run learning state
    never leaks across seeds. Raises UnboundedCapacityError when even the
    ceiling load stays under the threshold.
    """
    if not (0.0 < loss_threshold <= 1.0):
        raise ValueError("loss_threshold must be in (0,1]")
    if mean_hops is None:
        mean_hops = mean_route_hops(g, np.ones(g.n))

    sweep_means: list[tuple[float, float, float]] = []  # (load, mean, std)

    def mean_loss(load: float) -> float:
        losses = []
        for i in range(n_seeds):
            run_cfg = TrafficConfig(cfg.total_timesteps, cfg.warmup, cfg.service_rate,
                                    cfg.proc_capacity, cfg.queue_capacity, load,
                                    cfg.seed + i)
            losses.append(simulate(g, policy_factory(), run_cfg, mean_hops).loss_rate)
        m = float(np.mean(losses))
        sweep_means.append((load, m, float(np.std(losses))))
        return m

    lo, hi = 0.0, None
    load = 0.25
    while load <= load_ceiling:
        if mean_loss(load) > loss_threshold:
            hi = load
            break
        lo = load
        load *= 2.0
    if hi is None:
        raise UnboundedCapacityError(
            f"loss stayed <= {loss_threshold} for all loads up to {load_ceiling}"
        )
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if mean_loss(mid) > loss_threshold:
            hi = mid
        else:
            lo = mid

    # loss should not decrease along the load grid beyond seed noise
    ordered = sorted(sweep_means)
    for (l1, m1, s1), (l2, m2, _) in zip(ordered, ordered[1:]):
        if m2 < m1 - (s1 + 1e-3):
            raise AssertionError(
                f"loss not monotone in load: {m1:.4f}@{l1:.2f} -> {m2:.4f}@{l2:.2f}"
            )
    return hi
