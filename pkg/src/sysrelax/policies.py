"""Routing policies benchmarked by the traffic simulator.

dijkstra  - static next-hop tables from uniform node costs
sra       - cost landscape from a converged relaxation run; in live mode
            each periodic hook performs one further controller step under
            the current costs before rebuilding the tables
lirpd     - queue-aware deterministic baseline: node cost
            1 + queue_len / queue_capacity, re-derived at each hook
qrouting  - classical per-packet estimated-delivery-time learner with
            epsilon-greedy exploration

All deterministic policies forward along cost-shortest routes with the
smallest-predecessor-id tie-break, so every hop strictly decreases the
remaining cost distance and the induced next-hop tables are loop-free.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .controller import SraConfig, SraState, relax_step, run_relaxation
from .routing import betweenness, next_hop_table
from .topology import Graph

UPDATE_INTERVAL = 50


class RoutingPolicy:
    """Base: a static next-hop table with no periodic updates."""

    kind = "static"
    update_interval = 0

    def __init__(self):
        self.g: Graph | None = None
        self.queue_len: list[int] | None = None
        self._table: list[list[int]] | None = None

    def reset(self, g: Graph, cfg) -> None:
        self.g = g

    def bind_queues(self, queue_len: list[int]) -> None:
        self.queue_len = queue_len

    def update(self, t: int) -> None:
        pass

    def next_hop(self, node: int, dest: int) -> int | None:
        nxt = self._table[node][dest]
        return None if nxt < 0 else nxt

    def routes_snapshot(self) -> list[list[int]]:
        """Full next-hop map, table[s][t]; -1 marks unreachable."""
        return [row[:] for row in self._table]


class DijkstraPolicy(RoutingPolicy):
    kind = "dijkstra"

    def reset(self, g, cfg):
        super().reset(g, cfg)
        self._table = next_hop_table(g, np.ones(g.n))


class SraPolicy(RoutingPolicy):
    """Routes from the relaxed cost landscape.

    Static mode freezes the converged costs. Live mode keeps the controller
    running: each hook performs one relaxation step using centrality sensed
    under the current costs, then rebuilds the tables.
    """

    kind = "sra"

    def __init__(self, sra_cfg: SraConfig = SraConfig(), live: bool = False,
                 costs: np.ndarray | None = None):
        super().__init__()
        self.sra_cfg = sra_cfg
        self.live = live
        self.update_interval = UPDATE_INTERVAL if live else 0
        self._given_costs = costs
        self.state: SraState | None = None

    def reset(self, g, cfg):
        super().reset(g, cfg)
        if self._given_costs is not None:
            costs = np.asarray(self._given_costs, dtype=float)
            s = (costs - 1.0) / self.sra_cfg.beta_i if self.sra_cfg.beta_i else np.zeros(g.n)
            self.state = SraState(s=s, c=costs)
        else:
            trace = run_relaxation(g, self.sra_cfg)
            final = trace.final
            self.state = SraState(s=final.s.copy(), c=final.c.copy(), k=final.k)
        self._table = next_hop_table(g, self.state.c)

    def update(self, t):
        if not self.live:
            return
        report = betweenness(self.g, self.state.c)
        self.state = relax_step(self.state, report.normalized, self.sra_cfg)
        self._table = next_hop_table(self.g, self.state.c)

    @property
    def costs(self) -> np.ndarray:
        return self.state.c


class LirpdPolicy(RoutingPolicy):
    kind = "lirpd"
    update_interval = UPDATE_INTERVAL

    def reset(self, g, cfg):
        super().reset(g, cfg)
        self.queue_capacity = cfg.queue_capacity
        self._table = next_hop_table(g, np.ones(g.n))

    def update(self, t):
        q = np.asarray(self.queue_len, dtype=float) if self.queue_len else np.zeros(self.g.n)
        self._table = next_hop_table(self.g, 1.0 + q / self.queue_capacity)


class QRoutingPolicy(RoutingPolicy):
    """Per-packet Q-learning of estimated delivery times.

    Q[x][d][j] estimates the delivery time from x to d via x's j-th
    neighbor, initialized to 1 + hop distance from that neighbor. On each
    forward x -> y the chosen entry moves toward
    q_y + 1 + gamma_q * min_b Q[y][d][b], with q_y the queue length at y.
    """

    kind = "qrouting"
    update_interval = 0  # learns inside next_hop, no periodic hook

    def __init__(self, alpha_q: float = 0.1, gamma_q: float = 0.9,
                 epsilon: float = 0.3):
        super().__init__()
        self.alpha_q = alpha_q
        self.gamma_q = gamma_q
        self.epsilon = epsilon

    def reset(self, g, cfg):
        super().reset(g, cfg)
        self.rng = np.random.Generator(np.random.PCG64(cfg.seed + (1 << 32)))
        hop_dist = _hop_distances(g)
        self.q: list[np.ndarray] = []
        for x in range(g.n):
            nbrs = g.neighbors(x)
            q = np.empty((g.n, len(nbrs)))
            for j, y in enumerate(nbrs):
                q[:, j] = 1.0 + hop_dist[y]
            q[x, :] = 0.0
            self.q.append(q)

    def next_hop(self, node, dest):
        nbrs = self.g.neighbors(node)
        scores = self.q[node][dest]
        if not np.all(np.isfinite(scores)):
            finite = np.isfinite(scores)
            if not finite.any():
                return None
        if self.epsilon > 0 and self.rng.random() < self.epsilon:
            j = int(self.rng.integers(len(nbrs)))
        else:
            j = int(np.argmin(scores))
        y = nbrs[j]
        q_y = self.queue_len[y] if self.queue_len is not None else 0
        best_next = float(np.min(self.q[y][dest])) if y != dest else 0.0
        target = q_y + 1.0 + self.gamma_q * best_next
        self.q[node][dest, j] += self.alpha_q * (target - scores[j])
        return y

    def routes_snapshot(self):
        table = []
        for x in range(self.g.n):
            nbrs = self.g.neighbors(x)
            row = [nbrs[int(np.argmin(self.q[x][d]))] if d != x else x
                   for d in range(self.g.n)]
            table.append(row)
        return table


def _hop_distances(g: Graph) -> np.ndarray:
    """All-pairs BFS hop distances (inf where unreachable)."""
    dist = np.full((g.n, g.n), np.inf)
    for s in range(g.n):
        dist[s, s] = 0
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for v in g.neighbors(u):
                if dist[s, v] == np.inf:
                    dist[s, v] = dist[s, u] + 1
                    dq.append(v)
    return dist


def make_policy(kind: str, sra_cfg: SraConfig = SraConfig(), live: bool = False,
                sra_costs: np.ndarray | None = None, **params) -> RoutingPolicy:
    if kind == "dijkstra":
        return DijkstraPolicy()
    if kind == "sra":
        return SraPolicy(sra_cfg, live=live, costs=sra_costs)
    if kind == "lirpd":
        return LirpdPolicy()
    if kind == "qrouting":
        return QRoutingPolicy(**params)
    raise ValueError(f"unknown policy kind {kind!r}")


def policy_routes_snapshot(policy: RoutingPolicy, g: Graph) -> list[list[int]]:
    """Audit export of the policy's current n x n next-hop map."""
    table = policy.routes_snapshot()
    if len(table) != g.n:
        raise ValueError("snapshot does not match the graph")
    return table


def routes_through_node(table: list[list[int]], g: Graph, node: int) -> float:
    """Fraction of ordered pairs whose forwarding walk crosses `node` as an
    interior hop. Used to audit hub relief."""
    crossing = 0
    pairs = 0
    for s in range(g.n):
        for t in range(g.n):
            if s == t or table[s][t] < 0:
                continue
            pairs += 1
            v = s
            for _ in range(g.n):  # bounded in case a learned table cycles
                v = table[v][t]
                if v == t:
                    break
                if v == node:
                    crossing += 1
                    break
    return crossing / pairs if pairs else 0.0
