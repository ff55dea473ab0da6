"""Node-cost shortest paths, path counting, and betweenness centrality.

The distance of a path is the sum of the transit costs of every node on it,
endpoints included. Two path costs are considered tied when
|d1 - d2| <= TIE_TOL * max(1, d1); with base cost 1 per node this makes ties
exact at uniform costs and near-exact only transiently during relaxation.

Centrality follows the Brandes dependency-accumulation scheme, run once per
source and halved at the end so each unordered source-target pair counts
once.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from heapq import heappush, heappop

import numpy as np

from .topology import Graph

TIE_TOL = 1e-9


@dataclass
class ShortestPathDag:
    """All tied minimum-cost routes out of one source.

    dist: cumulative node-cost distance (inf if unreachable)
    sigma: number of tied minimum-cost paths
    preds: predecessor ids realizing exactly the tied set
    order: nodes in settling order (non-decreasing distance)
    """

    source: int
    dist: list[float]
    sigma: list[int]
    preds: list[list[int]]
    order: list[int]


@dataclass
class CentralityReport:
    """Betweenness under the current cost vector, plus a structure hash.

    `signature` is a 64-bit digest of the full tied-shortest-path structure;
    two cost vectors that induce the same tied routes hash identically.
    """

    kappa: np.ndarray
    normalized: np.ndarray
    signature: int

    def to_csv(self) -> str:
        lines = ["node_id,kappa,normalized"]
        for i, (k, c) in enumerate(zip(self.kappa, self.normalized)):
            lines.append(f"{i},{float(k)!r},{float(c)!r}")
        return "\n".join(lines) + "\n"


def check_cost_vector(g: Graph, c) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    if c.shape != (g.n,):
        raise ValueError(f"cost vector has shape {c.shape}, expected ({g.n},)")
    if np.any(c < 1.0):
        raise ValueError("every node cost must be >= 1")
    return c


def shortest_path_dag(g: Graph, c, source: int) -> ShortestPathDag:
    """Dijkstra under node transit costs, keeping all tied predecessors.

    dist[source] = c[source]; crossing an edge u->v adds c[v]. Because every
    cost is >= 1 and the tie tolerance is ~1e-9, a predecessor is always
    settled strictly before its successors, so sigma can be accumulated
    during relaxation.
    """
    if not (0 <= source < g.n):
        raise ValueError(f"source {source} out of range")
    c = check_cost_vector(g, c)
    n = g.n
    adj = g.adjacency
    inf = float("inf")
    dist = [inf] * n
    sigma = [0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    settled = [False] * n
    order: list[int] = []

    dist[source] = c[source]
    sigma[source] = 1
    heap: list[tuple[float, int]] = [(dist[source], source)]
    while heap:
        _, u = heappop(heap)
        if settled[u]:
            continue
        settled[u] = True
        order.append(u)
        du = dist[u]
        for v in adj[u]:
            if settled[v]:
                continue
            nd = du + c[v]
            dv = dist[v]
            tol = TIE_TOL * (nd if nd > 1.0 else 1.0)
            if nd < dv - tol:
                dist[v] = nd
                sigma[v] = sigma[u]
                preds[v] = [u]
                heappush(heap, (nd, v))
            elif abs(nd - dv) <= tol:
                sigma[v] += sigma[u]
                preds[v].append(u)
    return ShortestPathDag(source, dist, sigma, preds, order)


def normalize_centrality(kappa) -> np.ndarray:
    """Divide by the maximum entry; an all-zero input stays the zero vector."""
    kappa = np.asarray(kappa, dtype=float)
    if np.any(kappa < 0):
        raise ValueError("centrality entries must be >= 0")
    top = kappa.max() if kappa.size else 0.0
    if top > 0:
        return kappa / top
    return np.zeros_like(kappa)


def _signature(dags: list[ShortestPathDag]) -> int:
    h = hashlib.blake2b(digest_size=8)
    for dag in dags:
        h.update(dag.source.to_bytes(4, "little"))
        for v in range(len(dag.preds)):
            ps = sorted(dag.preds[v])
            h.update(v.to_bytes(4, "little"))
            h.update(len(ps).to_bytes(4, "little"))
            for p in ps:
                h.update(p.to_bytes(4, "little"))
    return int.from_bytes(h.digest(), "little")


def all_dags(g: Graph, c) -> list[ShortestPathDag]:
    return [shortest_path_dag(g, c, s) for s in range(g.n)]


def betweenness(g: Graph, c, dags: list[ShortestPathDag] | None = None) -> CentralityReport:
    """Unordered-pair betweenness centrality under node costs `c`.

    Brandes accumulation per source counts each ordered pair once; halving
    the total converts to the unordered-pair convention.
    """
    if dags is None:
        dags = all_dags(g, c)
    n = g.n
    kappa = [0.0] * n
    for dag in dags:
        sigma = dag.sigma
        preds = dag.preds
        delta = [0.0] * n
        for w in reversed(dag.order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != dag.source:
                kappa[w] += delta[w]
    kap = np.array(kappa) / 2.0
    # clip away negative rounding dust so normalize() never rejects -1e-18
    np.clip(kap, 0.0, None, out=kap)
    return CentralityReport(kap, normalize_centrality(kap), _signature(dags))


def select_route(dag: ShortestPathDag, target: int) -> list[int]:
    """Deterministic route extraction: walk predecessors from the target,
    always taking the smallest id, then reverse."""
    if dag.dist[target] == float("inf"):
        raise ValueError(f"target {target} unreachable from {dag.source}")
    path = [target]
    v = target
    while v != dag.source:
        v = min(dag.preds[v])
        path.append(v)
    path.reverse()
    return path


def next_hop_table(g: Graph, c) -> list[list[int]]:
    """Per-source array of first hops toward every target (-1: unreachable,
    self for target == source). Consistent with select_route tie-breaking."""
    table: list[list[int]] = []
    for s in range(g.n):
        dag = shortest_path_dag(g, c, s)
        first = [-1] * g.n
        first[s] = s
        # first hop of the min-id predecessor walk, found by walking back
        for t in range(g.n):
            if t == s or dag.dist[t] == float("inf"):
                continue
            v = t
            while True:
                p = min(dag.preds[v])
                if p == s:
                    first[t] = v
                    break
                v = p
        table.append(first)
    return table


def mean_route_hops(g: Graph, c) -> float:
    """Mean hop count of the deterministically selected route over all
    ordered reachable pairs (the hop count, not the route's cost)."""
    total = 0
    pairs = 0
    for s in range(g.n):
        dag = shortest_path_dag(g, c, s)
        for t in range(g.n):
            if t == s or dag.dist[t] == float("inf"):
                continue
            total += len(select_route(dag, t)) - 1
            pairs += 1
    if pairs == 0:
        raise ValueError("no reachable pairs")
    return total / pairs
