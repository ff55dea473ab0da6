"""Brute-force reference implementations used to cross-check routing.

All simple paths between every node pair are enumerated outright, so these
run only on tiny graphs (n <= ~10) but share no code with the production
Dijkstra/Brandes path.
"""

import numpy as np

from sysrelax.routing import TIE_TOL
from sysrelax.topology import Graph


def all_simple_paths(g: Graph, s: int, t: int) -> list[list[int]]:
    out: list[list[int]] = []
    stack = [(s, [s])]
    while stack:
        v, path = stack.pop()
        if v == t:
            out.append(path)
            continue
        for w in g.neighbors(v):
            if w not in path:
                stack.append((w, path + [w]))
    return out


def path_cost(path: list[int], c) -> float:
    return float(sum(c[v] for v in path))


def tied_shortest_paths(g: Graph, c, s: int, t: int) -> tuple[float, list[list[int]]]:
    """Minimum node-cost distance and every path tied with it under the
    production tie tolerance."""
    paths = all_simple_paths(g, s, t)
    if not paths:
        return float("inf"), []
    costs = [path_cost(p, c) for p in paths]
    best = min(costs)
    tol = TIE_TOL * max(1.0, best)
    return best, [p for p, d in zip(paths, costs) if d <= best + tol]


def brute_betweenness(g: Graph, c) -> np.ndarray:
    """Unordered-pair fractional betweenness by full path enumeration."""
    kappa = np.zeros(g.n)
    for s in range(g.n):
        for t in range(s + 1, g.n):
            _, tied = tied_shortest_paths(g, c, s, t)
            if not tied:
                continue
            for p in tied:
                for v in p[1:-1]:
                    kappa[v] += 1.0 / len(tied)
    return kappa


def random_connected_graph(rng: np.random.Generator, n_max: int = 9) -> Graph:
    """Small random connected graph: a random spanning tree plus extra edges."""
    n = int(rng.integers(3, n_max + 1))
    edges = set()
    for v in range(1, n):
        u = int(rng.integers(v))
        edges.add((u, v))
    extra = int(rng.integers(0, n))
    for _ in range(extra):
        u, v = int(rng.integers(n)), int(rng.integers(n))
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return Graph(n, tuple(edges))
