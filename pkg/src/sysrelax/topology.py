"""Random graph generation (BA / WS / ER) and edge-list I/O.

All generators are deterministic in the seed. Randomness comes from
``numpy.random.Generator`` backed by PCG64; the generator choice is part of
the reproducibility contract, so results are portable across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ER_RETRY_BUDGET = 1000


class TopologyParameterError(ValueError):
    """Invalid parameters for the requested graph model."""


class GenerationError(RuntimeError):
    """Generation failed (e.g. ER retry budget exhausted)."""


class EdgeListFormatError(ValueError):
    """Malformed edge-list input; message names the offending line."""


@dataclass(frozen=True)
class Graph:
    """Undirected graph on nodes 0..n-1, stored as sorted (u, v) pairs, u < v."""

    n: int
    edges: tuple[tuple[int, int], ...]
    _adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"need at least 3 nodes, got {self.n}")
        adj: list[list[int]] = [[] for _ in range(self.n)]
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return self._adj

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in self._adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def without_nodes(self, removed: set[int]) -> tuple["Graph", list[int]]:
        """Subgraph with `removed` deleted and survivors relabeled 0..n'-1.

        Returns the (possibly disconnected) subgraph and the list mapping new
        ids back to original ids.
        """
        keep = [v for v in range(self.n) if v not in removed]
        if len(keep) < 3:
            raise ValueError("fewer than 3 nodes would remain")
        relabel = {old: new for new, old in enumerate(keep)}
        edges = tuple(
            (relabel[u], relabel[v])
            for u, v in self.edges
            if u not in removed and v not in removed
        )
        return Graph(len(keep), edges), keep


@dataclass(frozen=True)
class TopologySpec:
    """Parameters for one of the three canonical random-graph families.

    Defaults follow the standard benchmark configuration: n=100, ba_m=4,
    ws_k=8, ws_p=0.1, er_p=0.1.
    """

    model: str  # "ba" | "ws" | "er"
    n: int = 100
    ba_m: int = 4
    ws_k: int = 8
    ws_p: float = 0.1
    er_p: float = 0.1
    seed: int = 0

    def validate(self) -> None:
        if self.model not in ("ba", "ws", "er"):
            raise TopologyParameterError(f"unknown model {self.model!r}")
        if self.n < 3:
            raise TopologyParameterError(f"n must be >= 3, got {self.n}")
        if self.model == "ba":
            if not (1 <= self.ba_m < self.n):
                raise TopologyParameterError(
                    f"ba_m must satisfy 1 <= m < n, got m={self.ba_m}, n={self.n}"
                )
        elif self.model == "ws":
            if self.ws_k % 2 != 0 or not (2 <= self.ws_k < self.n):
                raise TopologyParameterError(
                    f"ws_k must be even with 2 <= k < n, got k={self.ws_k}"
                )
            if not (0.0 <= self.ws_p <= 1.0):
                raise TopologyParameterError(f"ws_p must be in [0,1], got {self.ws_p}")
        else:
            if not (0.0 < self.er_p <= 1.0):
                raise TopologyParameterError(f"er_p must be in (0,1], got {self.er_p}")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _ba_graph(n: int, m: int, rng: np.random.Generator) -> Graph:
    # Seed clique on m+1 nodes, then preferential attachment: each new node
    # links to m distinct existing nodes sampled proportionally to degree.
    edges: set[tuple[int, int]] = set()
    repeated: list[int] = []  # node id repeated once per incident edge
    for i in range(m + 1):
        for j in range(i + 1, m + 1):
            edges.add((i, j))
            repeated.append(i)
            repeated.append(j)
    for v in range(m + 1, n):
        chosen: set[int] = set()
        while len(chosen) < m:
            chosen.add(repeated[rng.integers(len(repeated))])
        for u in sorted(chosen):
            edges.add((u, v))
            repeated.append(u)
            repeated.append(v)
    return Graph(n, tuple(edges))


def _ws_edges(n: int, k: int, p: float, rng: np.random.Generator) -> set[tuple[int, int]]:
    # Ring lattice with k/2 neighbors each side, then rewire each lattice
    # edge's far endpoint with probability p (self-loops/duplicates re-drawn).
    edges: set[tuple[int, int]] = set()
    for j in range(1, k // 2 + 1):
        for i in range(n):
            u, v = i, (i + j) % n
            edges.add((u, v) if u < v else (v, u))
    if p > 0.0:
        for j in range(1, k // 2 + 1):
            for i in range(n):
                u, v = i, (i + j) % n
                key = (u, v) if u < v else (v, u)
                if key not in edges or rng.random() >= p:
                    continue
                for _ in range(4 * n):
                    w = int(rng.integers(n))
                    new = (u, w) if u < w else (w, u)
                    if w != u and new not in edges:
                        edges.remove(key)
                        edges.add(new)
                        break
    return edges


def _er_edges(n: int, p: float, rng: np.random.Generator) -> set[tuple[int, int]]:
    mask = rng.random((n, n)) < p
    return {(u, v) for u in range(n) for v in range(u + 1, n) if mask[u, v]}


def generate(spec: TopologySpec) -> Graph:
    """Generate a connected graph for `spec`, deterministic in the seed.

    ER and WS draws that come out disconnected are re-drawn with seed+1,
    seed+2, ... so the node count stays exactly as requested; the retry
    count is recorded on the returned graph's ``retries`` note via
    :func:`generate_with_retries`.
    """
    g, _ = generate_with_retries(spec)
    return g


def generate_with_retries(spec: TopologySpec) -> tuple[Graph, int]:
    spec.validate()
    if spec.model == "ba":
        return _ba_graph(spec.n, spec.ba_m, _rng(spec.seed)), 0
    for attempt in range(ER_RETRY_BUDGET):
        rng = _rng(spec.seed + attempt)
        if spec.model == "ws":
            edges = _ws_edges(spec.n, spec.ws_k, spec.ws_p, rng)
        else:
            edges = _er_edges(spec.n, spec.er_p, rng)
        g = Graph(spec.n, tuple(edges))
        if g.is_connected():
            return g, attempt
    raise GenerationError(
        f"no connected {spec.model.upper()} graph within {ER_RETRY_BUDGET} retries "
        f"(n={spec.n}, seed={spec.seed})"
    )


def load_edge_list(text: str) -> Graph:
    """Parse a whitespace-separated "u v" edge list; '#' lines are comments."""
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListFormatError(f"line {lineno}: expected two node ids, got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListFormatError(f"line {lineno}: non-numeric token in {raw!r}") from None
        if u < 0 or v < 0:
            raise EdgeListFormatError(f"line {lineno}: negative node id in {raw!r}")
        if u == v:
            raise EdgeListFormatError(f"line {lineno}: self-loop at node {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise EdgeListFormatError(f"line {lineno}: duplicate edge ({u}, {v})")
        seen.add(key)
        edges.append(key)
        max_id = max(max_id, u, v)
    if max_id < 2:
        raise EdgeListFormatError("edge list describes fewer than 3 nodes")
    g = Graph(max_id + 1, tuple(edges))
    if not g.is_connected():
        raise EdgeListFormatError("edge list describes a disconnected graph")
    return g


def save_edge_list(g: Graph) -> str:
    """Serialize edges sorted by (min id, max id), one "u v" per line."""
    return "".join(f"{u} {v}\n" for u, v in g.edges)
