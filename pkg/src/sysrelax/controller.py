"""Leaky-integrator relaxation of the node-cost landscape.

Each iteration senses betweenness under the current costs, folds the
max-normalized centrality into an accumulated pressure state

    S' = (1 - alpha) * S + alpha * norm(kappa)

and re-derives costs C = 1 + beta_i * S. A change of the tied-shortest-path
signature between consecutive iterations is a "switch"; with a minimum dwell
time t_d > 1 the path set (signature, kappa, normalized) is frozen for the
t_d - 1 iterations after a switch while the state keeps updating.

The pressure update is computed as S' = v + (1 - alpha) * (S - v) with
v = norm(kappa). This is algebraically identical to the convex-combination
form but keeps the contraction toward a fixed target exact to machine
precision even when ||S - v|| is tiny, which the stability diagnostics rely
on.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .routing import all_dags, betweenness
from .topology import Graph


@dataclass(frozen=True)
class SraConfig:
    alpha: float = 0.1
    beta_i: float = 10.0
    eps: float = 1e-5
    k_max: int = 200
    t_d: int = 1

    def validate(self) -> None:
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must be in (0,1), got {self.alpha}")
        if self.beta_i <= 0 and self.beta_i != 0.0:
            raise ValueError(f"beta_i must be >= 0, got {self.beta_i}")
        if self.eps <= 0:
            raise ValueError(f"eps must be > 0, got {self.eps}")
        if self.k_max < 1:
            raise ValueError(f"k_max must be >= 1, got {self.k_max}")
        if self.t_d < 1:
            raise ValueError(f"t_d must be >= 1, got {self.t_d}")


@dataclass
class SraState:
    """Controller state: pressure s in [0,1]^n, costs c = 1 + beta_i * s."""

    s: np.ndarray
    c: np.ndarray
    k: int = 0
    dwell_remaining: int = 0

    @classmethod
    def initial(cls, n: int) -> "SraState":
        return cls(s=np.zeros(n), c=np.ones(n))


def relax_step(state: SraState, normalized, cfg: SraConfig) -> SraState:
    """One pressure/cost update toward the target vector `normalized`."""
    v = np.asarray(normalized, dtype=float)
    if v.shape != state.s.shape:
        raise ValueError(f"target shape {v.shape} != state shape {state.s.shape}")
    s_next = np.clip(v + (1.0 - cfg.alpha) * (state.s - v), 0.0, 1.0)
    c_next = 1.0 + cfg.beta_i * s_next
    return SraState(s=s_next, c=c_next, k=state.k + 1,
                    dwell_remaining=max(0, state.dwell_remaining - 1))


@dataclass
class TraceRecord:
    k: int
    s: np.ndarray
    c: np.ndarray
    kappa: np.ndarray
    normalized: np.ndarray
    signature: int
    switched: bool
    lyapunov_v: float


@dataclass
class RelaxTrace:
    """Per-iteration history of one relaxation run.

    Record k carries the state *entering* iteration k and the centrality
    sensed under it, so S^{(k+1)} = (1-a) S^{(k)} + a * normalized^{(k)}.
    The final record holds the terminal state and its freshly sensed
    centrality; status is "converged" or "k_max_reached".
    """

    cfg: SraConfig
    records: list[TraceRecord] = field(default_factory=list)
    status: str = ""

    @property
    def final(self) -> TraceRecord:
        return self.records[-1]

    def to_csv(self, full: bool = False) -> str:
        """Render the trace; the leading comment line carries the config so
        a full dump round-trips through from_csv."""
        lines = [f"# alpha={self.cfg.alpha!r} beta_i={self.cfg.beta_i!r} "
                 f"eps={self.cfg.eps!r} k_max={self.cfg.k_max} t_d={self.cfg.t_d} "
                 f"status={self.status}"]
        header = "k,switched,max_s,max_kappa,lyapunov_v,signature"
        if full:
            header += ",s,c,kappa,normalized"
        lines.append(header)
        for r in self.records:
            row = (f"{r.k},{int(r.switched)},{float(r.s.max())!r},"
                   f"{float(r.kappa.max())!r},{r.lyapunov_v!r},{r.signature:016x}")
            if full:
                for vec in (r.s, r.c, r.kappa, r.normalized):
                    row += ',"' + " ".join(repr(float(x)) for x in vec) + '"'
            lines.append(row)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "RelaxTrace":
        """Rebuild a trace from a full (--full) CSV dump."""
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("#"):
            raise ValueError("missing config comment line")
        meta = dict(kv.split("=", 1) for kv in lines[0][1:].split())
        cfg = SraConfig(alpha=float(meta["alpha"]), beta_i=float(meta["beta_i"]),
                        eps=float(meta["eps"]), k_max=int(meta["k_max"]),
                        t_d=int(meta["t_d"]))
        if "s" not in lines[1].split(","):
            raise ValueError("trace CSV lacks per-node columns; re-export with full=True")
        trace = cls(cfg=cfg, status=meta.get("status", ""))
        for ln in lines[2:]:
            (k, switched, _max_s, _max_k, v, sig,
             s, c, kappa, normalized) = next(csv.reader(io.StringIO(ln)))
            parse = lambda blob: np.array([float(x) for x in blob.split()])
            trace.records.append(TraceRecord(
                int(k), parse(s), parse(c), parse(kappa), parse(normalized),
                int(sig, 16), bool(int(switched)), float(v)))
        return trace


def run_relaxation(g: Graph, cfg: SraConfig = SraConfig()) -> RelaxTrace:
    """Run the full relaxation loop on `g` until the pressure settles.

    Terminates when ||S^{(k+1)} - S^{(k)}||_inf <= eps with the signature
    unchanged from the previous iteration, or after k_max iterations.
    Deterministic: identical (g, cfg) gives an identical trace.
    """
    cfg.validate()
    trace = RelaxTrace(cfg=cfg)
    state = SraState.initial(g.n)
    frozen = None  # (kappa, normalized, signature) held during a dwell window
    dwell = 0  # frozen iterations still owed after a switch
    prev_sig: int | None = None
    status = "k_max_reached"

    for k in range(cfg.k_max):
        if frozen is not None and dwell > 0:
            dwell -= 1
            kappa, normalized, sig = frozen
            switched = False
        else:
            frozen = None
            report = betweenness(g, state.c)
            kappa, normalized, sig = report.kappa, report.normalized, report.signature
            switched = prev_sig is not None and sig != prev_sig
            if switched and cfg.t_d > 1:
                frozen = (kappa, normalized, sig)
                dwell = cfg.t_d - 1

        v = float(np.sum((state.s - normalized) ** 2))
        trace.records.append(TraceRecord(k, state.s, state.c, kappa, normalized,
                                         sig, switched, v))
        prev_sig = sig

        nxt = relax_step(state, normalized, cfg)
        assert np.all(nxt.s >= 0.0) and np.all(nxt.s <= 1.0), "pressure left [0,1]^n"
        delta = float(np.max(np.abs(nxt.s - state.s)))
        state = nxt
        if delta <= cfg.eps and not switched:
            status = "converged"
            break

    # terminal record: final state with freshly sensed centrality
    report = betweenness(g, state.c)
    switched = prev_sig is not None and report.signature != prev_sig
    v = float(np.sum((state.s - report.normalized) ** 2))
    trace.records.append(TraceRecord(state.k, state.s, state.c, report.kappa,
                                     report.normalized, report.signature,
                                     False, v))
    trace.status = status
    return trace
