"""Post-hoc stability diagnostics over relaxation traces.

The energy of a state is its squared Euclidean distance to the currently
sensed normalized-centrality target. Per step this energy obeys a
drop-jump bound: geometric decay with factor (1 - alpha) plus an injection
of at most (1/alpha) * ||c_k - c_{k+1}||^2 caused by path switching. The
functions here verify that bound on recorded traces, audit dwell blocks,
count switches, and solve the dwell-time design inequality.

The diameter of the set of attainable centrality vectors is not computable
without enumerating the cost-space partition; where a diameter is needed it
is estimated from the distinct normalized vectors actually observed, which
lower-bounds the true quantity. That estimate feeds diagnostics and design
inputs only, never the pass/fail of the proved per-step inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .controller import RelaxTrace

DROP_JUMP_TOL = 1e-12


class InfeasibleDwellError(ValueError):
    """No finite dwell time can reach the requested steady-state radius."""


@dataclass
class LyapunovRecord:
    k: int
    v: float
    v_next: float
    jump_bound: float
    holds: bool


@dataclass
class DropJumpReport:
    records: list[LyapunovRecord]
    limsup_estimate: float  # max energy over the final quartile
    delta_bar_obs: float    # diameter of the observed normalized vectors
    ultimate_bound: float   # delta_bar_obs^2 / alpha^2

    @property
    def all_hold(self) -> bool:
        return all(r.holds for r in self.records)


@dataclass
class BlockReport:
    index: int
    start: int
    v_start: float
    contained_switch: bool
    peak_before: float
    peak_after: float
    delta: float
    recurrence_holds: bool


def lyapunov_value(s, c_target) -> float:
    """Squared Euclidean distance from the pressure state to the target."""
    s = np.asarray(s, dtype=float)
    c = np.asarray(c_target, dtype=float)
    if s.shape != c.shape:
        raise ValueError(f"shape mismatch {s.shape} vs {c.shape}")
    return float(np.sum((s - c) ** 2))


def observed_delta_bar(trace: RelaxTrace) -> float:
    """Max pairwise 2-norm distance among distinct observed target vectors."""
    vecs: dict[int, np.ndarray] = {}
    for r in trace.records:
        vecs.setdefault(r.signature, r.normalized)
    vs = list(vecs.values())
    best = 0.0
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            best = max(best, float(np.linalg.norm(vs[i] - vs[j])))
    return best


def verify_drop_jump(trace: RelaxTrace, alpha: float | None = None) -> DropJumpReport:
    """Check the per-step energy bound on every consecutive record pair.

    jump_bound uses the realized per-step target change ||c_k - c_{k+1}||^2,
    so the inequality is exact up to floating point and a violation beyond
    DROP_JUMP_TOL indicates an implementation defect.
    """
    if len(trace.records) < 2:
        raise ValueError("trace needs at least 2 records")
    if alpha is None:
        alpha = trace.cfg.alpha
    recs = trace.records
    out: list[LyapunovRecord] = []
    for a, b in zip(recs, recs[1:]):
        v = lyapunov_value(a.s, a.normalized)
        v_next = lyapunov_value(b.s, b.normalized)
        jump = float(np.sum((a.normalized - b.normalized) ** 2)) / alpha
        holds = v_next <= (1.0 - alpha) * v + jump + DROP_JUMP_TOL
        out.append(LyapunovRecord(a.k, v, v_next, jump, holds))
    tail = recs[3 * len(recs) // 4:]
    limsup = max(lyapunov_value(r.s, r.normalized) for r in tail)
    dbar = observed_delta_bar(trace)
    return DropJumpReport(out, limsup, dbar, dbar * dbar / (alpha * alpha))


def switch_census(trace: RelaxTrace, window: int) -> int:
    """Max number of switches over any sliding window of `window` records."""
    flags = [int(r.switched) for r in trace.records]
    if not (1 <= window <= len(flags)):
        raise ValueError(f"window must be in [1, {len(flags)}], got {window}")
    count = sum(flags[:window])
    best = count
    for i in range(window, len(flags)):
        count += flags[i] - flags[i - window]
        best = max(best, count)
    return best


def design_dwell_time(delta_bar: float, alpha: float, r_target_sq: float) -> int:
    """Smallest dwell time whose steady-state energy radius meets the target.

    Solves C~ / (1 - gamma^T) <= r_target_sq with C~ = delta_bar^2 / alpha
    and gamma = 1 - alpha. Raises InfeasibleDwellError when C~ >= target,
    where no finite dwell time suffices.
    """
    if delta_bar < 0:
        raise ValueError("delta_bar must be >= 0")
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must be in (0,1)")
    if r_target_sq <= 0:
        raise ValueError("r_target_sq must be > 0")
    if delta_bar == 0.0:
        return 1
    c_tilde = delta_bar * delta_bar / alpha
    if c_tilde >= r_target_sq:
        raise InfeasibleDwellError(
            f"radius target {r_target_sq} unreachable: injection constant {c_tilde}"
        )
    gamma = 1.0 - alpha
    t_d = math.ceil(math.log(1.0 - c_tilde / r_target_sq) / math.log(gamma))
    return max(1, t_d)


def steady_state_radius(delta_bar: float, alpha: float, t_d: int) -> float:
    c_tilde = delta_bar * delta_bar / alpha
    gamma = 1.0 - alpha
    return c_tilde / (1.0 - gamma ** t_d)


def block_audit(trace: RelaxTrace, t_d: int | None = None) -> list[BlockReport]:
    """Tile the trace into dwell blocks and audit energy and peak movement.

    Per block: energy at the block start, whether a switch fell inside, and
    the change of peak unnormalized centrality across the block. The
    inter-block recurrence V_{m+1} <= gamma^t_d * V_m + C~_obs is verified
    with the observed-diameter injection constant.
    """
    if t_d is None:
        t_d = trace.cfg.t_d
    recs = trace.records
    if len(recs) < t_d + 1:
        raise ValueError(f"trace ({len(recs)} records) shorter than one block of {t_d}")
    gamma = 1.0 - trace.cfg.alpha
    dbar = observed_delta_bar(trace)
    c_tilde = dbar * dbar / trace.cfg.alpha
    reports: list[BlockReport] = []
    starts = list(range(0, len(recs) - 1, t_d))
    for m, tau in enumerate(starts):
        end = min(tau + t_d, len(recs) - 1)
        v_start = lyapunov_value(recs[tau].s, recs[tau].normalized)
        switch = any(r.switched for r in recs[tau + 1:end + 1])
        peak_before = float(recs[tau].kappa.max())
        peak_after = float(recs[end].kappa.max())
        if m + 1 < len(starts):
            v_next = lyapunov_value(recs[starts[m + 1]].s, recs[starts[m + 1]].normalized)
            recurrence = v_next <= gamma ** t_d * v_start + c_tilde + DROP_JUMP_TOL
        else:
            recurrence = True
        reports.append(BlockReport(m, tau, v_start, switch, peak_before,
                                   peak_after, peak_before - peak_after, recurrence))
    return reports


def capacity_metrics(kappa, mu) -> tuple[float, float]:
    """Capacity ratio pair (rho_max, robust_lower) for load per centrality.

    rho_max = min over nodes with kappa_i > 0 of mu_i / kappa_i (nodes with
    no transit load impose no constraint); robust_lower = min(mu)/max(kappa).
    """
    kappa = np.asarray(kappa, dtype=float)
    mu = np.asarray(mu, dtype=float)
    if kappa.shape != mu.shape:
        raise ValueError("kappa and mu must have matching shapes")
    if np.any(mu <= 0):
        raise ValueError("service rates must be > 0")
    if np.any(kappa < 0):
        raise ValueError("centrality entries must be >= 0")
    top = kappa.max()
    if top == 0:
        raise ValueError("all-zero centrality: capacity is undefined")
    loaded = kappa > 0
    rho_max = float(np.min(mu[loaded] / kappa[loaded]))
    robust_lower = float(mu.min() / top)
    return rho_max, robust_lower
