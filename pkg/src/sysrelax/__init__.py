"""Betweenness-driven relaxation of network node costs.

A leaky-integrator controller senses per-node betweenness centrality,
accumulates it into a pressure state, and reshapes the node-cost landscape
that shortest-path routing minimizes over. The package bundles the
controller with random-topology generators, a packet-level traffic
simulator, four routing policies, stability diagnostics, and seeded
experiment harnesses.
"""

from .controller import RelaxTrace, SraConfig, SraState, relax_step, run_relaxation
from .routing import (CentralityReport, ShortestPathDag, betweenness, mean_route_hops,
                      normalize_centrality, select_route, shortest_path_dag)
from .stability import (block_audit, capacity_metrics, design_dwell_time,
                        lyapunov_value, switch_census, verify_drop_jump)
from .policies import make_policy, policy_routes_snapshot
from .topology import Graph, TopologySpec, generate, load_edge_list, save_edge_list
from .traffic import TrafficConfig, TrafficMetrics, critical_load, simulate

__all__ = [
    "CentralityReport", "Graph", "RelaxTrace", "ShortestPathDag", "SraConfig",
    "SraState", "TopologySpec", "TrafficConfig", "TrafficMetrics", "betweenness",
    "block_audit", "capacity_metrics", "critical_load", "design_dwell_time",
    "generate", "load_edge_list", "lyapunov_value", "make_policy",
    "mean_route_hops", "normalize_centrality", "policy_routes_snapshot",
    "relax_step", "run_relaxation", "save_edge_list", "select_route",
    "shortest_path_dag", "simulate", "switch_census", "verify_drop_jump",
]
