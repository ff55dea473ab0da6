"""Command-line entry points.

Subcommands: generate, relax, analyze, simulate, experiment. Delimited
output goes to the requested file; `--plots` additionally renders figures
next to it.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from . import experiments as ex
from .controller import RelaxTrace, SraConfig, run_relaxation
from .policies import make_policy, policy_routes_snapshot
from .stability import block_audit, switch_census, verify_drop_jump
from .topology import TopologySpec, generate_with_retries, load_edge_list, save_edge_list
from .traffic import TrafficConfig, TrafficMetrics, simulate


def _read_graph(path: str):
    return load_edge_list(Path(path).read_text())


def cmd_generate(args) -> int:
    spec = TopologySpec(model=args.model, n=args.n, ba_m=args.m, ws_k=args.k,
                        ws_p=args.p, er_p=args.p, seed=args.seed)
    g, retries = generate_with_retries(spec)
    out = Path(args.output)
    out.write_text(f"# model={args.model} n={args.n} seed={args.seed} retries={retries}\n"
                   + save_edge_list(g))
    print(f"wrote {out} ({g.n} nodes, {len(g.edges)} edges, {retries} retries)")
    return 0


def cmd_relax(args) -> int:
    g = _read_graph(args.graph)
    cfg = SraConfig(alpha=args.alpha, beta_i=args.beta, eps=args.eps,
                    k_max=args.max_iter, t_d=args.td)
    trace = run_relaxation(g, cfg)
    Path(args.output).write_text(trace.to_csv(full=args.full))
    print(f"{trace.status} after {trace.final.k} iterations; "
          f"peak centrality {trace.records[0].kappa.max():.2f} -> "
          f"{trace.final.kappa.max():.2f}")
    if args.plots:
        from .plotting import save_trace_figure
        fig = save_trace_figure(trace, Path(args.output).with_suffix(".png"))
        print(f"figure: {fig}")
    return 0


def cmd_analyze(args) -> int:
    trace = RelaxTrace.from_csv(Path(args.trace).read_text())
    report = verify_drop_jump(trace)
    print(f"drop-jump: {len(report.records)} steps, "
          f"{'all hold' if report.all_hold else 'VIOLATIONS'}; "
          f"tail energy {report.limsup_estimate:.3e} "
          f"(bound {report.ultimate_bound:.3e})")
    t_d = args.td or trace.cfg.t_d
    window = args.window or min(len(trace.records), 5 * t_d)
    ns = switch_census(trace, window)
    print(f"switch census: {ns} in any window of {window} "
          f"(bound {1 + window // t_d})")
    blocks = block_audit(trace, t_d)
    out = Path(args.output)
    with out.open("w") as fh:
        fh.write("block,start,v_start,contained_switch,peak_before,peak_after,"
                 "delta,recurrence_holds\n")
        for b in blocks:
            fh.write(f"{b.index},{b.start},{b.v_start!r},{int(b.contained_switch)},"
                     f"{b.peak_before!r},{b.peak_after!r},{b.delta!r},"
                     f"{int(b.recurrence_holds)}\n")
    print(f"wrote {out} ({len(blocks)} blocks)")
    return 0


def cmd_simulate(args) -> int:
    g = _read_graph(args.graph)
    cfg = TrafficConfig(total_timesteps=args.steps, warmup=args.warmup,
                        load=args.load, seed=args.seed)
    policy = make_policy(args.policy, SraConfig(), live=not args.sra_static)
    metrics = simulate(g, policy, cfg)
    out = Path(args.output)
    out.write_text("policy,load,seed,steps,warmup," + ",".join(TrafficMetrics.CSV_FIELDS)
                   + "\n"
                   + f"{args.policy},{args.load!r},{args.seed},{args.steps},"
                     f"{args.warmup},{metrics.csv_row()}\n")
    print(f"wrote {out}: pdr={metrics.pdr:.3f} loss={metrics.loss_rate:.3f} "
          f"latency={metrics.mean_latency:.2f}")
    if args.dump_routes:
        table = policy_routes_snapshot(policy, g)
        with open(args.dump_routes, "w") as fh:
            fh.write("source,dest,next_hop\n")
            for s, row in enumerate(table):
                for t, h in enumerate(row):
                    fh.write(f"{s},{t},{h}\n")
        print(f"routes: {args.dump_routes}")
    return 0


def cmd_experiment(args) -> int:
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    spec = TopologySpec(model=args.topology, n=args.n, seed=args.seed)
    manifest = {"family": args.family, "topology": asdict(spec),
                "trials": args.trials, "seed": args.seed, "plots": args.plots}

    if args.family == "structural":
        rows = ex.structural_experiment(spec, args.trials, args.seed)
        _write(outdir / "structural.csv", ex.STRUCTURAL_HEADER,
               [r.csv_row() for r in rows])
    elif args.family == "capacity":
        result = ex.capacity_validation(n_samples=args.trials, seed_base=args.seed)
        _write(outdir / "capacity.csv", "model,n,seed,x,y",
               [f"{s.model},{s.n},{s.seed},{s.x!r},{s.y!r}" for s in result.samples])
        manifest["r_squared"] = result.r_squared
        manifest["skipped"] = result.skipped
        if args.plots:
            from .plotting import save_capacity_figure
            save_capacity_figure(result, outdir / "capacity.png")
    elif args.family == "sweep":
        cells = ex.load_sweep(spec, trials=args.trials, seed_base=args.seed)
        _write(outdir / "sweep.csv", ex.SWEEP_HEADER,
               [f"{c.policy},{c.load!r},{c.trials},{c.mean.csv_row()},{c.std.csv_row()}"
                for c in cells])
        if args.plots:
            from .plotting import save_sweep_figure
            save_sweep_figure(cells, outdir / "sweep.png")
    elif args.family == "attack":
        points = ex.attack_experiment(spec, trials=args.trials, seed_base=args.seed)
        _write(outdir / "attack.csv", ex.ATTACK_HEADER,
               [f"{p.fraction!r},{p.removed},{p.pdr_sra_mean!r},"
                f"{p.pdr_dijkstra_mean!r},{p.advantage_mean!r},{p.advantage_std!r}"
                for p in points])
        if args.plots:
            from .plotting import save_attack_figure
            save_attack_figure(points, outdir / "attack.png")
    elif args.family == "sensitivity":
        cells = ex.sensitivity_experiment(spec=spec, trials=args.trials,
                                          seed_base=args.seed)
        _write(outdir / "sensitivity.csv", ex.SENSITIVITY_HEADER,
               [f"{c.alpha!r},{c.beta_i!r},{c.peak_change_pct!r},"
                f"{c.path_length_change_pct!r},{c.switches!r},{c.metrics.csv_row()}"
                for c in cells])
    else:  # pragma: no cover - argparse restricts choices
        raise SystemExit(f"unknown family {args.family}")

    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"results in {outdir}")
    return 0


def _write(path: Path, header: str, rows: list[str]) -> None:
    path.write_text(header + "\n" + "\n".join(rows) + "\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sysrelax",
                                description="betweenness-driven cost relaxation toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a random topology")
    g.add_argument("--model", choices=["ba", "ws", "er"], required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, default=4, help="BA attachment count")
    g.add_argument("--k", type=int, default=8, help="WS ring neighbors (even)")
    g.add_argument("--p", type=float, default=0.1, help="WS rewiring / ER edge probability")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("relax", help="run the cost relaxation loop")
    r.add_argument("--graph", required=True)
    r.add_argument("--alpha", type=float, default=0.1)
    r.add_argument("--beta", type=float, default=10.0)
    r.add_argument("--eps", type=float, default=1e-5)
    r.add_argument("--max-iter", type=int, default=200)
    r.add_argument("--td", type=int, default=1)
    r.add_argument("--full", action="store_true", help="dump per-node vectors")
    r.add_argument("--plots", action="store_true")
    r.add_argument("-o", "--output", required=True)
    r.set_defaults(func=cmd_relax)

    a = sub.add_parser("analyze", help="stability diagnostics over a trace CSV")
    a.add_argument("--trace", required=True, help="full trace CSV from `relax --full`")
    a.add_argument("--window", type=int, default=0)
    a.add_argument("--td", type=int, default=0)
    a.add_argument("-o", "--output", default="blocks.csv")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("simulate", help="packet-level traffic simulation")
    s.add_argument("--graph", required=True)
    s.add_argument("--policy", choices=["sra", "dijkstra", "lirpd", "qrouting"],
                   required=True)
    s.add_argument("--load", type=float, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--steps", type=int, default=2000)
    s.add_argument("--warmup", type=int, default=300)
    s.add_argument("--sra-static", action="store_true",
                   help="freeze converged costs instead of live updates")
    s.add_argument("--dump-routes", default=None)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_simulate)

    e = sub.add_parser("experiment", help="run a seeded experiment family")
    e.add_argument("family", choices=["structural", "capacity", "sweep",
                                      "attack", "sensitivity"])
    e.add_argument("--topology", choices=["ba", "ws", "er"], default="ba")
    e.add_argument("--n", type=int, default=100)
    e.add_argument("--trials", type=int, default=20)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--plots", action="store_true")
    e.add_argument("-o", "--output", required=True)
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
