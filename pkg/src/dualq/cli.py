"""Command-line experiment harness.

Subcommands: `run` one scenario file, `grid` one of the built-in scenario
matrices, `analyze` analytic quantities, `list-scenarios` grid contents.
Output tree: ``out/<grid>/<scenario-key>/{manifest.json, scenario.json,
qdelay.csv, flows.csv, signals.csv, fct.csv, summary.csv}``.
"""

from __future__ import annotations

import argparse
import csv
import json
import multiprocessing
import os
import sys
from pathlib import Path

from .analysis import CouplingInputs, coupling_factor, predict_rate_ratio
from .runner import run_scenario, summarize, write_outputs
from .workload import GRID_KINDS, Scenario, build_scenario_grid

DEFAULT_DURATION = 250.0


def _jobs(args) -> int:
    if args.jobs:
        return args.jobs
    env = os.environ.get("DUALQ_JOBS")
    return int(env) if env else 1


def _run_one(task):
    scenario, out_dir = task
    result = run_scenario(scenario)
    write_outputs(result, out_dir)
    return scenario.key


def _cmd_run(args) -> int:
    try:
        scenario = Scenario.load(args.scenario)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {args.scenario}: {exc}", file=sys.stderr)
        return 1
    if args.duration:
        scenario.duration_s = args.duration
    if args.seed is not None:
        scenario.seed = args.seed
    result = run_scenario(scenario)
    write_outputs(result, args.out)
    for metric, m, *_ in summarize(result):
        if m is not None:
            print(f"{metric:>20s}  {m:.6f}")
    return 0


def _cmd_grid(args) -> int:
    duration = args.duration or DEFAULT_DURATION
    scenarios = build_scenario_grid(args.kind, duration, args.seed or 1)
    root = Path(args.out) / args.kind
    tasks = [(sc, root / sc.key) for sc in scenarios]
    jobs = _jobs(args)
    failures = []
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            for key in pool.imap_unordered(_run_one, tasks):
                print(f"done {key}")
    else:
        for task in tasks:
            try:
                print(f"done {_run_one(task)}")
            except Exception as exc:  # keep going; report at the end
                failures.append((task[0].key, exc))
                print(f"FAIL {task[0].key}: {exc}", file=sys.stderr)
    # merged grid summary, in deterministic scenario order
    with open(root / "summary.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["scenario", "metric", "mean", "p1", "p25", "p99"])
        for sc in scenarios:
            per = root / sc.key / "summary.csv"
            if per.exists():
                with open(per, newline="") as g:
                    for row in list(csv.reader(g))[1:]:
                        w.writerow(row)
    if failures:
        print(f"{len(failures)} scenario(s) failed", file=sys.stderr)
        return 1
    return 0


def _cmd_analyze(args) -> int:
    if args.what == "coupling":
        res = coupling_factor(CouplingInputs(beta_c=args.beta_c,
                                             target=args.target,
                                             r_b_star=args.r_b_star))
        print(f"{res.k:.2f}")
        if res.outside_validity:
            print("warning: base RTT outside the validity range of the "
                  "derivation", file=sys.stderr)
        return 0
    if args.what == "rate-ratio":
        pred = predict_rate_ratio(args.rtt_l / 1e3, args.rtt_c / 1e3,
                                  k=args.k, beta_c=args.beta_c)
        print(f"{pred.ratio:.4f}")
        return 0
    print(f"error: unknown analysis {args.what!r}", file=sys.stderr)
    return 1


def _cmd_list(args) -> int:
    for sc in build_scenario_grid(args.kind):
        print(sc.key)
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dualq")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="execute one scenario file")
    r.add_argument("--scenario", required=True)
    r.add_argument("--seed", type=int)
    r.add_argument("--duration", type=float)
    r.add_argument("--out", required=True)
    r.set_defaults(fn=_cmd_run)

    g = sub.add_parser("grid", help="execute a built-in scenario grid")
    g.add_argument("--kind", required=True, choices=GRID_KINDS)
    g.add_argument("--duration", type=float)
    g.add_argument("--seed", type=int)
    g.add_argument("--out", required=True)
    g.add_argument("--jobs", type=int)
    g.set_defaults(fn=_cmd_grid)

    a = sub.add_parser("analyze", help="print analytic quantities")
    a.add_argument("what", choices=["coupling", "rate-ratio"])
    a.add_argument("--beta-c", type=float, default=0.7, dest="beta_c")
    a.add_argument("--target", type=float, default=0.015)
    a.add_argument("--r-b-star", type=float, default=0.025, dest="r_b_star")
    a.add_argument("--k", type=float, default=2.0)
    a.add_argument("--rtt-l", type=float, default=10.0,
                   help="scalable flow base RTT, ms")
    a.add_argument("--rtt-c", type=float, default=10.0,
                   help="classic flow base RTT, ms")
    a.set_defaults(fn=_cmd_analyze)

    ls = sub.add_parser("list-scenarios", help="list a grid's scenario keys")
    ls.add_argument("--kind", required=True, choices=GRID_KINDS)
    ls.set_defaults(fn=_cmd_list)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
