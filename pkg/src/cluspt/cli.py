"""Command line interface: solve, bench, stats, convergence, generate."""

from __future__ import annotations

import argparse
import os
import sys

from . import metrics, stats
from .errors import (
    CluSPTError,
    DisconnectedClusterGraph,
    DisconnectedSubgraph,
    InfeasibleRoots,
    ParseError,
    ValidationError,
)
from .gacspt import GaConfig
from .instances import generate_instance, parse_instance, serialize_instance
from .lsea import LowerConfig

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3


def _load_instance(path):
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def _configs(args):
    ga = GaConfig(
        pop_size=args.pop or 200,
        max_generations=args.gens or 6000,
        mutation_rate=args.mut,
        crossover_rate=args.rmp,
    )
    lower = LowerConfig(
        pop_size=args.pop or 20,
        eval_budget=args.budget,
        mutation_rate=args.mut,
        crossover_rate=args.rmp,
        stall_generations=args.stall,
    )
    return ga, lower


def _solution_file(sol):
    lines = [f"# cost = {sol.cost!r}"]
    for p, v, w in sorted(sol.tree.edges()):
        lines.append(f"{p + 1} {v + 1} {w!r}")
    return "\n".join(lines) + "\n"


def cmd_solve(args):
    inst = _load_instance(args.instance)
    ga_cfg, lower_cfg = _configs(args)
    sol, rec = metrics.run_single(inst, args.algo, args.seed, ga_cfg, lower_cfg)
    print(f"{inst.name} {args.algo} seed={args.seed} "
          f"cost={sol.cost!r} evals={rec.evals}")
    out = args.out or f"{inst.name}.{args.algo}.{args.seed}.sol"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(_solution_file(sol))
    return EXIT_OK


def cmd_bench(args):
    paths = sorted(
        os.path.join(args.dir, f) for f in os.listdir(args.dir)
        if f.endswith((".cluspt", ".txt")))
    instances = [_load_instance(p) for p in paths]
    if not instances:
        print("no instance files found", file=sys.stderr)
        return EXIT_PARSE
    ga_cfg, lower_cfg = _configs(args)
    failures = []
    summary, records = metrics.run_campaign(
        instances, args.algos, runs_per=args.runs, base_seed=args.seed,
        ga_cfg=ga_cfg, lower_cfg=lower_cfg,
        on_error=lambda i, a, s, e: failures.append((i, a, s, str(e))))
    os.makedirs(args.out, exist_ok=True)
    metrics.write_records(records, os.path.join(args.out, "results.jsonl"))
    with open(os.path.join(args.out, "summary.csv"), "w", encoding="utf-8") as fh:
        fh.write(summary.to_csv())
    for i, a, s, e in failures:
        print(f"FAILED {i} {a} seed={s}: {e}", file=sys.stderr)
    print(f"wrote {len(records)} records to {args.out}")
    return EXIT_OK


def _read_baseline(path):
    best = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            name, value = line.split()
            best[name] = float(value)
    return best


def cmd_stats(args):
    records = metrics.read_records(args.results)
    summary = metrics.summarize(records)
    print(summary.to_csv(), end="")
    baseline = _read_baseline(args.baseline) if args.baseline else None
    if baseline:
        print("\ninstance,algo,RPD%")
        for row in summary.rows:
            if row["instance"] in baseline:
                val = metrics.rpd(row["Avg"], baseline[row["instance"]])
                print(f"{row['instance']},{row['algo']},{val:.2f}")
    # algorithm x instance matrix of mean costs
    algos = sorted({r["algo"] for r in summary.rows})
    insts = sorted({r["instance"] for r in summary.rows})
    cell = {(r["algo"], r["instance"]): r["Avg"] for r in summary.rows}
    if len(algos) >= 2 and len(insts) >= 2 and \
            all((a, i) in cell for a in algos for i in insts):
        matrix = [[cell[(a, i)] for i in insts] for a in algos]
        report = stats.friedman_suite(algos, matrix)
        print(f"\nFriedman chi2 = {report.friedman.statistic:.4f} "
              f"p = {report.friedman.p_value:.4g}")
        if report.iman_davenport_f is not None:
            print(f"Iman-Davenport F = {report.iman_davenport_f:.4f} "
                  f"p = {report.iman_davenport_p:.4g}")
        for label, rep in (("Friedman", report.friedman),
                           ("Friedman-Aligned", report.aligned),
                           ("Quade", report.quade)):
            if rep is None:
                continue
            ranks = " ".join(f"{a}={r:.3f}"
                             for a, r in zip(algos, rep.mean_ranks))
            print(f"{label} ranks: {ranks} (control {rep.control})")
            for c in rep.comparisons:
                print(f"  vs {c.algorithm}: z={c.z:.3f} p={c.p:.4g} "
                      f"holm={c.holm:.4g} holland={c.holland:.4g} "
                      f"hochberg={c.hochberg:.4g} hommel={c.hommel:.4g}")
        for (a, b), res in report.wilcoxon.items():
            if res is None:
                print(f"Wilcoxon {a} vs {b}: all tied")
            else:
                n, rp, rm, p = res
                print(f"Wilcoxon {a} vs {b}: N={n} R+={rp} R-={rm} p={p:.4g}")
    return EXIT_OK


def cmd_convergence(args):
    records = metrics.read_records(args.results)
    algos = sorted({r.algo for r in records})
    curves = {
        a: metrics.average_normalized_traces(
            [r.trace for r in records if r.algo == a])
        for a in algos
    }
    length = max((len(c) for c in curves.values()), default=0)
    lines = ["generation," + ",".join(algos)]
    for i in range(length):
        vals = []
        for a in algos:
            c = curves[a]
            vals.append(repr(c[i] if i < len(c) else c[-1]) if c else "")
        lines.append(f"{i}," + ",".join(vals))
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_generate(args):
    inst = generate_instance(args.n, args.k, layout=args.layout, seed=args.seed)
    out = args.out or f"{inst.name}.cluspt"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(inst))
    print(f"wrote {out}")
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="cluspt",
                                 description="Clustered shortest-path tree solvers")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--pop", type=int, default=None)
        p.add_argument("--gens", type=int, default=None)
        p.add_argument("--budget", type=int, default=1200)
        p.add_argument("--rmp", type=float, default=0.9)
        p.add_argument("--mut", type=float, default=0.1)
        p.add_argument("--stall", type=int, default=None,
                       help="lower-level generations without improvement "
                            "before an early stop")

    p = sub.add_parser("solve", help="run one algorithm on one instance")
    p.add_argument("instance")
    p.add_argument("--algo", choices=metrics.ALGORITHMS, required=True)
    p.add_argument("--out", default=None)
    add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run a campaign over a directory")
    p.add_argument("dir")
    p.add_argument("--algos", nargs="+", choices=metrics.ALGORITHMS,
                   default=list(metrics.ALGORITHMS))
    p.add_argument("--runs", type=int, default=30)
    p.add_argument("--out", default="results")
    add_common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("stats", help="summaries and nonparametric tests")
    p.add_argument("results")
    p.add_argument("--baseline", default=None)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("convergence", help="averaged normalized traces")
    p.add_argument("results")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("generate", help="write a synthetic instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--layout", choices=("uniform-square", "grid-cells"),
                   default="uniform-square")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_generate)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DisconnectedSubgraph, DisconnectedClusterGraph, InfeasibleRoots) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CluSPTError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
