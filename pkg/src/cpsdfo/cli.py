"""Command line interface.

Subcommands:

* ``solve``          run one solver variant on one problem instance
* ``bench``          run a benchmark matrix and write run records
* ``profile``        build performance or data profiles from records
* ``list-problems``  show the problem registry and structure stats
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import (
    TAU_DEFAULT,
    data_profile,
    format_profile,
    load_records,
    performance_profile,
    run_matrix,
)
from .models import ModelConfig
from .pattern import VARIANTS, SolverConfig, solve
from .suite import BENCH_SETS, REGISTRY, bench_instances, instantiate

DEFAULT_SEEDS = {"small": 5, "smallish": 3, "medium": 1, "large": 1}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpsdfo",
        description="Derivative-free optimization exploiting coordinate "
        "partially separable structure.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="run one solver on one problem")
    ps.add_argument("--problem", required=True, help="problem name, e.g. ARWHEAD")
    ps.add_argument("--n", type=int, required=True, help="problem dimension")
    ps.add_argument("--variant", default="ps", choices=VARIANTS)
    ps.add_argument("--epsilon", type=float, default=1e-4)
    ps.add_argument("--alpha0", type=float, default=1.0)
    ps.add_argument("--gamma", type=float, default=2.0)
    ps.add_argument("--beta", type=float, default=0.5)
    ps.add_argument("--eta", type=float, default=1e-4)
    ps.add_argument("--iota", type=float, default=1.2550)
    ps.add_argument("--n2", type=int, default=None)
    ps.add_argument("--extra-passes", type=int, default=1)
    ps.add_argument("--max-evals", type=int, default=100_000)
    ps.add_argument("--time-limit", type=float, default=None)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--degree", default="quad", choices=("linear", "diag", "quad"))
    ps.add_argument("--fit", default="minnorm", choices=("minnorm", "subbasis"))
    ps.add_argument("--kill", type=float, default=None, help="conditioning threshold")
    ps.add_argument("--out", default=None, help="write the run record here")

    pb = sub.add_parser("bench", help="run a benchmark matrix")
    pb.add_argument("--set", default="small", choices=sorted(BENCH_SETS))
    pb.add_argument(
        "--variants",
        default="unstructured,ps,ps-models",
        help="comma-separated solver variants",
    )
    pb.add_argument("--seeds", type=int, default=None, help="number of seeds")
    pb.add_argument("--problems", default=None, help="comma-separated problem names")
    pb.add_argument("--budget", type=int, default=100_000)
    pb.add_argument("--time-limit", type=float, default=None, help="per run, seconds")
    pb.add_argument("--out", required=True, help="directory for run records")

    pp = sub.add_parser("profile", help="profiles from stored run records")
    pp.add_argument("--in", dest="in_dir", required=True, help="record directory")
    pp.add_argument("--kind", default="perf", choices=("perf", "data"))
    pp.add_argument("--tau", type=float, default=TAU_DEFAULT)
    pp.add_argument("--out", default=None, help="output path (default: stdout)")

    sub.add_parser("list-problems", help="show the problem registry")
    return parser


def _cmd_solve(args) -> int:
    problem = instantiate(args.problem, args.n)
    cfg = SolverConfig(
        epsilon=args.epsilon,
        alpha0=args.alpha0,
        gamma=args.gamma,
        beta=args.beta,
        eta=args.eta,
        iota=args.iota,
        n2=args.n2,
        max_full_evals=args.max_evals,
        extra_unsuccessful_passes=args.extra_passes,
        seed=args.seed,
        time_limit=args.time_limit,
        model=ModelConfig(degree=args.degree, fit=args.fit, k_ill=args.kill),
    )
    rec = solve(problem, args.variant, cfg)
    print(
        f"{rec.problem} n={rec.n} variant={rec.variant} seed={rec.seed} "
        f"status={rec.status} f={rec.final_f:.8g} "
        f"evals={rec.full_equivalents} time={rec.wall_time:.2f}s"
    )
    if args.out is not None:
        path = Path(args.out)
        if path.is_dir():
            path = path / rec.default_filename()
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(rec.to_text())
        print(f"record written to {path}")
    return 0


def _cmd_bench(args) -> int:
    variants = [v.strip() for v in args.variants.split(",") if v.strip()]
    for v in variants:
        if v not in VARIANTS:
            print(f"unknown variant {v!r}; expected one of {VARIANTS}", file=sys.stderr)
            return 2
    names = None
    if args.problems is not None:
        names = {p.strip().upper() for p in args.problems.split(",") if p.strip()}
    n_seeds = args.seeds if args.seeds is not None else DEFAULT_SEEDS[args.set]
    instances = bench_instances(args.set, names)
    if not instances:
        print("no matching problem instances", file=sys.stderr)
        return 2
    cfg = SolverConfig(max_full_evals=args.budget, time_limit=args.time_limit)
    records = run_matrix(
        instances,
        variants,
        seeds=range(n_seeds),
        cfg=cfg,
        out_dir=args.out,
        progress=print,
    )
    print(f"{len(records)} records written to {args.out}")
    return 0


def _cmd_profile(args) -> int:
    records = load_records(args.in_dir)
    if not records:
        print(f"no run records found in {args.in_dir}", file=sys.stderr)
        return 2
    build = performance_profile if args.kind == "perf" else data_profile
    text = format_profile(build(records, tau=args.tau), args.kind, args.tau)
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text)
        print(f"profile written to {args.out}")
    return 0


def _cmd_list_problems(_args) -> int:
    for name in sorted(REGISTRY):
        entry = REGISTRY[name]
        dims = ",".join(str(d) for d in entry.dims)
        print(f"{name:10s} dims: {dims}")
        print(f"{'':10s} {entry.stats_doc}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "bench": _cmd_bench,
        "profile": _cmd_profile,
        "list-problems": _cmd_list_problems,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
