"""Three-variant study on the small benchmark set.

Runs unstructured pattern search, structured pattern search (ps) and
structured search with interpolation models (ps-models) over the small
problem set, then reports per-problem median evaluation counts to
convergence and writes performance and data profiles.  Convergence is
measured against the best objective value any run reached on the same
(problem, n, seed) instance.
"""

import argparse
import math
from pathlib import Path

from cpsdfo.bench import (
    TAU_DEFAULT,
    best_known,
    data_profile,
    evals_to_converge,
    format_profile,
    performance_profile,
    run_matrix,
    save_records,
)
from cpsdfo.pattern import SolverConfig
from cpsdfo.suite import bench_instances

VARIANTS = ("unstructured", "ps", "ps-models")


def _median(xs):
    s = sorted(xs)
    return s[len(s) // 2]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--budget", type=int, default=20000, help="full-equivalents per run")
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--tau", type=float, default=TAU_DEFAULT)
    ap.add_argument("--out-dir", default="study_out", help="records and profiles go here")
    args = ap.parse_args()

    out = Path(args.out_dir)
    instances = bench_instances("small")
    cfg = SolverConfig(max_full_evals=args.budget)
    records = run_matrix(instances, VARIANTS, range(args.seeds), cfg=cfg, progress=print)
    save_records(records, out / "records")

    f_star = best_known(records)
    print(f"\nmedian (and mean) evaluations to convergence, tau={args.tau:g}")
    print(f"{'problem':10s}" + "".join(f" {v:>20s}" for v in VARIANTS))
    for name, n in instances:
        cells = []
        for variant in VARIANTS:
            costs = [
                evals_to_converge(r, r.history[0][1], f_star[(name, n, r.seed)], args.tau)
                for r in records
                if (r.problem, r.variant) == (name, variant)
            ]
            finite = [c for c in costs if math.isfinite(c)]
            mean = sum(finite) / len(finite) if len(finite) == len(costs) else math.inf
            cells.append(f"{_median(costs):8g} ({mean:8g})")
        print(f"{name:10s}" + "".join(f" {c:>20s}" for c in cells))

    for kind, build in (("perf", performance_profile), ("data", data_profile)):
        path = out / f"profile_{kind}.txt"
        path.write_text(format_profile(build(records, tau=args.tau), kind, args.tau))
        print(f"{kind} profile written to {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
