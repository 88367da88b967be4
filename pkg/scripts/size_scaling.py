"""Evaluation cost of one solver variant across problem sizes.

For a chained CPS problem the structured variants poll a number of
subspace collections that does not grow with n, so the evaluation count
to convergence should stay nearly flat while the unstructured count
grows with the dimension.  This script runs one variant over the
admissible sizes of one problem and prints the median cost per size.
"""

import argparse
import math

from cpsdfo.pattern import SolverConfig, solve
from cpsdfo.suite import REGISTRY, instantiate


def _median(xs):
    s = sorted(xs)
    return s[len(s) // 2]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--problem", default="BROYDN3D")
    ap.add_argument("--variant", default="ps")
    ap.add_argument("--budget", type=int, default=20000)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--max-n", type=int, default=1000, help="skip sizes above this")
    args = ap.parse_args()

    name = args.problem.upper()
    sizes = [n for n in REGISTRY[name].dims if n <= args.max_n]
    print(f"{name} variant={args.variant} budget={args.budget} seeds={args.seeds}")
    print(f"{'n':>6s} {'median':>8s} {'converged':>9s} {'best f':>12s}")
    for n in sizes:
        prob = instantiate(name, n)
        evals, best, done = [], math.inf, 0
        for seed in range(args.seeds):
            rec = solve(prob, args.variant, SolverConfig(seed=seed, max_full_evals=args.budget))
            evals.append(rec.full_equivalents if rec.status == "converged" else math.inf)
            done += rec.status == "converged"
            best = min(best, rec.final_f)
        print(f"{n:6d} {_median(evals):8g} {done:6d}/{args.seeds:<2d} {best:12.4g}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
