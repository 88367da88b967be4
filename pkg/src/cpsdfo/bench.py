"""Benchmark harness: run matrices, convergence costs, profiles.

A run is *converged* for accuracy tau when it closes enough of the gap
between the starting value and the best value any solver found:

    f(x0) - f <= tau * (f(x0) - f_star)   i.e.
    f(x0) - f >= (1 - tau) * (f(x0) - f_star).

The best known value f_star for a problem instance is taken over all
runs, restricted to their first ``mu_f`` full-evaluation equivalents.
The cost of a run is the smallest evaluation count at which its history
passes the test.  Performance profiles compare cost ratios against the
best solver per instance; data profiles measure the fraction of
instances solved within a budget of ``k (n+1)`` equivalents.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, replace
from pathlib import Path

from .records import RunRecord

__all__ = [
    "MU_F",
    "TAU_DEFAULT",
    "ProfileCurve",
    "best_known",
    "converged",
    "data_profile",
    "evals_to_converge",
    "format_profile",
    "load_records",
    "performance_profile",
    "run_matrix",
    "save_records",
]

TAU_DEFAULT = 1e-4
MU_F = 100_000

Key = tuple[str, int, int]  # (problem, n, seed)


def _key(record: RunRecord) -> Key:
    return (record.problem, record.n, record.seed)


def converged(record: RunRecord, f0: float, f_star: float, tau: float) -> bool:
    """Whether the run closed a 1 - tau fraction of the optimality gap."""
    return record.best_f <= f0 - (1.0 - tau) * (f0 - f_star)


def evals_to_converge(
    record: RunRecord, f0: float, f_star: float, tau: float
) -> float:
    """Evaluation equivalents at which the run first converged; inf if never."""
    target = f0 - (1.0 - tau) * (f0 - f_star)
    for e, f in record.history:
        if f <= target:
            return float(e)
    return math.inf


def best_known(records: list[RunRecord], mu_f: int = MU_F) -> dict[Key, float]:
    """Best value per instance over all runs, within mu_f equivalents."""
    best: dict[Key, float] = {}
    for rec in records:
        vals = [f for e, f in rec.history if e <= mu_f]
        if not vals:
            continue
        v = min(vals)
        key = _key(rec)
        if key not in best or v < best[key]:
            best[key] = v
    return best


@dataclass(frozen=True)
class ProfileCurve:
    """One solver's profile: nondecreasing step function points."""

    label: str
    points: tuple[tuple[float, float], ...]


def _costs(records: list[RunRecord], tau: float, mu_f: int):
    """Per-solver convergence cost of every instance appearing in records."""
    f_star = best_known(records, mu_f)
    f0: dict[Key, float] = {}
    for rec in records:
        key = _key(rec)
        start = rec.history[0][1]
        f0[key] = min(start, f0.get(key, math.inf))
    solvers: list[str] = []
    costs: dict[str, dict[Key, float]] = defaultdict(dict)
    for rec in records:
        key = _key(rec)
        if rec.variant not in solvers:
            solvers.append(rec.variant)
        if key in costs[rec.variant]:
            continue
        costs[rec.variant][key] = evals_to_converge(rec, f0[key], f_star[key], tau)
    keys = sorted(f0)
    return solvers, keys, costs


def _step_curve(xs: list[float], total: int) -> tuple[tuple[float, float], ...]:
    """Step function through the finite xs: fraction solved by each x."""
    finite = sorted(x for x in xs if math.isfinite(x))
    if not finite:
        return ((1.0, 0.0),)
    points = []
    done = 0
    for x in finite:
        done += 1
        if points and points[-1][0] == x:
            points[-1] = (x, done / total)
        else:
            points.append((x, done / total))
    return tuple(points)


def performance_profile(
    records: list[RunRecord], tau: float = TAU_DEFAULT, mu_f: int = MU_F
) -> list[ProfileCurve]:
    """Cost-ratio profiles: fraction of instances within each ratio."""
    solvers, keys, costs = _costs(records, tau, mu_f)
    curves = []
    for solver in solvers:
        ratios = []
        for key in keys:
            best = min(costs[s].get(key, math.inf) for s in solvers)
            mine = costs[solver].get(key, math.inf)
            if not math.isfinite(mine):
                ratios.append(math.inf)
            elif mine == best:  # covers zero-cost instances: 0/0 is ratio 1
                ratios.append(1.0)
            else:
                ratios.append(mine / best if best > 0 else math.inf)
        curves.append(ProfileCurve(solver, _step_curve(ratios, len(keys))))
    return curves


def data_profile(
    records: list[RunRecord], tau: float = TAU_DEFAULT, mu_f: int = MU_F
) -> list[ProfileCurve]:
    """Budget profiles: fraction solved within k(n+1) equivalents."""
    solvers, keys, costs = _costs(records, tau, mu_f)
    dims = {(rec.problem, rec.n, rec.seed): rec.n for rec in records}
    curves = []
    for solver in solvers:
        units = []
        for key in keys:
            cost = costs[solver].get(key, math.inf)
            units.append(cost / (dims[key] + 1) if math.isfinite(cost) else math.inf)
        curves.append(ProfileCurve(solver, _step_curve(units, len(keys))))
    return curves


def format_profile(curves: list[ProfileCurve], kind: str, tau: float) -> str:
    """Plain-text profile: a two-column block per solver."""
    lines = [f"# cpsdfo profile kind={kind} tau={tau!r}"]
    for curve in curves:
        lines.append(f"solver: {curve.label}")
        for x, y in curve.points:
            lines.append(f"{x!r} {y!r}")
    return "\n".join(lines) + "\n"


def save_records(records: list[RunRecord], out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for rec in records:
        path = out / rec.default_filename()
        path.write_text(rec.to_text())
        paths.append(path)
    return paths


def load_records(in_dir: str | Path) -> list[RunRecord]:
    paths = sorted(Path(in_dir).glob("*.run"))
    return [RunRecord.from_text(p.read_text()) for p in paths]


def run_matrix(
    instances,
    variants,
    seeds,
    cfg=None,
    out_dir: str | Path | None = None,
    progress=None,
) -> list[RunRecord]:
    """Run every (instance, variant, seed) combination sequentially.

    ``instances`` yields (name, n) pairs.  A run that raises is recorded
    with status "error" instead of aborting the matrix.  Records are
    written to ``out_dir`` as they finish when it is given.
    """
    from .pattern import SolverConfig, solve
    from .suite import instantiate

    cfg = cfg or SolverConfig()
    out = None
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
    records = []
    for name, n in instances:
        problem = instantiate(name, n)
        for variant in variants:
            for seed in seeds:
                run_cfg = replace(cfg, seed=seed)
                try:
                    rec = solve(problem, variant, run_cfg)
                except Exception as exc:  # keep the matrix going
                    rec = RunRecord(
                        problem=name,
                        n=n,
                        variant=variant,
                        seed=seed,
                        status="error",
                        final_f=math.inf,
                        full_equivalents=0,
                        history=((0, math.inf),),
                        wall_time=0.0,
                    )
                    if progress is not None:
                        progress(f"{name} n={n} {variant} seed={seed} error: {exc}")
                records.append(rec)
                if out is not None:
                    (out / rec.default_filename()).write_text(rec.to_text())
                if progress is not None and rec.status != "error":
                    progress(
                        f"{name} n={n} {variant} seed={seed} "
                        f"status={rec.status} f={rec.final_f:.6g} "
                        f"evals={rec.full_equivalents}"
                    )
    return records
