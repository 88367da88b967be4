"""Pattern search drivers for bound-constrained minimization.

Two drivers share the same poll mechanics:

* ``solve_unstructured`` polls the full space along a random orthonormal
  basis, expanding the stepsize on success and shrinking it otherwise.
* ``solve_structured`` exploits a coordinate partially separable
  decomposition: variables are grouped into subspaces touching identical
  element sets, subspaces that share no element are polled together in
  collections at independent stepsizes, and candidate moves from one
  collection are spliced into the iterate only when their summed
  decrease passes the sufficient-decrease test.  Once every subspace
  stepsize is small, a second pass polls a few random full-space
  directions to guard against blocked coordinate moves.

Both drivers charge evaluations to a shared ledger; restricted
evaluations of a few elements cost a fraction of a full objective
evaluation.  Optionally a model-based search step runs before each poll.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .models import ModelConfig, SearchState, search_step_full, search_step_structured
from .problem import CpsProblem, EvalLedger, evaluate_full_with_values
from .records import RunRecord
from .structure import StructureAnalysis, analyze

__all__ = [
    "VARIANTS",
    "BudgetExhausted",
    "PollOutcome",
    "SolverConfig",
    "SolverState",
    "poll_step",
    "random_orthonormal_basis",
    "second_pass",
    "solve",
    "solve_structured",
    "solve_unstructured",
    "structured_sweep",
    "subspace_poll",
]

VARIANTS = ("unstructured", "models", "ps", "ps-models")


class BudgetExhausted(Exception):
    """Raised when the next evaluation would exceed the budget."""


@dataclass
class SolverConfig:
    """Settings shared by all solver variants."""

    epsilon: float = 1e-4  # stepsize convergence threshold
    alpha0: float = 1.0  # initial stepsize
    gamma: float = 2.0  # expansion on sufficient decrease
    beta: float = 0.5  # contraction base
    eta: float = 1e-4  # sufficient decrease constant
    iota: float = 1.2550  # contraction exponent for subspace stepsizes
    n2: int | None = None  # second-pass directions, default min(n, 10)
    max_full_evals: int = 100_000  # budget in full-evaluation equivalents
    extra_unsuccessful_passes: int = 1
    seed: int | None = None
    use_search_step: bool = False
    time_limit: float | None = None  # seconds of wall time
    model: ModelConfig = field(default_factory=ModelConfig)

    def __post_init__(self):
        if self.epsilon <= 0 or self.alpha0 <= 0:
            raise ValueError("epsilon and alpha0 must be positive")
        if self.gamma < 1.0:
            raise ValueError("gamma must be at least 1")
        if not (0.0 < self.beta < 1.0):
            raise ValueError("beta must lie in (0, 1)")
        if self.eta < 0 or self.iota <= 0:
            raise ValueError("eta must be nonnegative and iota positive")
        if self.max_full_evals < 1:
            raise ValueError("max_full_evals must be at least 1")
        if self.extra_unsuccessful_passes < 0:
            raise ValueError("extra_unsuccessful_passes must be nonnegative")


def random_orthonormal_basis(
    dim: int, rng: np.random.Generator, count: int | None = None
) -> np.ndarray:
    """Random orthonormal directions as columns of a (dim, count) array.

    QR factorization of a standard normal matrix with the signs fixed so
    the diagonal of R is positive, which makes the distribution uniform
    over the orthogonal group and the result independent of the QR
    implementation's sign convention.
    """
    if count is None:
        count = dim
    if dim < 1 or count < 1 or count > dim:
        raise ValueError("need 1 <= count <= dim")
    a = rng.standard_normal((dim, count))
    if dim == 1:
        return np.array([[1.0 if a[0, 0] >= 0 else -1.0]])
    q, r = np.linalg.qr(a)
    signs = np.sign(np.diag(r))
    signs[signs == 0.0] = 1.0
    return q * signs


@dataclass
class PollOutcome:
    """Result of polling one basis from one center."""

    x: np.ndarray
    f: float
    moved: bool
    sufficient: bool
    evals: int
    skipped: int


def poll_step(
    evaluate,
    x: np.ndarray,
    f_x: float,
    basis: np.ndarray,
    alpha: float,
    lower: np.ndarray,
    upper: np.ndarray,
    eta: float,
) -> PollOutcome:
    """Poll x +/- alpha*d for each basis column d, moving on decrease.

    The forward point is tried first; the backward point only when the
    forward one did not yield simple decrease.  Any simple decrease
    moves the poll center and skips the rest of that direction.  The
    poll stops early once a trial achieves sufficient decrease
    (f <= f_center - eta * alpha^2).  Trial points are projected onto
    the bounds; a projection that lands exactly on the center is
    skipped without charging an evaluation.
    """
    x_cur = np.asarray(x, dtype=float).copy()
    f_cur = float(f_x)
    moved = False
    sufficient = False
    evals = 0
    skipped = 0
    threshold = eta * alpha * alpha
    for j in range(basis.shape[1]):
        step = alpha * basis[:, j]
        for sign in (1.0, -1.0):
            trial = np.clip(x_cur + sign * step, lower, upper)
            if np.array_equal(trial, x_cur):
                skipped += 1
                continue
            f_trial = float(evaluate(trial))
            evals += 1
            if f_trial < f_cur:
                if f_trial <= f_cur - threshold:
                    sufficient = True
                x_cur = trial
                f_cur = f_trial
                moved = True
                break
        if sufficient:
            break
    return PollOutcome(x_cur, f_cur, moved, sufficient, evals, skipped)


class _PointBuffer:
    """Deduplicated point/value history with amortized array growth."""

    def __init__(self, dim: int):
        self.dim = dim
        self.count = 0
        self._keys: set[bytes] = set()
        self._pts = np.empty((64, dim))
        self._vals = np.empty(64)

    def add(self, point: np.ndarray, value: float) -> None:
        key = point.tobytes()
        if key in self._keys:
            return
        self._keys.add(key)
        if self.count == self._pts.shape[0]:
            self._pts = np.vstack([self._pts, np.empty_like(self._pts)])
            self._vals = np.concatenate([self._vals, np.empty_like(self._vals)])
        self._pts[self.count] = point
        self._vals[self.count] = value
        self.count += 1

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        # views; rows are append-only so they stay valid
        return self._pts[: self.count], self._vals[: self.count]


class SolverState:
    """Mutable per-run state: incumbent, stepsizes, ledger, histories."""

    def __init__(self, problem: CpsProblem, cfg: SolverConfig, structured: bool):
        self.problem = problem
        self.cfg = cfg
        self.structured = structured
        self.ledger = EvalLedger(q=problem.q)
        self.rng = np.random.default_rng(cfg.seed)
        self.track_full = cfg.use_search_step and not structured
        self.track_elements = cfg.use_search_step and structured
        self._full_hist = _PointBuffer(problem.n)
        self._elem_hist = [
            _PointBuffer(len(el.domain))
            for el in (problem.elements if self.track_elements else ())
        ]
        f0, elem0 = self.eval_full_with_values(problem.x0)
        if not math.isfinite(f0):
            raise ValueError("objective is not finite at the starting point")
        self.x_best = problem.x0.copy()
        self.f_best = f0
        self.elem_best = elem0 if structured else None
        self.curve: list[tuple[int, float]] = [(self.ledger.full_equivalent(), f0)]
        if structured:
            self.alphas = np.full(0, cfg.alpha0)  # resized once groups are known
            self.bases: list[np.ndarray] = []
        else:
            self.alpha = cfg.alpha0

    def attach_structure(self, sa: StructureAnalysis) -> None:
        self.alphas = np.full(sa.r, self.cfg.alpha0, dtype=float)
        self.bases = [
            random_orthonormal_basis(len(g), self.rng) for g in sa.groups
        ]
        self.group_elems = [np.asarray(y, dtype=np.intp) for y in sa.group_elements]

    # -- evaluation plumbing ------------------------------------------------

    def check_budget(self) -> None:
        if self.ledger.full_equivalent() >= self.cfg.max_full_evals:
            raise BudgetExhausted

    def eval_full(self, x: np.ndarray) -> float:
        return self.eval_full_with_values(x)[0]

    def eval_full_with_values(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        self.check_budget()
        value, elem_values = evaluate_full_with_values(self.problem, x, self.ledger)
        if self.track_full:
            self._note_full(x, value)
        if self.track_elements:
            for i, el in enumerate(self.problem.elements):
                self._note_element(i, x[el.idx], float(elem_values[i]))
        return value, elem_values

    def eval_element(self, i: int, el, sub: np.ndarray) -> float:
        """One restricted element evaluation (used by the search step)."""
        self.check_budget()
        v = float(el.func(np.asarray(sub, dtype=float)))
        if not math.isfinite(v):
            v = math.inf
        self.ledger.element_evals += 1
        if self.track_elements:
            self._note_element(i, sub, v)
        return v

    def _note_full(self, x: np.ndarray, value: float) -> None:
        self._full_hist.add(np.asarray(x, dtype=float), value)

    def _note_element(self, i: int, sub: np.ndarray, value: float) -> None:
        self._elem_hist[i].add(np.asarray(sub, dtype=float), value)

    def full_history_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return self._full_hist.arrays()

    def element_history_arrays(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        return self._elem_hist[i].arrays()

    # -- incumbent updates --------------------------------------------------

    def current_alpha(self) -> float:
        return float(self.alphas.min()) if self.structured else self.alpha

    def accept(self, x: np.ndarray, f: float) -> None:
        if f >= self.f_best:
            return
        self.x_best = np.array(x, dtype=float)
        self.f_best = float(f)
        self.curve.append((self.ledger.full_equivalent(), self.f_best))

    def accept_structured(self, x: np.ndarray, f: float, elem_values: np.ndarray) -> None:
        if f >= self.f_best:
            return
        self.x_best = np.array(x, dtype=float)
        self.f_best = float(f)
        self.elem_best = np.array(elem_values, dtype=float)
        self.curve.append((self.ledger.full_equivalent(), self.f_best))

    def finish(self, variant: str, status: str, t0: float) -> RunRecord:
        fe = self.ledger.full_equivalent()
        if self.curve[-1] != (fe, self.f_best):
            self.curve.append((fe, self.f_best))
        return RunRecord(
            problem=self.problem.name,
            n=self.problem.n,
            variant=variant,
            seed=self.cfg.seed if self.cfg.seed is not None else -1,
            status=status,
            final_f=self.f_best,
            full_equivalents=fe,
            history=tuple(self.curve),
            wall_time=time.perf_counter() - t0,
        )

    def time_exceeded(self, t0: float) -> bool:
        limit = self.cfg.time_limit
        return limit is not None and (time.perf_counter() - t0) > limit


def subspace_poll(state: SolverState, sa: StructureAnalysis, k: int):
    """Poll one subspace on its restricted objective.

    Returns ``(decrease, update)`` where ``decrease`` is the improvement
    of the restricted objective (0 when the poll failed) and ``update``
    is ``None`` or ``(index_array, local_point, element_ids,
    element_values)`` describing the candidate move.  The subspace
    stepsize is expanded or contracted and its basis redrawn either way.
    """
    problem = state.problem
    cfg = state.cfg
    idx = sa.group_arrays[k]
    elems = sa.group_elements[k]
    elem_arr = state.group_elems[k]
    alpha_k = float(state.alphas[k])
    lo = problem.lower[idx]
    hi = problem.upper[idx]
    baseline = float(state.elem_best[elem_arr].sum())
    y = state.x_best.copy()
    cache: dict[bytes, list[float]] = {}
    elements = problem.elements
    ledger = state.ledger
    track = state.track_elements

    def ev(local: np.ndarray) -> float:
        state.check_budget()
        y[idx] = local
        total = 0.0
        vals = []
        for i in elems:
            el = elements[i]
            sub = y[el.idx]
            v = float(el.func(sub))
            if not math.isfinite(v):
                v = math.inf
            vals.append(v)
            total += v
            if track:
                state._note_element(i, sub, v)
        ledger.element_evals += len(elems)
        cache[local.tobytes()] = vals
        return total

    out = poll_step(ev, state.x_best[idx], baseline, state.bases[k], alpha_k, lo, hi, cfg.eta)
    if out.sufficient:
        state.alphas[k] = alpha_k * cfg.gamma
    elif alpha_k > cfg.epsilon:
        # hold at the resolution floor, as in the unstructured driver:
        # an unbounded shrink would make later polls (and the second
        # pass, which uses min alpha) vanish below float precision
        state.alphas[k] = alpha_k * cfg.beta**cfg.iota
    state.bases[k] = random_orthonormal_basis(len(idx), state.rng)
    if out.moved:
        return baseline - out.f, (idx, out.x, elem_arr, cache[out.x.tobytes()])
    return 0.0, None


def structured_sweep(state: SolverState, sa: StructureAnalysis, observer=None) -> bool:
    """One sweep over all collections; True if an iterate was committed.

    Every subspace of a collection is polled (the loop is never cut
    short), then the candidate moves are spliced into the incumbent only
    if their summed decrease reaches eta times the square of the
    stepsize of the collection's last-polled subspace.  A committed
    splice ends the sweep; insufficient candidate moves are discarded.
    """
    cfg = state.cfg
    e0 = state.ledger.element_evals
    fe0 = state.ledger.full_equivalent()
    committed = False
    any_sufficient = False
    for coll in sa.collections:
        total_dec = 0.0
        updates = []
        last_alpha = 0.0
        for k in coll:
            last_alpha = float(state.alphas[k])  # stepsize used for this poll
            dec, upd = subspace_poll(state, sa, k)
            total_dec += dec
            if upd is not None:
                updates.append(upd)
        if not updates or total_dec < cfg.eta * last_alpha * last_alpha:
            continue
        any_sufficient = True
        x_new = state.x_best.copy()
        elem_new = state.elem_best.copy()
        for idx, local, elem_arr, vals in updates:
            x_new[idx] = local
            elem_new[elem_arr] = vals
        f_new = float(elem_new.sum())
        # splicing is exact for within-collection moves, but guard the
        # incumbent against floating-point surprises anyway
        if f_new < state.f_best:
            state.accept_structured(x_new, f_new, elem_new)
            committed = True
            break
    if observer is not None:
        observer(
            {
                "kind": "sweep",
                "element_evals": state.ledger.element_evals - e0,
                "full_equivalents": state.ledger.full_equivalent() - fe0,
                "sufficient": any_sufficient,
                "committed": committed,
            }
        )
    return committed


def second_pass(state: SolverState, observer=None) -> bool:
    """Poll a few random full-space directions at the smallest stepsize.

    Used once all subspace stepsizes are small: coordinate moves may be
    blocked while a joint move still descends.  Returns True when the
    poll found sufficient decrease (the driver then resumes sweeping).
    """
    problem = state.problem
    cfg = state.cfg
    n2 = cfg.n2 if cfg.n2 is not None else min(problem.n, 10)
    n2 = max(1, min(n2, problem.n))
    basis = random_orthonormal_basis(problem.n, state.rng, count=n2)
    alpha = float(state.alphas.min())
    cache: dict[bytes, np.ndarray] = {}

    def ev(x: np.ndarray) -> float:
        value, elem_values = state.eval_full_with_values(x)
        cache[x.tobytes()] = elem_values
        return value

    e0 = state.ledger.full_equivalent()
    out = poll_step(
        ev, state.x_best, state.f_best, basis, alpha, problem.lower, problem.upper, cfg.eta
    )
    if out.moved and out.f < state.f_best:
        state.accept_structured(out.x, out.f, cache[out.x.tobytes()])
    if observer is not None:
        observer(
            {
                "kind": "second_pass",
                "full_equivalents": state.ledger.full_equivalent() - e0,
                "sufficient": out.sufficient,
                "moved": out.moved,
            }
        )
    return out.sufficient


def solve_unstructured(
    problem: CpsProblem,
    cfg: SolverConfig | None = None,
    observer=None,
    label: str = "unstructured",
) -> RunRecord:
    """Full-space pattern search, optionally with a model search step."""
    cfg = cfg or SolverConfig()
    t0 = time.perf_counter()
    state = SolverState(problem, cfg, structured=False)
    search = SearchState() if cfg.use_search_step else None
    status = "converged"
    failures = 0
    try:
        while True:
            if state.time_exceeded(t0):
                status = "time"
                break
            state.check_budget()
            if search is not None:
                search_step_full(state, problem, search, cfg)
            basis = random_orthonormal_basis(problem.n, state.rng)
            fe0 = state.ledger.full_equivalent()
            out = poll_step(
                state.eval_full,
                state.x_best,
                state.f_best,
                basis,
                state.alpha,
                problem.lower,
                problem.upper,
                cfg.eta,
            )
            if out.moved:
                state.accept(out.x, out.f)
            if observer is not None:
                observer(
                    {
                        "kind": "poll",
                        "alpha": state.alpha,
                        "evals": out.evals,
                        "skipped": out.skipped,
                        "full_equivalents": state.ledger.full_equivalent() - fe0,
                        "moved": out.moved,
                        "sufficient": out.sufficient,
                    }
                )
            if out.moved:
                state.alpha *= cfg.gamma
                failures = 0
            elif state.alpha > cfg.epsilon:
                state.alpha *= cfg.beta
            else:
                failures += 1
                if failures > cfg.extra_unsuccessful_passes:
                    break
    except BudgetExhausted:
        status = "budget"
    return state.finish(label, status, t0)


def solve_structured(
    problem: CpsProblem,
    cfg: SolverConfig | None = None,
    observer=None,
    label: str = "ps",
) -> RunRecord:
    """Structure-exploiting pattern search over subspace collections."""
    cfg = cfg or SolverConfig()
    t0 = time.perf_counter()
    sa = analyze(problem)
    state = SolverState(problem, cfg, structured=True)
    state.attach_structure(sa)
    search = SearchState() if cfg.use_search_step else None
    status = "converged"
    try:
        while True:
            if state.time_exceeded(t0):
                status = "time"
                break
            state.check_budget()
            if search is not None:
                search_step_structured(state, problem, sa, search, cfg)
            committed = structured_sweep(state, sa, observer)
            if committed:
                continue
            if float(state.alphas.min()) > cfg.epsilon:
                continue
            if not second_pass(state, observer):
                break
    except BudgetExhausted:
        status = "budget"
    return state.finish(label, status, t0)


def solve(
    problem: CpsProblem,
    variant: str = "ps",
    cfg: SolverConfig | None = None,
    observer=None,
) -> RunRecord:
    """Run one solver variant on one problem.

    Variants: "unstructured" (full-space pattern search), "models"
    (unstructured plus full-space model search step), "ps" (structured
    pattern search), "ps-models" (structured plus per-element models).
    """
    cfg = cfg or SolverConfig()
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    cfg = replace(cfg, use_search_step=variant in ("models", "ps-models"))
    if variant in ("ps", "ps-models"):
        return solve_structured(problem, cfg, observer, label=variant)
    return solve_unstructured(problem, cfg, observer, label=variant)
