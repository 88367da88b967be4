"""Interpolation models and the model-based search step.

Quadratic (or lower-degree) polynomial models are fitted to previously
evaluated points in the natural basis

    1, x_1, ..., x_d, x_1^2/2, ..., x_d^2/2, x_1 x_2, ..., x_1 x_d

with cross terms ordered by increasing index gap.  Underdetermined
systems are resolved either by a minimum-norm solve through a truncated
SVD pseudoinverse or by restricting to the leading independent basis
columns ("sub-basis").  The resulting model is minimized over the
intersection of the trust region and the bound box by projected
gradients with conjugate-gradient refinement, and the trust region
radius follows a standard three-branch update.

Models are always built in coordinates centered at the current best
point, so the constant basis row of that point is exactly (1, 0, ..., 0).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "DEGREE_SIZES",
    "DegenerateSampleSet",
    "ModelConfig",
    "PolyModel",
    "SearchState",
    "TrustRegion",
    "assemble_element_models",
    "fit_model",
    "improve_poisedness",
    "lagrange_polynomials",
    "model_size",
    "natural_basis_row",
    "basis_matrix",
    "poisedness",
    "regularize_sample_set",
    "search_step_full",
    "search_step_structured",
    "solve_tr_box",
    "update_radius",
]

DEGREES = ("linear", "diag", "quad")


class DegenerateSampleSet(Exception):
    """Raised when a sample set cannot support any interpolation model."""


def model_size(dim: int, degree: str) -> int:
    """Number of coefficients of one model of the given degree class."""
    if degree == "linear":
        return dim + 1
    if degree == "diag":
        return 2 * dim + 1
    if degree == "quad":
        return (dim + 1) * (dim + 2) // 2
    raise ValueError(f"unknown degree class {degree!r}")


DEGREE_SIZES = {d: model_size for d in DEGREES}


def _cross_pairs(dim: int) -> list[tuple[int, int]]:
    # by increasing index gap: (0,1),(1,2),...,(0,2),(1,3),...,(0,d-1)
    return [(j, j + gap) for gap in range(1, dim) for j in range(dim - gap)]


def natural_basis_row(x: np.ndarray, degree: str) -> np.ndarray:
    """The natural basis evaluated at one point."""
    x = np.asarray(x, dtype=float)
    parts = [np.array([1.0]), x]
    if degree in ("diag", "quad"):
        parts.append(0.5 * x * x)
    if degree == "quad":
        pairs = _cross_pairs(x.size)
        parts.append(np.array([x[a] * x[b] for a, b in pairs]))
    if degree not in DEGREES:
        raise ValueError(f"unknown degree class {degree!r}")
    return np.concatenate(parts)


def basis_matrix(points: np.ndarray, degree: str) -> np.ndarray:
    """Stack of natural basis rows, one per sample point."""
    points = np.asarray(points, dtype=float)
    p, dim = points.shape
    cols = [np.ones(p), *points.T]
    if degree in ("diag", "quad"):
        cols.extend(0.5 * points[:, j] ** 2 for j in range(dim))
    if degree == "quad":
        cols.extend(points[:, a] * points[:, b] for a, b in _cross_pairs(dim))
    return np.column_stack(cols)


@dataclass(frozen=True)
class PolyModel:
    """A polynomial model m(x) = c + g.x + x.H.x/2 with symmetric H."""

    dim: int
    degree: str
    c: float
    g: np.ndarray
    H: np.ndarray

    def value(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        return float(self.c + self.g @ x + 0.5 * (x @ (self.H @ x)))

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return self.g + self.H @ np.asarray(x, dtype=float)


def _unpack(z: np.ndarray, dim: int, degree: str) -> PolyModel:
    c = float(z[0])
    g = np.array(z[1 : dim + 1], dtype=float)
    H = np.zeros((dim, dim))
    if degree in ("diag", "quad"):
        H[np.diag_indices(dim)] = z[dim + 1 : 2 * dim + 1]
    if degree == "quad":
        for (a, b), coeff in zip(_cross_pairs(dim), z[2 * dim + 1 :]):
            H[a, b] = H[b, a] = coeff
    return PolyModel(dim, degree, c, g, H)


def _svd(M: np.ndarray):
    """SVD that reports LAPACK failures as a degenerate sample set."""
    try:
        return np.linalg.svd(M, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise DegenerateSampleSet("SVD failed on the sample set") from exc


def _pinv_solve(M: np.ndarray, f: np.ndarray, k_ill: float) -> np.ndarray:
    """Minimum-norm solve with singular values below s_max/k_ill zeroed."""
    U, S, Vt = _svd(M)
    if S.size == 0 or S[0] == 0.0:
        raise DegenerateSampleSet("degenerate sample set")
    cutoff = S[0] / k_ill if math.isfinite(k_ill) else 0.0
    # numerical floor: keep exact-zero singular values out of the inverse
    cutoff = max(cutoff, S[0] * np.finfo(float).eps * max(M.shape))
    inv = np.where(S > cutoff, 1.0 / np.where(S > cutoff, S, 1.0), 0.0)
    return Vt.T @ (inv * (U.T @ f))


def _leading_columns(M: np.ndarray, p: int) -> list[int]:
    """First p natural-order columns that give a nonsingular square system."""
    selected: list[int] = []
    for j in range(M.shape[1]):
        trial = selected + [j]
        if np.linalg.matrix_rank(M[:, trial]) == len(trial):
            selected.append(j)
            if len(selected) == p:
                return selected
    raise DegenerateSampleSet("degenerate sample set")


def fit_model(
    points: np.ndarray,
    values: np.ndarray,
    degree: str = "quad",
    mode: str = "minnorm",
    k_ill: float = math.inf,
) -> PolyModel:
    """Fit one polynomial model interpolating the samples.

    Parameters
    ----------
    points : (p, dim) array of sample points.
    values : (p,) objective values.
    degree : degree class, one of linear / diag / quad.
    mode : "minnorm" resolves underdetermined systems by the truncated
        SVD pseudoinverse; "subbasis" restricts to the first p
        independent natural basis columns and zeros the rest.
    k_ill : conditioning threshold; singular values below the largest
        one divided by ``k_ill`` are treated as zero.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    values = np.asarray(values, dtype=float)
    p, dim = points.shape
    if p == 0:
        raise DegenerateSampleSet("empty sample set")
    if p != values.size:
        raise ValueError("points and values disagree in length")
    if p > 1 and np.all(points == points[0]):
        raise DegenerateSampleSet("degenerate sample set")
    M = basis_matrix(points, degree)
    if mode == "minnorm":
        z = _pinv_solve(M, values, k_ill)
    elif mode == "subbasis":
        if p > M.shape[1]:
            raise ValueError("more samples than basis functions in subbasis mode")
        cols = _leading_columns(M, p)
        z = np.zeros(M.shape[1])
        try:
            z[cols] = np.linalg.solve(M[:, cols], values)
        except np.linalg.LinAlgError as exc:
            raise DegenerateSampleSet("degenerate sample set") from exc
    else:
        raise ValueError(f"unknown fit mode {mode!r}")
    return _unpack(z, dim, degree)


def regularize_sample_set(
    points: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    degree: str,
    k_ill: float,
    rng: np.random.Generator,
    protect: int = 0,
    max_tries: int | None = None,
) -> tuple[np.ndarray, list[int], bool]:
    """Replace points that make the interpolation system rank deficient.

    Repeatedly identifies singular values below s_max/k_ill and redraws
    the sample contributing most to the rank deficiency, uniformly in
    the given box.  The contribution of a sample is the weight of its
    row in the deficient left-singular directions: for a slightly
    redundant direction this ranks rows exactly like their projections
    onto the corresponding right-singular vector, and it stays
    informative when a singular value is exactly zero (where every row
    projection vanishes by definition).  Ties pick the latest row, so
    exactly one copy of a duplicated point is touched and the protected
    row stays.  With k_ill = inf the set is returned unchanged.
    Returns the new points, the indices the caller must (re)evaluate,
    and an ok flag which is False when the retry cap (default 3 pbar)
    ran out; in that case the best-conditioned set encountered is
    returned.
    """
    points = np.array(points, dtype=float)
    if not math.isfinite(k_ill):
        return points, [], True
    p = points.shape[0]
    pbar = model_size(points.shape[1], degree)
    if max_tries is None:
        max_tries = 3 * pbar
    replaced: set[int] = set()
    best_state = None  # (deficient count, -ratio, points copy, replaced copy)
    for attempt in range(max_tries + 1):
        M = basis_matrix(points, degree)
        try:
            U, S, Vt = _svd(M)
        except DegenerateSampleSet:
            break
        if S[0] == 0.0:
            cutoff = 1.0
            deficient = np.ones_like(S, dtype=bool)
        else:
            cutoff = max(S[0] / k_ill, S[0] * np.finfo(float).eps * max(M.shape))
            deficient = S < cutoff
        if not deficient.any():
            return points, sorted(replaced), True
        rank_key = (int(deficient.sum()), -float(S[-1] / S[0]) if S[0] else 0.0)
        if best_state is None or rank_key < best_state[0]:
            best_state = (rank_key, points.copy(), set(replaced))
        if attempt == max_tries:
            break
        scores = np.linalg.norm(U[:, deficient], axis=1)
        if 0 <= protect < p:
            scores[protect] = -np.inf
        j = p - 1 - int(np.argmax(scores[::-1]))
        points[j] = rng.uniform(lo, hi)
        replaced.add(j)
    if best_state is not None:
        _, points, replaced = best_state
    return points, sorted(replaced), False


def lagrange_polynomials(points: np.ndarray, degree: str = "quad") -> list[PolyModel]:
    """Lagrange polynomials of the sample set: l_j(y_i) = delta_ij.

    Uses the minimum-norm coefficients when the system is
    underdetermined.  Raises on a singular (rank-deficient) system.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    p, dim = points.shape
    M = basis_matrix(points, degree)
    if np.linalg.matrix_rank(M) < p:
        raise DegenerateSampleSet("singular interpolation system")
    coeffs = np.linalg.pinv(M)  # (pbar, p); column j solves M z = e_j
    return [_unpack(coeffs[:, j], dim, degree) for j in range(p)]


def _stencil(
    lo: np.ndarray, hi: np.ndarray, rng: np.random.Generator, n_random: int = 50
) -> np.ndarray:
    """Box corners (capped), box center, and seeded random box points."""
    dim = lo.size
    if 2**dim <= 128:
        corners = np.array(list(itertools.product(*zip(lo, hi))))
    else:
        picks = rng.integers(0, 2, size=(128, dim)).astype(bool)
        corners = np.where(picks, hi, lo)
    center = 0.5 * (lo + hi)
    randoms = rng.uniform(lo, hi, size=(n_random, dim))
    return np.vstack([corners, center[None, :], randoms])


def _lagrange_abs(points: np.ndarray, degree: str, phi: np.ndarray) -> np.ndarray:
    """|l_j| at precomputed stencil basis rows phi; (stencil, sample) shaped."""
    M = basis_matrix(points, degree)
    U, S, Vt = _svd(M)
    if S.size == 0 or S[0] == 0.0:
        raise DegenerateSampleSet("singular interpolation system")
    tol = S[0] * max(M.shape) * np.finfo(float).eps
    keep = S > tol
    if int(keep.sum()) < M.shape[0]:
        raise DegenerateSampleSet("singular interpolation system")
    coeffs = (Vt.T * np.where(keep, 1.0 / np.where(keep, S, 1.0), 0.0)) @ U.T
    return np.abs(phi @ coeffs)


def _batch_lagrange_max(Ms: np.ndarray, phi: np.ndarray):
    """Poisedness estimate of each stacked system; inf where singular.

    ``Ms`` has shape (k, p, pbar); the estimate of set i is the largest
    absolute minimum-norm Lagrange value over the stencil basis ``phi``.
    Returns the estimates and the (k, stencil, p) value stack.
    """
    k, p, _ = Ms.shape
    try:
        U, S, Vt = np.linalg.svd(Ms, full_matrices=False)
    except np.linalg.LinAlgError:
        return np.full(k, np.inf), np.zeros((k, phi.shape[0], p))
    tol = S[:, :1] * max(Ms.shape[1:]) * np.finfo(float).eps
    keep = S > tol
    inv = np.where(keep, 1.0 / np.where(keep, S, 1.0), 0.0)
    # pinv(M_i) = V_i diag(inv_i) U_i^T, then |phi @ pinv| maximized
    coeffs = (Vt.transpose(0, 2, 1) * inv[:, None, :]) @ U.transpose(0, 2, 1)
    values = np.abs(phi @ coeffs)
    lams = values.max(axis=(1, 2))
    lams[keep.sum(axis=1) < p] = np.inf
    return lams, values


def poisedness(
    points: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    degree: str,
    rng: np.random.Generator,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Estimate the poisedness constant of a sample set over a box.

    Returns ``(lam, per_sample_max, stencil)`` where ``lam`` is the
    largest absolute Lagrange polynomial value over the stencil,
    ``per_sample_max[j]`` the contribution of sample j, and ``stencil``
    the evaluation points (so callers can locate maximizers).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    stencil = _stencil(lo, hi, rng)
    values = _lagrange_abs(points, degree, basis_matrix(stencil, degree))
    return float(values.max()), values, stencil


def improve_poisedness(
    points: np.ndarray,
    values: np.ndarray,
    history_points: np.ndarray,
    history_values: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    degree: str,
    rng: np.random.Generator,
    evaluate=None,
    protect: int = 0,
    threshold: float = 100.0,
    cap: int = 10,
    min_rel: float = 0.1,
    candidate_pool: int = 15,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Exchange samples until the poisedness estimate is acceptable.

    While the estimate exceeds ``threshold`` (up to ``cap`` exchanges,
    stopping early when the relative improvement falls under
    ``min_rel``), the sample with the largest Lagrange excursion is
    swapped against whichever candidate most reduces the estimate:
    either an already-evaluated history point (``history_points`` is
    scanned nearest-first) or the stencil maximizer itself, which costs
    one fresh evaluation through ``evaluate``.  Returns the updated set
    and the number of new evaluations.
    """
    points = np.array(points, dtype=float)
    values = np.array(values, dtype=float)
    p = points.shape[0]
    if p < 2:
        return points, values, 0
    new_evals = 0
    stencil = _stencil(lo, hi, rng)
    phi = basis_matrix(stencil, degree)
    hp = np.atleast_2d(history_points)
    if hp.shape[0]:
        inbox = ((hp >= lo) & (hp <= hi)).all(axis=1)
        order = np.argsort(np.linalg.norm(hp - points[protect], axis=1), kind="stable")
        hp_order = order[inbox[order]]
    else:
        hp_order = np.zeros(0, dtype=int)
    try:
        per_point = _lagrange_abs(points, degree, phi)
    except DegenerateSampleSet:
        return points, values, 0
    for _ in range(cap):
        lam = float(per_point.max())
        if lam <= threshold:
            break
        col_max = per_point.max(axis=0)
        if 0 <= protect < p:
            col_max[protect] = -np.inf
        j = int(np.argmax(col_max))
        maximizer = stencil[int(np.argmax(per_point[:, j]))]

        have = {points[i].tobytes() for i in range(p)}
        candidates: list[tuple[np.ndarray, float | None]] = []
        if evaluate is not None:
            candidates.append((maximizer, None))
        picked = 0
        for i in hp_order:
            cand = hp[i]
            if cand.tobytes() in have:
                continue
            candidates.append((cand, float(history_values[i])))
            picked += 1
            if picked >= candidate_pool:
                break
        if not candidates:
            break

        # score every candidate swap in one stacked solve
        M = basis_matrix(points, degree)
        Ms = np.repeat(M[None, :, :], len(candidates), axis=0)
        Ms[:, j, :] = basis_matrix(
            np.array([cand for cand, _ in candidates]), degree
        )
        lams, lagrange_values = _batch_lagrange_max(Ms, phi)
        best = int(np.argmin(lams))
        best_lam = float(lams[best])
        if not math.isfinite(best_lam) or best_lam >= lam:
            break
        cand, cand_val = candidates[best]
        if cand_val is None:
            cand_val = float(evaluate(cand))
            new_evals += 1
        points[j] = cand
        values[j] = cand_val
        per_point = lagrange_values[best]
        if (lam - best_lam) < min_rel * lam:
            break
    return points, values, new_evals


# ---------------------------------------------------------------------------
# trust region


@dataclass(frozen=True)
class TrustRegion:
    """Trust region radius plus its update constants."""

    delta: float
    delta_max: float = 1e10
    delta_min: float = 1e-10
    alpha1: float = 2.0
    alpha2: float = 0.5
    eta1: float = 0.01
    eta2: float = 0.9

    def __post_init__(self):
        if not (0.0 < self.delta <= self.delta_max):
            raise ValueError("need 0 < delta <= delta_max")


def update_radius(tr: TrustRegion, rho: float, step_norm: float) -> TrustRegion:
    """Three-branch radius update; the middle branch is inclusive."""
    if rho > tr.eta2:
        new = min(tr.alpha1 * tr.delta, tr.delta_max)
    elif rho >= tr.eta1:
        new = tr.delta
    else:
        new = min(tr.delta_max, max(float(np.finfo(float).eps), tr.alpha2 * step_norm))
    return replace(tr, delta=new)


def _quadratic_value(g, H, s):
    return float(g @ s + 0.5 * (s @ (H @ s)))


def _cg_free(g, H, s, lo, hi, free, f_cur):
    """Conjugate gradients on the free coordinates, truncated at bounds."""
    r = -(g + H @ s)
    r[~free] = 0.0
    rr = float(r @ r)
    rr0 = rr
    if rr == 0.0:
        return s, f_cur
    p = r.copy()
    for _ in range(2 * int(free.sum()) + 2):
        Hp = H @ p
        curv = float(p @ Hp)
        with np.errstate(divide="ignore", invalid="ignore"):
            step_hi = np.where(p > 1e-300, (hi - s) / p, np.inf)
            step_lo = np.where(p < -1e-300, (lo - s) / p, np.inf)
        t_max = float(min(step_hi.min(), step_lo.min()))
        hit = curv <= 0.0 or (rr / curv if curv > 0 else math.inf) >= t_max
        t = t_max if hit else rr / curv
        if not math.isfinite(t) or t <= 0.0:
            break
        s_new = np.clip(s + t * p, lo, hi)
        f_new = _quadratic_value(g, H, s_new)
        if f_new >= f_cur:
            break
        s, f_cur = s_new, f_new
        if hit:
            break
        r = r - t * Hp
        r[~free] = 0.0
        rr_new = float(r @ r)
        if rr_new <= 1e-32 * rr0:
            break
        p = r + (rr_new / rr) * p
        rr = rr_new
    return s, f_cur


def _minimize_quadratic_box(g, H, lo, hi, max_outer: int = 40):
    """Approximately minimize g.s + s.H.s/2 over lo <= s <= hi.

    Projected-gradient steps with backtracking, each followed by
    truncated conjugate gradients on the free coordinates.  The result
    never increases the model: the zero step is returned if no decrease
    was found.
    """
    n = g.size
    s = np.zeros(n)
    f_cur = 0.0
    gscale = float(np.linalg.norm(g)) + 1.0
    for _ in range(max_outer):
        grad = g + H @ s
        at_lo = s <= lo + 1e-13 * (1.0 + np.abs(lo))
        at_hi = s >= hi - 1e-13 * (1.0 + np.abs(hi))
        pg = grad.copy()
        pg[at_lo & (pg > 0)] = 0.0
        pg[at_hi & (pg < 0)] = 0.0
        if float(np.linalg.norm(pg)) <= 1e-12 * gscale:
            break
        d = -grad
        curv = float(d @ (H @ d))
        if curv > 0.0:
            t = float((grad @ grad) / curv)
        else:
            span = float(np.max(hi - lo))
            t = span / max(1e-300, float(np.linalg.norm(d)))
        improved = False
        for _bt in range(60):
            cand = np.clip(s + t * d, lo, hi)
            f_cand = _quadratic_value(g, H, cand)
            if f_cand < f_cur - 1e-16 * (1.0 + abs(f_cur)):
                s, f_cur = cand, f_cand
                improved = True
                break
            t *= 0.5
        if not improved:
            break
        free = (s > lo + 1e-13 * (1.0 + np.abs(lo))) & (s < hi - 1e-13 * (1.0 + np.abs(hi)))
        if free.any():
            s, f_cur = _cg_free(g, H, s, lo, hi, free, f_cur)
    if f_cur > 0.0:
        s = np.zeros(n)
    return s


def solve_tr_box(
    model: PolyModel,
    center: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    delta: float,
) -> np.ndarray:
    """Step s minimizing the model over the trust region and bounds.

    The model is expressed in coordinates centered at ``center``; the
    returned step satisfies max(lower-center, -delta) <= s <=
    min(upper-center, delta) and never increases the model value.
    """
    lo = np.maximum(lower - center, -delta)
    hi = np.minimum(upper - center, delta)
    return _minimize_quadratic_box(model.g, model.H, lo, hi)


def assemble_element_models(parts, n: int) -> PolyModel:
    """Scatter-add per-element models into one full-space quadratic.

    ``parts`` yields (index_array, PolyModel) pairs, each model written
    in the local coordinates of its index set.
    """
    c = 0.0
    g = np.zeros(n)
    H = np.zeros((n, n))
    for idx, m in parts:
        c += m.c
        g[idx] += m.g
        H[np.ix_(idx, idx)] += m.H
    return PolyModel(n, "quad", c, g, H)


# ---------------------------------------------------------------------------
# the search step


@dataclass
class ModelConfig:
    """Settings for the model-based search step."""

    degree: str = "quad"
    fit: str = "minnorm"
    k_ill: float | None = None  # None: inf per-element, 1e12 full-space
    delta_max: float = 1e10
    delta_min: float = 1e-10
    alpha1: float = 2.0
    alpha2: float = 0.5
    eta1: float = 0.01
    eta2: float = 0.9
    lambda_threshold: float = 100.0
    exchange_cap: int = 10
    min_rel_improvement: float = 0.1

    def __post_init__(self):
        if self.degree not in DEGREES:
            raise ValueError(f"unknown degree class {self.degree!r}")
        if self.fit not in ("minnorm", "subbasis"):
            raise ValueError(f"unknown fit mode {self.fit!r}")

    def trust_region(self, delta: float) -> TrustRegion:
        return TrustRegion(
            delta=min(delta, self.delta_max),
            delta_max=self.delta_max,
            delta_min=self.delta_min,
            alpha1=self.alpha1,
            alpha2=self.alpha2,
            eta1=self.eta1,
            eta2=self.eta2,
        )

    def resolved_k_ill(self, per_element: bool) -> float:
        if self.k_ill is not None:
            return self.k_ill
        return math.inf if per_element else 1e12


@dataclass
class SearchState:
    """Search-step state carried across iterations of one run."""

    tr: TrustRegion | None = None


def _refresh_radius(search: SearchState, mcfg: ModelConfig, alpha: float) -> bool:
    """(Re)start the radius from the poll stepsize when needed."""
    if search.tr is None:
        search.tr = mcfg.trust_region(alpha)
    if search.tr.delta < mcfg.delta_min:
        search.tr = replace(search.tr, delta=min(alpha, search.tr.delta_max))
        if search.tr.delta < mcfg.delta_min:
            return False
    return True


def _finite_history(points: np.ndarray, values: np.ndarray):
    finite = np.isfinite(values)
    return points[finite], values[finite]


def _select_closest(
    points: np.ndarray, values: np.ndarray, center: np.ndarray, pbar: int, reserve: int = 60
):
    """Split history into the pbar points closest to center plus a
    nearest-first reserve of exchange candidates (both center-ordered,
    ties by insertion order)."""
    m = points.shape[0]
    if m == 0:
        return points, values, points, values
    d2 = ((points - center) ** 2).sum(axis=1)
    k = min(m, pbar + reserve)
    idx = np.arange(m) if m == k else np.argpartition(d2, k - 1)[:k]
    order = idx[np.lexsort((idx, d2[idx]))]
    sel, rest = order[:pbar], order[pbar:]
    return points[sel], values[sel], points[rest], values[rest]


def search_step_full(state, problem, search: SearchState, cfg) -> bool:
    """One full-space model step; returns True if the iterate moved."""
    mcfg = cfg.model
    if not _refresh_radius(search, mcfg, state.current_alpha()):
        return False
    points, values = _finite_history(*state.full_history_arrays())
    x_best = state.x_best
    pbar = model_size(problem.n, mcfg.degree)
    P, V, RP, RV = _select_closest(points, values, x_best, pbar)
    if P.shape[0] == 0:
        return False
    P = P - x_best
    delta = search.tr.delta
    lo = np.maximum(problem.lower - x_best, -delta)
    hi = np.minimum(problem.upper - x_best, delta)
    k_ill = mcfg.resolved_k_ill(per_element=False)

    P, fresh, _ok = regularize_sample_set(P, lo, hi, mcfg.degree, k_ill, state.rng)
    for j in fresh:
        V[j] = state.eval_full(x_best + P[j])
    P, V, _ = improve_poisedness(
        P,
        V,
        RP - x_best,
        RV,
        lo,
        hi,
        mcfg.degree,
        state.rng,
        evaluate=lambda s: state.eval_full(x_best + s),
        threshold=mcfg.lambda_threshold,
        cap=mcfg.exchange_cap,
        min_rel=mcfg.min_rel_improvement,
    )
    try:
        model = fit_model(P, V, mcfg.degree, mcfg.fit, k_ill)
    except DegenerateSampleSet:
        return False
    s = solve_tr_box(model, x_best, problem.lower, problem.upper, delta)
    if not np.any(s):
        return False
    predicted = model.value(s) - model.c
    x_trial = np.clip(x_best + s, problem.lower, problem.upper)
    f_trial = state.eval_full(x_trial)
    rho = -math.inf if predicted >= 0.0 else (f_trial - state.f_best) / predicted
    search.tr = update_radius(search.tr, rho, float(np.linalg.norm(s)))
    if f_trial < state.f_best:
        state.accept(x_trial, f_trial)
        return True
    return False


def search_step_structured(state, problem, sa, search: SearchState, cfg) -> bool:
    """One search step built from per-element models; True if moved."""
    mcfg = cfg.model
    if not _refresh_radius(search, mcfg, state.current_alpha()):
        return False
    x_best = state.x_best
    delta = search.tr.delta
    k_ill = mcfg.resolved_k_ill(per_element=True)
    parts = []
    c_total = 0.0
    for i, el in enumerate(problem.elements):
        idx = el.idx
        xb = x_best[idx]
        pts, vals = _finite_history(*state.element_history_arrays(i))
        pbar_i = model_size(len(el.domain), mcfg.degree)
        P, V, RP, RV = _select_closest(pts, vals, xb, pbar_i)
        if P.shape[0] == 0:
            continue
        P = P - xb
        lo = np.maximum(problem.lower[idx] - xb, -delta)
        hi = np.minimum(problem.upper[idx] - xb, delta)

        def eval_element(s_local, _i=i, _el=el, _xb=xb):
            return state.eval_element(_i, _el, _xb + s_local)

        P, fresh, _ok = regularize_sample_set(P, lo, hi, mcfg.degree, k_ill, state.rng)
        for j in fresh:
            V[j] = eval_element(P[j])
        P, V, _ = improve_poisedness(
            P,
            V,
            RP - xb,
            RV,
            lo,
            hi,
            mcfg.degree,
            state.rng,
            evaluate=eval_element,
            threshold=mcfg.lambda_threshold,
            cap=mcfg.exchange_cap,
            min_rel=mcfg.min_rel_improvement,
        )
        try:
            model = fit_model(P, V, mcfg.degree, mcfg.fit, k_ill)
        except DegenerateSampleSet:
            # fall back to the best available lower-order model: the
            # constant at the incumbent subvector
            c_total += float(V[0])
            continue
        c_total += model.c
        parts.append((idx, model))
    if not parts:
        return False
    full = assemble_element_models(parts, problem.n)
    full = replace(full, c=c_total)
    s = solve_tr_box(full, x_best, problem.lower, problem.upper, delta)
    if not np.any(s):
        return False
    predicted = full.value(s) - full.c
    x_trial = np.clip(x_best + s, problem.lower, problem.upper)
    f_trial, elem_vals = state.eval_full_with_values(x_trial)
    rho = -math.inf if predicted >= 0.0 else (f_trial - state.f_best) / predicted
    search.tr = update_radius(search.tr, rho, float(np.linalg.norm(s)))
    if f_trial < state.f_best:
        state.accept_structured(x_trial, f_trial, elem_vals)
        return True
    return False
