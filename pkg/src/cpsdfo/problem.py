"""Coordinate partially separable problems and evaluation accounting.

A coordinate partially separable (CPS) objective is a finite sum of
element functions, each depending only on a small subset of the
variables::

    f(x) = sum_i f_i(x restricted to domain_i),   lower <= x <= upper.

Problems are immutable; evaluation work is tracked in a mutable
:class:`EvalLedger` so that restricted (per-element) evaluations can be
compared with whole-objective evaluations through a single
"full equivalent" unit: one full evaluation costs as much as evaluating
every element once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

__all__ = [
    "Element",
    "CpsProblem",
    "EvalLedger",
    "evaluate_full",
    "evaluate_restricted",
    "project_to_bounds",
    "full_equivalent",
]

_INF = float("inf")


@dataclass(frozen=True)
class Element:
    """One additive term of a CPS objective.

    Parameters
    ----------
    domain : tuple of int
        Strictly increasing 0-based indices of the variables this
        element depends on.
    func : callable
        Maps the subvector ``x[domain]`` (a 1-d array, in domain order)
        to a real value.  Must be deterministic.
    """

    domain: tuple[int, ...]
    func: Callable[[np.ndarray], float]

    def __post_init__(self):
        dom = tuple(map(int, self.domain))
        if not dom:
            raise ValueError("element domain must be nonempty")
        if dom[0] < 0:
            raise ValueError("element domain indices must be nonnegative")
        prev = dom[0]
        for j in dom[1:]:
            if j <= prev:
                raise ValueError("element domain must be strictly increasing")
            prev = j
        object.__setattr__(self, "domain", dom)

    @cached_property
    def idx(self) -> np.ndarray:
        # built on first use: problems carry thousands of elements
        idx = np.asarray(self.domain, dtype=np.intp)
        idx.setflags(write=False)
        return idx


def _frozen_array(values, n: int, what: str) -> np.ndarray:
    a = np.asarray(values, dtype=float).copy()
    if a.shape != (n,):
        raise ValueError(f"{what} must have shape ({n},), got {a.shape}")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CpsProblem:
    """A bound-constrained CPS problem with a feasible starting point.

    Instances are immutable and safe to share across runs; all mutable
    evaluation state lives in per-run :class:`EvalLedger` objects.
    """

    name: str
    n: int
    elements: tuple[Element, ...]
    lower: np.ndarray
    upper: np.ndarray
    x0: np.ndarray

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise ValueError("n must be positive")
        object.__setattr__(self, "n", n)
        elements = tuple(self.elements)
        if not elements:
            raise ValueError("a CPS problem needs at least one element")
        object.__setattr__(self, "elements", elements)
        lower = _frozen_array(self.lower, n, "lower")
        upper = _frozen_array(self.upper, n, "upper")
        x0 = _frozen_array(self.x0, n, "x0")
        if np.any(lower > upper):
            raise ValueError("lower bound exceeds upper bound")
        if np.any(x0 < lower) or np.any(x0 > upper):
            raise ValueError("starting point violates the bounds")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "x0", x0)
        flat = [j for el in elements for j in el.domain]
        if max(flat) >= n:
            raise ValueError("element domain index out of range")
        covered = np.zeros(n, dtype=bool)
        covered[flat] = True
        if not covered.all():
            missing = np.flatnonzero(~covered)
            raise ValueError(f"variables {missing.tolist()} appear in no element")

    @property
    def q(self) -> int:
        """Number of element functions."""
        return len(self.elements)


@dataclass
class EvalLedger:
    """Evaluation counts for one run.

    ``element_evals`` counts every element-function evaluation,
    including the ``q`` performed inside each full evaluation;
    ``full_evals`` counts whole-objective evaluations.  A ledger belongs
    to a single sequential run and is not thread safe.
    """

    q: int
    element_evals: int = 0
    full_evals: int = 0

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be positive")

    def restricted_element_evals(self) -> int:
        """Element evaluations not performed inside a full evaluation."""
        return self.element_evals - self.q * self.full_evals

    def full_equivalent(self) -> int:
        """Combined cost in whole-objective units.

        Restricted element evaluations are converted at the rate of q
        per full evaluation, rounded to the nearest integer with halves
        away from zero.
        """
        e = self.restricted_element_evals()
        return self.full_evals + (2 * e + self.q) // (2 * self.q)


def project_to_bounds(problem: CpsProblem, x: np.ndarray) -> np.ndarray:
    """Componentwise projection of ``x`` onto the bound box."""
    return np.clip(np.asarray(x, dtype=float), problem.lower, problem.upper)


def _check_dim(problem: CpsProblem, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.n,):
        raise ValueError(f"point must have shape ({problem.n},), got {x.shape}")
    return x


def evaluate_elements(
    problem: CpsProblem, indices, x: np.ndarray, ledger: EvalLedger
) -> tuple[float, list[float]]:
    """Evaluate the listed elements at ``x`` and charge the ledger.

    Returns the sum and the individual element values (in the order of
    ``indices``).  A non-finite element value is poisoned to ``+inf`` so
    it can never look like a decrease.
    """
    elements = problem.elements
    isfinite = math.isfinite
    total = 0.0
    values = []
    count = 0
    for i in indices:
        el = elements[i]
        v = float(el.func(x[el.idx]))
        count += 1
        if not isfinite(v):
            v = _INF
        values.append(v)
        total += v
    ledger.element_evals += count
    return total, values


def evaluate_full(problem: CpsProblem, x: np.ndarray, ledger: EvalLedger) -> float:
    """Whole-objective value at ``x``; charges one full evaluation."""
    value, _ = evaluate_full_with_values(problem, x, ledger)
    return value


def evaluate_full_with_values(
    problem: CpsProblem, x: np.ndarray, ledger: EvalLedger
) -> tuple[float, np.ndarray]:
    """Like :func:`evaluate_full` but also returns all element values."""
    x = _check_dim(problem, x)
    isfinite = math.isfinite
    values = np.empty(problem.q)
    total = 0.0
    for i, el in enumerate(problem.elements):
        v = float(el.func(x[el.idx]))
        if not isfinite(v):
            v = _INF
        values[i] = v
        total += v
    ledger.element_evals += problem.q
    ledger.full_evals += 1
    return total, values


def evaluate_restricted(
    problem: CpsProblem, indices, x: np.ndarray, ledger: EvalLedger
) -> float:
    """Sum of the listed element functions at ``x`` (restricted value)."""
    x = _check_dim(problem, x)
    total, _ = evaluate_elements(problem, indices, x, ledger)
    return total


def full_equivalent(ledger: EvalLedger) -> int:
    """Module-level alias for :meth:`EvalLedger.full_equivalent`."""
    return ledger.full_equivalent()
