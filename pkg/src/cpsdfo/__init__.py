"""Derivative-free optimization for coordinate partially separable problems.

Bound-constrained minimization of objectives that decompose into a sum
of element functions, each touching only a few variables.  The solvers
are pattern search methods that exploit the decomposition both in the
poll step (independent subspaces polled at restricted-evaluation cost)
and, optionally, in a model-based search step built from per-element
interpolation models.
"""

from .bench import (
    ProfileCurve,
    converged,
    data_profile,
    evals_to_converge,
    load_records,
    performance_profile,
    run_matrix,
    save_records,
)
from .models import ModelConfig, PolyModel, fit_model, solve_tr_box
from .pattern import (
    VARIANTS,
    BudgetExhausted,
    SolverConfig,
    solve,
    solve_structured,
    solve_unstructured,
)
from .problem import CpsProblem, Element, EvalLedger, evaluate_full
from .records import RunRecord
from .structure import StructureAnalysis, analyze
from .suite import REGISTRY, bench_instances, instantiate, reference_value

__version__ = "0.1.0"

__all__ = [
    "VARIANTS",
    "BudgetExhausted",
    "CpsProblem",
    "Element",
    "EvalLedger",
    "ModelConfig",
    "PolyModel",
    "ProfileCurve",
    "REGISTRY",
    "RunRecord",
    "SolverConfig",
    "StructureAnalysis",
    "analyze",
    "bench_instances",
    "converged",
    "data_profile",
    "evals_to_converge",
    "evaluate_full",
    "fit_model",
    "instantiate",
    "load_records",
    "performance_profile",
    "reference_value",
    "run_matrix",
    "save_records",
    "solve",
    "solve_structured",
    "solve_tr_box",
    "solve_unstructured",
    "__version__",
]
