import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cpsdfo.problem import (
    CpsProblem,
    Element,
    EvalLedger,
    evaluate_elements,
    evaluate_full,
    evaluate_full_with_values,
    evaluate_restricted,
    full_equivalent,
    project_to_bounds,
)


def two_element_problem():
    # f(x) = (x0 + x1)^2 + x1 * x2 on [-2, 2]^3
    return CpsProblem(
        name="TOY",
        n=3,
        elements=(
            Element((0, 1), lambda v: float((v[0] + v[1]) ** 2)),
            Element((1, 2), lambda v: float(v[0] * v[1])),
        ),
        lower=[-2.0, -2.0, -2.0],
        upper=[2.0, 2.0, 2.0],
        x0=[1.0, 1.0, 1.0],
    )


class TestElement:
    def test_domain_normalized_to_ints(self):
        el = Element((np.int64(0), np.int64(3)), lambda v: 0.0)
        assert el.domain == (0, 3)
        assert el.idx.dtype == np.intp

    @pytest.mark.parametrize("domain", [(), (1, 1), (2, 1), (-1, 0)])
    def test_bad_domains_rejected(self, domain):
        with pytest.raises(ValueError):
            Element(domain, lambda v: 0.0)


class TestCpsProblem:
    def test_q_counts_elements(self):
        assert two_element_problem().q == 2

    def test_arrays_are_frozen(self):
        problem = two_element_problem()
        with pytest.raises(ValueError):
            problem.lower[0] = -3.0
        with pytest.raises(ValueError):
            problem.x0[0] = 0.0

    def test_domain_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            CpsProblem(
                "BAD", 2,
                (Element((0, 2), lambda v: 0.0), Element((1,), lambda v: 0.0)),
                [-1, -1], [1, 1], [0, 0],
            )

    def test_uncovered_variable(self):
        with pytest.raises(ValueError, match="appear in no element"):
            CpsProblem(
                "BAD", 3,
                (Element((0, 1), lambda v: 0.0),),
                [-1, -1, -1], [1, 1, 1], [0, 0, 0],
            )

    def test_infeasible_start(self):
        with pytest.raises(ValueError, match="starting point"):
            CpsProblem(
                "BAD", 1, (Element((0,), lambda v: 0.0),), [0.0], [1.0], [2.0]
            )

    def test_crossed_bounds(self):
        with pytest.raises(ValueError, match="lower bound exceeds"):
            CpsProblem(
                "BAD", 1, (Element((0,), lambda v: 0.0),), [1.0], [0.0], [0.5]
            )

    def test_no_elements(self):
        with pytest.raises(ValueError):
            CpsProblem("BAD", 1, (), [0.0], [1.0], [0.5])


class TestEvalLedger:
    def test_full_evals_only(self):
        ledger = EvalLedger(q=7)
        ledger.full_evals = 3
        ledger.element_evals = 21
        assert ledger.restricted_element_evals() == 0
        assert ledger.full_equivalent() == 3

    def test_restricted_evals_round_to_nearest(self):
        # 10 restricted element evals at q=7 is 10/7 = 1.43 -> 1
        ledger = EvalLedger(q=7, element_evals=21 + 10, full_evals=3)
        assert ledger.full_equivalent() == 4

    @pytest.mark.parametrize(
        "q, e, expected",
        [
            (4, 0, 0),
            (4, 1, 0),  # 0.25 rounds down
            (4, 2, 1),  # exactly one half rounds away from zero
            (4, 3, 1),
            (4, 4, 1),
            (4, 6, 2),
            (5, 2, 0),
            (5, 3, 1),  # 0.6 rounds up
            (1, 9, 9),
        ],
    )
    def test_rounding_table(self, q, e, expected):
        ledger = EvalLedger(q=q, element_evals=e)
        assert ledger.full_equivalent() == expected

    @given(
        q=st.integers(min_value=1, max_value=50),
        restricted=st.integers(min_value=0, max_value=10_000),
        full=st.integers(min_value=0, max_value=100),
    )
    def test_matches_float_rounding(self, q, restricted, full):
        ledger = EvalLedger(q=q, element_evals=q * full + restricted, full_evals=full)
        # round-half-away-from-zero on the exact rational e/q
        expected = full + int(math.floor(restricted / q + 0.5))
        assert ledger.full_equivalent() == expected
        assert full_equivalent(ledger) == ledger.full_equivalent()

    def test_q_must_be_positive(self):
        with pytest.raises(ValueError):
            EvalLedger(q=0)


class TestEvaluation:
    def test_full_value_and_charges(self):
        problem = two_element_problem()
        ledger = EvalLedger(q=problem.q)
        value = evaluate_full(problem, [1.0, 1.0, 1.0], ledger)
        assert value == pytest.approx(4.0 + 1.0)
        assert ledger.full_evals == 1
        assert ledger.element_evals == 2
        assert ledger.full_equivalent() == 1

    def test_full_with_values(self):
        problem = two_element_problem()
        ledger = EvalLedger(q=problem.q)
        value, elem = evaluate_full_with_values(problem, [1.0, -1.0, 2.0], ledger)
        assert elem.tolist() == [0.0, -2.0]
        assert value == pytest.approx(-2.0)

    def test_restricted_subset(self):
        problem = two_element_problem()
        ledger = EvalLedger(q=problem.q)
        value = evaluate_restricted(problem, [1], np.array([1.0, 1.0, 3.0]), ledger)
        assert value == pytest.approx(3.0)
        assert ledger.full_evals == 0
        assert ledger.element_evals == 1
        assert ledger.full_equivalent() == 1  # 1/2 rounds away from zero

    def test_elements_keep_order(self):
        problem = two_element_problem()
        ledger = EvalLedger(q=problem.q)
        total, values = evaluate_elements(
            problem, [1, 0], np.array([1.0, 1.0, 3.0]), ledger
        )
        assert values == [3.0, 4.0]
        assert total == pytest.approx(7.0)

    @pytest.mark.parametrize("bad", [float("nan"), float("inf"), -float("inf")])
    def test_nonfinite_values_poisoned(self, bad):
        problem = CpsProblem(
            "POISON", 1,
            (Element((0,), lambda v: bad), Element((0,), lambda v: 1.0)),
            [-1.0], [1.0], [0.0],
        )
        ledger = EvalLedger(q=2)
        value, elem = evaluate_full_with_values(problem, [0.0], ledger)
        assert value == math.inf
        assert elem[0] == math.inf and elem[1] == 1.0

    def test_dimension_checked(self):
        problem = two_element_problem()
        with pytest.raises(ValueError, match="shape"):
            evaluate_full(problem, [1.0, 2.0], EvalLedger(q=2))

    def test_projection(self):
        problem = two_element_problem()
        x = project_to_bounds(problem, [5.0, -3.0, 0.5])
        assert x.tolist() == [2.0, -2.0, 0.5]
