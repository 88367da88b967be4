import math

import numpy as np
import pytest

from cpsdfo.problem import EvalLedger, evaluate_full, evaluate_full_with_values
from cpsdfo.structure import analyze
from cpsdfo.suite import (
    BENCH_SETS,
    REGISTRY,
    bench_instances,
    instantiate,
    reference_value,
)

SMALL_DIMS = {name: entry.dims[:2] for name, entry in REGISTRY.items()}


def random_feasible(problem, rng, count):
    """Feasible points near x0 (keeps CONTACT's pinned boundary values)."""
    steps = rng.uniform(-2.0, 2.0, size=(count, problem.n))
    return np.clip(problem.x0 + steps, problem.lower, problem.upper)


class TestDecompositionEquivalence:
    @pytest.mark.parametrize("name", sorted(REGISTRY))
    def test_element_sum_matches_reference(self, name):
        rng = np.random.default_rng(7)
        for n in SMALL_DIMS[name]:
            problem = instantiate(name, n)
            ledger = EvalLedger(q=problem.q)
            for x in random_feasible(problem, rng, 100):
                got = evaluate_full(problem, x, ledger)
                want = reference_value(name, n, x)
                assert got == pytest.approx(want, rel=1e-10, abs=1e-12), (name, n)

    @pytest.mark.parametrize("name", sorted(REGISTRY))
    def test_start_value_matches_reference(self, name):
        n = REGISTRY[name].dims[0]
        problem = instantiate(name, n)
        f0 = evaluate_full(problem, problem.x0, EvalLedger(q=problem.q))
        assert f0 == pytest.approx(reference_value(name, n, problem.x0), rel=1e-12)


class TestFrozenStartValues:
    # hand-computed objective values at standard starting points
    @pytest.mark.parametrize(
        "name, n, expected",
        [
            ("ARWHEAD", 5, 12.0),  # 4 * ((1+1)^2 - 4 + 3)
            ("ENGVAL", 3, 118.0),  # 2 * ((4+4)^2 - 8 + 3)
            ("BROYDN3D", 3, 5.0),  # residuals -2 and -1 at x0 = -1
            ("TRIDIA", 4, 9.0),  # 0 + (2+3+4) * (2-1)^2
            ("BEALES", 2, 14.203125),  # 1.5^2 + 2.25^2 + 2.625^2
            ("ROSENBR", 2, 24.2),  # 100*(1-1.44)^2 + 2.2^2
            ("WOODS", 4, 19192.0),
            ("POWSING", 4, 215.0),  # 49 + 5 + 1 + 160
        ],
    )
    def test_value_at_x0(self, name, n, expected):
        problem = instantiate(name, n)
        f0 = evaluate_full(problem, problem.x0, EvalLedger(q=problem.q))
        assert f0 == pytest.approx(expected, rel=1e-12)


class TestLocality:
    @pytest.mark.parametrize("name", sorted(REGISTRY))
    def test_perturbation_touches_only_incident_elements(self, name):
        n = REGISTRY[name].dims[0]
        problem = instantiate(name, n)
        sa = analyze(problem)
        rng = np.random.default_rng(3)
        ledger = EvalLedger(q=problem.q)
        x = random_feasible(problem, rng, 1)[0]
        _, before = evaluate_full_with_values(problem, x, ledger)
        for j in rng.choice(problem.n, size=min(problem.n, 5), replace=False):
            y = x.copy()
            y[j] = np.clip(y[j] + 0.75, problem.lower[j], problem.upper[j])
            if y[j] == x[j]:  # pinned boundary variable
                continue
            _, after = evaluate_full_with_values(problem, y, ledger)
            untouched = np.setdiff1d(np.arange(problem.q), sa.touching[j])
            assert np.array_equal(after[untouched], before[untouched]), (name, j)


class TestRegistry:
    def test_unknown_problem(self):
        with pytest.raises(KeyError, match="known problems"):
            instantiate("NOSUCH", 10)

    def test_lookup_is_case_insensitive(self):
        assert instantiate("arwhead", 10).name == "ARWHEAD"

    @pytest.mark.parametrize(
        "name, bad_n",
        [
            ("BEALES", 7),
            ("ROSENBR", 9),
            ("POWSING", 10),
            ("WOODS", 6),
            ("CONTACT", 30),
            ("EXAMPLE5", 6),
            ("BDQRTIC", 4),
            ("NZF1", 20),
        ],
    )
    def test_inadmissible_dimension(self, name, bad_n):
        with pytest.raises(ValueError, match="benchmark dimensions"):
            instantiate(name, bad_n)

    @pytest.mark.parametrize("name", sorted(REGISTRY))
    def test_x0_is_feasible(self, name):
        problem = instantiate(name, REGISTRY[name].dims[0])
        assert np.all(problem.x0 >= problem.lower)
        assert np.all(problem.x0 <= problem.upper)

    def test_bench_sets_slice_dims(self):
        assert bench_instances("small") == [
            (name, REGISTRY[name].dims[0]) for name in sorted(REGISTRY) if name != "EXAMPLE5"
        ]
        smallish = bench_instances("smallish")
        assert ("ARWHEAD", 50) in smallish and ("ARWHEAD", 100) in smallish
        assert all(name != "EXAMPLE5" for name, _ in smallish)

    def test_bench_instances_name_filter(self):
        only = bench_instances("small", names={"WOODS"})
        assert only == [("WOODS", 20)]

    def test_bench_sets_cover_known_classes(self):
        assert sorted(BENCH_SETS) == ["large", "medium", "small", "smallish"]
        with pytest.raises(KeyError):
            bench_instances("huge")


class TestContactDetails:
    def test_boundary_variables_pinned(self):
        problem = instantiate("CONTACT", 16)
        m = 3
        pinned = [
            i * (m + 1) + j
            for i in range(m + 1)
            for j in range(m + 1)
            if i in (0, m) or j in (0, m)
        ]
        free = sorted(set(range(16)) - set(pinned))
        assert np.array_equal(problem.lower[pinned], problem.upper[pinned])
        assert np.all(problem.lower[free] < problem.upper[free])

    def test_obstacle_floor_present_at_n64(self):
        # grid points with both coordinates in [0.4, 0.6] sit on the obstacle
        problem = instantiate("CONTACT", 64)
        m = 7
        obstacle = [
            i * (m + 1) + j
            for i in range(1, m)
            for j in range(1, m)
            if 0.4 <= i / m <= 0.6 and 0.4 <= j / m <= 0.6
        ]
        assert obstacle, "n=64 grid should intersect the obstacle square"
        assert np.all(problem.lower[obstacle] == 10.0)
        assert np.all(problem.x0[obstacle] == 10.0)

    def test_area_of_flat_membrane(self):
        # a constant grid has unit integrand on every cell: f = 1
        problem = instantiate("CONTACT", 16)
        x = np.full(16, 3.0)
        ledger = EvalLedger(q=problem.q)
        got = sum(
            el.func(x[el.idx]) for el in problem.elements
        )
        assert got == pytest.approx(1.0, rel=1e-12)
        assert reference_value("CONTACT", 16, x) == pytest.approx(1.0, rel=1e-12)


class TestNzf1Details:
    @pytest.mark.parametrize("n", [13, 39])
    def test_q_formula(self, n):
        problem = instantiate("NZF1", n)
        assert problem.q == 7 * (n // 13) - 2

    def test_junction_split_preserves_value(self):
        # the linking term is split into two half-weight copies; their sum
        # must equal the reference formula
        rng = np.random.default_rng(11)
        problem = instantiate("NZF1", 26)
        for x in random_feasible(problem, rng, 25):
            got = evaluate_full(problem, x, EvalLedger(q=problem.q))
            assert got == pytest.approx(reference_value("NZF1", 26, x), rel=1e-10)
