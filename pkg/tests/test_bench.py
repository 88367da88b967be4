import math

import pytest
from hypothesis import given, settings, strategies as st

from cpsdfo.bench import (
    ProfileCurve,
    best_known,
    converged,
    data_profile,
    evals_to_converge,
    format_profile,
    load_records,
    performance_profile,
    run_matrix,
    save_records,
)
from cpsdfo.cli import main
from cpsdfo.pattern import SolverConfig
from cpsdfo.records import RunRecord


def record(problem="P", n=2, variant="A", seed=0, history=((0, 10.0), (5, 1.0)), status="converged"):
    return RunRecord(
        problem=problem,
        n=n,
        variant=variant,
        seed=seed,
        status=status,
        final_f=history[-1][1],
        full_equivalents=history[-1][0],
        history=tuple(history),
        wall_time=0.01,
    )


# the two-instance fixture used for the hand-checked profile values:
#   P (n=2): A solves at 5 evals, B at 10   -> ratios 1 and 2
#   Q (n=3): A never reaches the target, B solves at 6
FIXTURE = [
    record("P", 2, "A", 0, ((0, 10.0), (5, 1.0))),
    record("P", 2, "B", 0, ((0, 10.0), (10, 1.0))),
    record("Q", 3, "A", 0, ((0, 8.0), (4, 8.0))),
    record("Q", 3, "B", 0, ((0, 8.0), (6, 2.0))),
]


class TestRunRecord:
    def test_round_trip(self):
        rec = record()
        assert RunRecord.from_text(rec.to_text()) == rec

    def test_text_format_is_self_describing(self):
        text = record().to_text()
        assert text.startswith("# cpsdfo run record v1\n")
        assert "problem: P" in text
        assert text.rstrip().endswith("5 1.0")

    def test_monotonicity_enforced(self):
        with pytest.raises(ValueError, match="nondecreasing"):
            record(history=((5, 1.0), (0, 2.0)))
        with pytest.raises(ValueError, match="nonincreasing"):
            record(history=((0, 1.0), (5, 2.0)))

    def test_unknown_status(self):
        with pytest.raises(ValueError, match="status"):
            record(status="crashed")

    def test_default_filename(self):
        assert record().default_filename() == "P_n2_A_s0.run"

    @given(
        seed=st.integers(-1, 2**31),
        evals=st.lists(st.integers(0, 10**6), min_size=1, max_size=20),
        drops=st.lists(st.floats(0.0, 1e6, allow_nan=False), min_size=1, max_size=20),
        start=st.floats(-1e12, 1e12, allow_nan=False),
    )
    def test_round_trip_property(self, seed, evals, drops, start):
        evals = sorted(evals)
        values = [start]
        for d in drops[: len(evals) - 1]:
            values.append(values[-1] - d)
        history = tuple(zip(evals, values[: len(evals)]))
        rec = record(seed=seed, history=history)
        assert RunRecord.from_text(rec.to_text()) == rec


class TestConvergenceTest:
    def test_converged_threshold(self):
        rec = record(history=((0, 10.0), (5, 1.0)))
        assert converged(rec, f0=10.0, f_star=1.0, tau=1e-4)
        # a run that only got to 2.0 misses the 1e-4 gap closure
        rec2 = record(history=((0, 10.0), (5, 2.0)))
        assert not converged(rec2, f0=10.0, f_star=1.0, tau=1e-4)
        assert converged(rec2, f0=10.0, f_star=1.0, tau=0.2)

    def test_evals_to_converge_first_crossing(self):
        rec = record(history=((0, 10.0), (3, 5.0), (7, 1.0), (9, 0.5)))
        # tau = 0.5: target = 10 - 0.5 * (10 - 0.5) = 5.25
        assert evals_to_converge(rec, 10.0, 0.5, tau=0.5) == 3.0
        assert evals_to_converge(rec, 10.0, 0.5, tau=1e-6) == 9.0

    def test_evals_to_converge_never(self):
        rec = record(history=((0, 10.0), (5, 9.0)))
        assert evals_to_converge(rec, 10.0, 0.0, tau=1e-4) == math.inf

    def test_best_known_respects_budget_cutoff(self):
        rec = record(history=((0, 10.0), (50, 0.5), (200_000, 0.1)))
        best = best_known([rec], mu_f=100_000)
        assert best[("P", 2, 0)] == 0.5

    def test_best_known_across_solvers(self):
        best = best_known(FIXTURE)
        assert best[("P", 2, 0)] == 1.0
        assert best[("Q", 3, 0)] == 2.0


class TestProfiles:
    def test_performance_profile_hand_values(self):
        curves = {c.label: c.points for c in performance_profile(FIXTURE)}
        assert curves["A"] == ((1.0, 0.5),)
        assert curves["B"] == ((1.0, 0.5), (2.0, 1.0))

    def test_data_profile_hand_values(self):
        curves = {c.label: c.points for c in data_profile(FIXTURE)}
        assert curves["A"] == ((5.0 / 3.0, 0.5),)
        assert curves["B"] == ((1.5, 0.5), (10.0 / 3.0, 1.0))

    def test_unsolved_everything_gives_flat_zero(self):
        recs = [record("P", 2, "A", 0, ((0, 10.0), (5, 10.0)))]
        # alone, the solver's own best defines f_star: cost 0, ratio 1
        curves = performance_profile(recs)
        assert curves[0].points == ((1.0, 1.0),)
        # against a solver that actually descends it never converges
        both = recs + [record("P", 2, "B", 0, ((0, 10.0), (5, 0.0)))]
        curves = {c.label: c.points for c in performance_profile(both)}
        assert curves["A"] == ((1.0, 0.0),)

    def test_duplicate_records_first_wins(self):
        dup = FIXTURE + [record("P", 2, "A", 0, ((0, 10.0), (1, 1.0)))]
        curves = {c.label: c.points for c in performance_profile(dup)}
        assert curves["A"] == ((1.0, 0.5),)  # the later duplicate is ignored

    def test_format_profile(self):
        text = format_profile(
            [ProfileCurve("ps", ((1.0, 0.5), (2.0, 1.0)))], "perf", 1e-4
        )
        lines = text.splitlines()
        assert lines[0] == "# cpsdfo profile kind=perf tau=0.0001"
        assert lines[1] == "solver: ps"
        assert lines[2].split() == ["1.0", "0.5"]
        assert text.endswith("\n")

    @given(
        data=st.lists(
            st.tuples(
                st.sampled_from(["P", "Q", "R"]),
                st.sampled_from(["a", "b"]),
                st.lists(st.floats(0.0, 100.0, allow_nan=False), min_size=1, max_size=6),
            ),
            min_size=1,
            max_size=12,
        )
    )
    @settings(max_examples=60)
    def test_profile_curves_are_monotone_step_functions(self, data):
        records = []
        for problem, variant, drops in data:
            evals, value, history = 0, 100.0, [(0, 100.0)]
            for d in drops:
                evals += 1 + int(d)
                value -= d
                history.append((evals, value))
            records.append(record(problem, 4, variant, 0, tuple(history)))
        for build in (performance_profile, data_profile):
            for curve in build(records):
                xs = [x for x, _ in curve.points]
                ys = [y for _, y in curve.points]
                assert xs == sorted(xs)
                assert ys == sorted(ys)
                assert all(0.0 <= y <= 1.0 for y in ys)


class TestStorage:
    def test_save_load_round_trip(self, tmp_path):
        paths = save_records(FIXTURE, tmp_path)
        assert len(paths) == 4
        loaded = load_records(tmp_path)
        assert sorted(loaded, key=lambda r: (r.problem, r.variant)) == sorted(
            FIXTURE, key=lambda r: (r.problem, r.variant)
        )

    def test_load_ignores_other_files(self, tmp_path):
        (tmp_path / "notes.txt").write_text("not a record")
        save_records([record()], tmp_path)
        assert len(load_records(tmp_path)) == 1


class TestRunMatrix:
    def test_smoke_and_write(self, tmp_path):
        cfg = SolverConfig(max_full_evals=40)
        lines = []
        records = run_matrix(
            [("ROSENBR", 2)], ["ps"], seeds=[0, 1], cfg=cfg,
            out_dir=tmp_path, progress=lines.append,
        )
        assert len(records) == 2
        assert {r.seed for r in records} == {0, 1}
        assert all(r.full_equivalents <= 40 for r in records)
        assert len(load_records(tmp_path)) == 2
        assert len(lines) == 2

    def test_error_runs_are_recorded_not_raised(self):
        records = run_matrix([("ROSENBR", 2)], ["nonsense"], seeds=[0])
        assert len(records) == 1
        assert records[0].status == "error"
        assert records[0].final_f == math.inf


class TestCli:
    def test_solve_writes_record(self, tmp_path, capsys):
        out = tmp_path / "run.txt"
        code = main([
            "solve", "--problem", "ROSENBR", "--n", "2",
            "--variant", "ps", "--max-evals", "50", "--seed", "0",
            "--out", str(out),
        ])
        assert code == 0
        assert "ROSENBR" in capsys.readouterr().out
        rec = RunRecord.from_text(out.read_text())
        assert rec.problem == "ROSENBR" and rec.variant == "ps"

    def test_solve_out_directory_uses_default_name(self, tmp_path):
        main([
            "solve", "--problem", "ROSENBR", "--n", "2",
            "--max-evals", "30", "--seed", "1", "--out", str(tmp_path),
        ])
        assert (tmp_path / "ROSENBR_n2_ps_s1.run").exists()

    def test_bench_then_profile(self, tmp_path, capsys):
        records_dir = tmp_path / "records"
        code = main([
            "bench", "--set", "small", "--problems", "ROSENBR,TRIDIA",
            "--variants", "unstructured,ps", "--seeds", "2",
            "--budget", "60", "--out", str(records_dir),
        ])
        assert code == 0
        assert len(load_records(records_dir)) == 8
        capsys.readouterr()

        profile_path = tmp_path / "perf.txt"
        code = main([
            "profile", "--in", str(records_dir), "--kind", "perf",
            "--out", str(profile_path),
        ])
        assert code == 0
        text = profile_path.read_text()
        assert text.startswith("# cpsdfo profile kind=perf")
        assert "solver: ps" in text and "solver: unstructured" in text

        code = main(["profile", "--in", str(records_dir), "--kind", "data"])
        assert code == 0
        assert "kind=data" in capsys.readouterr().out

    def test_bench_rejects_unknown_variant(self, tmp_path, capsys):
        code = main([
            "bench", "--set", "small", "--variants", "bogus",
            "--out", str(tmp_path),
        ])
        assert code == 2
        assert "unknown variant" in capsys.readouterr().err

    def test_profile_empty_directory(self, tmp_path, capsys):
        code = main(["profile", "--in", str(tmp_path)])
        assert code == 2
        assert "no run records" in capsys.readouterr().err

    def test_list_problems(self, capsys):
        assert main(["list-problems"]) == 0
        out = capsys.readouterr().out
        assert "ARWHEAD" in out and "EXAMPLE5" in out
        assert "q=n-1, max|X|=2, t=2, max|I|=1" in out
