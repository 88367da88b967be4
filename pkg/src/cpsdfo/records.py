"""Run records: the on-disk unit of benchmark output.

A run record stores what a single solver run did: identifying metadata,
the termination status, and the history of best objective values
sampled at every improvement (plus a terminal sample).  The text format
is a key/value metadata block followed by a two-column history table;
all floats are written with full round-trip precision.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["RunRecord"]

STATUSES = ("converged", "budget", "time", "error")


@dataclass(frozen=True)
class RunRecord:
    problem: str
    n: int
    variant: str
    seed: int
    status: str
    final_f: float
    full_equivalents: int
    history: tuple[tuple[int, float], ...]
    wall_time: float

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        evals = [e for e, _ in self.history]
        values = [f for _, f in self.history]
        if evals != sorted(evals):
            raise ValueError("history evaluation counts must be nondecreasing")
        if any(b > a for a, b in zip(values, values[1:])):
            raise ValueError("history objective values must be nonincreasing")

    @property
    def best_f(self) -> float:
        return self.history[-1][1] if self.history else self.final_f

    def default_filename(self) -> str:
        return f"{self.problem}_n{self.n}_{self.variant}_s{self.seed}.run"

    def to_text(self) -> str:
        lines = [
            "# cpsdfo run record v1",
            f"problem: {self.problem}",
            f"n: {self.n}",
            f"variant: {self.variant}",
            f"seed: {self.seed}",
            f"status: {self.status}",
            f"final_f: {self.final_f!r}",
            f"full_equivalents: {self.full_equivalents}",
            f"wall_time: {self.wall_time!r}",
            "history:",
        ]
        lines.extend(f"{e} {f!r}" for e, f in self.history)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunRecord":
        meta: dict[str, str] = {}
        history: list[tuple[int, float]] = []
        in_history = False
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if in_history:
                e, f = line.split()
                history.append((int(e), float(f)))
            elif line == "history:":
                in_history = True
            else:
                key, _, value = line.partition(":")
                meta[key.strip()] = value.strip()
        return cls(
            problem=meta["problem"],
            n=int(meta["n"]),
            variant=meta["variant"],
            seed=int(meta["seed"]),
            status=meta["status"],
            final_f=float(meta["final_f"]),
            full_equivalents=int(meta["full_equivalents"]),
            history=tuple(history),
            wall_time=float(meta["wall_time"]),
        )
