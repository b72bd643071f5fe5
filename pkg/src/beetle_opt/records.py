"""Result containers returned by ``run_bas`` and ``run_bsas``."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional


@dataclass(frozen=True)
class IterationTrace:
    """State after one iteration, kept only when a run asks for tracing.

    ``coin`` is the uniform draw that gates schedule attenuation in the swarm
    search; it is ``None`` on improving iterations and for the single beetle.
    Positions are in unit-box coordinates.
    """

    t: int
    x: tuple
    f_x: Optional[float]
    f_best: float
    improved: bool
    coin: Optional[float]
    schedule_updated: bool
    d: float
    delta: float
    evaluations: int


@dataclass(frozen=True)
class RunRecord:
    """Summary of one optimizer run.

    ``f_best_trajectory[0]`` is the value at the starting point and entry ``t``
    is the incumbent after iteration ``t``. ``wall_time_ms`` is excluded from
    equality so that identical seeds compare equal.
    """

    algorithm: str
    k: int
    seed: int
    f_best_final: float
    x_best: tuple
    f_best_trajectory: tuple
    iterations: int
    evaluations: int
    improving_iterations: int
    schedule_updates: int
    wall_time_ms: int = field(default=0, compare=False)
    error: Optional[str] = None
    trace: Optional[tuple] = None

    @property
    def non_improving_iterations(self) -> int:
        return self.iterations - self.improving_iterations

    def to_dict(self, include_trace=False) -> dict:
        out = asdict(self)
        if not include_trace:
            out.pop("trace")
        return out


class OptimizationError(RuntimeError):
    """Raised when the objective fails mid-run; ``record`` holds the partial run."""

    def __init__(self, message, record: RunRecord):
        super().__init__(message)
        self.record = record
