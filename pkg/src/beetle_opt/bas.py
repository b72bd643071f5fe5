"""Single-beetle antennae search.

The beetle moves after every probe pair and both schedules decay every
iteration, whether or not the move helped. The best point seen is tracked
separately so results are comparable with the swarm search.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._runner import RunBook
from .core import (
    BeetleIncumbent,
    ScheduleState,
    SearchProblem,
    SignConvention,
    StoppingRule,
    antenna_probes,
    clamp_to_bounds,
    detect_step,
    make_rng,
    sample_unit_direction,
    update_schedule,
)
from .records import RunRecord

__all__ = ["BasConfig", "bas_step", "run_bas"]


@dataclass(frozen=True)
class BasConfig:
    schedule: ScheduleState = field(default_factory=ScheduleState.from_step)
    stopping: StoppingRule = field(default_factory=StoppingRule)
    sign_convention: SignConvention = SignConvention.TOWARD_BETTER
    x0: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "sign_convention", SignConvention(self.sign_convention))
        if not self.schedule.delta > self.stopping.delta_criterion:
            raise ValueError("initial delta must exceed delta_criterion")


def _bas_step(incumbent, schedule, problem, rng, sign_convention, direction=None):
    x = incumbent.x
    b = sample_unit_direction(rng, problem.dimension) if direction is None else np.asarray(direction, float)
    x_r, x_l = antenna_probes(x, schedule.d, b)
    f_r = problem.evaluate(clamp_to_bounds(x_r, problem))
    f_l = problem.evaluate(clamp_to_bounds(x_l, problem))
    x_new = clamp_to_bounds(detect_step(x, schedule.delta, b, f_r, f_l, sign_convention), problem)

    f_new = None
    x_best, f_best = incumbent.x_best, incumbent.f_best
    if f_r != f_l:
        f_new = problem.evaluate(x_new)
        if f_new < f_best:
            x_best, f_best = x_new, f_new
    return BeetleIncumbent(x_new, x_best, f_best), update_schedule(schedule), f_new


def bas_step(incumbent: BeetleIncumbent, schedule: ScheduleState, problem: SearchProblem,
             rng: np.random.Generator, sign_convention=SignConvention.TOWARD_BETTER,
             direction=None):
    """One probe-and-move iteration.

    ``direction`` overrides the random unit vector. A tie between the antennae
    leaves the beetle in place and skips the third evaluation.
    """
    incumbent, schedule, _ = _bas_step(incumbent, schedule, problem, rng,
                                       sign_convention, direction)
    return incumbent, schedule


def run_bas(problem: SearchProblem, config: BasConfig = None, seed: int = 0,
            record_trace: bool = False) -> RunRecord:
    """Minimize ``problem`` with a single beetle.

    The search runs on the unit box; ``x_best`` in the returned record is in
    the problem's own coordinates. On objective failure an
    ``OptimizationError`` carrying the partial record is raised.
    """
    config = BasConfig() if config is None else config
    book = RunBook(problem, "bas", 1, seed, record_trace)
    unit = book.unit
    rng = make_rng(seed)
    schedule = config.schedule
    try:
        x = book.start_point(rng, config.x0)
        f_x = unit.evaluate(x)
        incumbent = BeetleIncumbent(x, x, f_x)
        book.trajectory.append(f_x)
        book.x_best = x
        t = 0
        while config.stopping.should_continue(t, schedule.delta):
            before = book.counter.count
            previous = incumbent.f_best
            incumbent, schedule, f_new = _bas_step(incumbent, schedule, unit, rng,
                                                   config.sign_convention)
            if f_new is not None:
                f_x = f_new
            book.log(x=incumbent.x, f_x=f_x, f_best=incumbent.f_best, x_best=incumbent.x_best,
                     improved=incumbent.f_best < previous, coin=None, updated=True,
                     schedule=schedule, evals=book.counter.count - before)
            t += 1
    except Exception as exc:
        raise book.fail(exc) from exc
    return book.record()
