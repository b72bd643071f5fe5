"""Beetle swarm antennae search.

Each iteration sends ``k`` beetles out from the shared position along
independent random directions. The position jumps to the best candidate
only when it beats the incumbent. Otherwise a uniform coin decides whether
the antenna length and step size decay (coin above ``p_delta``) or stay put.
"""
from __future__ import annotations

import enum
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

__all__ = ["CandidateRule", "BsasConfig", "bsas_iteration", "run_bsas"]


class CandidateRule(str, enum.Enum):
    """How each beetle turns its two antenna readings into one candidate.

    ``DETECT_STEP`` takes a step of length ``delta`` toward the better antenna.
    ``BEST_ANTENNA`` adopts the better antenna tip itself.
    """

    DETECT_STEP = "detect_step"
    BEST_ANTENNA = "best_antenna"


@dataclass(frozen=True)
class BsasConfig:
    k: int = 5
    p_delta: float = 0.2
    schedule: ScheduleState = field(default_factory=ScheduleState.from_step)
    stopping: StoppingRule = field(default_factory=StoppingRule)
    sign_convention: SignConvention = SignConvention.TOWARD_BETTER
    candidate_rule: CandidateRule = CandidateRule.DETECT_STEP
    x0: Optional[tuple] = None

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k}")
        if not 0.0 <= self.p_delta <= 1.0:
            raise ValueError(f"p_delta must lie in [0, 1], got {self.p_delta}")
        if not self.schedule.delta > self.stopping.delta_criterion:
            raise ValueError("initial delta must exceed delta_criterion")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "sign_convention", SignConvention(self.sign_convention))
        object.__setattr__(self, "candidate_rule", CandidateRule(self.candidate_rule))


@dataclass(frozen=True)
class _Outcome:
    incumbent: BeetleIncumbent
    schedule: ScheduleState
    improved: bool
    coin: Optional[float]
    updated: bool


def _iterate(incumbent, schedule, config, problem, rng, directions=None):
    x = incumbent.x
    n = problem.dimension
    if directions is None:
        # all k directions come off the stream before any evaluation
        directions = [sample_unit_direction(rng, n) for _ in range(config.k)]
    else:
        directions = [np.asarray(b, dtype=float) for b in directions]
        if len(directions) != config.k:
            raise ValueError(f"expected {config.k} directions, got {len(directions)}")
    at_best = np.array_equal(x, incumbent.x_best)

    candidates = []
    values = np.empty(len(directions))
    for i, b in enumerate(directions):
        x_r, x_l = antenna_probes(x, schedule.d, b)
        x_r = clamp_to_bounds(x_r, problem)
        x_l = clamp_to_bounds(x_l, problem)
        f_r = problem.evaluate(x_r)
        f_l = problem.evaluate(x_l)
        if config.candidate_rule is CandidateRule.BEST_ANTENNA:
            if f_r < f_l:
                cand, f_cand = x_r, f_r
            elif f_l < f_r:
                cand, f_cand = x_l, f_l
            else:
                cand, f_cand = x, None
        else:
            cand = clamp_to_bounds(
                detect_step(x, schedule.delta, b, f_r, f_l, config.sign_convention), problem)
            f_cand = None
        if f_cand is None:
            if f_r == f_l and at_best:
                # a tie leaves the candidate on x, whose value is known
                f_cand = incumbent.f_best
            else:
                f_cand = problem.evaluate(cand)
        candidates.append(cand)
        values[i] = f_cand

    best = int(np.argmin(values))  # lowest index wins ties
    if values[best] < incumbent.f_best:
        x_new = candidates[best]
        return _Outcome(BeetleIncumbent(x_new, x_new, float(values[best])), schedule,
                        True, None, False)
    # coin in (0, 1] so that p_delta = 0 always decays and p_delta = 1 never does
    coin = 1.0 - rng.random()
    if coin > config.p_delta:
        return _Outcome(incumbent, update_schedule(schedule), False, coin, True)
    return _Outcome(incumbent, schedule, False, coin, False)


def bsas_iteration(incumbent: BeetleIncumbent, schedule: ScheduleState, config: BsasConfig,
                   problem: SearchProblem, rng: np.random.Generator, directions=None):
    """Run one swarm iteration and return ``(incumbent, schedule, improved)``.

    Pass ``directions`` (a sequence of ``k`` unit vectors) to replace the
    random draws.
    """
    out = _iterate(incumbent, schedule, config, problem, rng, directions)
    return out.incumbent, out.schedule, out.improved


def run_bsas(problem: SearchProblem, config: BsasConfig = None, seed: int = 0,
             record_trace: bool = False) -> RunRecord:
    """Minimize ``problem`` with a swarm of ``config.k`` beetles."""
    config = BsasConfig() if config is None else config
    book = RunBook(problem, "bsas", config.k, seed, record_trace)
    unit = book.unit
    rng = make_rng(seed)
    schedule = config.schedule
    try:
        x = book.start_point(rng, config.x0)
        incumbent = BeetleIncumbent(x, x, unit.evaluate(x))
        book.trajectory.append(incumbent.f_best)
        book.x_best = x
        t = 0
        while config.stopping.should_continue(t, schedule.delta):
            before = book.counter.count
            out = _iterate(incumbent, schedule, config, unit, rng)
            incumbent, schedule = out.incumbent, out.schedule
            book.log(x=incumbent.x, f_x=incumbent.f_best, f_best=incumbent.f_best,
                     x_best=incumbent.x_best, improved=out.improved, coin=out.coin,
                     updated=out.updated, schedule=schedule,
                     evals=book.counter.count - before)
            t += 1
    except Exception as exc:
        raise book.fail(exc) from exc
    return book.record()
