from __future__ import annotations

import time

import numpy as np

from .core import CountingObjective, SearchProblem, denormalize_coords, normalize_coords
from .records import IterationTrace, OptimizationError, RunRecord


class RunBook:
    """Bookkeeping for one run on the unit-box view of a problem."""

    def __init__(self, problem: SearchProblem, algorithm, k, seed, record_trace):
        self.physical = problem
        self.counter = CountingObjective(problem.normalized().objective)
        self.unit = SearchProblem(np.zeros(problem.dimension), np.ones(problem.dimension),
                                  self.counter, name=problem.name)
        self.algorithm = algorithm
        self.k = k
        self.seed = seed
        self.trace = [] if record_trace else None
        self.trajectory = []
        self.improving = 0
        self.schedule_updates = 0
        self.iterations = 0
        self.x_best = None
        self._t0 = time.perf_counter()

    def start_point(self, rng, x0):
        if x0 is None:
            return rng.random(self.physical.dimension)
        z = normalize_coords(np.asarray(x0, dtype=float), self.physical)
        if z.size != self.physical.dimension:
            raise ValueError("x0 has the wrong length")
        return np.clip(z, 0.0, 1.0)

    def log(self, *, x, f_x, f_best, x_best, improved, coin, updated, schedule, evals):
        self.iterations += 1
        self.improving += bool(improved)
        self.schedule_updates += bool(updated)
        self.trajectory.append(float(f_best))
        self.x_best = x_best
        if self.trace is not None:
            self.trace.append(IterationTrace(
                t=self.iterations, x=tuple(float(v) for v in x),
                f_x=None if f_x is None else float(f_x), f_best=float(f_best),
                improved=bool(improved), coin=coin, schedule_updated=bool(updated),
                d=float(schedule.d), delta=float(schedule.delta), evaluations=int(evals)))

    def record(self, error=None) -> RunRecord:
        if self.x_best is None:
            x_best = ()
        else:
            x_best = tuple(float(v) for v in denormalize_coords(self.x_best, self.physical))
        return RunRecord(
            algorithm=self.algorithm, k=self.k, seed=int(self.seed),
            f_best_final=self.trajectory[-1] if self.trajectory else float("nan"),
            x_best=x_best, f_best_trajectory=tuple(self.trajectory),
            iterations=self.iterations, evaluations=self.counter.count,
            improving_iterations=self.improving, schedule_updates=self.schedule_updates,
            wall_time_ms=int(round((time.perf_counter() - self._t0) * 1000)),
            error=error, trace=None if self.trace is None else tuple(self.trace))

    def fail(self, exc) -> OptimizationError:
        rec = self.record(error=f"{type(exc).__name__}: {exc}")
        return OptimizationError(f"{self.algorithm} run (seed {self.seed}) failed: {exc}", rec)

