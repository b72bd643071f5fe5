"""Primitives shared by the single-beetle and swarm searches.

Everything here works on plain numpy vectors. Searches run on the unit box;
``SearchProblem.normalized`` builds that view of a physical problem.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

__all__ = [
    "SignConvention",
    "SearchProblem",
    "ScheduleState",
    "BeetleIncumbent",
    "StoppingRule",
    "make_rng",
    "spawn_rngs",
    "sample_unit_direction",
    "antenna_probes",
    "detect_step",
    "update_schedule",
    "clamp_to_bounds",
    "normalize_coords",
    "denormalize_coords",
    "CountingObjective",
]


class SignConvention(str, enum.Enum):
    """Direction of the detection step.

    ``TOWARD_BETTER`` moves toward the antenna with the lower objective value.
    ``AS_PRINTED`` uses ``x + delta * b * sign(f_r - f_l)``, which moves
    toward the worse antenna when minimizing.
    """

    TOWARD_BETTER = "toward_better"
    AS_PRINTED = "as_printed"


def _as_vector(x, name="x"):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"{name} must be a 1-D vector, got shape {x.shape}")
    return x


@dataclass(frozen=True)
class SearchProblem:
    """A box-bounded minimization target.

    Parameters
    ----------
    lower_bounds, upper_bounds : array-like of shape (n,)
        Finite box edges with ``lower < upper`` componentwise.
    objective : callable
        Deterministic map from a length-n vector to a float.
    name : str
        Label used in reports.
    """

    lower_bounds: np.ndarray
    upper_bounds: np.ndarray
    objective: Callable[[np.ndarray], float]
    name: str = "problem"

    def __post_init__(self):
        lo = _as_vector(self.lower_bounds, "lower_bounds")
        hi = _as_vector(self.upper_bounds, "upper_bounds")
        if lo.shape != hi.shape or lo.size == 0:
            raise ValueError("lower_bounds and upper_bounds must be nonempty and equal length")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("bounds must be finite")
        if not np.all(lo < hi):
            raise ValueError("lower_bounds must be strictly below upper_bounds")
        if not callable(self.objective):
            raise TypeError("objective must be callable")
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lower_bounds", lo)
        object.__setattr__(self, "upper_bounds", hi)

    @property
    def dimension(self) -> int:
        return self.lower_bounds.size

    def evaluate(self, x) -> float:
        return float(self.objective(x))

    def normalized(self) -> "SearchProblem":
        """The same problem seen through unit-box coordinates."""
        n = self.dimension
        objective = self.objective

        def unit_objective(z):
            return objective(denormalize_coords(z, self))

        return SearchProblem(np.zeros(n), np.ones(n), unit_objective, name=self.name)


@dataclass(frozen=True)
class ScheduleState:
    """Antenna length ``d`` and step size ``delta`` with their decay constants."""

    d: float
    delta: float
    eta_d: float = 0.99
    eta_delta: float = 0.99
    d_floor: float = 1e-6
    delta_floor: float = 1e-6

    def __post_init__(self):
        if self.d < 0 or self.delta < 0:
            raise ValueError("d and delta must be nonnegative")
        for name in ("eta_d", "eta_delta"):
            eta = getattr(self, name)
            if not 0.0 < eta < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {eta}")
        if self.d_floor < 0 or self.delta_floor < 0:
            raise ValueError("floors must be nonnegative")

    @classmethod
    def from_step(cls, delta0=1.0, ratio=0.5, **kwargs) -> "ScheduleState":
        """Build a schedule whose antenna length is ``delta0 / ratio``."""
        return cls(d=delta0 / ratio, delta=delta0, **kwargs)

    @property
    def fixed_points(self) -> tuple[float, float]:
        return (self.d_floor / (1.0 - self.eta_d), self.delta_floor / (1.0 - self.eta_delta))


@dataclass(frozen=True)
class BeetleIncumbent:
    x: np.ndarray
    x_best: np.ndarray
    f_best: float


@dataclass(frozen=True)
class StoppingRule:
    """Continue while ``t < max_iterations`` and ``delta > delta_criterion``."""

    max_iterations: int = 2000
    delta_criterion: float = 1e-8

    def __post_init__(self):
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError("max_iterations must be a positive integer")
        if self.delta_criterion < 0:
            raise ValueError("delta_criterion must be nonnegative")

    def should_continue(self, t: int, delta: float) -> bool:
        return t < self.max_iterations and delta > self.delta_criterion


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator for ``seed`` (any nonnegative int below 2**64)."""
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must fit in an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def spawn_rngs(seed, count: int) -> list[np.random.Generator]:
    """Independent PCG64 substreams derived from one seed."""
    children = np.random.SeedSequence(int(seed)).spawn(count)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def sample_unit_direction(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform draw from the unit sphere in R^n (normalized Gaussian)."""
    if int(n) != n or n < 1:
        raise ValueError(f"dimension must be a positive integer, got {n}")
    while True:
        v = rng.standard_normal(int(n))
        norm = np.linalg.norm(v)
        if norm > 0.0:
            return v / norm


def antenna_probes(x, d: float, b) -> tuple[np.ndarray, np.ndarray]:
    """Right and left antenna tips ``x + d*b`` and ``x - d*b``."""
    x = _as_vector(x)
    b = _as_vector(b, "b")
    if x.shape != b.shape:
        raise ValueError(f"x and b differ in length: {x.size} != {b.size}")
    return x + d * b, x - d * b


def detect_step(x, delta: float, b, f_r: float, f_l: float,
                sign_convention=SignConvention.TOWARD_BETTER) -> np.ndarray:
    """Move ``x`` by ``delta`` along ``b`` based on the two antenna readings.

    A tie (``f_r == f_l``) returns ``x`` unchanged.
    """
    x = _as_vector(x)
    b = _as_vector(b, "b")
    if x.shape != b.shape:
        raise ValueError(f"x and b differ in length: {x.size} != {b.size}")
    s = float(np.sign(f_r - f_l))
    if SignConvention(sign_convention) is SignConvention.TOWARD_BETTER:
        return x - delta * s * b
    return x + delta * s * b


def update_schedule(s: ScheduleState) -> ScheduleState:
    return replace(s, d=s.eta_d * s.d + s.d_floor,
                   delta=s.eta_delta * s.delta + s.delta_floor)


def clamp_to_bounds(x, problem: SearchProblem) -> np.ndarray:
    x = _as_vector(x)
    if x.size != problem.dimension:
        raise ValueError(f"expected length {problem.dimension}, got {x.size}")
    return np.clip(x, problem.lower_bounds, problem.upper_bounds)


def normalize_coords(x_physical, problem: SearchProblem) -> np.ndarray:
    """Affine map of the problem box onto [0, 1]^n."""
    x = _as_vector(x_physical)
    lo, hi = problem.lower_bounds, problem.upper_bounds
    return (x - lo) / (hi - lo)


def denormalize_coords(z, problem: SearchProblem) -> np.ndarray:
    z = _as_vector(z)
    lo, hi = problem.lower_bounds, problem.upper_bounds
    return lo + z * (hi - lo)


@dataclass
class CountingObjective:
    """Wraps an objective and counts calls."""

    func: Callable[[np.ndarray], float]
    count: int = field(default=0)

    def __call__(self, x) -> float:
        self.count += 1
        return float(self.func(x))
