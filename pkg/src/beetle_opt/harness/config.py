"""TOML configuration for experiments and synthetic datasets.

Unknown sections or keys raise ``ConfigError``.
"""
from __future__ import annotations

import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..benchmarks.rc import DEFAULT_TRUTH, RcParameters, SyntheticSpec
from ..bas import BasConfig
from ..bsas import BsasConfig, CandidateRule
from ..core import ScheduleState, SignConvention, StoppingRule

__all__ = [
    "ConfigError",
    "ProblemSection",
    "AlgorithmSection",
    "ScheduleSection",
    "StoppingSection",
    "ExperimentSection",
    "ExperimentConfig",
    "DatasetConfig",
    "load_experiment_config",
    "load_dataset_config",
]

PROBLEM_KINDS = ("rc", "goldstein_price", "michalewicz", "sphere")


class ConfigError(ValueError):
    pass


def _build(cls, data, section):
    if not isinstance(data, dict):
        raise ConfigError(f"[{section}] must be a table")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(unknown)}")
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{section}]: {exc}") from exc


@dataclass(frozen=True)
class ProblemSection:
    kind: str = "rc"
    dataset: Optional[str] = None
    dimension: int = 2
    scale_band: float = 0.5
    temperature_band: float = 5.0
    penalty: float = 1e6

    def __post_init__(self):
        if self.kind not in PROBLEM_KINDS:
            raise ValueError(f"kind must be one of {', '.join(PROBLEM_KINDS)}")
        if self.kind == "rc" and not self.dataset:
            raise ValueError("kind = 'rc' needs a dataset path")
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise ValueError("dimension must be a positive integer")


@dataclass(frozen=True)
class AlgorithmSection:
    variants: tuple = ("bas", "bsas")
    k: tuple = (1, 2, 3, 4, 5)
    p_delta: float = 0.2
    sign_convention: str = SignConvention.TOWARD_BETTER.value
    candidate_rule: str = CandidateRule.DETECT_STEP.value

    def __post_init__(self):
        object.__setattr__(self, "variants", tuple(self.variants))
        ks = (self.k,) if isinstance(self.k, int) else tuple(self.k)
        object.__setattr__(self, "k", ks)
        if not self.variants or any(v not in ("bas", "bsas") for v in self.variants):
            raise ValueError("variants must be a nonempty list drawn from 'bas', 'bsas'")
        if len(set(self.variants)) != len(self.variants):
            raise ValueError("variants must not repeat")
        if "bsas" in self.variants and not ks:
            raise ValueError("k must list at least one swarm size")
        if any(not isinstance(k, int) or k < 1 for k in ks):
            raise ValueError("every k must be a positive integer")
        if not 0.0 <= self.p_delta <= 1.0:
            raise ValueError("p_delta must lie in [0, 1]")
        SignConvention(self.sign_convention)
        CandidateRule(self.candidate_rule)


@dataclass(frozen=True)
class ScheduleSection:
    """Initial schedule; ``d`` defaults to ``delta / 0.5``."""

    delta: float = 1.0
    d: Optional[float] = None
    eta_d: float = 0.99
    eta_delta: float = 0.99
    d_floor: float = 1e-6
    delta_floor: float = 1e-6

    def __post_init__(self):
        self.state()

    def state(self) -> ScheduleState:
        d = self.delta / 0.5 if self.d is None else self.d
        return ScheduleState(d=d, delta=self.delta, eta_d=self.eta_d, eta_delta=self.eta_delta,
                             d_floor=self.d_floor, delta_floor=self.delta_floor)


@dataclass(frozen=True)
class StoppingSection:
    max_iterations: int = 2000
    delta_criterion: float = 1e-8

    def __post_init__(self):
        self.rule()

    def rule(self) -> StoppingRule:
        return StoppingRule(self.max_iterations, self.delta_criterion)


@dataclass(frozen=True)
class ExperimentSection:
    trials: int = 50
    base_seed: int = 0
    bin_count: int = 15
    workers: int = 1

    def __post_init__(self):
        for name in ("trials", "bin_count", "workers"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive integer")
        if not isinstance(self.base_seed, int) or self.base_seed < 0:
            raise ValueError("base_seed must be a nonnegative integer")


_SECTIONS = {
    "problem": ProblemSection,
    "algorithm": AlgorithmSection,
    "schedule": ScheduleSection,
    "stopping": StoppingSection,
    "experiment": ExperimentSection,
}


@dataclass(frozen=True)
class ExperimentConfig:
    problem: ProblemSection = field(default_factory=lambda: ProblemSection(kind="goldstein_price"))
    algorithm: AlgorithmSection = field(default_factory=AlgorithmSection)
    schedule: ScheduleSection = field(default_factory=ScheduleSection)
    stopping: StoppingSection = field(default_factory=StoppingSection)
    experiment: ExperimentSection = field(default_factory=ExperimentSection)
    base_dir: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        try:
            self.bas_config()
            self.bsas_config(1)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_dict(cls, data: dict, base_dir=None) -> "ExperimentConfig":
        unknown = sorted(set(data) - set(_SECTIONS))
        if unknown:
            raise ConfigError(f"unknown section(s): {', '.join(unknown)}")
        sections = {name: _build(sec, data.get(name, {}), name) for name, sec in _SECTIONS.items()}
        return cls(**sections, base_dir=None if base_dir is None else str(base_dir))

    def to_dict(self) -> dict:
        out = {name: asdict(getattr(self, name)) for name in _SECTIONS}
        out["algorithm"]["variants"] = list(self.algorithm.variants)
        out["algorithm"]["k"] = list(self.algorithm.k)
        return out

    def variants(self) -> list[tuple[str, int]]:
        out = []
        for v in self.algorithm.variants:
            if v == "bas":
                out.append(("bas", 1))
            else:
                out.extend(("bsas", k) for k in self.algorithm.k)
        return out

    def dataset_path(self) -> Optional[Path]:
        if self.problem.dataset is None:
            return None
        p = Path(self.problem.dataset)
        if not p.is_absolute() and self.base_dir is not None:
            p = Path(self.base_dir) / p
        return p

    def bas_config(self) -> BasConfig:
        return BasConfig(schedule=self.schedule.state(), stopping=self.stopping.rule(),
                         sign_convention=self.algorithm.sign_convention)

    def bsas_config(self, k: int) -> BsasConfig:
        return BsasConfig(k=k, p_delta=self.algorithm.p_delta, schedule=self.schedule.state(),
                          stopping=self.stopping.rule(),
                          sign_convention=self.algorithm.sign_convention,
                          candidate_rule=self.algorithm.candidate_rule)


def _read_toml(path) -> dict:
    path = Path(path)
    try:
        with path.open("rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def load_experiment_config(path) -> ExperimentConfig:
    path = Path(path)
    return ExperimentConfig.from_dict(_read_toml(path), base_dir=path.parent)


@dataclass(frozen=True)
class DatasetConfig:
    """Ground truth plus generation settings for ``gen-data``."""

    truth: RcParameters = DEFAULT_TRUTH
    generation: SyntheticSpec = field(default_factory=SyntheticSpec)

    @classmethod
    def from_dict(cls, data: dict) -> "DatasetConfig":
        unknown = sorted(set(data) - {"truth", "generation"})
        if unknown:
            raise ConfigError(f"unknown section(s): {', '.join(unknown)}")
        truth = data.get("truth")
        truth = DEFAULT_TRUTH if truth is None else _build(
            RcParameters, {**DEFAULT_TRUTH.to_dict(), **truth}, "truth")
        return cls(truth=truth, generation=_build(SyntheticSpec, data.get("generation", {}),
                                                  "generation"))


def load_dataset_config(path) -> DatasetConfig:
    return DatasetConfig.from_dict(_read_toml(path))
