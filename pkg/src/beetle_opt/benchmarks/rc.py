"""Three-node RC thermal model of a single-zone building.

Nodes are the envelope (``T_e``), indoor air (``T_in``) and internal mass
(``T_m``). The envelope couples to outdoors through ``R1`` and to the air
through ``R2``; the air couples to the mass through ``R3``. Heat inputs
``Q_in + Q_c + Q_solar`` act on the air node.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from ..core import SearchProblem
from .integrate import rk4_linear_zoh

__all__ = [
    "PARAMETER_NAMES",
    "RcParameters",
    "RcState",
    "RcForcing",
    "RcDataset",
    "SyntheticSpec",
    "DEFAULT_TRUTH",
    "rc_derivatives",
    "rc_system",
    "rk4_simulate",
    "simulate_states",
    "mae",
    "mae_objective",
    "generate_synthetic_dataset",
    "rc_identification_problem",
    "decode_search_vector",
    "save_dataset",
    "load_dataset",
]

PARAMETER_NAMES = ("T_e0", "T_in0", "T_m0", "C1", "C_in", "C_m", "R1", "R2", "R3")
CSV_HEADER = ("t_s", "T_out", "Q_in", "Q_c", "Q_solar", "T_in_obs")
DEFAULT_PENALTY = 1e6


@dataclass(frozen=True)
class RcParameters:
    T_e0: float
    T_in0: float
    T_m0: float
    C1: float
    C_in: float
    C_m: float
    R1: float
    R2: float
    R3: float

    def __post_init__(self):
        for name in PARAMETER_NAMES:
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        for name in PARAMETER_NAMES[3:]:
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive, got {getattr(self, name)}")

    @classmethod
    def from_vector(cls, values) -> "RcParameters":
        values = np.asarray(values, dtype=float)
        if values.shape != (9,):
            raise ValueError(f"expected 9 parameters, got shape {values.shape}")
        return cls(*values.tolist())

    def to_vector(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in PARAMETER_NAMES])

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_TRUTH = RcParameters(T_e0=28.0, T_in0=26.0, T_m0=26.0, C1=3e6, C_in=5e5, C_m=8e6,
                             R1=5e-3, R2=5e-3, R3=2e-3)


@dataclass(frozen=True)
class RcState:
    T_e: float
    T_in: float
    T_m: float


@dataclass(frozen=True)
class RcForcing:
    """Uniformly sampled drivers. ``Q_c`` is cooling power and must be <= 0."""

    timestamps: np.ndarray
    T_out: np.ndarray
    Q_in: np.ndarray
    Q_c: np.ndarray
    Q_solar: np.ndarray

    def __post_init__(self):
        arrays = {}
        for f in fields(self):
            a = np.asarray(getattr(self, f.name), dtype=float)
            if a.ndim != 1:
                raise ValueError(f"{f.name} must be 1-D")
            if not np.all(np.isfinite(a)):
                raise ValueError(f"{f.name} contains non-finite values")
            a.flags.writeable = False
            arrays[f.name] = a
        lengths = {a.size for a in arrays.values()}
        if len(lengths) != 1:
            raise ValueError("forcing series must share one length")
        t = arrays["timestamps"]
        if t.size >= 2:
            steps = np.diff(t)
            if np.any(steps <= 0):
                raise ValueError("timestamps must be strictly increasing")
            if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
                raise ValueError("timestamps must be uniformly spaced")
        if np.any(arrays["Q_c"] > 0):
            raise ValueError("Q_c is cooling power and must be nonpositive")
        for name, a in arrays.items():
            object.__setattr__(self, name, a)
        inputs = np.column_stack([arrays["T_out"], arrays["Q_in"], arrays["Q_c"], arrays["Q_solar"]])
        inputs.flags.writeable = False
        object.__setattr__(self, "_inputs", inputs)

    def __len__(self):
        return self.timestamps.size

    @property
    def h(self) -> float:
        t = self.timestamps
        return float(t[1] - t[0]) if t.size >= 2 else 0.0

    def inputs(self) -> np.ndarray:
        """Input matrix with columns ``T_out, Q_in, Q_c, Q_solar``."""
        return self._inputs


@dataclass(frozen=True)
class RcDataset:
    forcing: RcForcing
    T_in_obs: np.ndarray
    truth: Optional[RcParameters] = None
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        obs = np.asarray(self.T_in_obs, dtype=float)
        if obs.ndim != 1 or obs.size != len(self.forcing):
            raise ValueError("T_in_obs must match the forcing length")
        if obs.size < 2:
            raise ValueError("need at least two observations")
        obs.flags.writeable = False
        object.__setattr__(self, "T_in_obs", obs)


def rc_derivatives(state: RcState, params: RcParameters, forcing_sample) -> RcState:
    """Time derivatives (degC/s) of the three node temperatures.

    ``forcing_sample`` is a mapping with keys ``T_out, Q_in, Q_c, Q_solar``.
    """
    p = params
    for name in PARAMETER_NAMES[3:]:
        if getattr(p, name) <= 0:
            raise ValueError(f"{name} must be strictly positive")
    q = forcing_sample["Q_in"] + forcing_sample["Q_c"] + forcing_sample["Q_solar"]
    dT_e = (forcing_sample["T_out"] - state.T_e) / (p.R1 * p.C1)
    dT_in = ((state.T_e - state.T_in) / p.R2 - (state.T_in - state.T_m) / p.R3 + q) / p.C_in
    dT_m = (state.T_in - state.T_m) / (p.R3 * p.C_m)
    return RcState(dT_e, dT_in, dT_m)


def rc_system(params: RcParameters) -> tuple[np.ndarray, np.ndarray]:
    """``(A, B)`` with ``d[T_e, T_in, T_m]/dt = A x + B [T_out, Q_in, Q_c, Q_solar]``."""
    return _system_from_vector(params.to_vector())


def _system_from_vector(v):
    _, _, _, C1, C_in, C_m, R1, R2, R3 = v
    A = np.array([
        [-1.0 / (R1 * C1), 0.0, 0.0],
        [1.0 / (R2 * C_in), -(1.0 / R2 + 1.0 / R3) / C_in, 1.0 / (R3 * C_in)],
        [0.0, 1.0 / (R3 * C_m), -1.0 / (R3 * C_m)],
    ])
    B = np.zeros((3, 4))
    B[0, 0] = 1.0 / (R1 * C1)
    B[1, 1:] = 1.0 / C_in
    return A, B


def simulate_states(params: RcParameters, forcing: RcForcing) -> np.ndarray:
    """All three node temperatures at every timestamp, shape ``(N, 3)``."""
    A, B = rc_system(params)
    x0 = np.array([params.T_e0, params.T_in0, params.T_m0])
    return rk4_linear_zoh(A, B, forcing.inputs(), x0, forcing.h)


def rk4_simulate(params: RcParameters, forcing: RcForcing) -> np.ndarray:
    """Simulated indoor temperature at every timestamp (first entry ``T_in0``)."""
    return simulate_states(params, forcing)[:, 1]


def mae(simulated, observed) -> float:
    simulated = np.asarray(simulated, dtype=float)
    observed = np.asarray(observed, dtype=float)
    if simulated.shape != observed.shape:
        raise ValueError("series lengths differ")
    return float(np.mean(np.abs(simulated - observed)))


def mae_objective(x_pars, dataset: RcDataset, penalty: float = DEFAULT_PENALTY) -> float:
    """Mean absolute indoor-temperature error of the 9-parameter vector.

    Invalid parameters or a diverging simulation score ``penalty``.
    """
    v = np.asarray(x_pars, dtype=float)
    if v.shape != (9,):
        raise ValueError(f"expected 9 parameters, got shape {v.shape}")
    if not (np.all(np.isfinite(v)) and np.all(v[3:] > 0)):
        return float(penalty)
    A, B = _system_from_vector(v)
    forcing = dataset.forcing
    sim = rk4_linear_zoh(A, B, forcing.inputs(), v[:3], forcing.h)[:, 1]
    err = float(np.mean(np.abs(sim - dataset.T_in_obs)))
    return err if math.isfinite(err) else float(penalty)


@dataclass(frozen=True)
class SyntheticSpec:
    """Forcing profiles and noise for a synthetic dataset.

    * ``T_out``: ``mean + amplitude * cos(2 pi (hour - peak_hour) / 24)``.
    * ``Q_in``: ``occupied`` watts during ``[occupied_start, occupied_end)``
      hours, ``unoccupied`` otherwise.
    * ``Q_c``: ``-cooling_power`` during the occupied window, 0 otherwise.
    * ``Q_solar``: ``solar_peak * sin(pi (hour - sunrise) / (sunset - sunrise))``
      between sunrise and sunset, 0 at night.

    Hours are measured from ``t = 0`` taken as midnight.
    """

    duration_s: float = 3 * 86400.0
    h: float = 300.0
    T_out_mean: float = 29.0
    T_out_amplitude: float = 5.0
    T_out_peak_hour: float = 15.0
    Q_in_occupied: float = 1500.0
    Q_in_unoccupied: float = 300.0
    occupied_start: float = 8.0
    occupied_end: float = 18.0
    cooling_power: float = 4000.0
    solar_peak: float = 2500.0
    sunrise: float = 6.0
    sunset: float = 18.0
    noise_std: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.h <= 0 or self.duration_s < self.h:
            raise ValueError("need h > 0 and duration_s >= h")
        if self.noise_std < 0:
            raise ValueError("noise_std must be nonnegative")
        if self.cooling_power < 0:
            raise ValueError("cooling_power must be nonnegative")
        if not self.sunrise < self.sunset:
            raise ValueError("sunrise must precede sunset")

    def to_dict(self) -> dict:
        return asdict(self)

    def forcing(self) -> RcForcing:
        n = int(round(self.duration_s / self.h)) + 1
        t = np.arange(n) * self.h
        hour = (t / 3600.0) % 24.0
        T_out = self.T_out_mean + self.T_out_amplitude * np.cos(
            2 * np.pi * (hour - self.T_out_peak_hour) / 24.0)
        occupied = (hour >= self.occupied_start) & (hour < self.occupied_end)
        Q_in = np.where(occupied, self.Q_in_occupied, self.Q_in_unoccupied)
        Q_c = np.where(occupied, -self.cooling_power, 0.0)
        day = (hour > self.sunrise) & (hour < self.sunset)
        phase = np.pi * (hour - self.sunrise) / (self.sunset - self.sunrise)
        Q_solar = np.where(day, self.solar_peak * np.sin(phase), 0.0)
        return RcForcing(t, T_out, Q_in, Q_c, Q_solar)


def generate_synthetic_dataset(truth: RcParameters = DEFAULT_TRUTH,
                               spec: SyntheticSpec = None) -> RcDataset:
    """Simulate ``truth`` under ``spec``'s forcing and add Gaussian noise."""
    spec = SyntheticSpec() if spec is None else spec
    forcing = spec.forcing()
    clean = rk4_simulate(truth, forcing)
    rng = np.random.default_rng(spec.seed)
    obs = clean + spec.noise_std * rng.standard_normal(clean.size) if spec.noise_std > 0 else clean
    return RcDataset(forcing, obs, truth, metadata={"generation": spec.to_dict()})


def rc_identification_problem(dataset: RcDataset, nominal: Optional[RcParameters] = None,
                              scale_band: float = 0.5, temperature_band: float = 5.0,
                              penalty: float = DEFAULT_PENALTY) -> SearchProblem:
    """Search problem over ``[T_e0, T_in0, T_m0, ln C1, ..., ln R3]``.

    Capacitances and resistances span ``[(1 - scale_band), (1 + scale_band)]``
    times their nominal values, searched in log space. The three initial
    temperatures span ``+- temperature_band`` around the first observed indoor
    temperature. ``nominal`` defaults to the dataset's declared truth.
    """
    if nominal is None:
        if dataset.truth is None:
            raise ValueError("dataset declares no truth; pass nominal parameters")
        nominal = dataset.truth
    if not 0 < scale_band < 1:
        raise ValueError("scale_band must lie in (0, 1)")
    if temperature_band <= 0:
        raise ValueError("temperature_band must be positive")
    t0 = float(dataset.T_in_obs[0])
    log_nominal = np.log(nominal.to_vector()[3:])
    lower = np.concatenate([np.full(3, t0 - temperature_band),
                            log_nominal + math.log(1 - scale_band)])
    upper = np.concatenate([np.full(3, t0 + temperature_band),
                            log_nominal + math.log(1 + scale_band)])

    def objective(z):
        return mae_objective(decode_search_vector(z), dataset, penalty)

    return SearchProblem(lower, upper, objective, name="rc_identification")


def decode_search_vector(z) -> np.ndarray:
    """Physical parameter vector from ``[T_e0, T_in0, T_m0, ln C..., ln R...]``."""
    z = np.asarray(z, dtype=float)
    return np.concatenate([z[:3], np.exp(z[3:])])


def _fmt(v) -> str:
    return repr(float(v))


def save_dataset(dataset: RcDataset, path) -> Path:
    """Write ``<path>`` as CSV and ``<path>`` with ``.json`` suffix as metadata."""
    path = Path(path)
    f = dataset.forcing
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in zip(f.timestamps, f.T_out, f.Q_in, f.Q_c, f.Q_solar, dataset.T_in_obs):
            writer.writerow([_fmt(v) for v in row])
    meta = {"truth": None if dataset.truth is None else dataset.truth.to_dict()}
    meta.update(dataset.metadata)
    path.with_suffix(".json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n",
                                         encoding="utf-8")
    return path


def load_dataset(path) -> RcDataset:
    """Read a dataset CSV and, if present, its ``.json`` metadata sidecar."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
            raise ValueError(f"{path}: expected header {','.join(CSV_HEADER)}")
        rows = [[float(v) for v in row] for row in reader if row]
    if not rows:
        raise ValueError(f"{path}: no data rows")
    data = np.array(rows)
    forcing = RcForcing(*data[:, :5].T)
    meta_path = path.with_suffix(".json")
    truth, metadata = None, {}
    if meta_path.exists():
        metadata = json.loads(meta_path.read_text(encoding="utf-8"))
        if metadata.get("truth"):
            truth = RcParameters(**metadata["truth"])
        metadata = {k: v for k, v in metadata.items() if k != "truth"}
    return RcDataset(forcing, data[:, 5], truth, metadata=metadata)
