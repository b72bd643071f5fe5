"""scikit-learn style wrappers.

``BASOptimizer`` and ``BSASOptimizer`` expose the searches as estimators
with ``get_params``/``set_params`` so they can be cloned and grid-searched.
``RCModelRegressor`` fits the RC thermal model to forcing/indoor-temperature
data and predicts indoor temperature.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, clone
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .bas import BasConfig, run_bas
from .benchmarks.rc import (
    DEFAULT_PENALTY,
    DEFAULT_TRUTH,
    RcDataset,
    RcForcing,
    RcParameters,
    decode_search_vector,
    mae,
    rc_identification_problem,
    rk4_simulate,
)
from .bsas import BsasConfig, run_bsas
from .core import ScheduleState, SearchProblem, StoppingRule

__all__ = ["BASOptimizer", "BSASOptimizer", "RCModelRegressor"]


def _as_problem(func, bounds):
    if isinstance(func, SearchProblem):
        if bounds is not None:
            raise ValueError("bounds must not be given together with a SearchProblem")
        return func
    if bounds is None:
        raise ValueError("bounds are required when minimizing a plain callable")
    bounds = check_array(bounds, ensure_min_samples=1)
    if bounds.shape[1] != 2:
        raise ValueError("bounds must have shape (n, 2)")
    return SearchProblem(bounds[:, 0], bounds[:, 1], func)


def _seed(random_state):
    if random_state is None:
        return int(np.random.SeedSequence().entropy % 2**64)
    if isinstance(random_state, (int, np.integer)):
        return int(random_state)
    raise ValueError("random_state must be an int or None")


class _BeetleOptimizer(BaseEstimator):
    def _schedule(self):
        d = self.delta / 0.5 if self.d is None else self.d
        return ScheduleState(d=d, delta=self.delta, eta_d=self.eta_d, eta_delta=self.eta_delta,
                             d_floor=self.d_floor, delta_floor=self.delta_floor)

    def _stopping(self):
        return StoppingRule(self.max_iter, self.delta_criterion)

    def minimize(self, func, bounds=None):
        """Minimize ``func`` over ``bounds`` (shape ``(n, 2)``) or a ``SearchProblem``.

        Sets ``x_best_``, ``f_best_``, ``n_iter_``, ``n_evals_`` and
        ``run_record_``; returns ``self``.
        """
        problem = _as_problem(func, bounds)
        record = self._run(problem, _seed(self.random_state))
        self.run_record_ = record
        self.x_best_ = np.array(record.x_best)
        self.f_best_ = record.f_best_final
        self.n_iter_ = record.iterations
        self.n_evals_ = record.evaluations
        return self


class BASOptimizer(_BeetleOptimizer):
    """Single-beetle antennae search.

    Parameters
    ----------
    delta : float, default=1.0
        Initial step size in unit-box coordinates.
    d : float or None, default=None
        Initial antenna length; ``None`` means ``delta / 0.5``.
    eta_d, eta_delta : float, default=0.99
        Decay factors.
    d_floor, delta_floor : float, default=1e-6
        Additive floors of the decay recursions.
    max_iter : int, default=2000
    delta_criterion : float, default=1e-8
        Stop once the step size is at or below this value.
    sign_convention : {"toward_better", "as_printed"}
    random_state : int or None, default=0
    x0 : array-like or None
        Start point in problem coordinates; uniform in the box when ``None``.
    """

    def __init__(self, delta=1.0, d=None, eta_d=0.99, eta_delta=0.99, d_floor=1e-6,
                 delta_floor=1e-6, max_iter=2000, delta_criterion=1e-8,
                 sign_convention="toward_better", random_state=0, x0=None):
        self.delta = delta
        self.d = d
        self.eta_d = eta_d
        self.eta_delta = eta_delta
        self.d_floor = d_floor
        self.delta_floor = delta_floor
        self.max_iter = max_iter
        self.delta_criterion = delta_criterion
        self.sign_convention = sign_convention
        self.random_state = random_state
        self.x0 = x0

    def _run(self, problem, seed):
        x0 = None if self.x0 is None else tuple(np.asarray(self.x0, dtype=float))
        config = BasConfig(self._schedule(), self._stopping(), self.sign_convention, x0)
        return run_bas(problem, config, seed)


class BSASOptimizer(_BeetleOptimizer):
    """Beetle swarm antennae search.

    Takes the ``BASOptimizer`` parameters plus the swarm size ``k`` (default
    5), the schedule-retention probability ``p_delta`` (default 0.2) and
    ``candidate_rule`` (``"detect_step"`` or ``"best_antenna"``).
    """

    def __init__(self, k=5, p_delta=0.2, delta=1.0, d=None, eta_d=0.99, eta_delta=0.99,
                 d_floor=1e-6, delta_floor=1e-6, max_iter=2000, delta_criterion=1e-8,
                 sign_convention="toward_better", candidate_rule="detect_step",
                 random_state=0, x0=None):
        self.k = k
        self.p_delta = p_delta
        self.delta = delta
        self.d = d
        self.eta_d = eta_d
        self.eta_delta = eta_delta
        self.d_floor = d_floor
        self.delta_floor = delta_floor
        self.max_iter = max_iter
        self.delta_criterion = delta_criterion
        self.sign_convention = sign_convention
        self.candidate_rule = candidate_rule
        self.random_state = random_state
        self.x0 = x0

    def _run(self, problem, seed):
        x0 = None if self.x0 is None else tuple(np.asarray(self.x0, dtype=float))
        config = BsasConfig(k=self.k, p_delta=self.p_delta, schedule=self._schedule(),
                            stopping=self._stopping(), sign_convention=self.sign_convention,
                            candidate_rule=self.candidate_rule, x0=x0)
        return run_bsas(problem, config, seed)


class RCModelRegressor(RegressorMixin, BaseEstimator):
    """Grey-box RC thermal model identified by a beetle search.

    ``X`` has one row per sample and columns ``T_out, Q_in, Q_c, Q_solar``;
    rows are spaced ``h`` seconds apart. ``y`` is the observed indoor
    temperature. ``fit`` estimates the initial temperatures, capacitances and
    resistances by minimizing the mean absolute error; ``predict`` replays the
    fitted model from the fitted initial temperatures.

    Parameters
    ----------
    optimizer : BASOptimizer or BSASOptimizer, default=None
        Cloned before use; ``None`` means ``BSASOptimizer()``.
    h : float, default=300.0
        Sample spacing in seconds.
    nominal : RcParameters, dict or None
        Centre of the capacitance/resistance search band.
    scale_band, temperature_band, penalty
        See ``rc_identification_problem``.
    """

    def __init__(self, optimizer=None, h=300.0, nominal=None, scale_band=0.5,
                 temperature_band=5.0, penalty=DEFAULT_PENALTY):
        self.optimizer = optimizer
        self.h = h
        self.nominal = nominal
        self.scale_band = scale_band
        self.temperature_band = temperature_band
        self.penalty = penalty

    def _forcing(self, X):
        n = X.shape[0]
        return RcForcing(np.arange(n) * float(self.h), X[:, 0], X[:, 1], X[:, 2], X[:, 3])

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True, ensure_min_samples=2)
        if X.shape[1] != 4:
            raise ValueError(f"X must have 4 columns (T_out, Q_in, Q_c, Q_solar), got {X.shape[1]}")
        if self.nominal is None:
            nominal = DEFAULT_TRUTH
        elif isinstance(self.nominal, RcParameters):
            nominal = self.nominal
        else:
            nominal = RcParameters(**self.nominal)
        dataset = RcDataset(self._forcing(X), y)
        problem = rc_identification_problem(dataset, nominal, self.scale_band,
                                            self.temperature_band, self.penalty)
        optimizer = BSASOptimizer() if self.optimizer is None else clone(self.optimizer)
        optimizer.minimize(problem)
        self.optimizer_ = optimizer
        self.params_ = RcParameters.from_vector(decode_search_vector(optimizer.x_best_))
        self.training_mae_ = optimizer.f_best_
        self.n_features_in_ = 4
        return self

    def predict(self, X):
        check_is_fitted(self, "params_")
        X = check_array(X, ensure_min_samples=1)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X must have {self.n_features_in_} columns, got {X.shape[1]}")
        if X.shape[0] == 1:
            return np.array([self.params_.T_in0])
        return rk4_simulate(self.params_, self._forcing(X))

    def mae(self, X, y):
        return mae(self.predict(X), np.asarray(y, dtype=float))
