import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from beetle_opt import BasConfig, BsasConfig, StoppingRule, run_bas, run_bsas
from beetle_opt.benchmarks import (
    DEFAULT_TRUTH,
    SyntheticSpec,
    generate_synthetic_dataset,
    goldstein_price,
    goldstein_price_problem,
)
from beetle_opt.estimators import BASOptimizer, BSASOptimizer, RCModelRegressor

GP_BOUNDS = [[-2.0, 2.0], [-2.0, 2.0]]


def test_params_roundtrip_and_clone():
    opt = BSASOptimizer(k=3, p_delta=0.4, random_state=7)
    params = opt.get_params()
    assert params["k"] == 3 and params["p_delta"] == 0.4 and params["delta"] == 1.0
    twin = clone(opt).set_params(k=2)
    assert twin.k == 2 and opt.k == 3


def test_minimize_matches_functional_api():
    opt = BSASOptimizer(k=3, max_iter=300, random_state=4).minimize(goldstein_price, GP_BOUNDS)
    rec = run_bsas(goldstein_price_problem(), BsasConfig(k=3, stopping=StoppingRule(300)), 4)
    assert opt.f_best_ == rec.f_best_final
    np.testing.assert_array_equal(opt.x_best_, rec.x_best)
    assert (opt.n_iter_, opt.n_evals_) == (rec.iterations, rec.evaluations)

    bas = BASOptimizer(max_iter=300, random_state=4).minimize(goldstein_price_problem())
    assert bas.run_record_ == run_bas(goldstein_price_problem(),
                                      BasConfig(stopping=StoppingRule(300)), 4)


def test_minimize_finds_goldstein_price_minimum():
    opt = BSASOptimizer(random_state=0).minimize(goldstein_price, GP_BOUNDS)
    assert opt.f_best_ < 3.01
    np.testing.assert_allclose(opt.x_best_, [0.0, -1.0], atol=1e-2)


@pytest.mark.parametrize("bounds", [None, [[0, 1, 2]], [[1.0, 0.0]]])
def test_bad_bounds(bounds):
    with pytest.raises(ValueError):
        BASOptimizer(max_iter=5).minimize(lambda x: 0.0, bounds)


def test_bounds_with_problem_rejected():
    with pytest.raises(ValueError):
        BASOptimizer().minimize(goldstein_price_problem(), GP_BOUNDS)


@pytest.fixture(scope="module")
def data():
    ds = generate_synthetic_dataset(DEFAULT_TRUTH, SyntheticSpec(duration_s=86400.0))
    f = ds.forcing
    X = np.column_stack([f.T_out, f.Q_in, f.Q_c, f.Q_solar])
    return X, ds.T_in_obs


class TestRegressor:
    def test_fit_predict(self, data):
        X, y = data
        model = RCModelRegressor(BSASOptimizer(k=3, max_iter=600, random_state=1)).fit(X, y)
        assert model.training_mae_ < 0.1
        pred = model.predict(X)
        assert pred.shape == y.shape
        assert model.mae(X, y) == pytest.approx(model.training_mae_, rel=1e-9)
        assert model.score(X, y) > 0.9

    def test_truth_as_nominal_gives_exact_fit_inside_box(self, data):
        X, y = data
        model = RCModelRegressor(BASOptimizer(max_iter=1, random_state=0),
                                 nominal=DEFAULT_TRUTH.to_dict())
        model.fit(X, y)
        truth_model = clone(model)
        truth_model.params_ = DEFAULT_TRUTH
        truth_model.n_features_in_ = 4
        np.testing.assert_allclose(truth_model.predict(X), y, atol=1e-9)

    def test_unfitted_and_shape_errors(self, data):
        X, y = data
        with pytest.raises(NotFittedError):
            RCModelRegressor().predict(X)
        with pytest.raises(ValueError):
            RCModelRegressor().fit(X[:, :3], y)
