import numpy as np
import pytest

from beetle_opt import (
    BasConfig,
    BeetleIncumbent,
    OptimizationError,
    ScheduleState,
    SearchProblem,
    StoppingRule,
    bas_step,
    make_rng,
    run_bas,
)
from beetle_opt.benchmarks import goldstein_price_problem, sphere


def sphere_box(n=2, lo=-1.0, hi=1.0):
    return SearchProblem(np.full(n, lo), np.full(n, hi), sphere)


def start(x, f):
    x = np.asarray(x, float)
    return BeetleIncumbent(x, x, f(x))


def test_constant_objective_never_moves():
    p = SearchProblem(np.zeros(3), np.ones(3), lambda x: 4.0)
    inc = start([0.2, 0.5, 0.7], p.objective)
    s = ScheduleState.from_step()
    rng = make_rng(0)
    for _ in range(20):
        inc, s = bas_step(inc, s, p, rng)
        assert inc.f_best == 4.0
    np.testing.assert_array_equal(inc.x, [0.2, 0.5, 0.7])


def test_schedule_decays_unconditionally():
    p = sphere_box()
    inc = start([0.1, -0.2], sphere)
    s = ScheduleState(d=0.4, delta=0.3, eta_d=0.9, eta_delta=0.8, d_floor=1e-3, delta_floor=2e-3)
    rng = make_rng(4)
    for _ in range(30):
        prev = s
        inc, s = bas_step(inc, s, p, rng)
        assert s.delta == pytest.approx(0.8 * prev.delta + 2e-3, rel=1e-15)
        assert s.d == pytest.approx(0.9 * prev.d + 1e-3, rel=1e-15)


def test_forced_direction_on_sphere():
    # x = (0.6, 0.8), d = 0.1, delta = 0.2, b = (0.6, 0.8):
    # f(x + d b) = 1.1**2 = 1.21 > f(x - d b) = 0.9**2 = 0.81, so the beetle
    # steps back along b to 0.8 * (0.6, 0.8) = (0.48, 0.64), f = 0.64.
    p = sphere_box()
    inc = start([0.6, 0.8], sphere)
    s = ScheduleState(d=0.1, delta=0.2)
    inc, _ = bas_step(inc, s, p, make_rng(0), direction=[0.6, 0.8])
    np.testing.assert_allclose(inc.x, [0.48, 0.64], atol=1e-15)
    assert inc.f_best == pytest.approx(0.64)
    inc2, _ = bas_step(start([0.6, 0.8], sphere), s, p, make_rng(0),
                       sign_convention="as_printed", direction=[0.6, 0.8])
    np.testing.assert_allclose(inc2.x, [0.72, 0.96], atol=1e-15)
    assert inc2.f_best == 1.0  # moved uphill; best unchanged


def test_moves_even_when_worse():
    # valley at 0: from 0.05 a step of 0.3 toward the lower antenna overshoots
    p = SearchProblem(np.array([-1.0]), np.array([1.0]), lambda x: abs(x[0]))
    inc = start([0.05], p.objective)
    inc, _ = bas_step(inc, ScheduleState(d=0.01, delta=0.3), p, make_rng(0), direction=[1.0])
    assert inc.x[0] == pytest.approx(-0.25)
    assert inc.f_best == pytest.approx(0.05)
    np.testing.assert_array_equal(inc.x_best, [0.05])


def test_run_is_deterministic():
    p = goldstein_price_problem()
    cfg = BasConfig(stopping=StoppingRule(300))
    a, b = run_bas(p, cfg, 11, record_trace=True), run_bas(p, cfg, 11, record_trace=True)
    assert a == b
    assert run_bas(p, cfg, 12) != a


def test_trajectory_and_counts():
    p = goldstein_price_problem()
    rec = run_bas(p, BasConfig(stopping=StoppingRule(500)), 3, record_trace=True)
    traj = np.array(rec.f_best_trajectory)
    assert len(traj) == rec.iterations + 1 == 501
    assert np.all(np.diff(traj) <= 0)
    assert rec.f_best_final == traj[-1] == pytest.approx(p.evaluate(rec.x_best))
    assert rec.schedule_updates == rec.iterations
    assert sum(t.evaluations for t in rec.trace) + 1 == rec.evaluations
    # no antenna ties on this objective from random directions
    assert all(t.evaluations == 3 for t in rec.trace)
    deltas = np.array([t.delta for t in rec.trace])
    assert np.all(np.diff(deltas) < 0)


def test_stops_on_step_criterion():
    p = sphere_box()
    cfg = BasConfig(schedule=ScheduleState(d=0.2, delta=0.1, eta_delta=0.5, delta_floor=0.0),
                    stopping=StoppingRule(1000, 1e-3))
    rec = run_bas(p, cfg, 0)
    # 0.1 * 0.5**t <= 1e-3 first at t = 7
    assert rec.iterations == 7


def test_x0_is_respected():
    p = sphere_box()
    rec = run_bas(p, BasConfig(stopping=StoppingRule(1), x0=(0.5, -0.5)), 0, record_trace=True)
    assert rec.f_best_trajectory[0] == pytest.approx(0.5)


def test_initial_delta_must_exceed_criterion():
    with pytest.raises(ValueError):
        BasConfig(schedule=ScheduleState(d=1.0, delta=1e-9))


def test_failure_carries_partial_record():
    calls = {"n": 0}

    def flaky(x):
        calls["n"] += 1
        if calls["n"] > 40:
            raise RuntimeError("sensor offline")
        return float(x @ x)

    p = SearchProblem(np.full(2, -1.0), np.ones(2), flaky)
    with pytest.raises(OptimizationError) as info:
        run_bas(p, BasConfig(), 0)
    rec = info.value.record
    assert "sensor offline" in rec.error
    assert 10 <= rec.iterations < 40
    assert len(rec.f_best_trajectory) == rec.iterations + 1
    assert isinstance(info.value.__cause__, RuntimeError)


def test_ties_skip_the_third_evaluation():
    p = SearchProblem(np.zeros(2), np.ones(2), lambda x: 1.0)
    rec = run_bas(p, BasConfig(stopping=StoppingRule(40)), 0)
    assert rec.evaluations == 1 + 2 * 40
    # a clamped move that lands back on x is still evaluated
    edge = SearchProblem(np.zeros(1), np.ones(1), lambda x: -float(x[0]))
    rec = run_bas(edge, BasConfig(stopping=StoppingRule(40), x0=(1.0,)), 0)
    assert rec.evaluations == 1 + 3 * 40
