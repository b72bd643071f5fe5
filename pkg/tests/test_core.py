import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beetle_opt.core import (
    ScheduleState,
    SearchProblem,
    SignConvention,
    StoppingRule,
    antenna_probes,
    clamp_to_bounds,
    denormalize_coords,
    detect_step,
    make_rng,
    normalize_coords,
    sample_unit_direction,
    spawn_rngs,
    update_schedule,
)


def box(lo, hi, f=lambda x: float(np.sum(x))):
    return SearchProblem(np.asarray(lo, float), np.asarray(hi, float), f)


class TestSearchProblem:
    def test_dimension(self):
        assert box([0, 0, 0], [1, 2, 3]).dimension == 3

    @pytest.mark.parametrize("lo, hi", [([0, 1], [1, 1]), ([0], [1, 2]), ([], []), ([0], [np.inf])])
    def test_rejects_bad_bounds(self, lo, hi):
        with pytest.raises(ValueError):
            box(lo, hi)

    def test_normalized_view_evaluates_physical_objective(self):
        p = box([10.0, -4.0], [20.0, 4.0], lambda x: x[0] * 100 + x[1])
        u = p.normalized()
        np.testing.assert_array_equal(u.lower_bounds, [0, 0])
        np.testing.assert_array_equal(u.upper_bounds, [1, 1])
        assert u.evaluate(np.array([0.5, 0.5])) == pytest.approx(1500.0)


class TestSampleUnitDirection:
    def test_norm_n3(self):
        v = sample_unit_direction(make_rng(1), 3)
        assert v.shape == (3,)
        assert abs(np.linalg.norm(v) - 1.0) <= 1e-12

    def test_one_dimension_is_sign(self):
        rng = make_rng(2)
        draws = {float(sample_unit_direction(rng, 1)[0]) for _ in range(200)}
        assert draws == {1.0, -1.0}

    def test_zero_dimension_rejected(self):
        with pytest.raises(ValueError):
            sample_unit_direction(make_rng(0), 0)

    def test_monte_carlo_component_means(self):
        # sphere symmetry: each component has mean 0
        rng = make_rng(3)
        draws = np.array([sample_unit_direction(rng, 2) for _ in range(10_000)])
        assert np.all(np.abs(draws.mean(axis=0)) < 0.05)
        # and the angle is uniform: quadrant counts near 2500 each
        q = np.histogram(np.arctan2(draws[:, 1], draws[:, 0]), bins=4, range=(-np.pi, np.pi))[0]
        assert np.all(np.abs(q - 2500) < 200)

    @settings(max_examples=64, deadline=None)
    @given(n=st.integers(1, 64), seed=st.integers(0, 2**64 - 1))
    def test_unit_norm_property(self, n, seed):
        v = sample_unit_direction(make_rng(seed), n)
        assert abs(np.linalg.norm(v) - 1.0) <= 1e-12

    def test_seed_determinism(self):
        a, b = make_rng(99), make_rng(99)
        for _ in range(20):
            np.testing.assert_array_equal(sample_unit_direction(a, 5), sample_unit_direction(b, 5))

    def test_seed_range(self):
        make_rng(2**64 - 1)
        with pytest.raises(ValueError):
            make_rng(2**64)
        with pytest.raises(ValueError):
            make_rng(-1)

    def test_spawned_streams_differ_and_repeat(self):
        a = [g.random() for g in spawn_rngs(5, 3)]
        b = [g.random() for g in spawn_rngs(5, 3)]
        assert a == b
        assert len(set(a)) == 3


class TestAntennaProbes:
    def test_examples(self):
        xr, xl = antenna_probes([0, 0], 1.0, [1, 0])
        np.testing.assert_array_equal(xr, [1, 0])
        np.testing.assert_array_equal(xl, [-1, 0])
        xr, xl = antenna_probes([1, 2], 0.5, [0, 1])
        np.testing.assert_array_equal(xr, [1, 2.5])
        np.testing.assert_array_equal(xl, [1, 1.5])

    def test_zero_length_coincides(self):
        x = np.array([0.3, -2.0, 5.0])
        xr, xl = antenna_probes(x, 0.0, [0, 0.6, 0.8])
        np.testing.assert_array_equal(xr, x)
        np.testing.assert_array_equal(xl, x)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            antenna_probes([0, 0], 1.0, [1, 0, 0])

    @given(st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=3),
           st.floats(0, 10), st.integers(0, 1000))
    def test_midpoint_is_position(self, x, d, seed):
        x = np.array(x)
        b = sample_unit_direction(make_rng(seed), 3)
        xr, xl = antenna_probes(x, d, b)
        np.testing.assert_allclose((xr + xl) / 2, x, rtol=0, atol=1e-12 * (1 + np.abs(x).max()))


class TestDetectStep:
    def test_moves_toward_better_right(self):
        np.testing.assert_array_equal(detect_step([0.0], 1.0, [1.0], 0.0, 1.0), [1.0])

    def test_moves_toward_better_left(self):
        np.testing.assert_array_equal(detect_step([0.0], 1.0, [1.0], 2.0, 1.0), [-1.0])

    def test_tie_is_identity(self):
        x = np.array([0.2, 0.4])
        np.testing.assert_array_equal(detect_step(x, 0.7, [0.6, 0.8], 3.0, 3.0), x)

    def test_as_printed_moves_the_other_way(self):
        out = detect_step([0.0], 1.0, [1.0], 0.0, 1.0, SignConvention.AS_PRINTED)
        np.testing.assert_array_equal(out, [-1.0])
        assert detect_step([0.0], 1.0, [1.0], 0.0, 1.0, "as_printed")[0] == -1.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            detect_step([0.0, 1.0], 1.0, [1.0], 0.0, 1.0)


class TestUpdateSchedule:
    def test_antenna_length(self):
        s = update_schedule(ScheduleState(d=1.0, delta=0.5, eta_d=0.95, d_floor=0.01))
        assert s.d == pytest.approx(0.96)

    def test_step_size(self):
        s = update_schedule(ScheduleState(d=1.0, delta=2.0, eta_delta=0.8, delta_floor=0.0))
        assert s.delta == pytest.approx(1.6)

    def test_fixed_point(self):
        s = ScheduleState(d=2.0, delta=1.0, eta_d=0.5, d_floor=1.0)
        assert update_schedule(s).d == 2.0
        assert s.fixed_points[0] == 2.0

    def test_other_fields_unchanged(self):
        s = ScheduleState(d=1.0, delta=1.0, eta_d=0.9, eta_delta=0.8, d_floor=0.1, delta_floor=0.2)
        t = update_schedule(s)
        assert (t.eta_d, t.eta_delta, t.d_floor, t.delta_floor) == (0.9, 0.8, 0.1, 0.2)

    @given(st.floats(0.01, 0.99), st.floats(1e-3, 10), st.integers(0, 200))
    def test_zero_floor_is_geometric(self, eta, d, t):
        s = ScheduleState(d=d, delta=d, eta_d=eta, eta_delta=eta, d_floor=0.0, delta_floor=0.0)
        for _ in range(t):
            s = update_schedule(s)
        assert s.d == pytest.approx(d * eta**t, rel=1e-12, abs=1e-300)

    @given(st.floats(0.05, 0.95), st.floats(0, 1), st.floats(0, 5))
    def test_stays_above_floor_and_approaches_fixed_point(self, eta, floor, d):
        s = ScheduleState(d=d, delta=d, eta_d=eta, eta_delta=eta, d_floor=floor, delta_floor=floor)
        fixed = floor / (1 - eta)
        gap = abs(s.d - fixed)
        for _ in range(50):
            s = update_schedule(s)
            assert s.d >= floor and s.delta >= floor
            assert abs(s.d - fixed) <= gap * (1 + 1e-12) + 1e-15
            gap = abs(s.d - fixed)

    @pytest.mark.parametrize("kwargs", [dict(eta_d=1.0), dict(eta_delta=0.0), dict(d_floor=-1.0)])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            ScheduleState(d=1.0, delta=1.0, **kwargs)

    def test_from_step(self):
        s = ScheduleState.from_step(0.3, 0.5)
        assert s.delta == 0.3 and s.d == pytest.approx(0.6)


def test_clamp_examples():
    assert clamp_to_bounds([5.0], box([0], [1]))[0] == 1.0
    np.testing.assert_array_equal(clamp_to_bounds([0.25, 0.5], box([0, 0], [1, 1])), [0.25, 0.5])
    np.testing.assert_array_equal(clamp_to_bounds([-3, 0.5], box([0, 0], [1, 1])), [0, 0.5])
    with pytest.raises(ValueError):
        clamp_to_bounds([1.0, 2.0], box([0], [1]))


class TestNormalize:
    p = box([-2.0, 10.0, 1e-3], [2.0, 30.0, 2e-3])

    def test_endpoints_and_midpoint(self):
        np.testing.assert_array_equal(normalize_coords(self.p.lower_bounds, self.p), [0, 0, 0])
        np.testing.assert_allclose(normalize_coords(self.p.upper_bounds, self.p), [1, 1, 1], atol=1e-15)
        mid = (self.p.lower_bounds + self.p.upper_bounds) / 2
        np.testing.assert_allclose(normalize_coords(mid, self.p), [0.5] * 3, atol=1e-15)

    @given(st.lists(st.floats(0, 1), min_size=3, max_size=3))
    def test_round_trip(self, z):
        x = denormalize_coords(np.array(z), self.p)
        back = denormalize_coords(normalize_coords(x, self.p), self.p)
        np.testing.assert_allclose(back, x, rtol=1e-12, atol=1e-12)

    @given(st.floats(-1e3, 1e3), st.floats(1e-3, 1e3), st.floats(0, 1))
    def test_round_trip_any_box(self, lo, width, frac):
        p = box([lo], [lo + width])
        x = np.array([lo + frac * width])
        back = denormalize_coords(normalize_coords(x, p), p)
        assert abs(back[0] - x[0]) <= 1e-12 * max(1.0, abs(x[0]))


class TestStoppingRule:
    def test_conjunction(self):
        rule = StoppingRule(10, 1e-3)
        assert rule.should_continue(0, 1.0)
        assert not rule.should_continue(10, 1.0)
        assert not rule.should_continue(3, 1e-3)
        assert not rule.should_continue(3, 1e-4)

    def test_invalid(self):
        with pytest.raises(ValueError):
            StoppingRule(0)
        with pytest.raises(ValueError):
            StoppingRule(10, -1.0)
