"""Tests for duration curves and limit-schedule billing."""

import numpy as np
import pytest
from conftest import random_pattern

from edmkit import (
    DemandPattern,
    DomainError,
    DouEvaluation,
    DouLimitSchedule,
    DurationCurve,
    apply_penalty,
    area_under_limits,
    duration_curve,
    excess_energy,
    percent_to_absolute,
)


class TestDurationCurve:
    def test_sorts_descending(self):
        p = DemandPattern(tau_s=1, powers_w=(1.0, 3.0, 2.0))
        assert duration_curve(p).powers_w == (3.0, 2.0, 1.0)

    def test_constant_pattern_unchanged(self):
        p = DemandPattern(tau_s=60, powers_w=(400.0,) * 5)
        curve = duration_curve(p)
        assert curve.powers_w == p.powers_w
        assert curve.tau_s == 60
        assert curve.horizon_s == 300

    def test_energy_preserved(self):
        rng = np.random.default_rng(1)
        p = random_pattern(rng, 100)
        assert duration_curve(p).total_energy_ws == pytest.approx(
            p.total_energy_ws, rel=1e-12
        )

    def test_rising_sequence_rejected(self):
        with pytest.raises(DomainError):
            DurationCurve(tau_s=1, powers_w=(1.0, 2.0))

    def test_negative_power_rejected(self):
        with pytest.raises(DomainError):
            DurationCurve(tau_s=1, powers_w=(2.0, -1.0))

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            DurationCurve(tau_s=1, powers_w=())


class TestLimitSchedule:
    def test_segments(self):
        s = DouLimitSchedule(breakpoints=((600, 3000.0), (1800, 2000.0)))
        assert s.segments() == ((0, 600, 3000.0), (600, 1800, 2000.0))
        assert s.horizon_s == 1800

    def test_breakpoints_must_increase(self):
        with pytest.raises(DomainError):
            DouLimitSchedule(breakpoints=((600, 1.0), (600, 2.0)))

    def test_breakpoints_must_sit_on_tau_grid(self):
        with pytest.raises(DomainError):
            DouLimitSchedule(breakpoints=((90, 1000.0),), tau_s=60)

    def test_negative_limit_rejected(self):
        with pytest.raises(DomainError):
            DouLimitSchedule(breakpoints=((60, -5.0),))

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            DouLimitSchedule(breakpoints=())

    def test_percent_rescaling(self):
        s = DouLimitSchedule(breakpoints=((600, 50.0), (1800, 100.0)))
        scaled = percent_to_absolute(s, 2000.0)
        assert scaled.breakpoints == ((600, 1000.0), (1800, 2000.0))

    def test_percent_needs_positive_reference(self):
        s = DouLimitSchedule(breakpoints=((600, 50.0),))
        with pytest.raises(DomainError):
            percent_to_absolute(s, 0.0)


class TestAreaUnderLimits:
    def test_day_long_three_segment_schedule(self):
        s = DouLimitSchedule(
            breakpoints=((600, 3000.0), (1800, 2000.0), (86400, 1500.0))
        )
        area = area_under_limits(s)
        assert area.value == pytest.approx(36.4167, abs=5e-5)
        assert area.value == pytest.approx(131.1e6 / 3.6e6, rel=1e-12)

    def test_single_segment_one_kwh(self):
        s = DouLimitSchedule(breakpoints=((3600, 1000.0),))
        assert area_under_limits(s).value == 1.0

    def test_zero_limits_zero_area(self):
        s = DouLimitSchedule(breakpoints=((3600, 0.0), (7200, 0.0)))
        assert area_under_limits(s).value == 0.0


class TestExcessEnergy:
    def test_below_limits_no_excess(self):
        curve = DurationCurve(tau_s=1, powers_w=(100.0, 100.0, 50.0))
        s = DouLimitSchedule(breakpoints=((2, 200.0), (3, 60.0)))
        ev = excess_energy(curve, s)
        assert ev.segment_excess_wh == (0.0, 0.0)
        assert ev.total_excess_wh == 0.0
        assert ev.tolerated_wh is None and ev.penalty_amount is None

    def test_zero_limits_excess_is_total_energy(self):
        curve = DurationCurve(tau_s=2, powers_w=(300.0, 200.0, 100.0))
        s = DouLimitSchedule(breakpoints=((6, 0.0),), tau_s=2)
        ev = excess_energy(curve, s)
        assert ev.total_excess_wh == pytest.approx(
            curve.total_energy_ws / 3600.0, rel=1e-12
        )

    def test_hand_segments(self):
        curve = DurationCurve(tau_s=1, powers_w=(3000.0, 3000.0, 1000.0))
        s = DouLimitSchedule(breakpoints=((1, 2000.0), (3, 500.0)))
        ev = excess_energy(curve, s)
        assert ev.segment_excess_wh == pytest.approx(
            (1000.0 / 3600.0, 3000.0 / 3600.0), rel=1e-12
        )
        assert ev.total_excess_wh == pytest.approx(4000.0 / 3600.0, rel=1e-12)

    def test_limits_equal_to_curve_give_zero_excess(self):
        curve = DurationCurve(tau_s=1, powers_w=(500.0,) * 4)
        s = DouLimitSchedule(breakpoints=((4, 500.0),))
        ev = excess_energy(curve, s)
        assert ev.total_excess_wh == 0.0
        assert ev.area_under_limits_kwh == pytest.approx(
            curve.total_energy_ws / 3.6e6, rel=1e-12
        )

    def test_horizon_mismatch_reports_both(self):
        curve = DurationCurve(tau_s=1, powers_w=(1.0, 1.0, 1.0))
        s = DouLimitSchedule(breakpoints=((5, 100.0),))
        with pytest.raises(DomainError) as err:
            excess_energy(curve, s)
        assert "3 s" in str(err.value) and "5 s" in str(err.value)

    def test_invariant_under_time_permutation(self):
        # duration curves forget ordering, so rebound placement cannot matter
        rng = np.random.default_rng(21)
        p = random_pattern(rng, 240, tau_s=1)
        shuffled = DemandPattern(
            tau_s=1, powers_w=tuple(rng.permutation(p.powers_w))
        )
        s = DouLimitSchedule(breakpoints=((60, 1200.0), (240, 700.0)))
        ev_a = excess_energy(duration_curve(p), s)
        ev_b = excess_energy(duration_curve(shuffled), s)
        assert ev_a == ev_b

    def test_raising_a_limit_never_raises_excess(self):
        rng = np.random.default_rng(22)
        p = random_pattern(rng, 120, tau_s=1)
        curve = duration_curve(p)
        low = DouLimitSchedule(breakpoints=((30, 900.0), (120, 400.0)))
        high = DouLimitSchedule(breakpoints=((30, 1100.0), (120, 400.0)))
        ev_low = excess_energy(curve, low)
        ev_high = excess_energy(curve, high)
        for a, b in zip(ev_high.segment_excess_wh, ev_low.segment_excess_wh):
            assert a <= b
        assert ev_high.total_excess_wh <= ev_low.total_excess_wh

    def test_matches_single_pass_oracle(self):
        rng = np.random.default_rng(23)
        for _ in range(25):
            n = int(rng.integers(10, 80))
            tau = int(rng.integers(1, 4))
            p = random_pattern(rng, n, tau_s=tau)
            curve = duration_curve(p)
            cut = int(rng.integers(1, n)) * tau
            limits = (
                (cut, float(rng.uniform(0, 1500))),
                (n * tau, float(rng.uniform(0, 1500))),
            )
            s = DouLimitSchedule(breakpoints=limits, tau_s=tau)
            ev = excess_energy(curve, s)
            per_sample = 0.0
            for k, power in enumerate(curve.powers_w):
                t = (k + 1) * tau
                limit = limits[0][1] if t <= cut else limits[1][1]
                per_sample += max(0.0, power - limit) * tau
            assert ev.total_excess_wh == pytest.approx(
                per_sample / 3600.0, rel=1e-12
            )


class TestApplyPenalty:
    def test_no_excess_no_penalty(self):
        ev = DouEvaluation(
            segment_excess_wh=(0.0, 0.0), total_excess_wh=0.0, area_under_limits_kwh=5.0
        )
        out = apply_penalty(ev, 0.05, 10.0)
        assert out.penalized_wh == 0.0
        assert out.penalty_amount == 0.0

    def test_tolerance_covers_small_excess(self):
        # 5% of a 36.4167 kWh cap tolerates 1820.8 Wh, more than 774 Wh
        ev = DouEvaluation(
            segment_excess_wh=(54.0, 218.0, 502.0),
            total_excess_wh=774.0,
            area_under_limits_kwh=131.1e6 / 3.6e6,
        )
        out = apply_penalty(ev, 0.05, 0.25)
        assert out.tolerated_wh == pytest.approx(1820.8333, abs=5e-4)
        assert out.penalized_wh == 0.0
        assert out.penalty_amount == 0.0

    def test_priced_excess(self):
        ev = DouEvaluation(
            segment_excess_wh=(500.0,), total_excess_wh=500.0, area_under_limits_kwh=1.0
        )
        out = apply_penalty(ev, 0.0, 0.30)
        assert out.tolerated_wh == 0.0
        assert out.penalized_wh == 500.0
        assert out.penalty_amount == pytest.approx(0.15, rel=1e-12)

    def test_wider_tolerance_never_raises_penalty(self):
        ev = DouEvaluation(
            segment_excess_wh=(800.0,), total_excess_wh=800.0, area_under_limits_kwh=2.0
        )
        penalties = [
            apply_penalty(ev, f, 0.5).penalty_amount for f in (0.0, 0.1, 0.3, 1.0)
        ]
        assert penalties == sorted(penalties, reverse=True)

    def test_tolerance_bounds(self):
        ev = DouEvaluation(
            segment_excess_wh=(1.0,), total_excess_wh=1.0, area_under_limits_kwh=1.0
        )
        with pytest.raises(DomainError):
            apply_penalty(ev, -0.1, 1.0)
        with pytest.raises(DomainError):
            apply_penalty(ev, 1.5, 1.0)
        with pytest.raises(DomainError):
            apply_penalty(ev, 0.5, -1.0)
