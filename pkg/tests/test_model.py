import math

import pytest

from edmkit import DemandPattern, DomainError, IntervalSeries


class TestDemandPattern:
    def test_basic_properties(self):
        p = DemandPattern(tau_s=2, powers_w=(100.0, 200.0, 300.0), start_s=10)
        assert len(p) == 3
        assert p.horizon_s == 6
        assert p.end_s == 16
        assert p.total_energy_ws == 1200.0

    def test_total_energy_in_wh(self):
        p = DemandPattern(tau_s=1, powers_w=(1000.0,) * 3600)
        assert p.total_energy().value == pytest.approx(1000.0)

    def test_rejects_empty(self):
        with pytest.raises(DomainError):
            DemandPattern(tau_s=1, powers_w=())

    def test_rejects_negative_power(self):
        with pytest.raises(DomainError):
            DemandPattern(tau_s=1, powers_w=(100.0, -1.0))

    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            DemandPattern(tau_s=1, powers_w=(math.nan,))
        with pytest.raises(DomainError):
            DemandPattern(tau_s=1, powers_w=(math.inf,))

    def test_rejects_bad_tau(self):
        with pytest.raises(DomainError):
            DemandPattern(tau_s=0, powers_w=(1.0,))
        with pytest.raises(DomainError):
            DemandPattern(tau_s=-5, powers_w=(1.0,))

    def test_frozen(self):
        p = DemandPattern(tau_s=1, powers_w=(1.0,))
        with pytest.raises(AttributeError):
            p.tau_s = 2


class TestIntervalSeries:
    def test_basic_properties(self):
        s = IntervalSeries(step_s=900, energies_ws=(100.0, 200.0))
        assert len(s) == 2
        assert s.full_step_count == 2
        assert s.horizon_s == 1800
        assert s.total_energy_ws == 300.0
        assert s.step_end_times() == (900, 1800)

    def test_partial_tail(self):
        s = IntervalSeries(step_s=60, energies_ws=(10.0, 20.0, 5.0), partial_tail_s=15)
        assert s.full_step_count == 2
        assert s.horizon_s == 135
        assert s.step_end_times() == (60, 120, 135)

    def test_partial_tail_bounds(self):
        with pytest.raises(DomainError):
            IntervalSeries(step_s=60, energies_ws=(1.0,), partial_tail_s=0)
        with pytest.raises(DomainError):
            IntervalSeries(step_s=60, energies_ws=(1.0,), partial_tail_s=60)

    def test_rejects_negative_energy(self):
        with pytest.raises(DomainError):
            IntervalSeries(step_s=60, energies_ws=(-1.0,))

    def test_rejects_empty(self):
        with pytest.raises(DomainError):
            IntervalSeries(step_s=60, energies_ws=())

    def test_start_offset(self):
        s = IntervalSeries(step_s=30, energies_ws=(1.0,), start_s=100)
        assert s.end_s == 130
        assert s.step_end_times() == (130,)
