import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edmkit import (
    DemandPattern,
    DomainError,
    EdmConfig,
    EventStream,
    MeterEvent,
    StateError,
    Trigger,
    decode_triggers,
    encode_triggers,
    init,
    no_event_envelope,
    run_edm,
    step,
)
from conftest import brute_force_edm, random_pattern


def tokens(stream: EventStream) -> list[tuple[int, float, str]]:
    return [(e.t_end_s, e.energy_ws, encode_triggers(e.triggers)) for e in stream.events]


class TestConfig:
    def test_valid(self):
        c = EdmConfig(delta1_w=500.0, delta2_ws=500.0, tau_s=1, billing_period_s=86400)
        assert c.billing_period_s == 86400

    def test_inf_disables_a_threshold(self):
        c = EdmConfig(math.inf, 500.0, 1, 60)
        assert math.isinf(c.delta1_w)

    def test_negative_threshold_rejected(self):
        with pytest.raises(DomainError):
            EdmConfig(-1.0, 500.0, 1, 60)

    def test_nan_threshold_rejected(self):
        with pytest.raises(DomainError):
            EdmConfig(math.nan, 500.0, 1, 60)

    def test_billing_must_be_multiple_of_tau(self):
        with pytest.raises(DomainError):
            EdmConfig(500.0, 500.0, 7, 100)


class TestTriggerCodec:
    def test_fixed_token_order(self):
        t = Trigger.BILLING_END | Trigger.CHANGE_OF_VALUE | Trigger.ACCUMULATED
        assert encode_triggers(t) == "D1+D2+BILL"

    def test_single_tokens(self):
        assert encode_triggers(Trigger.CHANGE_OF_VALUE) == "D1"
        assert encode_triggers(Trigger.ACCUMULATED) == "D2"
        assert encode_triggers(Trigger.BILLING_END) == "BILL"

    def test_decode_inverts_encode(self):
        for t in (
            Trigger.CHANGE_OF_VALUE,
            Trigger.ACCUMULATED | Trigger.BILLING_END,
            Trigger.CHANGE_OF_VALUE | Trigger.ACCUMULATED | Trigger.BILLING_END,
        ):
            assert decode_triggers(encode_triggers(t)) == t

    def test_unknown_token_rejected(self):
        with pytest.raises(DomainError):
            decode_triggers("D3")

    def test_empty_trigger_set_rejected(self):
        with pytest.raises(DomainError):
            encode_triggers(Trigger(0))


class TestEngineExamples:
    def test_constant_pattern_single_billing_event(self):
        p = DemandPattern(tau_s=1, powers_w=(500.0,) * 20)
        stream = run_edm(p, EdmConfig(500.0, 500.0, 1, 20))
        assert tokens(stream) == [(20, 10000.0, "BILL")]

    def test_step_change_fires_change_of_value(self):
        # 100 W for 10 s then 700 W; the triggering interval closes the segment
        p = DemandPattern(tau_s=1, powers_w=(100.0,) * 10 + (700.0,) * 10)
        stream = run_edm(p, EdmConfig(500.0, math.inf, 1, 20))
        assert tokens(stream) == [(11, 1700.0, "D1"), (20, 6300.0, "BILL")]

    def test_slow_ramp_fires_accumulated_trigger(self):
        # 50 W increments never exceed delta1; the deviation sum does
        p = DemandPattern(tau_s=1, powers_w=tuple(50.0 * k for k in range(1, 13)))
        stream = run_edm(p, EdmConfig(math.inf, 500.0, 1, 12))
        assert tokens(stream)[0] == (6, 1050.0, "D2")
        assert tokens(stream)[-1][2] == "BILL"

    def test_first_interval_cannot_fire_value_triggers(self):
        p = DemandPattern(tau_s=1, powers_w=(5000.0, 5000.0))
        stream = run_edm(p, EdmConfig(1.0, math.inf, 1, 2))
        assert tokens(stream) == [(2, 10000.0, "BILL")]

    def test_billing_boundaries_always_fire(self):
        p = DemandPattern(tau_s=1, powers_w=(100.0,) * 9)
        stream = run_edm(p, EdmConfig(math.inf, math.inf, 1, 3))
        assert [e.t_end_s for e in stream.events] == [3, 6, 9]
        assert all(e.triggers == Trigger.BILLING_END for e in stream.events)

    def test_horizon_end_closes_the_stream(self):
        # horizon is not a billing boundary; the last interval still closes
        p = DemandPattern(tau_s=1, powers_w=(100.0,) * 10)
        stream = run_edm(p, EdmConfig(math.inf, math.inf, 1, 86400))
        assert tokens(stream) == [(10, 1000.0, "BILL")]

    def test_zero_thresholds_fire_on_any_variation(self):
        p = DemandPattern(tau_s=1, powers_w=(1.0, 2.0, 1.0, 1.0))
        stream = run_edm(p, EdmConfig(0.0, 0.0, 1, 4))
        assert [e.t_end_s for e in stream.events] == [2, 3, 4]

    def test_events_conserve_energy_exactly(self):
        rng = np.random.default_rng(0)
        p = random_pattern(rng, 600, tau_s=1)
        stream = run_edm(p, EdmConfig(200.0, 1000.0, 1, 600))
        assert stream.total_energy_ws == pytest.approx(p.total_energy_ws, rel=1e-12)

    def test_reference_resets_on_event(self):
        # after a D1 event the new power becomes the deviation reference
        p = DemandPattern(tau_s=1, powers_w=(100.0, 800.0, 800.0, 800.0))
        stream = run_edm(p, EdmConfig(500.0, 1e9, 1, 4))
        assert tokens(stream) == [(2, 900.0, "D1"), (4, 1600.0, "BILL")]

    def test_tau_mismatch_rejected(self):
        p = DemandPattern(tau_s=2, powers_w=(1.0, 1.0))
        with pytest.raises(Exception):
            run_edm(p, EdmConfig(1.0, 1.0, 1, 4))


class TestStepApi:
    def test_step_past_end_raises(self):
        state = init(EdmConfig(1.0, 1.0, 1, 2), horizon_s=2)
        state, _ = step(state, 5.0)
        state, event = step(state, 5.0)
        assert event is not None
        with pytest.raises(StateError):
            step(state, 5.0)

    def test_unbounded_run_has_no_horizon_event(self):
        state = init(EdmConfig(math.inf, math.inf, 1, 10))
        for _ in range(15):
            state, event = step(state, 1.0)
            if event is not None:
                assert event.t_end_s == 10
        assert state.t_now_s == 15

    def test_negative_power_rejected(self):
        state = init(EdmConfig(1.0, 1.0, 1, 10))
        with pytest.raises(DomainError):
            step(state, -2.0)

    def test_non_finite_power_rejected(self):
        state = init(EdmConfig(1.0, 1.0, 1, 10))
        with pytest.raises(DomainError):
            step(state, math.nan)

    def test_billing_period_equal_to_tau_fires_every_interval(self):
        state = init(EdmConfig(math.inf, math.inf, 1, 1), horizon_s=3)
        events = []
        for p in (7.0, 8.0, 9.0):
            state, event = step(state, p)
            events.append(event)
        assert all(e is not None for e in events)
        assert [e.energy_ws for e in events] == [7.0, 8.0, 9.0]


class TestEnvelope:
    def test_fresh_segment_envelope(self):
        # example: p_prev = p_ref = 500, acc = 0, d1 = 100, d2 = 400, tau = 1
        state = init(EdmConfig(100.0, 400.0, 1, 100))
        state, _ = step(state, 500.0)
        assert no_event_envelope(state) == (400.0, 600.0)

    def test_envelope_narrows_as_deviation_accumulates(self):
        # after one 600 W interval acc = 100, the deviation bound tightens
        state = init(EdmConfig(100.0, 400.0, 1, 100))
        state, _ = step(state, 500.0)
        state, event = step(state, 600.0)
        assert event is None
        lo, hi = no_event_envelope(state)
        assert (lo, hi) == (500.0, 700.0)

    def test_envelope_none_when_bounds_cross(self):
        # assembled state whose value band and deviation band are disjoint
        from edmkit import EdmState

        config = EdmConfig(50.0, 1000.0, 1, 1000)
        state = EdmState(
            config=config,
            start_s=0,
            end_s=None,
            t_now_s=5,
            p_prev_w=2000.0,
            p_ref_w=0.0,
            acc_ws=900.0,
            seg_energy_ws=123.0,
        )
        assert no_event_envelope(state) is None

    def test_envelope_before_first_sample_raises(self):
        state = init(EdmConfig(1.0, 1.0, 1, 10))
        with pytest.raises(StateError):
            no_event_envelope(state)

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=80, deadline=None)
    def test_envelope_is_exact_boundary(self, raw):
        # inside the band: no threshold event; outside: an event fires
        state = init(EdmConfig(120.0, 700.0, 1, 10**9))
        state, _ = step(state, 400.0)
        state, event = step(state, 450.0)
        assert event is None
        lo, hi = no_event_envelope(state)
        p = raw / 7.0
        state2, event2 = step(state, p)
        fired = event2 is not None and event2.triggers != Trigger.BILLING_END
        if lo <= p <= hi:
            assert not fired
        else:
            assert fired


class TestAgainstBruteForce:
    def test_matches_oracle_on_seeded_patterns(self):
        rng = np.random.default_rng(123)
        for _ in range(150):
            n = int(rng.integers(2, 60))
            tau = int(rng.integers(1, 4))
            p = random_pattern(rng, n, tau_s=tau)
            d1 = float(rng.choice([0.0, 50.0, 200.0, 500.0, math.inf]))
            d2 = float(rng.choice([0.0, 100.0, 500.0, 2000.0, math.inf]))
            billing = tau * int(rng.integers(1, n + 1))
            config = EdmConfig(d1, d2, tau, billing)
            got = [
                (e.t_end_s, e.energy_ws, set(encode_triggers(e.triggers).split("+")))
                for e in run_edm(p, config).events
            ]
            want = [(t, e, set(trig)) for t, e, trig in brute_force_edm(
                p.powers_w, tau, d1, d2, billing
            )]
            assert got == want


class TestEventStream:
    def test_rejects_out_of_order_events(self):
        config = EdmConfig(1.0, 1.0, 1, 10)
        with pytest.raises(DomainError):
            EventStream(
                config=config,
                start_s=0,
                events=(
                    MeterEvent(5, 1.0, Trigger.BILLING_END),
                    MeterEvent(5, 1.0, Trigger.BILLING_END),
                ),
            )

    def test_rejects_off_grid_event(self):
        config = EdmConfig(1.0, 1.0, 2, 10)
        with pytest.raises(DomainError):
            EventStream(
                config=config,
                start_s=0,
                events=(MeterEvent(3, 1.0, Trigger.BILLING_END),),
            )

    def test_horizon_and_total_energy(self):
        config = EdmConfig(math.inf, math.inf, 1, 4)
        p = DemandPattern(tau_s=1, powers_w=(10.0,) * 8)
        stream = run_edm(p, config)
        assert stream.horizon_s == 8
        assert stream.total_energy_ws == 80.0
