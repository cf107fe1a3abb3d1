"""Event-driven metering state machine.

The engine consumes elementary-interval average powers one at a time and
emits an event whenever one of three conditions holds at the end of the
interval being processed:

* change-of-value: the power differs from the previous interval's power by
  strictly more than ``delta1_w``;
* accumulated deviation: the signed sum of (power - reference) * tau since
  the last event exceeds ``delta2_ws`` in magnitude (strictly);
* billing boundary: the interval ends on a multiple of the billing period,
  or at the end of a bounded run's horizon.

An event records the exact energy accumulated since the previous event,
including the interval that triggered it, and resets the reference power to
that interval's power.  The first interval only seeds the previous/reference
powers; it cannot trigger on value or deviation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Flag, auto

from .errors import ConfigError, DomainError, StateError
from .model import DemandPattern


class Trigger(Flag):
    CHANGE_OF_VALUE = auto()
    ACCUMULATED = auto()
    BILLING_END = auto()


# token order is fixed by the event CSV format
_TRIGGER_TOKENS = (
    (Trigger.CHANGE_OF_VALUE, "D1"),
    (Trigger.ACCUMULATED, "D2"),
    (Trigger.BILLING_END, "BILL"),
)


def encode_triggers(triggers: Trigger) -> str:
    """Render a trigger set as '+'-joined tokens, e.g. ``D1+D2``."""
    tokens = [token for flag, token in _TRIGGER_TOKENS if flag & triggers]
    if not tokens:
        raise DomainError("an event must carry at least one trigger")
    return "+".join(tokens)


def decode_triggers(text: str) -> Trigger:
    by_token = {token: flag for flag, token in _TRIGGER_TOKENS}
    triggers = Trigger(0)
    for token in text.split("+"):
        flag = by_token.get(token)
        if flag is None:
            raise DomainError(f"unknown trigger token {token!r}")
        triggers |= flag
    return triggers


def _check_threshold(name: str, value: float) -> float:
    value = float(value)
    if math.isnan(value) or value < 0.0:
        raise DomainError(f"{name} must be >= 0 (or +inf to disable), got {value}")
    return value


@dataclass(frozen=True)
class EdmConfig:
    """Thresholds and time grid of one metering run.

    ``math.inf`` disables a threshold; 0 makes it fire on any variation.
    """

    delta1_w: float
    delta2_ws: float
    tau_s: int
    billing_period_s: int

    def __post_init__(self):
        object.__setattr__(self, "delta1_w", _check_threshold("delta1_w", self.delta1_w))
        object.__setattr__(self, "delta2_ws", _check_threshold("delta2_ws", self.delta2_ws))
        if int(self.tau_s) != self.tau_s or self.tau_s <= 0:
            raise DomainError(f"elementary interval must be a positive integer, got {self.tau_s}")
        object.__setattr__(self, "tau_s", int(self.tau_s))
        if int(self.billing_period_s) != self.billing_period_s or self.billing_period_s <= 0:
            raise DomainError(f"billing period must be a positive integer, got {self.billing_period_s}")
        object.__setattr__(self, "billing_period_s", int(self.billing_period_s))
        if self.billing_period_s % self.tau_s != 0:
            raise DomainError(
                f"billing period ({self.billing_period_s} s) must be a multiple of tau ({self.tau_s} s)"
            )


@dataclass(frozen=True)
class MeterEvent:
    """One recorded event: timestamp, exact energy since the previous event,
    and the set of conditions that fired."""

    t_end_s: int
    energy_ws: float
    triggers: Trigger

    def __post_init__(self):
        if not self.triggers:
            raise DomainError("an event must carry at least one trigger")
        if not math.isfinite(self.energy_ws) or self.energy_ws < 0.0:
            raise DomainError(f"event energy must be finite and non-negative, got {self.energy_ws}")


@dataclass(frozen=True)
class EventStream:
    """Ordered events of one run; the last event closes the horizon."""

    config: EdmConfig
    start_s: int
    events: tuple[MeterEvent, ...]

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        if not self.events:
            raise DomainError("an event stream must contain at least one event")
        prev = self.start_s
        for ev in self.events:
            if ev.t_end_s <= prev:
                raise DomainError(f"event timestamps must be strictly increasing at t={ev.t_end_s}")
            if (ev.t_end_s - self.start_s) % self.config.tau_s != 0:
                raise DomainError(f"event at t={ev.t_end_s} is off the tau grid")
            prev = ev.t_end_s

    def __len__(self) -> int:
        return len(self.events)

    @property
    def horizon_s(self) -> int:
        return self.events[-1].t_end_s - self.start_s

    @property
    def total_energy_ws(self) -> float:
        total = 0.0
        for ev in self.events:
            total += ev.energy_ws
        return total


@dataclass(frozen=True)
class EdmState:
    """Mid-run engine state.  ``p_prev_w`` is None before the first sample."""

    config: EdmConfig
    start_s: int
    end_s: int | None
    t_now_s: int
    p_prev_w: float | None
    p_ref_w: float
    acc_ws: float
    seg_energy_ws: float


def init(config: EdmConfig, *, start_s: int = 0, horizon_s: int | None = None) -> EdmState:
    """Fresh state at the start of a run.

    With a known ``horizon_s`` the run is bounded: stepping past the end is
    an error and the final interval always closes with a billing event.
    """
    end_s = None
    if horizon_s is not None:
        if horizon_s <= 0 or horizon_s % config.tau_s != 0:
            raise ConfigError(f"horizon ({horizon_s} s) must be a positive multiple of tau")
        end_s = start_s + horizon_s
    return EdmState(
        config=config,
        start_s=start_s,
        end_s=end_s,
        t_now_s=start_s,
        p_prev_w=None,
        p_ref_w=0.0,
        acc_ws=0.0,
        seg_energy_ws=0.0,
    )


def step(state: EdmState, p_k: float) -> tuple[EdmState, MeterEvent | None]:
    """Advance the engine by one elementary interval of average power ``p_k``."""
    if not math.isfinite(p_k) or p_k < 0.0:
        raise DomainError(f"power must be finite and non-negative, got {p_k}")
    if state.end_s is not None and state.t_now_s >= state.end_s:
        raise StateError(f"run already ended at t={state.end_s}")

    cfg = state.config
    tau = cfg.tau_s
    t_end = state.t_now_s + tau
    seg = state.seg_energy_ws + p_k * tau

    triggers = Trigger(0)
    if state.p_prev_w is None:
        acc = 0.0
    else:
        acc = state.acc_ws + (p_k - state.p_ref_w) * tau
        if abs(p_k - state.p_prev_w) > cfg.delta1_w:
            triggers |= Trigger.CHANGE_OF_VALUE
        if abs(acc) > cfg.delta2_ws:
            triggers |= Trigger.ACCUMULATED
    if (t_end - state.start_s) % cfg.billing_period_s == 0 or t_end == state.end_s:
        triggers |= Trigger.BILLING_END

    if triggers:
        event = MeterEvent(t_end_s=t_end, energy_ws=seg, triggers=triggers)
        new_state = EdmState(cfg, state.start_s, state.end_s, t_end, p_k, p_k, 0.0, 0.0)
        return new_state, event

    p_ref = p_k if state.p_prev_w is None else state.p_ref_w
    new_state = EdmState(cfg, state.start_s, state.end_s, t_end, p_k, p_ref, acc, seg)
    return new_state, None


def run_edm(pattern: DemandPattern, config: EdmConfig) -> EventStream:
    """Meter a whole pattern: fold :func:`step` over every sample."""
    if config.tau_s != pattern.tau_s:
        raise ConfigError(
            f"config tau ({config.tau_s} s) does not match pattern tau ({pattern.tau_s} s)"
        )
    state = init(config, start_s=pattern.start_s, horizon_s=pattern.horizon_s)
    events: list[MeterEvent] = []
    for p in pattern.powers_w:
        state, event = step(state, p)
        if event is not None:
            events.append(event)
    return EventStream(config=config, start_s=pattern.start_s, events=tuple(events))


def no_event_envelope(state: EdmState) -> tuple[float, float] | None:
    """Range of next-interval powers that would not fire a threshold trigger.

    Returns None when every possible power triggers.  Billing boundaries are
    time-driven and ignored here.
    """
    if state.p_prev_w is None:
        raise StateError("envelope undefined before the first sample")
    cfg = state.config
    tau = cfg.tau_s
    lo = max(state.p_prev_w - cfg.delta1_w, state.p_ref_w + (-cfg.delta2_ws - state.acc_ws) / tau)
    hi = min(state.p_prev_w + cfg.delta1_w, state.p_ref_w + (cfg.delta2_ws - state.acc_ws) / tau)
    if lo > hi:
        return None
    return lo, hi
