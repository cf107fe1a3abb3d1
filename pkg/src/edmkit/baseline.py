"""Demand-response baselines: XofY day selection plus a same-day adjustment.

The initial baseline averages x days chosen, by daily energy rank, from the
y most recent non-event days before the event.  The adjustment compares
observed demand with that baseline over a calibration window ending at the
event notification and shifts the baseline up by the mean difference, never
down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DataError, DomainError
from .model import DemandPattern


class BaselineMode(Enum):
    HIGH = "high"
    LOW = "low"
    MID = "mid"


@dataclass(frozen=True)
class DayProfile:
    """One day of interval-average powers and its DR-event flag."""

    day_index: int
    powers_w: tuple[float, ...]
    is_event_day: bool = False

    def __post_init__(self):
        powers = tuple(float(p) for p in self.powers_w)
        if not powers:
            raise DomainError(f"day {self.day_index} has no samples")
        for i, p in enumerate(powers):
            if not math.isfinite(p) or p < 0.0:
                raise DomainError(
                    f"day {self.day_index} interval {i}: power must be finite and >= 0, got {p}"
                )
        object.__setattr__(self, "powers_w", powers)

    def energy_ws(self, interval_s: int) -> float:
        total = 0.0
        for p in self.powers_w:
            total += p * interval_s
        return total


@dataclass(frozen=True)
class DailyProfileSet:
    """History of daily profiles sharing one interval resolution."""

    interval_s: int
    days: tuple[DayProfile, ...]

    def __post_init__(self):
        if int(self.interval_s) != self.interval_s or self.interval_s <= 0:
            raise DomainError(f"interval must be a positive integer, got {self.interval_s}")
        object.__setattr__(self, "interval_s", int(self.interval_s))
        days = tuple(self.days)
        if not days:
            raise DomainError("history must contain at least one day")
        length = len(days[0].powers_w)
        prev_index = None
        for day in days:
            if len(day.powers_w) != length:
                raise DomainError(
                    f"day {day.day_index} has {len(day.powers_w)} intervals, expected {length}"
                )
            if prev_index is not None and day.day_index <= prev_index:
                raise DomainError(f"day indices must be strictly increasing at {day.day_index}")
            prev_index = day.day_index
        object.__setattr__(self, "days", days)

    @property
    def intervals_per_day(self) -> int:
        return len(self.days[0].powers_w)


@dataclass(frozen=True)
class BaselineConfig:
    mode: BaselineMode
    x: int
    y: int
    calibration_window_s: int = 7200
    adjustment_floor_w: float = 0.0

    def __post_init__(self):
        if not (1 <= self.x <= self.y):
            raise DomainError(f"need 1 <= x <= y, got x={self.x}, y={self.y}")
        if self.calibration_window_s <= 0:
            raise DomainError(
                f"calibration window must be positive, got {self.calibration_window_s}"
            )


def initial_baseline(
    history: DailyProfileSet, config: BaselineConfig, event_day_index: int
) -> DemandPattern:
    """Interval-wise mean of the x days picked by energy rank out of the last y."""
    candidates = [
        d for d in history.days if d.day_index < event_day_index and not d.is_event_day
    ]
    if len(candidates) < config.y:
        raise DataError(
            f"need {config.y} non-event days before day {event_day_index},"
            f" history has {len(candidates)}"
        )
    window = candidates[-config.y :]
    # descending energy; ties go to the more recent day
    ranked = sorted(window, key=lambda d: (d.energy_ws(history.interval_s), d.day_index), reverse=True)
    if config.mode is BaselineMode.HIGH:
        chosen = ranked[: config.x]
    elif config.mode is BaselineMode.LOW:
        chosen = ranked[len(ranked) - config.x :]
    else:
        start = (config.y - config.x) // 2
        chosen = ranked[start : start + config.x]

    n = history.intervals_per_day
    means = tuple(
        sum(day.powers_w[k] for day in chosen) / len(chosen) for k in range(n)
    )
    return DemandPattern(tau_s=history.interval_s, powers_w=means)


def adjusted_baseline(
    initial: DemandPattern,
    observed: DemandPattern,
    notification_t_s: int,
    config: BaselineConfig,
) -> DemandPattern:
    """Shift the baseline by the calibration-window mean gap, floored at zero,
    from the notification onward."""
    if observed.tau_s != initial.tau_s or len(observed) != len(initial):
        raise DataError(
            f"observed profile shape ({len(observed)} x {observed.tau_s} s) does not match"
            f" baseline ({len(initial)} x {initial.tau_s} s)"
        )
    interval = initial.tau_s
    window_start = notification_t_s - config.calibration_window_s
    if window_start < 0 or notification_t_s > initial.horizon_s:
        raise DataError(
            f"calibration window [{window_start}, {notification_t_s}) s falls outside"
            f" the profile horizon [0, {initial.horizon_s}) s"
        )
    if notification_t_s % interval != 0 or window_start % interval != 0:
        raise DataError(
            f"calibration window [{window_start}, {notification_t_s}) s is off"
            f" the {interval} s interval grid"
        )

    lo = window_start // interval
    hi = notification_t_s // interval
    gap = sum(observed.powers_w[k] - initial.powers_w[k] for k in range(lo, hi)) / (hi - lo)
    adjustment = max(config.adjustment_floor_w, gap)

    adjusted = tuple(
        p + adjustment if k >= hi else p for k, p in enumerate(initial.powers_w)
    )
    return DemandPattern(tau_s=interval, powers_w=adjusted, start_s=initial.start_s)
