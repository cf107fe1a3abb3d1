"""Duration-of-Use tariff evaluation over demand duration curves.

A duration curve is the pattern's samples sorted in descending order; a DoU
schedule is a stepwise power-limit function over the same horizon.  Billing
compares the two: energy above the limits is the excess, a tolerance carves
out a free share of it, and the rest is penalized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError
from .model import DemandPattern
from .units import WS_PER_KWH, WS_PER_WH, EnergyQuantity, EnergyUnit


@dataclass(frozen=True)
class DurationCurve:
    """Demand samples in non-increasing order; same multiset as the source."""

    tau_s: int
    powers_w: tuple[float, ...]

    def __post_init__(self):
        if int(self.tau_s) != self.tau_s or self.tau_s <= 0:
            raise DomainError(f"elementary interval must be a positive integer, got {self.tau_s}")
        object.__setattr__(self, "tau_s", int(self.tau_s))
        powers = tuple(float(p) for p in self.powers_w)
        if not powers:
            raise DomainError("a duration curve needs at least one sample")
        for i, p in enumerate(powers):
            if not math.isfinite(p) or p < 0.0:
                raise DomainError(f"curve power at rank {i} must be finite and >= 0, got {p}")
            if i and p > powers[i - 1]:
                raise DomainError(f"curve must be non-increasing, rises at rank {i}")
        object.__setattr__(self, "powers_w", powers)

    def __len__(self) -> int:
        return len(self.powers_w)

    @property
    def horizon_s(self) -> int:
        return len(self.powers_w) * self.tau_s

    @property
    def total_energy_ws(self) -> float:
        total = 0.0
        for p in self.powers_w:
            total += p * self.tau_s
        return total


def duration_curve(pattern: DemandPattern) -> DurationCurve:
    """Sort the pattern's samples in descending order."""
    return DurationCurve(
        tau_s=pattern.tau_s,
        powers_w=tuple(sorted(pattern.powers_w, reverse=True)),
    )


@dataclass(frozen=True)
class DouLimitSchedule:
    """Stepwise limits: each (t_end_s, power_w) rules over (previous t_end, t_end].

    The last breakpoint's t_end_s is the observation horizon.
    """

    breakpoints: tuple[tuple[int, float], ...]
    tau_s: int = 1

    def __post_init__(self):
        if int(self.tau_s) != self.tau_s or self.tau_s <= 0:
            raise DomainError(f"elementary interval must be a positive integer, got {self.tau_s}")
        object.__setattr__(self, "tau_s", int(self.tau_s))
        points = tuple((int(t), float(p)) for t, p in self.breakpoints)
        if not points:
            raise DomainError("a limit schedule needs at least one breakpoint")
        prev = 0
        for t, p in points:
            if t <= prev:
                raise DomainError(f"breakpoint times must be strictly increasing at t={t}")
            if t % self.tau_s != 0:
                raise DomainError(f"breakpoint t={t} is not a multiple of tau ({self.tau_s} s)")
            if not math.isfinite(p) or p < 0.0:
                raise DomainError(f"limit power at t={t} must be finite and >= 0, got {p}")
            prev = t
        object.__setattr__(self, "breakpoints", points)

    @property
    def horizon_s(self) -> int:
        return self.breakpoints[-1][0]

    def segments(self) -> tuple[tuple[int, int, float], ...]:
        """(t_start_s, t_end_s, limit_w) triples covering the horizon."""
        out = []
        prev = 0
        for t, p in self.breakpoints:
            out.append((prev, t, p))
            prev = t
        return tuple(out)


def percent_to_absolute(schedule: DouLimitSchedule, reference_power_w: float) -> DouLimitSchedule:
    """Rescale a schedule whose powers are per-cent values of a reference power."""
    if not math.isfinite(reference_power_w) or reference_power_w <= 0.0:
        raise DomainError(f"reference power must be > 0, got {reference_power_w}")
    return replace(
        schedule,
        breakpoints=tuple((t, p * reference_power_w / 100.0) for t, p in schedule.breakpoints),
    )


def area_under_limits(schedule: DouLimitSchedule) -> EnergyQuantity:
    """Maximum energy consumable while honoring every limit, in kWh."""
    total_ws = 0.0
    for t_start, t_end, limit in schedule.segments():
        total_ws += limit * (t_end - t_start)
    return EnergyQuantity.from_ws(total_ws).to(EnergyUnit.KILOWATT_HOUR)


@dataclass(frozen=True)
class DouEvaluation:
    """Outcome of one curve-against-schedule billing pass.

    Penalty fields stay None until :func:`apply_penalty` fills them in.
    """

    segment_excess_wh: tuple[float, ...]
    total_excess_wh: float
    area_under_limits_kwh: float
    tolerated_wh: float | None = None
    penalized_wh: float | None = None
    penalty_amount: float | None = None


def excess_energy(curve: DurationCurve, schedule: DouLimitSchedule) -> DouEvaluation:
    """Per-segment energy above the limits; penalty fields left unset."""
    if curve.horizon_s != schedule.horizon_s:
        raise DomainError(
            f"curve horizon ({curve.horizon_s} s) != schedule horizon ({schedule.horizon_s} s)"
        )
    tau = curve.tau_s
    for t, _ in schedule.breakpoints:
        if t % tau != 0:
            raise DomainError(f"breakpoint t={t} is off the curve's tau grid ({tau} s)")

    powers = np.asarray(curve.powers_w)
    seg_wh: list[float] = []
    for t_start, t_end, limit in schedule.segments():
        chunk = powers[t_start // tau : t_end // tau]
        excess_ws = float(np.maximum(chunk - limit, 0.0).sum() * tau)
        seg_wh.append(excess_ws / WS_PER_WH)
    return DouEvaluation(
        segment_excess_wh=tuple(seg_wh),
        total_excess_wh=float(sum(seg_wh)),
        area_under_limits_kwh=area_under_limits(schedule).value,
    )


def apply_penalty(
    evaluation: DouEvaluation, tolerance_fraction: float, price_per_kwh: float
) -> DouEvaluation:
    """Tolerate a fraction of the area under limits, price the remaining excess."""
    if not (0.0 <= tolerance_fraction <= 1.0):
        raise DomainError(f"tolerance fraction must be in [0, 1], got {tolerance_fraction}")
    if not math.isfinite(price_per_kwh) or price_per_kwh < 0.0:
        raise DomainError(f"price must be >= 0, got {price_per_kwh}")
    tolerated_wh = tolerance_fraction * evaluation.area_under_limits_kwh * (WS_PER_KWH / WS_PER_WH)
    penalized_wh = max(0.0, evaluation.total_excess_wh - tolerated_wh)
    return replace(
        evaluation,
        tolerated_wh=tolerated_wh,
        penalized_wh=penalized_wh,
        penalty_amount=penalized_wh / 1000.0 * price_per_kwh,
    )
