"""Core time-series value objects: demand patterns and interval readings.

Time lives on an integer second grid.  A demand pattern holds one average
power per elementary interval; an interval series holds one energy reading
per fixed step.  Both are immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DomainError
from .units import EnergyQuantity, EnergyUnit


def _as_power_tuple(values: Iterable[float]) -> tuple[float, ...]:
    powers = tuple(float(v) for v in values)
    if not powers:
        raise DomainError("at least one sample is required")
    arr = np.asarray(powers)
    if not np.all(np.isfinite(arr)):
        raise DomainError("power values must be finite")
    if np.any(arr < 0.0):
        raise DomainError("negative power values are not supported")
    return powers


@dataclass(frozen=True)
class DemandPattern:
    """Average power per elementary interval on a uniform grid.

    Sample k covers the half-open span
    (start_s + k*tau_s, start_s + (k+1)*tau_s].
    """

    tau_s: int
    powers_w: tuple[float, ...]
    start_s: int = 0

    def __post_init__(self):
        if int(self.tau_s) != self.tau_s or self.tau_s <= 0:
            raise DomainError(f"elementary interval must be a positive integer, got {self.tau_s}")
        object.__setattr__(self, "tau_s", int(self.tau_s))
        object.__setattr__(self, "start_s", int(self.start_s))
        object.__setattr__(self, "powers_w", _as_power_tuple(self.powers_w))

    def __len__(self) -> int:
        return len(self.powers_w)

    @property
    def horizon_s(self) -> int:
        return len(self.powers_w) * self.tau_s

    @property
    def end_s(self) -> int:
        return self.start_s + self.horizon_s

    @property
    def total_energy_ws(self) -> float:
        # left-to-right accumulation, same order as the metering engine
        total = 0.0
        tau = float(self.tau_s)
        for p in self.powers_w:
            total += p * tau
        return total

    def total_energy(self) -> EnergyQuantity:
        return EnergyQuantity.from_ws(self.total_energy_ws).to(EnergyUnit.WATT_HOUR)


@dataclass(frozen=True)
class IntervalSeries:
    """Energy per fixed time step, the classical interval-metering output.

    A horizon that is not a whole number of steps ends in one trailing
    partial reading; ``partial_tail_s`` records its true duration.
    """

    step_s: int
    energies_ws: tuple[float, ...]
    start_s: int = 0
    partial_tail_s: int | None = None

    def __post_init__(self):
        if int(self.step_s) != self.step_s or self.step_s <= 0:
            raise DomainError(f"step must be a positive integer, got {self.step_s}")
        object.__setattr__(self, "step_s", int(self.step_s))
        object.__setattr__(self, "start_s", int(self.start_s))
        energies = tuple(float(e) for e in self.energies_ws)
        if not energies:
            raise DomainError("at least one reading is required")
        arr = np.asarray(energies)
        if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
            raise DomainError("energy readings must be finite and non-negative")
        object.__setattr__(self, "energies_ws", energies)
        if self.partial_tail_s is not None:
            tail = int(self.partial_tail_s)
            if not 0 < tail < self.step_s:
                raise DomainError(
                    f"partial tail duration must lie in (0, {self.step_s}), got {self.partial_tail_s}"
                )
            object.__setattr__(self, "partial_tail_s", tail)

    def __len__(self) -> int:
        return len(self.energies_ws)

    @property
    def full_step_count(self) -> int:
        return len(self.energies_ws) - (1 if self.partial_tail_s is not None else 0)

    @property
    def horizon_s(self) -> int:
        return self.full_step_count * self.step_s + (self.partial_tail_s or 0)

    @property
    def end_s(self) -> int:
        return self.start_s + self.horizon_s

    def step_end_times(self) -> tuple[int, ...]:
        """Absolute end time of every reading, partial tail included."""
        ends = [self.start_s + (j + 1) * self.step_s for j in range(self.full_step_count)]
        if self.partial_tail_s is not None:
            ends.append(self.start_s + self.full_step_count * self.step_s + self.partial_tail_s)
        return tuple(ends)

    @property
    def total_energy_ws(self) -> float:
        total = 0.0
        for e in self.energies_ws:
            total += e
        return total

    def total_energy(self) -> EnergyQuantity:
        return EnergyQuantity.from_ws(self.total_energy_ws).to(EnergyUnit.WATT_HOUR)
