"""Energy quantities with explicit units.

Powers are plain floats in watts throughout the toolkit; energies cross module
boundaries often enough to deserve a unit tag.  Internally everything
accumulates in watt-seconds and converts at the edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError

WS_PER_WH = 3600.0
WS_PER_KWH = 3_600_000.0


class EnergyUnit(Enum):
    WATT_SECOND = ("Ws", 1.0)
    WATT_HOUR = ("Wh", WS_PER_WH)
    KILOWATT_HOUR = ("kWh", WS_PER_KWH)

    def __init__(self, symbol: str, ws_factor: float):
        self.symbol = symbol
        self.ws_factor = ws_factor


@dataclass(frozen=True)
class EnergyQuantity:
    """An amount of energy together with the unit it is expressed in."""

    value: float
    unit: EnergyUnit

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DomainError(f"energy must be finite, got {self.value}")

    @classmethod
    def from_ws(cls, ws: float) -> "EnergyQuantity":
        return cls(ws, EnergyUnit.WATT_SECOND)

    def to(self, unit: EnergyUnit) -> "EnergyQuantity":
        if unit is self.unit:
            return self
        return EnergyQuantity(self.value * self.unit.ws_factor / unit.ws_factor, unit)

    @property
    def ws(self) -> float:
        return self.value * self.unit.ws_factor

    @property
    def wh(self) -> float:
        return self.ws / WS_PER_WH

    @property
    def kwh(self) -> float:
        return self.ws / WS_PER_KWH

    def __str__(self) -> str:
        return f"{self.value} {self.unit.symbol}"
