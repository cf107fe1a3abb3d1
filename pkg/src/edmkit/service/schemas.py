"""Request and response bodies for the HTTP service.

Each wire model knows how to cross into the domain layer and back; the
domain constructors keep all invariant checking, so the models stay thin.
Disabled thresholds travel as null (JSON has no infinity).
"""

from __future__ import annotations

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, model_validator

from ..baseline import BaselineConfig, BaselineMode, DailyProfileSet, DayProfile
from ..dou import DouEvaluation, DouLimitSchedule, DurationCurve
from ..edm import EdmConfig, EventStream, MeterEvent, decode_triggers, encode_triggers
from ..metrics import ComparisonReport, LineModel
from ..model import DemandPattern, IntervalSeries
from ..synth import LoadSpec, Pulse, PulseShape


class PatternModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    tau_s: int
    powers_w: list[float]
    start_s: int = 0

    @classmethod
    def from_domain(cls, pattern: DemandPattern) -> "PatternModel":
        return cls(tau_s=pattern.tau_s, powers_w=list(pattern.powers_w), start_s=pattern.start_s)

    def to_domain(self) -> DemandPattern:
        return DemandPattern(tau_s=self.tau_s, powers_w=tuple(self.powers_w), start_s=self.start_s)


class PulseModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    start_s: int
    duration_s: int
    power_w: float
    shape: Literal["rect", "ramp"] = "rect"

    @classmethod
    def from_domain(cls, pulse: Pulse) -> "PulseModel":
        return cls(
            start_s=pulse.start_s,
            duration_s=pulse.duration_s,
            power_w=pulse.power_w,
            shape=pulse.shape.value,
        )

    def to_domain(self) -> Pulse:
        return Pulse(
            start_s=self.start_s,
            duration_s=self.duration_s,
            power_w=self.power_w,
            shape=PulseShape(self.shape),
        )


class LoadSpecModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    horizon_s: int
    tau_s: int
    base_w: float
    pulses: list[PulseModel] = []
    noise_w: float = 0.0
    seed: int = 0

    @classmethod
    def from_domain(cls, spec: LoadSpec) -> "LoadSpecModel":
        return cls(
            horizon_s=spec.horizon_s,
            tau_s=spec.tau_s,
            base_w=spec.base_w,
            pulses=[PulseModel.from_domain(p) for p in spec.pulses],
            noise_w=spec.noise_w,
            seed=spec.seed,
        )

    def to_domain(self) -> LoadSpec:
        return LoadSpec(
            horizon_s=self.horizon_s,
            tau_s=self.tau_s,
            base_w=self.base_w,
            pulses=tuple(p.to_domain() for p in self.pulses),
            noise_w=self.noise_w,
            seed=self.seed,
        )


class ReferenceDayRequest(BaseModel):
    model_config = ConfigDict(frozen=True)

    seed: int


def _delta_to_wire(value: float) -> float | None:
    return None if math.isinf(value) else value


def _delta_to_domain(value: float | None) -> float:
    return math.inf if value is None else value


class EdmSettings(BaseModel):
    """One metering configuration; a null threshold is disabled."""

    model_config = ConfigDict(frozen=True)

    delta1_w: float | None = None
    delta2_ws: float | None = None

    def to_config(self, tau_s: int, billing_period_s: int) -> EdmConfig:
        return EdmConfig(
            delta1_w=_delta_to_domain(self.delta1_w),
            delta2_ws=_delta_to_domain(self.delta2_ws),
            tau_s=tau_s,
            billing_period_s=billing_period_s,
        )


class MeterRequest(BaseModel):
    model_config = ConfigDict(frozen=True)

    pattern: PatternModel
    delta1_w: float | None = None
    delta2_ws: float | None = None
    billing_period_s: int | None = None


class EventModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    t_end_s: int
    energy_ws: float
    triggers: str

    @classmethod
    def from_domain(cls, event: MeterEvent) -> "EventModel":
        return cls(
            t_end_s=event.t_end_s,
            energy_ws=event.energy_ws,
            triggers=encode_triggers(event.triggers),
        )

    def to_domain(self) -> MeterEvent:
        return MeterEvent(
            t_end_s=self.t_end_s,
            energy_ws=self.energy_ws,
            triggers=decode_triggers(self.triggers),
        )


class EventStreamModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    tau_s: int
    start_s: int
    delta1_w: float | None
    delta2_ws: float | None
    billing_period_s: int
    events: list[EventModel]

    @classmethod
    def from_domain(cls, stream: EventStream) -> "EventStreamModel":
        return cls(
            tau_s=stream.config.tau_s,
            start_s=stream.start_s,
            delta1_w=_delta_to_wire(stream.config.delta1_w),
            delta2_ws=_delta_to_wire(stream.config.delta2_ws),
            billing_period_s=stream.config.billing_period_s,
            events=[EventModel.from_domain(e) for e in stream.events],
        )

    def to_domain(self) -> EventStream:
        config = EdmConfig(
            delta1_w=_delta_to_domain(self.delta1_w),
            delta2_ws=_delta_to_domain(self.delta2_ws),
            tau_s=self.tau_s,
            billing_period_s=self.billing_period_s,
        )
        return EventStream(
            config=config,
            start_s=self.start_s,
            events=tuple(e.to_domain() for e in self.events),
        )


class SampleRequest(BaseModel):
    model_config = ConfigDict(frozen=True)

    pattern: PatternModel
    step_s: int


class IntervalSeriesModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    step_s: int
    energies_ws: list[float]
    start_s: int = 0
    partial_tail_s: int | None = None

    @classmethod
    def from_domain(cls, series: IntervalSeries) -> "IntervalSeriesModel":
        return cls(
            step_s=series.step_s,
            energies_ws=list(series.energies_ws),
            start_s=series.start_s,
            partial_tail_s=series.partial_tail_s,
        )

    def to_domain(self) -> IntervalSeries:
        return IntervalSeries(
            step_s=self.step_s,
            energies_ws=tuple(self.energies_ws),
            start_s=self.start_s,
            partial_tail_s=self.partial_tail_s,
        )


class ReconstructEventsRequest(BaseModel):
    model_config = ConfigDict(frozen=True)

    events: list[EventModel]
    tau_s: int = 1
    start_s: int = 0


class ReconstructIntervalsRequest(BaseModel):
    model_config = ConfigDict(frozen=True)

    series: IntervalSeriesModel
    tau_s: int = 1


class LineSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    resistance_ohm: float = 0.58
    voltage_v: float = 230.0

    def to_domain(self) -> LineModel:
        return LineModel(resistance_ohm=self.resistance_ohm, voltage_v=self.voltage_v)


class CompareRequest(BaseModel):
    model_config = ConfigDict(frozen=True)

    pattern: PatternModel
    tdm_steps: list[int] = []
    edm_configs: list[EdmSettings] = []
    line: LineSettings = LineSettings()
    billing_period_s: int | None = None


class ReportModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    point_count: int
    peak_w: float
    peak_ratio: float
    rms_distance_w: float
    loss_ratio: float

    @classmethod
    def from_domain(cls, report: ComparisonReport) -> "ReportModel":
        return cls(
            label=report.label,
            point_count=report.point_count,
            peak_w=report.peak_w,
            peak_ratio=report.peak_ratio,
            rms_distance_w=report.rms_distance_w,
            loss_ratio=report.loss_ratio,
        )

    def to_domain(self) -> ComparisonReport:
        return ComparisonReport(
            label=self.label,
            point_count=self.point_count,
            peak_w=self.peak_w,
            peak_ratio=self.peak_ratio,
            rms_distance_w=self.rms_distance_w,
            loss_ratio=self.loss_ratio,
        )


class CompareResponse(BaseModel):
    model_config = ConfigDict(frozen=True)

    reports: list[ReportModel]


class DurationCurveRequest(BaseModel):
    model_config = ConfigDict(frozen=True)

    pattern: PatternModel


class DurationCurveModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    tau_s: int
    powers_w: list[float]

    @classmethod
    def from_domain(cls, curve: DurationCurve) -> "DurationCurveModel":
        return cls(tau_s=curve.tau_s, powers_w=list(curve.powers_w))

    def to_domain(self) -> DurationCurve:
        return DurationCurve(tau_s=self.tau_s, powers_w=tuple(self.powers_w))


class DouRequest(BaseModel):
    """Evaluate limits against a curve, or against a pattern's curve."""

    model_config = ConfigDict(frozen=True)

    breakpoints: list[tuple[int, float]]
    pattern: PatternModel | None = None
    curve: DurationCurveModel | None = None
    tolerance_fraction: float | None = None
    price_per_kwh: float | None = None

    @model_validator(mode="after")
    def _exactly_one_source(self):
        if (self.pattern is None) == (self.curve is None):
            raise ValueError("provide exactly one of pattern or curve")
        if (self.tolerance_fraction is None) != (self.price_per_kwh is None):
            raise ValueError("tolerance_fraction and price_per_kwh go together")
        return self

    def schedule(self, tau_s: int) -> DouLimitSchedule:
        return DouLimitSchedule(
            breakpoints=tuple((t, p) for t, p in self.breakpoints), tau_s=tau_s
        )


class DouEvaluationModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    segment_excess_wh: list[float]
    total_excess_wh: float
    area_under_limits_kwh: float
    tolerated_wh: float | None = None
    penalized_wh: float | None = None
    penalty_amount: float | None = None

    @classmethod
    def from_domain(cls, evaluation: DouEvaluation) -> "DouEvaluationModel":
        return cls(
            segment_excess_wh=list(evaluation.segment_excess_wh),
            total_excess_wh=evaluation.total_excess_wh,
            area_under_limits_kwh=evaluation.area_under_limits_kwh,
            tolerated_wh=evaluation.tolerated_wh,
            penalized_wh=evaluation.penalized_wh,
            penalty_amount=evaluation.penalty_amount,
        )


class DayProfileModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    day_index: int
    powers_w: list[float]
    is_event_day: bool = False

    @classmethod
    def from_domain(cls, day: DayProfile) -> "DayProfileModel":
        return cls(
            day_index=day.day_index,
            powers_w=list(day.powers_w),
            is_event_day=day.is_event_day,
        )

    def to_domain(self) -> DayProfile:
        return DayProfile(
            day_index=self.day_index,
            powers_w=tuple(self.powers_w),
            is_event_day=self.is_event_day,
        )


class HistoryModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    interval_s: int
    days: list[DayProfileModel]

    @classmethod
    def from_domain(cls, history: DailyProfileSet) -> "HistoryModel":
        return cls(
            interval_s=history.interval_s,
            days=[DayProfileModel.from_domain(d) for d in history.days],
        )

    def to_domain(self) -> DailyProfileSet:
        return DailyProfileSet(
            interval_s=self.interval_s,
            days=tuple(d.to_domain() for d in self.days),
        )


class BaselineRequest(BaseModel):
    model_config = ConfigDict(frozen=True)

    history: HistoryModel
    mode: Literal["high", "low", "mid"]
    x: int
    y: int
    event_day_index: int
    calibration_window_s: int = 7200
    observed: PatternModel | None = None
    notification_t_s: int | None = None

    @model_validator(mode="after")
    def _adjustment_inputs_together(self):
        if (self.observed is None) != (self.notification_t_s is None):
            raise ValueError("observed and notification_t_s go together")
        return self

    def to_config(self) -> BaselineConfig:
        return BaselineConfig(
            mode=BaselineMode(self.mode),
            x=self.x,
            y=self.y,
            calibration_window_s=self.calibration_window_s,
        )


class HealthResponse(BaseModel):
    model_config = ConfigDict(frozen=True)

    status: str
    version: str
