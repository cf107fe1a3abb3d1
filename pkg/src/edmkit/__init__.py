"""Event-driven energy metering toolkit.

Synthesis of demand patterns, event- and timer-driven metering, pattern
reconstruction with comparison metrics, Duration-of-Use tariff evaluation,
and demand-response baselines.
"""

from .baseline import (
    BaselineConfig,
    BaselineMode,
    DailyProfileSet,
    DayProfile,
    adjusted_baseline,
    initial_baseline,
)
from .dou import (
    DouEvaluation,
    DouLimitSchedule,
    DurationCurve,
    apply_penalty,
    area_under_limits,
    duration_curve,
    excess_energy,
    percent_to_absolute,
)
from .edm import (
    EdmConfig,
    EdmState,
    EventStream,
    MeterEvent,
    Trigger,
    decode_triggers,
    encode_triggers,
    init,
    no_event_envelope,
    run_edm,
    step,
)
from .errors import (
    ConfigError,
    DataError,
    DomainError,
    FormatError,
    MeteringError,
    StateError,
)
from .metrics import (
    ComparisonReport,
    LineModel,
    compare,
    loss_energy,
    loss_ratio,
    peak,
    reconstruct_from_events,
    reconstruct_from_intervals,
    rms_distance,
)
from .model import DemandPattern, IntervalSeries
from .synth import (
    LoadSpec,
    Pulse,
    PulseShape,
    generate,
    parse_load_spec_file,
    reference_day,
    write_load_spec_file,
)
from .tdm import average_powers, sample_tdm
from .units import WS_PER_KWH, WS_PER_WH, EnergyQuantity, EnergyUnit

__version__ = "0.1.0"

__all__ = [
    "BaselineConfig",
    "BaselineMode",
    "ComparisonReport",
    "ConfigError",
    "DailyProfileSet",
    "DataError",
    "DayProfile",
    "DemandPattern",
    "DomainError",
    "DouEvaluation",
    "DouLimitSchedule",
    "DurationCurve",
    "EdmConfig",
    "EdmState",
    "EnergyQuantity",
    "EnergyUnit",
    "EventStream",
    "FormatError",
    "IntervalSeries",
    "LineModel",
    "LoadSpec",
    "MeterEvent",
    "MeteringError",
    "Pulse",
    "PulseShape",
    "StateError",
    "Trigger",
    "WS_PER_KWH",
    "WS_PER_WH",
    "adjusted_baseline",
    "apply_penalty",
    "area_under_limits",
    "average_powers",
    "compare",
    "decode_triggers",
    "duration_curve",
    "encode_triggers",
    "excess_energy",
    "generate",
    "init",
    "initial_baseline",
    "loss_energy",
    "loss_ratio",
    "no_event_envelope",
    "parse_load_spec_file",
    "peak",
    "percent_to_absolute",
    "reconstruct_from_events",
    "reconstruct_from_intervals",
    "reference_day",
    "rms_distance",
    "run_edm",
    "sample_tdm",
    "step",
    "write_load_spec_file",
]
