"""Pattern reconstruction and comparison metrics.

Reconstruction expands event streams or interval series back to elementary
resolution, representing each segment by its constant average power.  The
metrics quantify how much of the original pattern survives: point count,
peak tracking, RMS deviation, and resistive line-loss estimation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .edm import EdmConfig, EventStream, run_edm
from .errors import DomainError
from .model import DemandPattern, IntervalSeries
from .tdm import average_powers, sample_tdm
from .units import EnergyQuantity, EnergyUnit


@dataclass(frozen=True)
class LineModel:
    """Single-phase resistive feeder at constant nominal voltage.

    Defaults model 50 m of 0.0058 ohm/m conductor, out and back, at 230 V.
    """

    resistance_ohm: float = 0.58
    voltage_v: float = 230.0

    def __post_init__(self):
        if not (self.resistance_ohm > 0.0 and np.isfinite(self.resistance_ohm)):
            raise DomainError(f"resistance must be > 0, got {self.resistance_ohm}")
        if not (self.voltage_v > 0.0 and np.isfinite(self.voltage_v)):
            raise DomainError(f"voltage must be > 0, got {self.voltage_v}")


@dataclass(frozen=True)
class ComparisonReport:
    """One row of the comparison table: how a representation tracks the source."""

    label: str
    point_count: int
    peak_w: float
    peak_ratio: float
    rms_distance_w: float
    loss_ratio: float


def reconstruct_from_events(stream: EventStream) -> DemandPattern:
    """Piecewise-constant pattern: each inter-event segment carries its average power."""
    tau = stream.config.tau_s
    powers: list[float] = []
    prev_t = stream.start_s
    for ev in stream.events:
        duration = ev.t_end_s - prev_t
        p = ev.energy_ws / duration
        powers.extend([p] * (duration // tau))
        prev_t = ev.t_end_s
    return DemandPattern(tau_s=tau, powers_w=tuple(powers), start_s=stream.start_s)


def reconstruct_from_intervals(series: IntervalSeries, tau_s: int) -> DemandPattern:
    """Expand fixed-step readings to the elementary grid.

    The trailing partial step, when present, is averaged over its true
    duration, so the expansion conserves energy exactly.
    """
    if int(tau_s) != tau_s or tau_s <= 0:
        raise DomainError(f"tau must be a positive integer, got {tau_s}")
    tau_s = int(tau_s)
    if series.step_s % tau_s != 0:
        raise DomainError(f"step ({series.step_s} s) is not a multiple of tau ({tau_s} s)")
    if series.partial_tail_s is not None and series.partial_tail_s % tau_s != 0:
        raise DomainError(
            f"partial tail ({series.partial_tail_s} s) is not a multiple of tau ({tau_s} s)"
        )

    per_step = series.step_s // tau_s
    powers: list[float] = []
    energies = series.energies_ws
    n_full = series.full_step_count
    for e in energies[:n_full]:
        powers.extend([e / series.step_s] * per_step)
    if series.partial_tail_s is not None:
        p = energies[-1] / series.partial_tail_s
        powers.extend([p] * (series.partial_tail_s // tau_s))
    return DemandPattern(tau_s=tau_s, powers_w=tuple(powers), start_s=series.start_s)


def peak(pattern: DemandPattern) -> float:
    return float(max(pattern.powers_w))


def _check_same_shape(a: DemandPattern, b: DemandPattern) -> None:
    if a.tau_s != b.tau_s or len(a) != len(b):
        raise DomainError(
            f"patterns differ in shape: {len(a)} samples at tau {a.tau_s} s"
            f" vs {len(b)} samples at tau {b.tau_s} s"
        )


def rms_distance(a: DemandPattern, b: DemandPattern) -> float:
    """Root-mean-square deviation between two equal-shape patterns, in watts."""
    _check_same_shape(a, b)
    da = np.asarray(a.powers_w) - np.asarray(b.powers_w)
    return float(np.sqrt(np.mean(da * da)))


def loss_energy(pattern: DemandPattern, line: LineModel) -> EnergyQuantity:
    """Conductor loss energy: sum of (p/V)^2 * R * tau, returned in Wh."""
    i = np.asarray(pattern.powers_w) / line.voltage_v
    loss_ws = float(np.sum(i * i) * line.resistance_ohm * pattern.tau_s)
    return EnergyQuantity.from_ws(loss_ws).to(EnergyUnit.WATT_HOUR)


def loss_ratio(reconstructed: DemandPattern, reference: DemandPattern) -> float:
    """Estimated over reference losses; line resistance and voltage cancel."""
    _check_same_shape(reconstructed, reference)
    r = np.asarray(reference.powers_w)
    denom = float(np.sum(r * r))
    if denom == 0.0:
        raise DomainError("loss ratio undefined: reference pattern has zero losses")
    rr = np.asarray(reconstructed.powers_w)
    return float(np.sum(rr * rr)) / denom


def _edm_label(config: EdmConfig) -> str:
    return f"EDM {config.delta1_w:g}:{config.delta2_ws:g}"


def compare(
    pattern: DemandPattern,
    tdm_steps: list[int],
    edm_configs: list[EdmConfig],
    line: LineModel = LineModel(),
) -> list[ComparisonReport]:
    """One report per representation, TDM rows first, all against ``pattern``.

    Peak statistics for TDM exclude a trailing partial step so a short tail
    cannot masquerade as a peak; RMS and losses use the full reconstruction.
    """
    ref_peak = peak(pattern)
    ref_loss = loss_energy(pattern, line).ws
    if ref_loss == 0.0:
        raise DomainError("comparison undefined: reference pattern has zero losses")

    reports: list[ComparisonReport] = []
    for step in tdm_steps:
        series = sample_tdm(pattern, step)
        recon = reconstruct_from_intervals(series, pattern.tau_s)
        averages = average_powers(series).powers_w
        if series.partial_tail_s is not None and len(averages) > 1:
            peak_w = float(max(averages[:-1]))
        else:
            peak_w = float(max(averages))
        reports.append(
            ComparisonReport(
                label=f"TDM {series.step_s} s",
                point_count=len(series.energies_ws),
                peak_w=peak_w,
                peak_ratio=peak_w / ref_peak,
                rms_distance_w=rms_distance(recon, pattern),
                loss_ratio=loss_energy(recon, line).ws / ref_loss,
            )
        )

    for config in edm_configs:
        stream = run_edm(pattern, config)
        recon = reconstruct_from_events(stream)
        peak_w = peak(recon)
        reports.append(
            ComparisonReport(
                label=_edm_label(config),
                point_count=len(stream),
                peak_w=peak_w,
                peak_ratio=peak_w / ref_peak,
                rms_distance_w=rms_distance(recon, pattern),
                loss_ratio=loss_energy(recon, line).ws / ref_loss,
            )
        )
    return reports
