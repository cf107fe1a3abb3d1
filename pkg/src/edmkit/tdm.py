"""Timer-driven metering: fixed-step energy aggregation of a demand pattern."""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .model import DemandPattern, IntervalSeries


def sample_tdm(pattern: DemandPattern, step_s: int) -> IntervalSeries:
    """Aggregate a pattern into fixed-step energy readings.

    A horizon that is not a whole number of steps ends with a partial step
    flagged with its true duration.
    """
    if int(step_s) != step_s or step_s <= 0:
        raise ConfigError(f"step must be a positive integer, got {step_s}")
    step_s = int(step_s)
    if step_s % pattern.tau_s != 0:
        raise ConfigError(
            f"step ({step_s} s) must be a multiple of the elementary interval ({pattern.tau_s} s)"
        )

    tau = pattern.tau_s
    per_step = step_s // tau
    energies = np.asarray(pattern.powers_w, dtype=np.float64) * float(tau)
    n_full = len(energies) // per_step
    full = energies[: n_full * per_step].reshape(n_full, per_step).sum(axis=1)

    tail = energies[n_full * per_step :]
    partial_tail_s = None
    out = full
    if tail.size:
        out = np.concatenate([full, [tail.sum()]])
        partial_tail_s = tail.size * tau

    return IntervalSeries(
        step_s=step_s,
        energies_ws=tuple(float(e) for e in out),
        start_s=pattern.start_s,
        partial_tail_s=partial_tail_s,
    )


def average_powers(series: IntervalSeries) -> DemandPattern:
    """Per-step average power on the step grid.

    A partial tail is divided by its true duration, so its sample is a
    correct average even though the output grid nominally allots it a full
    step.  Peak statistics that must not be biased by the tail should
    consult ``series.partial_tail_s`` and drop the last sample.
    """
    powers = [e / series.step_s for e in series.energies_ws]
    if series.partial_tail_s is not None:
        powers[-1] = series.energies_ws[-1] / series.partial_tail_s
    return DemandPattern(tau_s=series.step_s, powers_w=tuple(powers), start_s=series.start_s)
