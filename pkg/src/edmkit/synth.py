"""Seeded synthetic demand patterns.

A pattern is a constant base load, uniform noise, and a set of appliance
pulses superimposed on the elementary grid.  Pulses are rectangular by
default; a ramp variant rises linearly to full power over its duration so
slow accumulated drifts occur alongside sharp steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import DataError, DomainError, FormatError
from .model import DemandPattern


class PulseShape(Enum):
    RECT = "rect"
    RAMP = "ramp"


@dataclass(frozen=True)
class Pulse:
    """One appliance run: tau-aligned start and duration, non-negative power."""

    start_s: int
    duration_s: int
    power_w: float
    shape: PulseShape = PulseShape.RECT

    def __post_init__(self):
        if int(self.start_s) != self.start_s or self.start_s < 0:
            raise DomainError(f"pulse start must be a non-negative integer, got {self.start_s}")
        if int(self.duration_s) != self.duration_s or self.duration_s <= 0:
            raise DomainError(f"pulse duration must be a positive integer, got {self.duration_s}")
        object.__setattr__(self, "start_s", int(self.start_s))
        object.__setattr__(self, "duration_s", int(self.duration_s))
        if not math.isfinite(self.power_w) or self.power_w < 0.0:
            raise DomainError(f"pulse power must be finite and >= 0, got {self.power_w}")

    @property
    def end_s(self) -> int:
        return self.start_s + self.duration_s


@dataclass(frozen=True)
class LoadSpec:
    """Everything :func:`generate` needs; identical specs give identical patterns."""

    horizon_s: int
    tau_s: int
    base_w: float
    pulses: tuple[Pulse, ...] = ()
    noise_w: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if int(self.tau_s) != self.tau_s or self.tau_s <= 0:
            raise DomainError(f"elementary interval must be a positive integer, got {self.tau_s}")
        object.__setattr__(self, "tau_s", int(self.tau_s))
        if int(self.horizon_s) != self.horizon_s or self.horizon_s <= 0:
            raise DomainError(f"horizon must be a positive integer, got {self.horizon_s}")
        object.__setattr__(self, "horizon_s", int(self.horizon_s))
        if self.horizon_s % self.tau_s != 0:
            raise DomainError(
                f"horizon ({self.horizon_s} s) must be a multiple of tau ({self.tau_s} s)"
            )
        if not math.isfinite(self.base_w) or self.base_w < 0.0:
            raise DomainError(f"base power must be finite and >= 0, got {self.base_w}")
        if not math.isfinite(self.noise_w) or self.noise_w < 0.0:
            raise DomainError(f"noise half-amplitude must be finite and >= 0, got {self.noise_w}")
        if self.base_w - self.noise_w < 0.0:
            raise DomainError(
                f"noise ({self.noise_w} W) may not exceed the base load ({self.base_w} W),"
                " samples would go negative"
            )
        pulses = tuple(self.pulses)
        for pulse in pulses:
            if pulse.start_s % self.tau_s or pulse.duration_s % self.tau_s:
                raise DomainError(
                    f"pulse at t={pulse.start_s} is not aligned to tau ({self.tau_s} s)"
                )
            if pulse.end_s > self.horizon_s:
                raise DomainError(
                    f"pulse at t={pulse.start_s} runs to {pulse.end_s} s,"
                    f" past the horizon ({self.horizon_s} s)"
                )
        object.__setattr__(self, "pulses", pulses)
        if int(self.seed) != self.seed or not (0 <= self.seed < 2**64):
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        object.__setattr__(self, "seed", int(self.seed))


def generate(spec: LoadSpec) -> DemandPattern:
    """Deterministic synthesis: base + pulses + uniform noise in [-noise_w, +noise_w]."""
    n = spec.horizon_s // spec.tau_s
    contributions = np.zeros(n)
    for pulse in spec.pulses:
        lo = pulse.start_s // spec.tau_s
        m = pulse.duration_s // spec.tau_s
        if pulse.shape is PulseShape.RAMP:
            contributions[lo : lo + m] += pulse.power_w * np.arange(1, m + 1) / m
        else:
            contributions[lo : lo + m] += pulse.power_w

    rng = np.random.default_rng(spec.seed)
    noise = rng.uniform(-spec.noise_w, spec.noise_w, size=n)
    powers = spec.base_w + contributions + noise
    if not np.all(np.isfinite(powers)):
        raise DomainError("pulse superposition produced non-finite samples")
    return DemandPattern(tau_s=spec.tau_s, powers_w=tuple(float(p) for p in powers))


def reference_day(seed: int) -> DemandPattern:
    """One synthetic day at 1 s resolution: a small base load, a handful of
    second-scale high-power spikes, two sustained near-peak bursts, several
    minute-scale appliance runs, and one long low-power run.

    Total energy lands in the 5-10 kWh band for every seed.
    """
    horizon = 86400
    param_seq, noise_seq = np.random.SeedSequence(seed).spawn(2)
    rng = np.random.default_rng(param_seq)

    pulses: list[Pulse] = []
    for _ in range(8):
        pulses.append(
            Pulse(
                start_s=0,
                duration_s=int(rng.integers(1, 6)),
                power_w=float(rng.uniform(3000.0, 3600.0)),
            )
        )
    for _ in range(2):
        pulses.append(
            Pulse(
                start_s=0,
                duration_s=int(rng.integers(30, 61)),
                power_w=float(rng.uniform(3800.0, 4000.0)),
            )
        )
    for i in range(10):
        energy_ws = float(rng.uniform(200.0, 400.0)) * 3600.0
        power = float(rng.uniform(500.0, 1500.0))
        shape = PulseShape.RAMP if i < 3 else PulseShape.RECT
        scale = 2.0 if shape is PulseShape.RAMP else 1.0
        pulses.append(
            Pulse(
                start_s=0,
                duration_s=max(1, int(round(scale * energy_ws / power))),
                power_w=power,
                shape=shape,
            )
        )
    # small appliances whose edges sit between common change-of-value
    # thresholds, so sensitivity settings remain distinguishable
    for _ in range(6):
        energy_ws = float(rng.uniform(50.0, 150.0)) * 3600.0
        power = float(rng.uniform(150.0, 450.0))
        pulses.append(
            Pulse(start_s=0, duration_s=max(1, int(round(energy_ws / power))), power_w=power)
        )
    long_energy_ws = float(rng.uniform(1.8, 2.6)) * 3_600_000.0
    long_power = float(rng.uniform(600.0, 900.0))
    pulses.append(
        Pulse(start_s=0, duration_s=int(round(long_energy_ws / long_power)), power_w=long_power)
    )

    # spread the pulses over the day: shuffled order, random gaps filling the slack
    order = rng.permutation(len(pulses))
    total_duration = sum(p.duration_s for p in pulses)
    slack = horizon - total_duration
    weights = rng.random(len(pulses) + 1)
    gaps = np.floor(weights / weights.sum() * slack).astype(int)

    placed: list[Pulse] = []
    t = 0
    for gap, idx in zip(gaps, order):
        t += int(gap)
        p = pulses[int(idx)]
        placed.append(Pulse(start_s=t, duration_s=p.duration_s, power_w=p.power_w, shape=p.shape))
        t += p.duration_s

    spec = LoadSpec(
        horizon_s=horizon,
        tau_s=1,
        base_w=60.0,
        pulses=tuple(placed),
        noise_w=5.0,
        seed=int(noise_seq.generate_state(1, np.uint64)[0]),
    )
    return generate(spec)


# -- LoadSpec file format ----------------------------------------------------
#
#   [base]                  [noise]            [pulses]
#   horizon = 86400         amplitude = 5.0    pulse = 10,5,1000
#   tau = 1                 [seed]             pulse = 600,120,800,ramp
#   power = 60.0            value = 42

_SECTIONS = {"base", "noise", "seed", "pulses"}


def _spec_error(msg: str, path, line_no: int) -> FormatError:
    return FormatError(msg, path=str(path), line_no=line_no)


def parse_load_spec_file(path, seed_override: int | None = None) -> LoadSpec:
    """Parse the sectioned key-value spec format; ``seed_override`` wins over
    any seed in the file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc

    values: dict[str, str] = {}
    value_lines: dict[str, int] = {}
    pulse_rows: list[tuple[int, str]] = []
    section = None
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _SECTIONS:
                raise _spec_error(f"unknown section [{section}]", path, line_no)
            continue
        if section is None:
            raise _spec_error("entries must appear inside a section", path, line_no)
        if "=" not in line:
            raise _spec_error(f"expected key = value, got {line!r}", path, line_no)
        key, _, value = (part.strip() for part in line.partition("="))
        if section == "pulses":
            if key != "pulse":
                raise _spec_error(f"unknown key {key!r} in [pulses]", path, line_no)
            pulse_rows.append((line_no, value))
            continue
        qualified = f"{section}.{key}"
        if qualified in values:
            raise _spec_error(f"duplicate key {key!r} in [{section}]", path, line_no)
        values[qualified] = value
        value_lines[qualified] = line_no

    known = {"base.horizon", "base.tau", "base.power", "noise.amplitude", "seed.value"}
    for qualified in values:
        if qualified not in known:
            section, key = qualified.split(".", 1)
            raise _spec_error(
                f"unknown key {key!r} in [{section}]", path, value_lines[qualified]
            )

    def require(qualified: str) -> str:
        if qualified not in values:
            section, key = qualified.split(".", 1)
            raise FormatError(f"missing required key {key!r} in [{section}]", path=str(path))
        return values[qualified]

    def as_int(qualified: str, text_value: str) -> int:
        try:
            return int(text_value)
        except ValueError:
            raise _spec_error(
                f"{qualified.split('.', 1)[1]}: not an integer: {text_value!r}",
                path,
                value_lines[qualified],
            )

    def as_float(qualified: str, text_value: str) -> float:
        try:
            return float(text_value)
        except ValueError:
            raise _spec_error(
                f"{qualified.split('.', 1)[1]}: not a number: {text_value!r}",
                path,
                value_lines[qualified],
            )

    horizon = as_int("base.horizon", require("base.horizon"))
    tau = as_int("base.tau", require("base.tau"))
    base = as_float("base.power", require("base.power"))
    noise = as_float("noise.amplitude", values.get("noise.amplitude", "0"))
    seed = as_int("seed.value", values.get("seed.value", "0"))
    if seed_override is not None:
        seed = seed_override

    pulses: list[Pulse] = []
    for line_no, value in pulse_rows:
        parts = [part.strip() for part in value.split(",")]
        if len(parts) not in (3, 4):
            raise _spec_error(
                f"pulse needs start,duration,power[,ramp], got {value!r}", path, line_no
            )
        shape = PulseShape.RECT
        if len(parts) == 4:
            if parts[3] not in ("ramp", "rect"):
                raise _spec_error(f"unknown pulse shape {parts[3]!r}", path, line_no)
            shape = PulseShape(parts[3])
        try:
            pulses.append(
                Pulse(
                    start_s=int(parts[0]),
                    duration_s=int(parts[1]),
                    power_w=float(parts[2]),
                    shape=shape,
                )
            )
        except (ValueError, DomainError) as exc:
            raise _spec_error(f"bad pulse entry: {exc}", path, line_no) from exc

    try:
        return LoadSpec(
            horizon_s=horizon,
            tau_s=tau,
            base_w=base,
            pulses=tuple(pulses),
            noise_w=noise,
            seed=seed,
        )
    except DomainError as exc:
        raise FormatError(str(exc), path=str(path)) from exc


def write_load_spec_file(spec: LoadSpec, path) -> None:
    lines = [
        "[base]",
        f"horizon = {spec.horizon_s}",
        f"tau = {spec.tau_s}",
        f"power = {spec.base_w!r}",
        "",
        "[noise]",
        f"amplitude = {spec.noise_w!r}",
        "",
        "[seed]",
        f"value = {spec.seed}",
        "",
        "[pulses]",
    ]
    for pulse in spec.pulses:
        entry = f"pulse = {pulse.start_s},{pulse.duration_s},{pulse.power_w!r}"
        if pulse.shape is PulseShape.RAMP:
            entry += ",ramp"
        lines.append(entry)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")
