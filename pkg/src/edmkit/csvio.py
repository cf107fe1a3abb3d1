"""CSV interchange for every artifact the toolkit produces or consumes.

All files share the same dialect: comma separator, `.` decimal point, `\\n`
line endings, one exact header row.  Floats are written in shortest
round-trip decimal form, so write→read is bit-exact.
"""

from __future__ import annotations

import math
from pathlib import Path

from .baseline import DailyProfileSet, DayProfile
from .dou import DouEvaluation, DouLimitSchedule, DurationCurve
from .edm import MeterEvent, decode_triggers, encode_triggers
from .errors import DataError, FormatError
from .metrics import ComparisonReport
from .model import DemandPattern, IntervalSeries

PATTERN_HEADER = "t_s,p_w"
EVENTS_HEADER = "t_end_s,energy_ws,triggers"
INTERVALS_HEADER = "t_end_s,energy_ws,partial"
DURATION_HEADER = "rank_s,p_w"
LIMITS_HEADER = "t_end_s,p_w"
REPORT_HEADER = "label,points,peak_w,peak_pct,rms_w,loss_pct"
EVALUATION_HEADER = "segment_end_s,limit_w,excess_wh"
HISTORY_HEADER = "day_index,interval_index,p_w,is_event_day"


def _fmt(value: float) -> str:
    return repr(float(value))


def _write_lines(path, lines: list[str]) -> None:
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")


def read_header(path) -> str:
    """First line of a file; lets callers dispatch on the CSV kind."""
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.readline().rstrip("\n")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc


def _read_rows(path, header: str):
    """Yield (line_no, cells) per data row after validating the header."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("file is empty", path=str(path), line_no=1)
    if lines[0] != header:
        raise FormatError(
            f"expected header {header!r}, got {lines[0]!r}", path=str(path), line_no=1
        )
    ncols = header.count(",") + 1
    rows = []
    for line_no, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != ncols:
            raise FormatError(
                f"expected {ncols} columns, got {len(cells)}", path=str(path), line_no=line_no
            )
        rows.append((line_no, cells))
    if not rows:
        raise FormatError("no data rows", path=str(path), line_no=2)
    return rows


def _parse_int(cell: str, what: str, path, line_no: int) -> int:
    try:
        return int(cell)
    except ValueError:
        raise FormatError(f"{what}: not an integer: {cell!r}", path=str(path), line_no=line_no)


def _parse_float(cell: str, what: str, path, line_no: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise FormatError(f"{what}: not a number: {cell!r}", path=str(path), line_no=line_no)
    if not math.isfinite(value):
        raise FormatError(f"{what}: not finite: {cell!r}", path=str(path), line_no=line_no)
    return value


def _parse_flag(cell: str, what: str, path, line_no: int) -> bool:
    if cell not in ("0", "1"):
        raise FormatError(f"{what}: expected 0 or 1, got {cell!r}", path=str(path), line_no=line_no)
    return cell == "1"


# -- demand patterns ---------------------------------------------------------

def write_pattern_csv(pattern: DemandPattern, path) -> None:
    lines = [PATTERN_HEADER]
    t = pattern.start_s
    for p in pattern.powers_w:
        lines.append(f"{t},{_fmt(p)}")
        t += pattern.tau_s
    _write_lines(path, lines)


def read_pattern_csv(path, tau_s: int | None = None) -> DemandPattern:
    """Read a pattern; the interval is inferred from row spacing unless given."""
    rows = _read_rows(path, PATTERN_HEADER)
    times: list[int] = []
    powers: list[float] = []
    for line_no, (t_cell, p_cell) in rows:
        times.append(_parse_int(t_cell, "t_s", path, line_no))
        powers.append(_parse_float(p_cell, "p_w", path, line_no))

    if len(times) >= 2:
        inferred = times[1] - times[0]
        if inferred <= 0:
            raise FormatError("t_s must be strictly increasing", path=str(path), line_no=rows[1][0])
        if tau_s is not None and tau_s != inferred:
            raise FormatError(
                f"row spacing is {inferred} s but tau {tau_s} s was requested",
                path=str(path),
                line_no=rows[1][0],
            )
        tau_s = inferred
    elif tau_s is None:
        raise FormatError(
            "single-row pattern: the elementary interval cannot be inferred, pass tau_s",
            path=str(path),
            line_no=rows[0][0],
        )

    for k in range(1, len(times)):
        if times[k] - times[k - 1] != tau_s:
            raise FormatError(
                f"t_s must advance by {tau_s} s per row", path=str(path), line_no=rows[k][0]
            )
    return DemandPattern(tau_s=tau_s, powers_w=tuple(powers), start_s=times[0])


# -- event streams -----------------------------------------------------------

def write_events_csv(events, path) -> None:
    """Write meter events; accepts any iterable of events (or a stream's .events)."""
    events = getattr(events, "events", events)
    lines = [EVENTS_HEADER]
    for ev in events:
        lines.append(f"{ev.t_end_s},{_fmt(ev.energy_ws)},{encode_triggers(ev.triggers)}")
    _write_lines(path, lines)


def read_events_csv(path) -> tuple[MeterEvent, ...]:
    rows = _read_rows(path, EVENTS_HEADER)
    events: list[MeterEvent] = []
    prev_t = None
    for line_no, (t_cell, e_cell, trig_cell) in rows:
        t_end = _parse_int(t_cell, "t_end_s", path, line_no)
        energy = _parse_float(e_cell, "energy_ws", path, line_no)
        try:
            triggers = decode_triggers(trig_cell)
            events.append(MeterEvent(t_end_s=t_end, energy_ws=energy, triggers=triggers))
        except Exception as exc:
            raise FormatError(str(exc), path=str(path), line_no=line_no) from exc
        if prev_t is not None and t_end <= prev_t:
            raise FormatError(
                "t_end_s must be strictly increasing", path=str(path), line_no=line_no
            )
        prev_t = t_end
    return tuple(events)


# -- interval series ---------------------------------------------------------

def write_intervals_csv(series: IntervalSeries, path) -> None:
    lines = [INTERVALS_HEADER]
    t = series.start_s
    n_full = series.full_step_count
    for j, energy in enumerate(series.energies_ws):
        t += series.step_s if j < n_full else series.partial_tail_s
        flag = 0 if j < n_full else 1
        lines.append(f"{t},{_fmt(energy)},{flag}")
    _write_lines(path, lines)


def read_intervals_csv(path, step_s: int | None = None, start_s: int = 0) -> IntervalSeries:
    """Read fixed-step readings; the step is inferred from the first full row
    unless given explicitly."""
    rows = _read_rows(path, INTERVALS_HEADER)
    parsed = []
    for line_no, (t_cell, e_cell, f_cell) in rows:
        parsed.append(
            (
                line_no,
                _parse_int(t_cell, "t_end_s", path, line_no),
                _parse_float(e_cell, "energy_ws", path, line_no),
                _parse_flag(f_cell, "partial", path, line_no),
            )
        )

    for line_no, _, _, partial in parsed[:-1]:
        if partial:
            raise FormatError(
                "only the last row may be partial", path=str(path), line_no=line_no
            )

    if step_s is None:
        if parsed[0][3]:
            raise FormatError(
                "single partial row: the step cannot be inferred, pass step_s",
                path=str(path),
                line_no=parsed[0][0],
            )
        step_s = parsed[0][1] - start_s
        if step_s <= 0:
            raise FormatError(
                f"first t_end_s must exceed start ({start_s})",
                path=str(path),
                line_no=parsed[0][0],
            )

    energies = []
    partial_tail_s = None
    for j, (line_no, t_end, energy, partial) in enumerate(parsed):
        if partial:
            tail = t_end - (start_s + j * step_s)
            if not (0 < tail < step_s):
                raise FormatError(
                    f"partial row must end inside the final step, got t_end_s={t_end}",
                    path=str(path),
                    line_no=line_no,
                )
            partial_tail_s = tail
        elif t_end != start_s + (j + 1) * step_s:
            raise FormatError(
                f"expected t_end_s={start_s + (j + 1) * step_s} for step {step_s} s, got {t_end}",
                path=str(path),
                line_no=line_no,
            )
        energies.append(energy)
    return IntervalSeries(
        step_s=step_s,
        energies_ws=tuple(energies),
        start_s=start_s,
        partial_tail_s=partial_tail_s,
    )


# -- duration curves ---------------------------------------------------------

def write_duration_csv(curve: DurationCurve, path) -> None:
    lines = [DURATION_HEADER]
    for i, p in enumerate(curve.powers_w):
        lines.append(f"{(i + 1) * curve.tau_s},{_fmt(p)}")
    _write_lines(path, lines)


def read_duration_csv(path) -> DurationCurve:
    rows = _read_rows(path, DURATION_HEADER)
    first_rank = _parse_int(rows[0][1][0], "rank_s", path, rows[0][0])
    if first_rank <= 0:
        raise FormatError("rank_s must start at one interval", path=str(path), line_no=rows[0][0])
    tau_s = first_rank
    powers = []
    for i, (line_no, (r_cell, p_cell)) in enumerate(rows):
        rank = _parse_int(r_cell, "rank_s", path, line_no)
        if rank != (i + 1) * tau_s:
            raise FormatError(
                f"expected rank_s={(i + 1) * tau_s}, got {rank}", path=str(path), line_no=line_no
            )
        powers.append(_parse_float(p_cell, "p_w", path, line_no))
    return DurationCurve(tau_s=tau_s, powers_w=tuple(powers))


# -- DoU limits and evaluations ----------------------------------------------

def write_limits_csv(schedule: DouLimitSchedule, path) -> None:
    lines = [LIMITS_HEADER]
    for t_end, p in schedule.breakpoints:
        lines.append(f"{t_end},{_fmt(p)}")
    _write_lines(path, lines)


def read_limits_csv(path, tau_s: int = 1) -> DouLimitSchedule:
    rows = _read_rows(path, LIMITS_HEADER)
    points = []
    for line_no, (t_cell, p_cell) in rows:
        points.append(
            (
                _parse_int(t_cell, "t_end_s", path, line_no),
                _parse_float(p_cell, "p_w", path, line_no),
            )
        )
    return DouLimitSchedule(breakpoints=tuple(points), tau_s=tau_s)


def write_evaluation_csv(evaluation: DouEvaluation, schedule: DouLimitSchedule, path) -> None:
    """Per-segment rows plus a `total` summary row carrying the area under the
    limits (kWh) and the total excess (Wh)."""
    lines = [EVALUATION_HEADER]
    for (t_start, t_end, limit), excess_wh in zip(
        schedule.segments(), evaluation.segment_excess_wh
    ):
        lines.append(f"{t_end},{_fmt(limit)},{_fmt(excess_wh)}")
    lines.append(
        f"total,{_fmt(evaluation.area_under_limits_kwh)},{_fmt(evaluation.total_excess_wh)}"
    )
    _write_lines(path, lines)


# -- comparison reports ------------------------------------------------------

def write_report_csv(reports, path) -> None:
    """Comparison table rows; per-cent columns carry one decimal."""
    lines = [REPORT_HEADER]
    for r in reports:
        lines.append(
            f"{r.label},{r.point_count},{_fmt(r.peak_w)},{100.0 * r.peak_ratio:.1f},"
            f"{_fmt(r.rms_distance_w)},{100.0 * r.loss_ratio:.1f}"
        )
    _write_lines(path, lines)


def read_report_csv(path) -> tuple[ComparisonReport, ...]:
    rows = _read_rows(path, REPORT_HEADER)
    reports = []
    for line_no, cells in rows:
        label, points, peak_w, peak_pct, rms_w, loss_pct = cells
        reports.append(
            ComparisonReport(
                label=label,
                point_count=_parse_int(points, "points", path, line_no),
                peak_w=_parse_float(peak_w, "peak_w", path, line_no),
                peak_ratio=_parse_float(peak_pct, "peak_pct", path, line_no) / 100.0,
                rms_distance_w=_parse_float(rms_w, "rms_w", path, line_no),
                loss_ratio=_parse_float(loss_pct, "loss_pct", path, line_no) / 100.0,
            )
        )
    return tuple(reports)


# -- baseline history --------------------------------------------------------

def write_history_csv(history: DailyProfileSet, path) -> None:
    lines = [HISTORY_HEADER]
    for day in history.days:
        flag = 1 if day.is_event_day else 0
        for k, p in enumerate(day.powers_w):
            lines.append(f"{day.day_index},{k},{_fmt(p)},{flag}")
    _write_lines(path, lines)


def read_history_csv(path, interval_s: int) -> DailyProfileSet:
    """Rows must be grouped by day, each day's intervals in order from 0."""
    rows = _read_rows(path, HISTORY_HEADER)
    days: list[DayProfile] = []
    current: list[float] = []
    current_day = None
    current_flag = False

    def close_day(line_no):
        days.append(
            DayProfile(day_index=current_day, powers_w=tuple(current), is_event_day=current_flag)
        )

    for line_no, (d_cell, i_cell, p_cell, f_cell) in rows:
        day_index = _parse_int(d_cell, "day_index", path, line_no)
        interval_index = _parse_int(i_cell, "interval_index", path, line_no)
        p = _parse_float(p_cell, "p_w", path, line_no)
        flag = _parse_flag(f_cell, "is_event_day", path, line_no)

        if day_index != current_day:
            if current_day is not None:
                close_day(line_no)
            current_day = day_index
            current = []
            current_flag = flag
        elif flag != current_flag:
            raise FormatError(
                f"is_event_day changes within day {day_index}", path=str(path), line_no=line_no
            )
        if interval_index != len(current):
            raise FormatError(
                f"expected interval_index {len(current)} in day {day_index},"
                f" got {interval_index}",
                path=str(path),
                line_no=line_no,
            )
        current.append(p)
    close_day(None)
    return DailyProfileSet(interval_s=interval_s, days=tuple(days))
