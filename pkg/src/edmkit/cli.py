"""Command-line client for the metering service.

Every subcommand reads and writes CSV locally and delegates the computation
to the HTTP service.  By default an in-process instance of the service
handles the calls; ``--server`` points them at a running one instead.  Exit
codes: 0 success, 2 usage errors, 1 data or domain errors.
"""

from __future__ import annotations

import asyncio
import functools
import math
import sys

import click
import httpx

from . import csvio
from .dou import DouEvaluation, percent_to_absolute
from .errors import DataError, MeteringError
from .service.app import create_app
from .service.schemas import (
    BaselineRequest,
    CompareRequest,
    DouRequest,
    DurationCurveModel,
    DurationCurveRequest,
    EdmSettings,
    EventModel,
    EventStreamModel,
    HistoryModel,
    IntervalSeriesModel,
    LineSettings,
    LoadSpecModel,
    MeterRequest,
    PatternModel,
    ReconstructEventsRequest,
    ReconstructIntervalsRequest,
    ReportModel,
    SampleRequest,
)
from .synth import parse_load_spec_file


class ServiceClient:
    """POSTs request models to the service and returns response JSON."""

    def __init__(self, server: str | None):
        self.server = server

    def post(self, path: str, request) -> dict:
        payload = request.model_dump(mode="json")
        try:
            if self.server is None:
                response = asyncio.run(self._post_local(path, payload))
            else:
                with httpx.Client(base_url=self.server, timeout=300.0) as client:
                    response = client.post(path, json=payload)
        except httpx.HTTPError as exc:
            raise DataError(f"service request failed: {exc}") from exc
        if response.status_code == 200:
            return response.json()
        try:
            body = response.json()
        except ValueError:
            body = {}
        detail = body.get("detail", response.text)
        if isinstance(detail, list):
            parts = [str(item.get("msg", item)) for item in detail]
            detail = "; ".join(parts)
        name = body.get("error", f"HTTP {response.status_code}")
        raise DataError(f"{name}: {detail}")

    async def _post_local(self, path: str, payload: dict) -> httpx.Response:
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://edmkit.internal", timeout=300.0
        ) as client:
            return await client.post(path, json=payload)


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except MeteringError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


def _nonneg_float(ctx, param, value):
    if value is not None and (math.isnan(value) or value < 0.0):
        raise click.BadParameter("must be >= 0")
    return value


def _positive_int(ctx, param, value):
    if value is not None and value <= 0:
        raise click.BadParameter("must be a positive integer")
    return value


def _parse_step_list(ctx, param, value):
    if not value:
        return []
    steps = []
    for token in value.split(","):
        token = token.strip()
        try:
            step = int(token)
        except ValueError:
            raise click.BadParameter(f"step {token!r} is not an integer")
        if step <= 0:
            raise click.BadParameter(f"step {token!r} must be positive")
        steps.append(step)
    return steps


def _parse_edm_list(ctx, param, value):
    if not value:
        return []
    configs = []
    for token in value.split(","):
        token = token.strip()
        head, sep, tail = token.partition(":")
        if not sep:
            raise click.BadParameter(f"{token!r} is not of the form d1:d2 (W:Ws)")
        try:
            d1 = float(head)
            d2 = float(tail)
        except ValueError:
            raise click.BadParameter(f"{token!r} is not of the form d1:d2 (W:Ws)")
        if math.isnan(d1) or d1 < 0.0 or math.isnan(d2) or d2 < 0.0:
            raise click.BadParameter(f"{token!r}: thresholds must be >= 0")
        configs.append((d1, d2))
    return configs


def _wire_threshold(value):
    # disabled thresholds travel as null; JSON floats cannot carry inf
    if value is None or math.isinf(value):
        return None
    return value


def _read_pattern(path, tau_s):
    return csvio.read_pattern_csv(path, tau_s=tau_s)


@click.group()
@click.option(
    "--server",
    default=None,
    metavar="URL",
    help="Base URL of a running service; default is an in-process instance.",
)
@click.version_option()
@click.pass_context
def main(ctx, server):
    """Event-driven energy metering toolkit."""
    ctx.obj = ServiceClient(server)


@main.command()
@click.option("--spec", "spec_path", required=True, metavar="PATH", help="Load spec file.")
@click.option("--seed", type=int, default=None, help="Override the spec's RNG seed.")
@click.option("-o", "--out", required=True, metavar="PATH", help="Pattern CSV to write.")
@click.pass_obj
@_handle_errors
def synth(client: ServiceClient, spec_path, seed, out):
    """Generate a demand pattern from a load spec (header t_s,p_w)."""
    spec = parse_load_spec_file(spec_path, seed_override=seed)
    response = client.post("/synth/generate", LoadSpecModel.from_domain(spec))
    csvio.write_pattern_csv(PatternModel(**response).to_domain(), out)


@main.command()
@click.option("-i", "--input", "input_path", required=True, metavar="PATH", help="Pattern CSV.")
@click.option("--d1", type=float, default=None, callback=_nonneg_float,
              help="Change-of-value threshold in W; omit to disable.")
@click.option("--d2", type=float, default=None, callback=_nonneg_float,
              help="Accumulated-variation threshold in Ws; omit to disable.")
@click.option("--billing", type=int, default=None, callback=_positive_int,
              help="Billing period in s; default is the pattern horizon.")
@click.option("--tau", type=int, default=None, callback=_positive_int,
              help="Elementary interval in s when it cannot be inferred.")
@click.option("-o", "--out", required=True, metavar="PATH", help="Event CSV to write.")
@click.pass_obj
@_handle_errors
def meter(client: ServiceClient, input_path, d1, d2, billing, tau, out):
    """Run event-driven metering (header t_end_s,energy_ws,triggers)."""
    pattern = _read_pattern(input_path, tau)
    request = MeterRequest(
        pattern=PatternModel.from_domain(pattern),
        delta1_w=_wire_threshold(d1),
        delta2_ws=_wire_threshold(d2),
        billing_period_s=billing,
    )
    response = client.post("/meter", request)
    csvio.write_events_csv(EventStreamModel(**response).to_domain(), out)


@main.command()
@click.option("-i", "--input", "input_path", required=True, metavar="PATH", help="Pattern CSV.")
@click.option("--step", type=int, required=True, callback=_positive_int,
              help="Fixed metering step in s.")
@click.option("--tau", type=int, default=None, callback=_positive_int,
              help="Elementary interval in s when it cannot be inferred.")
@click.option("-o", "--out", required=True, metavar="PATH", help="Interval CSV to write.")
@click.pass_obj
@_handle_errors
def sample(client: ServiceClient, input_path, step, tau, out):
    """Run timer-driven metering (header t_end_s,energy_ws,partial)."""
    pattern = _read_pattern(input_path, tau)
    request = SampleRequest(pattern=PatternModel.from_domain(pattern), step_s=step)
    response = client.post("/sample", request)
    csvio.write_intervals_csv(IntervalSeriesModel(**response).to_domain(), out)


@main.command()
@click.option("-i", "--input", "input_path", required=True, metavar="PATH",
              help="Event CSV or interval CSV; the header decides.")
@click.option("--tau", type=int, default=1, callback=_positive_int, show_default=True,
              help="Elementary interval of the reconstruction in s.")
@click.option("--start", type=int, default=0, show_default=True,
              help="Stream start time in s.")
@click.option("-o", "--out", required=True, metavar="PATH", help="Pattern CSV to write.")
@click.pass_obj
@_handle_errors
def reconstruct(client: ServiceClient, input_path, tau, start, out):
    """Rebuild an elementary-resolution pattern from metering output."""
    header = csvio.read_header(input_path)
    if header == csvio.EVENTS_HEADER:
        events = csvio.read_events_csv(input_path)
        request = ReconstructEventsRequest(
            events=[EventModel.from_domain(e) for e in events], tau_s=tau, start_s=start
        )
        response = client.post("/reconstruct/events", request)
    elif header == csvio.INTERVALS_HEADER:
        series = csvio.read_intervals_csv(input_path, start_s=start)
        request = ReconstructIntervalsRequest(
            series=IntervalSeriesModel.from_domain(series), tau_s=tau
        )
        response = client.post("/reconstruct/intervals", request)
    else:
        raise DataError(
            f"{input_path}: header {header!r} is neither an event nor an interval CSV"
        )
    csvio.write_pattern_csv(PatternModel(**response).to_domain(), out)


@main.command()
@click.option("-i", "--input", "input_path", required=True, metavar="PATH", help="Pattern CSV.")
@click.option("--tdm", default="", callback=_parse_step_list, metavar="S1,S2,...",
              help="Comma-separated TDM steps in s.")
@click.option("--edm", default="", callback=_parse_edm_list, metavar="D1:D2,...",
              help="Comma-separated EDM configs, each d1:d2 in W:Ws.")
@click.option("--resistance", type=float, default=0.58, show_default=True,
              help="Line resistance in ohm for loss estimation.")
@click.option("--voltage", type=float, default=230.0, show_default=True,
              help="Nominal supply voltage in V.")
@click.option("--billing", type=int, default=None, callback=_positive_int,
              help="EDM billing period in s; default is the pattern horizon.")
@click.option("--tau", type=int, default=None, callback=_positive_int,
              help="Elementary interval in s when it cannot be inferred.")
@click.option("-o", "--out", required=True, metavar="PATH", help="Report CSV to write.")
@click.pass_obj
@_handle_errors
def compare(client: ServiceClient, input_path, tdm, edm, resistance, voltage, billing, tau, out):
    """Compare representations (header label,points,peak_w,peak_pct,rms_w,loss_pct)."""
    pattern = _read_pattern(input_path, tau)
    request = CompareRequest(
        pattern=PatternModel.from_domain(pattern),
        tdm_steps=tdm,
        edm_configs=[
            EdmSettings(delta1_w=_wire_threshold(d1), delta2_ws=_wire_threshold(d2))
            for d1, d2 in edm
        ],
        line=LineSettings(resistance_ohm=resistance, voltage_v=voltage),
        billing_period_s=billing,
    )
    response = client.post("/compare", request)
    reports = [ReportModel(**r).to_domain() for r in response["reports"]]
    csvio.write_report_csv(reports, out)


@main.command()
@click.option("-i", "--input", "input_path", required=True, metavar="PATH", help="Pattern CSV.")
@click.option("--tau", type=int, default=None, callback=_positive_int,
              help="Elementary interval in s when it cannot be inferred.")
@click.option("-o", "--out", required=True, metavar="PATH", help="Duration-curve CSV to write.")
@click.pass_obj
@_handle_errors
def duration(client: ServiceClient, input_path, tau, out):
    """Build the demand duration curve (header rank_s,p_w)."""
    pattern = _read_pattern(input_path, tau)
    request = DurationCurveRequest(pattern=PatternModel.from_domain(pattern))
    response = client.post("/duration-curve", request)
    csvio.write_duration_csv(DurationCurveModel(**response).to_domain(), out)


@main.command()
@click.option("-i", "--input", "input_path", required=True, metavar="PATH",
              help="Pattern CSV or duration-curve CSV; the header decides.")
@click.option("--limits", "limits_path", required=True, metavar="PATH",
              help="Limits CSV (header t_end_s,p_w).")
@click.option("--tolerance", type=float, default=None,
              help="Tolerated fraction of the area under limits, 0..1.")
@click.option("--price", type=float, default=None, callback=_nonneg_float,
              help="Penalty price per kWh of non-tolerated excess.")
@click.option("--percent-of", type=float, default=None,
              help="Treat limit powers as per-cent values of this reference power in W.")
@click.option("--tau", type=int, default=None, callback=_positive_int,
              help="Elementary interval in s when it cannot be inferred.")
@click.option("-o", "--out", required=True, metavar="PATH", help="Evaluation CSV to write.")
@click.pass_obj
@_handle_errors
def dou(client: ServiceClient, input_path, limits_path, tolerance, price, percent_of, tau, out):
    """Evaluate Duration-of-Use limits against a demand duration curve."""
    if (tolerance is None) != (price is None):
        raise click.UsageError("--tolerance and --price go together")
    header = csvio.read_header(input_path)
    if header == csvio.DURATION_HEADER:
        curve = csvio.read_duration_csv(input_path)
        source = {"curve": DurationCurveModel.from_domain(curve)}
        curve_tau = curve.tau_s
    else:
        pattern = _read_pattern(input_path, tau)
        source = {"pattern": PatternModel.from_domain(pattern)}
        curve_tau = pattern.tau_s

    schedule = csvio.read_limits_csv(limits_path, tau_s=curve_tau)
    if percent_of is not None:
        schedule = percent_to_absolute(schedule, percent_of)
    request = DouRequest(
        breakpoints=list(schedule.breakpoints),
        tolerance_fraction=tolerance,
        price_per_kwh=price,
        **source,
    )
    response = client.post("/dou", request)
    evaluation = DouEvaluation(
        segment_excess_wh=tuple(response["segment_excess_wh"]),
        total_excess_wh=response["total_excess_wh"],
        area_under_limits_kwh=response["area_under_limits_kwh"],
        tolerated_wh=response["tolerated_wh"],
        penalized_wh=response["penalized_wh"],
        penalty_amount=response["penalty_amount"],
    )
    csvio.write_evaluation_csv(evaluation, schedule, out)
    click.echo(f"area_under_limits_kwh={evaluation.area_under_limits_kwh!r}")
    click.echo(f"total_excess_wh={evaluation.total_excess_wh!r}")
    if evaluation.tolerated_wh is not None:
        click.echo(f"tolerated_wh={evaluation.tolerated_wh!r}")
        click.echo(f"penalized_wh={evaluation.penalized_wh!r}")
        click.echo(f"penalty_amount={evaluation.penalty_amount!r}")


@main.command()
@click.option("--history", "history_path", required=True, metavar="PATH",
              help="History CSV (header day_index,interval_index,p_w,is_event_day).")
@click.option("--mode", type=click.Choice(["high", "low", "mid"]), required=True,
              help="Which x days of the y-day window to average.")
@click.option("-x", type=int, required=True, callback=_positive_int,
              help="Days selected from the window.")
@click.option("-y", type=int, required=True, callback=_positive_int,
              help="Window of most recent non-event days.")
@click.option("--event-day", type=int, required=True, help="Index of the DR event day.")
@click.option("--interval", type=int, default=3600, show_default=True,
              callback=_positive_int, help="Profile resolution in s.")
@click.option("--adjust", is_flag=True, help="Apply the same-day calibration adjustment.")
@click.option("--observed", "observed_path", default=None, metavar="PATH",
              help="Observed event-day pattern CSV (required with --adjust).")
@click.option("--notification", type=int, default=None,
              help="Event notification time in s from midnight (required with --adjust).")
@click.option("--window", type=int, default=7200, show_default=True,
              callback=_positive_int, help="Calibration window length in s.")
@click.option("-o", "--out", required=True, metavar="PATH", help="Baseline pattern CSV to write.")
@click.pass_obj
@_handle_errors
def baseline(client: ServiceClient, history_path, mode, x, y, event_day, interval,
             adjust, observed_path, notification, window, out):
    """Compute a demand-response baseline profile."""
    if x > y:
        raise click.UsageError(f"-x ({x}) may not exceed -y ({y})")
    if adjust and (observed_path is None or notification is None):
        raise click.UsageError("--adjust requires --observed and --notification")
    if not adjust and (observed_path is not None or notification is not None):
        raise click.UsageError("--observed/--notification only apply with --adjust")

    history = csvio.read_history_csv(history_path, interval_s=interval)
    observed = None
    if adjust:
        observed = PatternModel.from_domain(
            csvio.read_pattern_csv(observed_path, tau_s=interval)
        )
    request = BaselineRequest(
        history=HistoryModel.from_domain(history),
        mode=mode,
        x=x,
        y=y,
        event_day_index=event_day,
        calibration_window_s=window,
        observed=observed,
        notification_t_s=notification,
    )
    response = client.post("/baseline", request)
    csvio.write_pattern_csv(PatternModel(**response).to_domain(), out)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
