"""FastAPI application: one endpoint per pipeline stage.

Domain violations surface as HTTP 400 with the error class name; malformed
request bodies are FastAPI's usual 422.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..baseline import adjusted_baseline, initial_baseline
from ..dou import apply_penalty, duration_curve, excess_energy
from ..edm import EdmConfig, EventStream, run_edm
from ..errors import DomainError, MeteringError
from ..metrics import compare, reconstruct_from_events, reconstruct_from_intervals
from ..synth import generate, reference_day
from ..tdm import sample_tdm
from .schemas import (
    BaselineRequest,
    CompareRequest,
    CompareResponse,
    DouEvaluationModel,
    DouRequest,
    DurationCurveModel,
    DurationCurveRequest,
    EdmSettings,
    EventStreamModel,
    HealthResponse,
    IntervalSeriesModel,
    LoadSpecModel,
    MeterRequest,
    PatternModel,
    ReconstructEventsRequest,
    ReconstructIntervalsRequest,
    ReferenceDayRequest,
    ReportModel,
    SampleRequest,
)


def create_app() -> FastAPI:
    app = FastAPI(title="edmkit", version=__version__)

    @app.exception_handler(MeteringError)
    async def metering_error(request: Request, exc: MeteringError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/synth/generate", response_model=PatternModel)
    def synth_generate(request: LoadSpecModel) -> PatternModel:
        return PatternModel.from_domain(generate(request.to_domain()))

    @app.post("/synth/reference-day", response_model=PatternModel)
    def synth_reference_day(request: ReferenceDayRequest) -> PatternModel:
        return PatternModel.from_domain(reference_day(request.seed))

    @app.post("/meter", response_model=EventStreamModel)
    def meter(request: MeterRequest) -> EventStreamModel:
        pattern = request.pattern.to_domain()
        billing = request.billing_period_s
        if billing is None:
            billing = pattern.horizon_s
        config = EdmSettings(
            delta1_w=request.delta1_w, delta2_ws=request.delta2_ws
        ).to_config(tau_s=pattern.tau_s, billing_period_s=billing)
        return EventStreamModel.from_domain(run_edm(pattern, config))

    @app.post("/sample", response_model=IntervalSeriesModel)
    def sample(request: SampleRequest) -> IntervalSeriesModel:
        pattern = request.pattern.to_domain()
        return IntervalSeriesModel.from_domain(sample_tdm(pattern, request.step_s))

    @app.post("/reconstruct/events", response_model=PatternModel)
    def reconstruct_events(request: ReconstructEventsRequest) -> PatternModel:
        events = tuple(e.to_domain() for e in request.events)
        if not events:
            raise DomainError("cannot reconstruct from an empty event list")
        horizon = events[-1].t_end_s - request.start_s
        config = EdmConfig(
            delta1_w=float("inf"),
            delta2_ws=float("inf"),
            tau_s=request.tau_s,
            billing_period_s=horizon,
        )
        stream = EventStream(config=config, start_s=request.start_s, events=events)
        return PatternModel.from_domain(reconstruct_from_events(stream))

    @app.post("/reconstruct/intervals", response_model=PatternModel)
    def reconstruct_intervals(request: ReconstructIntervalsRequest) -> PatternModel:
        series = request.series.to_domain()
        return PatternModel.from_domain(reconstruct_from_intervals(series, request.tau_s))

    @app.post("/compare", response_model=CompareResponse)
    def compare_endpoint(request: CompareRequest) -> CompareResponse:
        pattern = request.pattern.to_domain()
        billing = request.billing_period_s
        if billing is None:
            billing = pattern.horizon_s
        configs = [
            settings.to_config(tau_s=pattern.tau_s, billing_period_s=billing)
            for settings in request.edm_configs
        ]
        reports = compare(pattern, request.tdm_steps, configs, request.line.to_domain())
        return CompareResponse(reports=[ReportModel.from_domain(r) for r in reports])

    @app.post("/duration-curve", response_model=DurationCurveModel)
    def duration(request: DurationCurveRequest) -> DurationCurveModel:
        return DurationCurveModel.from_domain(duration_curve(request.pattern.to_domain()))

    @app.post("/dou", response_model=DouEvaluationModel)
    def dou(request: DouRequest) -> DouEvaluationModel:
        if request.curve is not None:
            curve = request.curve.to_domain()
        else:
            curve = duration_curve(request.pattern.to_domain())
        evaluation = excess_energy(curve, request.schedule(curve.tau_s))
        if request.tolerance_fraction is not None:
            evaluation = apply_penalty(
                evaluation, request.tolerance_fraction, request.price_per_kwh
            )
        return DouEvaluationModel.from_domain(evaluation)

    @app.post("/baseline", response_model=PatternModel)
    def baseline(request: BaselineRequest) -> PatternModel:
        history = request.history.to_domain()
        config = request.to_config()
        profile = initial_baseline(history, config, request.event_day_index)
        if request.observed is not None:
            profile = adjusted_baseline(
                profile, request.observed.to_domain(), request.notification_t_s, config
            )
        return PatternModel.from_domain(profile)

    return app
