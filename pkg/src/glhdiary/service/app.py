"""HTTP service tying the pipeline together.

Every endpoint calls into the pure pipeline modules through the store, so
the service and the batch CLI produce identical artifacts from identical
inputs. Domain errors map onto status codes: 400 malformed request,
404 unknown respondent, 409 duplicate day, 422 unparseable KML.
"""

from __future__ import annotations

import secrets
from datetime import date
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.staticfiles import StaticFiles

from ..diary import (
    PURPOSE_OPTIONS,
    Activity,
    Respondent,
    TripLeg,
    ValidationResponse,
)
from ..confusion import build_confusion, confusion_csv
from ..errors import (
    DuplicateDayError,
    DuplicateRespondentError,
    GlhDiaryError,
    IndexOutOfRangeError,
    KindMismatchError,
    ParseError,
    UnknownModeResponseError,
    UnknownRespondentError,
)
from ..kml import GeoPoint
from ..metrics import build_stats_report, load_reference_csv
from ..modes import MODE_RESPONSE_OPTIONS
from ..serialization import canonical_json_bytes, day_fragment_bytes, diary_to_dict
from ..store import Store
from ..trips import aggregate, trips_csv
from .schemas import (
    ErrorBody,
    OptionsOut,
    RespondentIn,
    RespondentOut,
    StatusOut,
    ValidationItem,
)

_STATUS_BY_ERROR: tuple[tuple[type[GlhDiaryError], int], ...] = (
    (ParseError, 422),
    (DuplicateDayError, 409),
    (DuplicateRespondentError, 409),
    (UnknownRespondentError, 404),
    (IndexOutOfRangeError, 400),
    (KindMismatchError, 400),
    (UnknownModeResponseError, 400),
)


def _error_response(exc: GlhDiaryError, status: int) -> Response:
    detail = None
    if isinstance(exc, ParseError) and exc.placemark_index is not None:
        detail = f"placemark_index={exc.placemark_index}"
    body = ErrorBody(code=exc.code, message=str(exc), detail=detail)
    return Response(
        content=body.model_dump_json(),
        status_code=status,
        media_type="application/json",
    )


def create_app(
    store: Store,
    census_path: str | Path | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="glh-diary survey service")

    @app.exception_handler(GlhDiaryError)
    async def _domain_error(request: Request, exc: GlhDiaryError) -> Response:
        for error_type, status in _STATUS_BY_ERROR:
            if isinstance(exc, error_type):
                return _error_response(exc, status)
        return _error_response(exc, 500)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError) -> Response:
        body = ErrorBody(code="malformed_request", message="request body failed validation",
                         detail=str(exc.errors()[:3]))
        return Response(content=body.model_dump_json(), status_code=400,
                        media_type="application/json")

    def _parse_day(text: str) -> date:
        try:
            return date.fromisoformat(text)
        except ValueError:
            raise RequestValidationError([{"loc": ("path", "day"), "msg": "invalid date"}])

    @app.post("/respondents", status_code=201, response_model=RespondentOut)
    def register(body: RespondentIn) -> RespondentOut:
        home = None
        if body.home_lat is not None and body.home_lon is not None:
            home = GeoPoint(body.home_lat, body.home_lon)
        respondent = Respondent(
            id=body.respondent_id or secrets.token_hex(8),
            age=body.age,
            gender=body.gender,
            household_size=body.household_size,
            employment=body.employment,
            workplace_arrangement=body.workplace_arrangement,
            income_band=body.income_band,
            home_location=home,
        )
        record = store.register(respondent, setup_confirmed=body.setup_confirmed)
        return RespondentOut(respondent_id=record.respondent_id, phase=record.phase.value)

    @app.post("/respondents/{respondent_id}/days/{day}/kml", status_code=201)
    async def upload_day(respondent_id: str, day: str, request: Request) -> Response:
        parsed_day = _parse_day(day)
        kml_bytes = await request.body()
        record = store.add_day(respondent_id, parsed_day, kml_bytes)
        return Response(
            content=day_fragment_bytes(record.diary, parsed_day),
            status_code=201,
            media_type="application/json",
        )

    @app.get("/respondents/{respondent_id}/diary")
    def get_diary(respondent_id: str) -> Response:
        record = store.get(respondent_id)
        return Response(
            content=canonical_json_bytes(diary_to_dict(record.diary)),
            media_type="application/json",
        )

    @app.post("/respondents/{respondent_id}/validations", response_model=StatusOut)
    def submit_validations(respondent_id: str, items: list[ValidationItem]) -> StatusOut:
        responses = [
            ValidationResponse(
                event_index=item.event_index,
                purpose=item.purpose,
                mode_response=item.mode_response,
            )
            for item in items
        ]
        record = store.apply_validations(respondent_id, responses)
        return _status(record)

    @app.get("/respondents/{respondent_id}/status", response_model=StatusOut)
    def get_status(respondent_id: str) -> StatusOut:
        return _status(store.get(respondent_id))

    def _status(record) -> StatusOut:
        activities = [e for e in record.diary.events if isinstance(e, Activity)]
        legs = [e for e in record.diary.events if isinstance(e, TripLeg)]
        return StatusOut(
            respondent_id=record.respondent_id,
            phase=record.phase.value,
            days=[d.isoformat() for d in record.diary.days],
            activities=len(activities),
            trip_legs=len(legs),
            validated_activities=sum(1 for a in activities if a.purpose is not None),
            validated_trip_legs=sum(1 for l in legs if l.validated_mode is not None),
        )

    @app.get("/options", response_model=OptionsOut)
    def options() -> OptionsOut:
        return OptionsOut(
            purposes=[text for text, _ in PURPOSE_OPTIONS],
            mode_responses=list(MODE_RESPONSE_OPTIONS),
        )

    @app.get("/export/trips")
    def export_trips() -> Response:
        table = {r.respondent_id: aggregate(r.diary) for r in store.records()}
        return Response(content=trips_csv(table), media_type="text/csv")

    @app.get("/export/confusion")
    def export_confusion() -> Response:
        legs = [
            e for r in store.records() for e in r.diary.events if isinstance(e, TripLeg)
        ]
        return Response(content=confusion_csv(build_confusion(legs)), media_type="text/csv")

    @app.get("/export/stats")
    def export_stats() -> Response:
        records = list(store.records())
        respondents = [r.respondent for r in records]
        person_days = sum(len(r.diary.days) for r in records)
        trips = [t for r in records for t in aggregate(r.diary)]
        activities = [
            e for r in records for e in r.diary.events if isinstance(e, Activity)
        ]
        reference = load_reference_csv(census_path) if census_path else None
        report = build_stats_report(respondents, person_days, trips, activities, reference)
        return Response(content=canonical_json_bytes(report), media_type="application/json")

    if static_dir is not None:
        app.mount("/ui", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
