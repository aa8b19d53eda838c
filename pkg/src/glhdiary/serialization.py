"""Versioned JSON serialization for diaries and store records.

All documents carry the ``glh-diary/1`` schema tag. Exports are byte-stable:
keys are sorted, timestamps are ISO-8601 UTC with a trailing Z, and floats
round-trip through ``repr`` so load(dump(x)) == x field for field.
"""

from __future__ import annotations

import hashlib
import json
from datetime import date, datetime, timezone
from typing import Any

from .diary import (
    Activity,
    ActivityPurpose,
    DiaryEvent,
    Employment,
    Gender,
    IncomeBand,
    PurposeCategory,
    QAFlag,
    Respondent,
    TravelDiary,
    TripLeg,
    WorkplaceArrangement,
)
from .kml import GeoPoint, TimeWindow
from .modes import ModeLabel

SCHEMA_VERSION = "glh-diary/1"


def canonical_json_bytes(obj: Any) -> bytes:
    return json.dumps(
        obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False
    ).encode("utf-8")


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _dt_to_json(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def _dt_from_json(text: str) -> datetime:
    return datetime.fromisoformat(text.replace("Z", "+00:00")).astimezone(timezone.utc)


def event_to_dict(event: DiaryEvent) -> dict:
    common = {
        "kind": event.kind,
        "name": event.name,
        "begin": _dt_to_json(event.window.begin),
        "end": _dt_to_json(event.window.end),
        "duration_s": event.duration_s,
        "source_date": event.source_date.isoformat(),
    }
    if isinstance(event, Activity):
        purpose = None
        if event.purpose is not None:
            purpose = {"category": event.purpose.category.value, "subtype": event.purpose.subtype}
        return {
            **common,
            "address": event.address,
            "lat": event.location.lat,
            "lon": event.location.lon,
            "glh_category": event.glh_category,
            "purpose": purpose,
        }
    return {
        **common,
        "path": [[p.lat, p.lon] for p in event.path],
        "raw_mode_label": event.raw_mode_label,
        "inferred_mode": event.inferred_mode.value if event.inferred_mode else None,
        "validated_mode": event.validated_mode.value if event.validated_mode else None,
        "distance_m": event.distance_m,
        "avg_speed_kmh": event.avg_speed_kmh,
    }


def event_from_dict(data: dict) -> DiaryEvent:
    window = TimeWindow(_dt_from_json(data["begin"]), _dt_from_json(data["end"]))
    source_date = date.fromisoformat(data["source_date"])
    if data["kind"] == "activity":
        purpose = None
        if data.get("purpose") is not None:
            purpose = ActivityPurpose(
                category=PurposeCategory(data["purpose"]["category"]),
                subtype=data["purpose"].get("subtype", ""),
            )
        return Activity(
            name=data["name"],
            address=data.get("address"),
            location=GeoPoint(data["lat"], data["lon"]),
            window=window,
            source_date=source_date,
            glh_category=data.get("glh_category", ""),
            purpose=purpose,
        )
    return TripLeg(
        name=data["name"],
        window=window,
        source_date=source_date,
        path=tuple(GeoPoint(lat, lon) for lat, lon in data["path"]),
        raw_mode_label=data["raw_mode_label"],
        inferred_mode=ModeLabel(data["inferred_mode"]) if data.get("inferred_mode") else None,
        validated_mode=ModeLabel(data["validated_mode"]) if data.get("validated_mode") else None,
        distance_m=data["distance_m"],
    )


def diary_to_dict(diary: TravelDiary) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "respondent_id": diary.respondent_id,
        "days": [d.isoformat() for d in diary.days],
        "events": [event_to_dict(e) for e in diary.events],
        "qa_flags": [
            {"event_index": f.event_index, "code": f.code, "message": f.message}
            for f in diary.qa_flags
        ],
    }


def diary_from_dict(data: dict) -> TravelDiary:
    return TravelDiary(
        respondent_id=data["respondent_id"],
        days=tuple(date.fromisoformat(d) for d in data["days"]),
        events=tuple(event_from_dict(e) for e in data["events"]),
        qa_flags=tuple(
            QAFlag(f["event_index"], f["code"], f["message"]) for f in data["qa_flags"]
        ),
    )


def respondent_to_dict(respondent: Respondent) -> dict:
    home = respondent.home_location
    return {
        "id": respondent.id,
        "age": respondent.age,
        "gender": respondent.gender.value,
        "household_size": respondent.household_size,
        "employment": respondent.employment.value,
        "workplace_arrangement": respondent.workplace_arrangement.value,
        "income_band": respondent.income_band.value,
        "home_lat": home.lat if home else None,
        "home_lon": home.lon if home else None,
    }


def respondent_from_dict(data: dict) -> Respondent:
    home = None
    if data.get("home_lat") is not None and data.get("home_lon") is not None:
        home = GeoPoint(data["home_lat"], data["home_lon"])
    return Respondent(
        id=data["id"],
        age=data["age"],
        gender=Gender(data["gender"]),
        household_size=data["household_size"],
        employment=Employment(data["employment"]),
        workplace_arrangement=WorkplaceArrangement(data["workplace_arrangement"]),
        income_band=IncomeBand(data["income_band"]),
        home_location=home,
    )


def day_fragment(diary: TravelDiary, day: date) -> dict:
    """The one-day diary table: every event of ``day`` with its global index.

    This is the single source for both the HTTP upload response and any
    batch rendering of the same day, so the two are byte-identical.
    """
    events = []
    for i, event in enumerate(diary.events):
        if event.source_date != day:
            continue
        view = event_to_dict(event)
        view["event_index"] = i
        if event.kind == "trip_leg":
            view["address"] = None  # legs render as "N/A" in the diary table
        events.append(view)
    return {
        "schema": SCHEMA_VERSION,
        "respondent_id": diary.respondent_id,
        "date": day.isoformat(),
        "events": events,
    }


def day_fragment_bytes(diary: TravelDiary, day: date) -> bytes:
    return canonical_json_bytes(day_fragment(diary, day))
