"""File-backed survey store: one JSON record per respondent plus raw KML.

Layout under the store root:

    respondents/<id>.json   envelope {schema_version, checksum, record}
    kml/<id>/<date>.kml     raw uploads, sha256 recorded in the owning record

Writes go to a temp file in the target directory and are renamed into
place, so a crash never leaves a partial record. The record checksum is the
sha256 of the canonical record JSON; every raw KML's sha256 is stored
alongside its path and both are verified on load.

Validations are stored as the raw survey answers keyed by the event's
(source day, position within that day), which survives rebuilding the diary
when later days arrive in any order.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field, replace
from datetime import date
from enum import Enum
from pathlib import Path
from typing import Iterator, Sequence

from .diary import (
    Activity,
    Respondent,
    TravelDiary,
    TripLeg,
    ValidationResponse,
    apply_validation,
    build_diary,
)
from .errors import (
    CorruptRecordError,
    DuplicateDayError,
    DuplicateRespondentError,
    SchemaVersionMismatchError,
    UnknownRespondentError,
)
from .kml import parse_kml
from .serialization import (
    SCHEMA_VERSION,
    canonical_json_bytes,
    diary_from_dict,
    diary_to_dict,
    respondent_from_dict,
    respondent_to_dict,
    sha256_hex,
)


class Phase(str, Enum):
    SETUP = "setup"
    UPLOADING = "uploading"
    VALIDATED = "validated"


@dataclass(frozen=True, slots=True)
class RawFileRef:
    path: str  # relative to the store root
    sha256: str


@dataclass(frozen=True, slots=True)
class StoredValidation:
    kind: str  # "purpose" | "mode"
    value: str


@dataclass(frozen=True, slots=True)
class StoreRecord:
    respondent: Respondent
    phase: Phase
    diary: TravelDiary
    setup_confirmed: bool = True
    raw_files: dict[date, RawFileRef] = field(default_factory=dict)
    validations: dict[str, StoredValidation] = field(default_factory=dict)

    @property
    def respondent_id(self) -> str:
        return self.respondent.id


def _event_key(diary: TravelDiary, index: int) -> str:
    """Stable event identity: source day plus ordinal within that day."""
    event = diary.events[index]
    ordinal = sum(
        1 for e in diary.events[:index] if e.source_date == event.source_date
    )
    return f"{event.source_date.isoformat()}:{ordinal}"


def _key_to_index(diary: TravelDiary, key: str) -> int | None:
    day_text, _, ordinal_text = key.partition(":")
    day = date.fromisoformat(day_text)
    ordinal = int(ordinal_text)
    seen = 0
    for i, event in enumerate(diary.events):
        if event.source_date == day:
            if seen == ordinal:
                return i
            seen += 1
    return None


def _compute_phase(record: StoreRecord) -> Phase:
    if not record.raw_files:
        return Phase.SETUP
    for event in record.diary.events:
        if isinstance(event, Activity) and event.purpose is None:
            return Phase.UPLOADING
        if isinstance(event, TripLeg) and event.validated_mode is None:
            return Phase.UPLOADING
    return Phase.VALIDATED


def record_to_dict(record: StoreRecord) -> dict:
    return {
        "respondent_id": record.respondent_id,
        "phase": record.phase.value,
        "setup_confirmed": record.setup_confirmed,
        "respondent": respondent_to_dict(record.respondent),
        "diary": diary_to_dict(record.diary),
        "raw_files": {
            d.isoformat(): {"path": ref.path, "sha256": ref.sha256}
            for d, ref in sorted(record.raw_files.items())
        },
        "validations": {
            key: {"kind": v.kind, "value": v.value}
            for key, v in sorted(record.validations.items())
        },
    }


def record_from_dict(data: dict) -> StoreRecord:
    return StoreRecord(
        respondent=respondent_from_dict(data["respondent"]),
        phase=Phase(data["phase"]),
        setup_confirmed=data["setup_confirmed"],
        diary=diary_from_dict(data["diary"]),
        raw_files={
            date.fromisoformat(d): RawFileRef(ref["path"], ref["sha256"])
            for d, ref in data["raw_files"].items()
        },
        validations={
            key: StoredValidation(v["kind"], v["value"])
            for key, v in data["validations"].items()
        },
    )


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


class Store:
    """Set of respondent records under one directory.

    Mutations for the same respondent are serialized by a per-respondent
    lock; different respondents proceed concurrently.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        (self.root / "respondents").mkdir(parents=True, exist_ok=True)
        (self.root / "kml").mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _lock(self, respondent_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(respondent_id, threading.Lock())

    def _record_path(self, respondent_id: str) -> Path:
        return self.root / "respondents" / f"{respondent_id}.json"

    # -- persistence -----------------------------------------------------

    def put(self, record: StoreRecord) -> None:
        payload = record_to_dict(record)
        body = canonical_json_bytes(payload)
        envelope = {
            "schema_version": SCHEMA_VERSION,
            "checksum": sha256_hex(body),
            "record": payload,
        }
        _atomic_write(
            self._record_path(record.respondent_id), canonical_json_bytes(envelope)
        )

    def get(self, respondent_id: str) -> StoreRecord:
        path = self._record_path(respondent_id)
        if not path.exists():
            raise UnknownRespondentError(f"no record for respondent {respondent_id!r}")
        try:
            envelope = json.loads(path.read_bytes())
        except json.JSONDecodeError as exc:
            raise CorruptRecordError(f"{path}: invalid JSON: {exc}") from exc
        if envelope.get("schema_version") != SCHEMA_VERSION:
            raise SchemaVersionMismatchError(
                f"{path}: schema {envelope.get('schema_version')!r}, expected {SCHEMA_VERSION!r}"
            )
        body = canonical_json_bytes(envelope["record"])
        if sha256_hex(body) != envelope.get("checksum"):
            raise CorruptRecordError(f"{path}: checksum mismatch")
        record = record_from_dict(envelope["record"])
        for day, ref in record.raw_files.items():
            raw_path = self.root / ref.path
            if not raw_path.exists() or sha256_hex(raw_path.read_bytes()) != ref.sha256:
                raise CorruptRecordError(f"{raw_path}: checksum mismatch for {day}")
        return record

    def ids(self) -> list[str]:
        return sorted(p.stem for p in (self.root / "respondents").glob("*.json"))

    def records(self) -> Iterator[StoreRecord]:
        for respondent_id in self.ids():
            yield self.get(respondent_id)

    # -- survey operations -------------------------------------------------

    def register(self, respondent: Respondent, setup_confirmed: bool = True) -> StoreRecord:
        with self._lock(respondent.id):
            if self._record_path(respondent.id).exists():
                raise DuplicateRespondentError(
                    f"respondent {respondent.id!r} already registered"
                )
            record = StoreRecord(
                respondent=respondent,
                phase=Phase.SETUP,
                setup_confirmed=setup_confirmed,
                diary=build_diary(respondent, {}),
            )
            self.put(record)
            return record

    def _rebuild(self, record: StoreRecord) -> StoreRecord:
        """Reparse every raw day file, rebuild the diary, re-apply validations."""
        days = {}
        for day, ref in record.raw_files.items():
            days[day] = parse_kml((self.root / ref.path).read_bytes())
        diary = build_diary(record.respondent, days)
        responses = []
        for key, stored in record.validations.items():
            index = _key_to_index(diary, key)
            if index is None:
                continue
            if stored.kind == "purpose":
                responses.append(ValidationResponse(index, purpose=stored.value))
            else:
                responses.append(ValidationResponse(index, mode_response=stored.value))
        diary = apply_validation(diary, responses)
        rebuilt = replace(record, diary=diary)
        return replace(rebuilt, phase=_compute_phase(rebuilt))

    def add_day(self, respondent_id: str, day: date, kml_bytes: bytes) -> StoreRecord:
        """Attach one day's KML upload and regenerate the diary.

        Raises DuplicateDayError when the day was already uploaded, and the
        parse errors of :func:`glhdiary.kml.parse_kml` for bad content (in
        which case nothing is stored).
        """
        with self._lock(respondent_id):
            record = self.get(respondent_id)
            if day in record.raw_files:
                raise DuplicateDayError(
                    f"day {day.isoformat()} already uploaded for {respondent_id!r}"
                )
            parse_kml(kml_bytes)  # validate before anything is written
            rel_path = f"kml/{respondent_id}/{day.isoformat()}.kml"
            _atomic_write(self.root / rel_path, kml_bytes)
            raw_files = dict(record.raw_files)
            raw_files[day] = RawFileRef(path=rel_path, sha256=sha256_hex(kml_bytes))
            record = self._rebuild(replace(record, raw_files=raw_files))
            self.put(record)
            return record

    def apply_validations(
        self, respondent_id: str, responses: Sequence[ValidationResponse]
    ) -> StoreRecord:
        """Apply survey answers to the diary and remember them by event key."""
        with self._lock(respondent_id):
            record = self.get(respondent_id)
            diary = apply_validation(record.diary, responses)  # validates indices/kinds
            validations = dict(record.validations)
            for response in responses:
                key = _event_key(record.diary, response.event_index)
                if response.purpose is not None:
                    validations[key] = StoredValidation("purpose", response.purpose)
                else:
                    assert response.mode_response is not None
                    validations[key] = StoredValidation("mode", response.mode_response)
            record = replace(record, diary=diary, validations=validations)
            record = replace(record, phase=_compute_phase(record))
            self.put(record)
            return record


def load(path: str | Path) -> dict[str, StoreRecord]:
    """Load and verify every record of a store directory."""
    store = Store(path)
    return {record.respondent_id: record for record in store.records()}
