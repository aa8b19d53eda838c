"""Travel diaries: event model, assembly from daily entries, validation, QA.

A diary is the chronological merge of a respondent's daily timeline entries:
place visits become activities, movement segments become trip legs. The
diary is immutable; validation and QA passes return new diaries.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import date
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import DuplicateDayError, IndexOutOfRangeError, KindMismatchError
from .geo import polyline_length_m
from .kml import EntryKind, GeoPoint, TimelineEntry, TimeWindow
from .modes import ModeLabel, collapse_mode_response, map_inferred_mode

MIN_RESPONDENT_AGE = 18
DEFAULT_SHORT_DWELL_S = 300.0
OVERLAP_TOLERANCE_S = 60.0


class Gender(str, Enum):
    MALE = "male"
    FEMALE = "female"
    OTHER_UNSTATED = "other_unstated"


class Employment(str, Enum):
    FULL_TIME = "full_time"
    PART_TIME = "part_time"
    NOT_EMPLOYED = "not_employed"


class WorkplaceArrangement(str, Enum):
    USUAL_PLACE = "usual_place"
    HOME_OR_HYBRID = "home_or_hybrid"
    NO_FIXED_PLACE = "no_fixed_place"
    NOT_APPLICABLE = "not_applicable"


class IncomeBand(str, Enum):
    BELOW_40K = "below_40k"
    FROM_40K_TO_80K = "40k_to_80k"
    FROM_80K_TO_125K = "80k_to_125k"
    FROM_125K_TO_200K = "125k_to_200k"
    ABOVE_200K = "200k_and_above"
    DECLINE_UNKNOWN = "decline_unknown"


@dataclass(frozen=True, slots=True)
class Respondent:
    id: str
    age: int
    gender: Gender
    household_size: int
    employment: Employment
    workplace_arrangement: WorkplaceArrangement
    income_band: IncomeBand
    home_location: GeoPoint | None = None

    def __post_init__(self) -> None:
        if self.age < MIN_RESPONDENT_AGE:
            raise ValueError(f"respondent must be at least {MIN_RESPONDENT_AGE}: {self.age}")
        if self.household_size < 1:
            raise ValueError(f"household size must be >= 1: {self.household_size}")


class PurposeCategory(str, Enum):
    HOME = "home"
    WORK_FROM_HOME = "work_from_home"
    WORK = "work"
    SCHOOL = "school"
    SHOPPING_ERRANDS = "shopping_errands"
    OTHER = "other"


@dataclass(frozen=True, slots=True)
class ActivityPurpose:
    """Validated activity purpose: a category plus the free-form option text.

    Work-from-home counts as a home-located episode everywhere the pipeline
    splits home from out-of-home activity.
    """

    category: PurposeCategory
    subtype: str = ""


# Dropdown options offered when a respondent validates an activity, with the
# category each collapses to. Free-form answers outside this list collapse to
# OTHER with the answer kept as subtype.
PURPOSE_OPTIONS: tuple[tuple[str, PurposeCategory], ...] = (
    ("Home", PurposeCategory.HOME),
    ("Work from home", PurposeCategory.WORK_FROM_HOME),
    ("Work", PurposeCategory.WORK),
    ("School", PurposeCategory.SCHOOL),
    ("Shopping & errands", PurposeCategory.SHOPPING_ERRANDS),
    ("Dine in restaurant, bar, coffee, etc.", PurposeCategory.OTHER),
    ("Pick up meal & drive-through", PurposeCategory.OTHER),
    ("Visiting family/friends (Day visit only)", PurposeCategory.OTHER),
    ("Visiting family/friends (Overnight visit)", PurposeCategory.OTHER),
    ("Other", PurposeCategory.OTHER),
)

_PURPOSE_LOOKUP = {text.lower(): (text, category) for text, category in PURPOSE_OPTIONS}


def collapse_purpose_response(response: str) -> ActivityPurpose:
    """Collapse a survey purpose response to the purpose taxonomy."""
    text = response.strip()
    hit = _PURPOSE_LOOKUP.get(text.lower())
    if hit is None:
        return ActivityPurpose(PurposeCategory.OTHER, subtype=text)
    option_text, category = hit
    subtype = option_text if category is PurposeCategory.OTHER else ""
    return ActivityPurpose(category, subtype=subtype)


@dataclass(frozen=True, slots=True)
class Activity:
    """A dwell at a place."""

    name: str
    address: str | None
    location: GeoPoint
    window: TimeWindow
    source_date: date
    glh_category: str = ""
    purpose: ActivityPurpose | None = None

    kind = "activity"

    @property
    def duration_s(self) -> float:
        return self.window.duration_s


@dataclass(frozen=True, slots=True)
class TripLeg:
    """One continuous movement segment with a single inferred mode."""

    name: str
    window: TimeWindow
    source_date: date
    path: tuple[GeoPoint, ...]
    raw_mode_label: str
    inferred_mode: ModeLabel | None
    validated_mode: ModeLabel | None = None
    distance_m: float = 0.0

    kind = "trip_leg"

    @property
    def duration_s(self) -> float:
        return self.window.duration_s

    @property
    def avg_speed_kmh(self) -> float | None:
        """Average speed, or None (undefined) for zero-duration legs."""
        if self.duration_s <= 0.0:
            return None
        return (self.distance_m / 1000.0) / (self.duration_s / 3600.0)


DiaryEvent = Activity | TripLeg


@dataclass(frozen=True, slots=True)
class QAFlag:
    event_index: int
    code: str
    message: str


@dataclass(frozen=True, slots=True)
class TravelDiary:
    respondent_id: str
    days: tuple[date, ...]
    events: tuple[DiaryEvent, ...]
    qa_flags: tuple[QAFlag, ...] = ()


def _entry_to_event(entry: TimelineEntry, day: date) -> DiaryEvent:
    if entry.kind is EntryKind.PLACE_VISIT:
        return Activity(
            name=entry.name,
            address=entry.address,
            location=entry.path[0],
            window=entry.window,
            source_date=day,
        )
    raw = entry.raw_mode_label or ""
    return TripLeg(
        name=entry.name,
        window=entry.window,
        source_date=day,
        path=entry.path,
        raw_mode_label=raw,
        inferred_mode=map_inferred_mode(raw),
        distance_m=polyline_length_m(entry.path),
    )


def _structural_qa(events: Sequence[DiaryEvent]) -> list[QAFlag]:
    flags: list[QAFlag] = []
    for i, event in enumerate(events):
        if isinstance(event, TripLeg) and event.duration_s <= 0.0:
            flags.append(QAFlag(i, "UndefinedSpeed", "zero-duration leg has no average speed"))
    for i in range(1, len(events)):
        prev, cur = events[i - 1], events[i]
        overlap = (prev.window.end - cur.window.begin).total_seconds()
        if overlap > OVERLAP_TOLERANCE_S:
            flags.append(
                QAFlag(
                    i,
                    "OverlapWarning",
                    f"event {i} overlaps event {i - 1} by {overlap:.0f} s",
                )
            )
        # An activity split across two daily files shows up as two adjacent
        # same-name fragments from different days; keep both, flag them.
        if (
            isinstance(prev, Activity)
            and isinstance(cur, Activity)
            and prev.source_date != cur.source_date
            and prev.name == cur.name
            and 0.0 <= (cur.window.begin - prev.window.end).total_seconds() <= OVERLAP_TOLERANCE_S
        ):
            flags.append(QAFlag(i - 1, "MidnightSplit", f"activity continues as event {i}"))
            flags.append(QAFlag(i, "MidnightSplit", f"activity continues from event {i - 1}"))
    return flags


def build_diary(
    respondent: Respondent,
    days: Mapping[date, Sequence[TimelineEntry]]
    | Iterable[tuple[date, Sequence[TimelineEntry]]],
) -> TravelDiary:
    """Merge per-day entries into one chronologically ordered diary.

    Raises DuplicateDayError when the same calendar date appears twice.
    Overlapping events are reported as QA flags, never as failures.
    """
    pairs = list(days.items()) if isinstance(days, Mapping) else list(days)
    seen: set[date] = set()
    for day, _ in pairs:
        if day in seen:
            raise DuplicateDayError(f"day {day.isoformat()} supplied twice")
        seen.add(day)

    events: list[DiaryEvent] = []
    for day, entries in sorted(pairs, key=lambda p: p[0]):
        events.extend(_entry_to_event(entry, day) for entry in entries)
    events.sort(key=lambda e: e.window.begin)

    return TravelDiary(
        respondent_id=respondent.id,
        days=tuple(sorted(seen)),
        events=tuple(events),
        qa_flags=tuple(_structural_qa(events)),
    )


@dataclass(frozen=True, slots=True)
class ValidationResponse:
    """One survey answer: a purpose for an activity or a mode for a leg."""

    event_index: int
    purpose: str | None = None
    mode_response: str | None = None

    def __post_init__(self) -> None:
        if (self.purpose is None) == (self.mode_response is None):
            raise ValueError("exactly one of purpose / mode_response must be set")


def apply_validation(
    diary: TravelDiary, responses: Sequence[ValidationResponse]
) -> TravelDiary:
    """Attach validated purposes/modes to the targeted events.

    Only the targeted events change; everything else is carried over as-is.

    Raises:
        IndexOutOfRangeError: response targets a nonexistent event.
        KindMismatchError: purpose aimed at a leg or mode at an activity.
    """
    events = list(diary.events)
    for response in responses:
        i = response.event_index
        if not 0 <= i < len(events):
            raise IndexOutOfRangeError(f"event index {i} outside 0..{len(events) - 1}")
        event = events[i]
        if response.purpose is not None:
            if not isinstance(event, Activity):
                raise KindMismatchError(f"purpose response aimed at trip leg {i}")
            events[i] = replace(event, purpose=collapse_purpose_response(response.purpose))
        else:
            if not isinstance(event, TripLeg):
                raise KindMismatchError(f"mode response aimed at activity {i}")
            assert response.mode_response is not None
            events[i] = replace(event, validated_mode=collapse_mode_response(response.mode_response))
    return replace(diary, events=tuple(events))


@dataclass(frozen=True, slots=True)
class EventCensus:
    activities: int
    trip_legs: int


def event_census(diaries: Iterable[TravelDiary]) -> EventCensus:
    activities = trip_legs = 0
    for diary in diaries:
        for event in diary.events:
            if isinstance(event, Activity):
                activities += 1
            else:
                trip_legs += 1
    return EventCensus(activities=activities, trip_legs=trip_legs)


def flag_short_dwells(
    diary: TravelDiary, threshold_s: float = DEFAULT_SHORT_DWELL_S
) -> TravelDiary:
    """Flag activities strictly shorter than ``threshold_s``; delete nothing."""
    if threshold_s <= 0:
        raise ValueError(f"threshold must be positive: {threshold_s}")
    existing = {(f.event_index, f.code) for f in diary.qa_flags}
    flags = list(diary.qa_flags)
    for i, event in enumerate(diary.events):
        if (
            isinstance(event, Activity)
            and event.duration_s < threshold_s
            and (i, "ShortDwell") not in existing
        ):
            flags.append(
                QAFlag(i, "ShortDwell", f"activity lasts {event.duration_s:.0f} s")
            )
    return replace(diary, qa_flags=tuple(flags))
