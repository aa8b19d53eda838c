"""Grouping trip legs into trips and classifying them.

Legs separated only by other legs form one trip; every activity is a group
boundary. A group is a single-mode trip when it uses one mode, or walking
plus exactly one other mode; anything else is multimodal. Standalone
non-walk legs are single-mode trips with walking assumed as access and
egress.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Mapping, Sequence

from .diary import DiaryEvent, TravelDiary, TripLeg
from .errors import EmptyGroupError
from .kml import GeoPoint
from .modes import ModeLabel


class TripCategory(str, Enum):
    SINGLE_MODE = "single_mode"
    MULTIMODAL = "multimodal"


@dataclass(frozen=True, slots=True)
class Trip:
    leg_indices: tuple[int, ...]
    category: TripCategory
    main_mode: ModeLabel | None
    access_mode: ModeLabel | None
    egress_mode: ModeLabel | None
    distance_m: float
    duration_s: float
    legs_duration_s: float  # sum of member leg durations, excludes transfer gaps
    origin: GeoPoint
    destination: GeoPoint
    depart: datetime
    arrive: datetime
    flags: tuple[str, ...] = ()


def group_legs(events: Sequence[DiaryEvent]) -> list[list[int]]:
    """Split the event sequence into maximal runs of consecutive trip legs."""
    groups: list[list[int]] = []
    current: list[int] = []
    for i, event in enumerate(events):
        if isinstance(event, TripLeg):
            current.append(i)
        elif current:
            groups.append(current)
            current = []
    if current:
        groups.append(current)
    return groups


def _leg_mode(leg: TripLeg) -> tuple[ModeLabel | None, str | None]:
    """Resolved mode for classification and the flag that resolution earns."""
    if leg.validated_mode is not None:
        return leg.validated_mode, None
    if leg.inferred_mode is not None:
        return leg.inferred_mode, "InferredFallback"
    return None, "UnlabeledLeg"


def classify_group(group: Sequence[TripLeg], indices: Sequence[int] | None = None) -> Trip:
    """Classify one leg group as a trip.

    Legs without a validated mode fall back to the inferred mode (flagged);
    legs with neither label contribute no mode and are flagged UnlabeledLeg.
    """
    if not group:
        raise EmptyGroupError("cannot classify an empty leg group")
    if indices is None:
        indices = tuple(range(len(group)))
    else:
        indices = tuple(indices)

    modes: list[ModeLabel | None] = []
    flags: list[str] = []
    for leg in group:
        mode, flag = _leg_mode(leg)
        modes.append(mode)
        if flag is not None and flag not in flags:
            flags.append(flag)

    mode_set = {m for m in modes if m is not None}
    non_walk = mode_set - {ModeLabel.WALK}
    if len(non_walk) <= 1:
        category = TripCategory.SINGLE_MODE
        if len(mode_set) == 1:
            main_mode = next(iter(mode_set))
        elif non_walk:
            main_mode = next(iter(non_walk))  # walking + one other mode
        else:
            main_mode = None  # every leg unlabeled
    else:
        category = TripCategory.MULTIMODAL
        # Main mode of a multimodal trip: mode of the longest-distance labeled
        # leg; ties go to the earliest leg.
        best = max(
            (leg.distance_m, -k, k)
            for k, leg in enumerate(group)
            if modes[k] is not None
        )
        main_mode = modes[best[2]]

    first_mode, last_mode = modes[0], modes[-1]
    if len(group) == 1 and first_mode is not None and first_mode is not ModeLabel.WALK:
        access_mode = egress_mode = ModeLabel.WALK
    else:
        access_mode, egress_mode = first_mode, last_mode

    return Trip(
        leg_indices=indices,
        category=category,
        main_mode=main_mode,
        access_mode=access_mode,
        egress_mode=egress_mode,
        distance_m=sum(leg.distance_m for leg in group),
        duration_s=(group[-1].window.end - group[0].window.begin).total_seconds(),
        legs_duration_s=sum(leg.duration_s for leg in group),
        origin=group[0].path[0],
        destination=group[-1].path[-1],
        depart=group[0].window.begin,
        arrive=group[-1].window.end,
        flags=tuple(flags),
    )


def aggregate(diary: TravelDiary) -> list[Trip]:
    """Group and classify every trip leg of a diary, in chronological order."""
    return [
        classify_group([diary.events[i] for i in indices], indices)
        for indices in group_legs(diary.events)
    ]


TRIP_CSV_COLUMNS = (
    "respondent_id,trip_index,category,main_mode,access_mode,egress_mode,"
    "distance_m,duration_s,depart,arrive,origin_lat,origin_lon,dest_lat,dest_lon"
)


def _iso_utc(dt: datetime) -> str:
    return dt.isoformat().replace("+00:00", "Z")


def trips_csv(trips_by_respondent: Mapping[str, Sequence[Trip]]) -> str:
    """Render the trip table as CSV, one row per trip, respondents sorted."""
    out = io.StringIO()
    out.write(TRIP_CSV_COLUMNS + "\n")
    for respondent_id in sorted(trips_by_respondent):
        for k, trip in enumerate(trips_by_respondent[respondent_id]):
            out.write(
                ",".join(
                    [
                        respondent_id,
                        str(k),
                        trip.category.value,
                        trip.main_mode.value if trip.main_mode else "",
                        trip.access_mode.value if trip.access_mode else "",
                        trip.egress_mode.value if trip.egress_mode else "",
                        f"{trip.distance_m:.3f}",
                        f"{trip.duration_s:.1f}",
                        _iso_utc(trip.depart),
                        _iso_utc(trip.arrive),
                        f"{trip.origin.lat:.6f}",
                        f"{trip.origin.lon:.6f}",
                        f"{trip.destination.lat:.6f}",
                        f"{trip.destination.lon:.6f}",
                    ]
                )
                + "\n"
            )
    return out.getvalue()
