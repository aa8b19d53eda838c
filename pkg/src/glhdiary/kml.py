"""Parsing of per-day Google Location History KML exports.

A GLH export carries one placemark per timeline event. Placemarks with a
Point geometry are place visits; placemarks with a LineString geometry are
movement segments whose name is Google's mode label ("Driving", "Walking",
...). Time bounds come from the placemark's TimeSpan. Everything else in
the document (styles, folders, unknown namespaces) is ignored.

Timestamps are normalized to UTC at parse time; naive timestamps are taken
as UTC per the KML dateTime convention. Day membership is a separate,
zone-aware question answered by :func:`check_day_coverage`.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from datetime import date, datetime, time, timedelta, timezone
from enum import Enum
from zoneinfo import ZoneInfo

from .errors import InvalidCoordinateError, MalformedXmlError, MissingTimeSpanError

DEFAULT_TIMEZONE = "America/Toronto"


@dataclass(frozen=True, slots=True)
class GeoPoint:
    """WGS84 coordinate in decimal degrees."""

    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range: {self.lat!r}")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude out of range: {self.lon!r}")


@dataclass(frozen=True, slots=True)
class TimeWindow:
    """Half-open-in-spirit event window; ``end >= begin`` always holds."""

    begin: datetime
    end: datetime

    def __post_init__(self) -> None:
        if self.end < self.begin:
            raise ValueError(f"window ends before it begins: {self.begin} > {self.end}")

    @property
    def duration_s(self) -> float:
        return (self.end - self.begin).total_seconds()


class EntryKind(str, Enum):
    PLACE_VISIT = "place_visit"
    MOVEMENT = "movement"


@dataclass(frozen=True, slots=True)
class TimelineEntry:
    """One parsed placemark: a place visit or a movement segment."""

    kind: EntryKind
    name: str
    address: str | None
    window: TimeWindow
    path: tuple[GeoPoint, ...]
    raw_mode_label: str | None = None

    def __post_init__(self) -> None:
        if not self.path:
            raise ValueError("entry has an empty path")
        if self.kind is EntryKind.PLACE_VISIT:
            if len(self.path) != 1:
                raise ValueError("place visit must have exactly one point")
            if self.raw_mode_label is not None:
                raise ValueError("place visit cannot carry a mode label")
        else:
            if self.raw_mode_label is None:
                raise ValueError("movement requires a mode label")


def _localname(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _find_local(element: ET.Element, name: str) -> ET.Element | None:
    for child in element.iter():
        if _localname(child.tag) == name:
            return child
    return None


def _parse_timestamp(text: str) -> datetime:
    dt = datetime.fromisoformat(text.strip().replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def _parse_coordinates(text: str, index: int) -> tuple[GeoPoint, ...]:
    points = []
    for token in text.split():
        parts = token.split(",")
        if len(parts) < 2:
            raise InvalidCoordinateError(
                f"placemark {index}: coordinate tuple {token!r} lacks lon,lat", index
            )
        try:
            lon, lat = float(parts[0]), float(parts[1])
        except ValueError:
            raise InvalidCoordinateError(
                f"placemark {index}: non-numeric coordinate {token!r}", index
            ) from None
        try:
            points.append(GeoPoint(lat=lat, lon=lon))
        except ValueError as exc:
            raise InvalidCoordinateError(f"placemark {index}: {exc}", index) from None
    if not points:
        raise InvalidCoordinateError(f"placemark {index}: empty coordinates", index)
    return tuple(points)


def parse_kml(data: bytes) -> list[TimelineEntry]:
    """Parse one day's KML export into chronologically ordered entries.

    Raises:
        MalformedXmlError: input is not well-formed XML.
        MissingTimeSpanError: a placemark lacks TimeSpan begin/end.
        InvalidCoordinateError: a coordinate is missing, non-numeric, or out
            of WGS84 range.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedXmlError(f"not well-formed XML: {exc}") from exc

    entries: list[TimelineEntry] = []
    placemarks = [el for el in root.iter() if _localname(el.tag) == "Placemark"]
    for index, mark in enumerate(placemarks):
        point_el = _find_local(mark, "Point")
        line_el = _find_local(mark, "LineString")
        if point_el is None and line_el is None:
            continue  # unsupported geometry (e.g. gx:Track) is ignored

        timespan = _find_local(mark, "TimeSpan")
        begin_el = _find_local(timespan, "begin") if timespan is not None else None
        end_el = _find_local(timespan, "end") if timespan is not None else None
        if begin_el is None or end_el is None or not begin_el.text or not end_el.text:
            raise MissingTimeSpanError(f"placemark {index}: missing TimeSpan begin/end", index)
        try:
            window = TimeWindow(_parse_timestamp(begin_el.text), _parse_timestamp(end_el.text))
        except ValueError as exc:
            raise MissingTimeSpanError(f"placemark {index}: {exc}", index) from None

        name_el = _find_local(mark, "name")
        name = (name_el.text or "").strip() if name_el is not None else ""
        address_el = _find_local(mark, "address")
        address = (address_el.text or "").strip() if address_el is not None else None

        geometry = point_el if point_el is not None else line_el
        coords_el = _find_local(geometry, "coordinates")
        if coords_el is None or not coords_el.text:
            raise InvalidCoordinateError(f"placemark {index}: missing coordinates", index)
        path = _parse_coordinates(coords_el.text, index)

        if point_el is not None:
            entries.append(
                TimelineEntry(
                    kind=EntryKind.PLACE_VISIT,
                    name=name,
                    address=address,
                    window=window,
                    path=path[:1],
                )
            )
        else:
            entries.append(
                TimelineEntry(
                    kind=EntryKind.MOVEMENT,
                    name=name,
                    address=address,
                    window=window,
                    path=path,
                    raw_mode_label=name,
                )
            )

    entries.sort(key=lambda e: e.window.begin)
    return entries


@dataclass(frozen=True, slots=True)
class CoverageReport:
    matches: bool
    out_of_day_count: int


def check_day_coverage(
    entries: list[TimelineEntry], expected_date: date, tz: str = DEFAULT_TIMEZONE
) -> CoverageReport:
    """Check that every entry's window touches ``expected_date`` in zone ``tz``.

    The day runs from local midnight to the next local midnight. An entry
    counts as outside the day only when its whole window misses that span.
    """
    zone = ZoneInfo(tz)
    day_start = datetime.combine(expected_date, time(0), tzinfo=zone).astimezone(timezone.utc)
    day_end = (datetime.combine(expected_date, time(0), tzinfo=zone) + timedelta(days=1)).astimezone(
        timezone.utc
    )
    outside = sum(
        1 for e in entries if not (e.window.begin < day_end and e.window.end >= day_start)
    )
    return CoverageReport(matches=outside == 0, out_of_day_count=outside)
