"""Great-circle distance utilities."""

from __future__ import annotations

from math import asin, cos, radians, sin, sqrt
from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:
    from .kml import GeoPoint

EARTH_RADIUS_M = 6_371_000.0


def haversine_m(a: "GeoPoint", b: "GeoPoint") -> float:
    """Great-circle distance between two points in meters."""
    lat1, lat2 = radians(a.lat), radians(b.lat)
    dlat = lat2 - lat1
    dlon = radians(b.lon - a.lon)
    h = sin(dlat / 2.0) ** 2 + cos(lat1) * cos(lat2) * sin(dlon / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * asin(min(1.0, sqrt(h)))


def polyline_length_m(path: Sequence["GeoPoint"]) -> float:
    """Sum of consecutive haversine distances; 0 for fewer than 2 points."""
    return sum(haversine_m(p, q) for p, q in zip(path, path[1:]))
