"""glh-diary: activity-travel diaries from Google Location History exports.

Pipeline: per-day KML parsing -> diary assembly and respondent validation
-> trip aggregation -> descriptive statistics, mode-inference confusion
matrix, and a binary logit of inference error. A FastAPI service and a
batch CLI expose the same code paths.
"""

from .confusion import (
    ConfusionMatrix,
    build_confusion,
    confusion_csv,
    mismatch_rate,
    precision,
    recall,
)
from .diary import (
    Activity,
    ActivityPurpose,
    Respondent,
    TravelDiary,
    TripLeg,
    ValidationResponse,
    apply_validation,
    build_diary,
    event_census,
    flag_short_dwells,
)
from .geo import haversine_m, polyline_length_m
from .kml import GeoPoint, TimelineEntry, TimeWindow, check_day_coverage, parse_kml
from .logit import DesignRow, LogitFit, OriginContext, build_design, fit, rho_square
from .metrics import Histogram, mode_share, trip_rate
from .modes import ModeLabel, collapse_mode_response, map_inferred_mode
from .store import Store, StoreRecord
from .trips import Trip, TripCategory, aggregate, classify_group, group_legs

__version__ = "0.1.0"

__all__ = [
    "Activity",
    "ActivityPurpose",
    "ConfusionMatrix",
    "DesignRow",
    "GeoPoint",
    "Histogram",
    "LogitFit",
    "ModeLabel",
    "OriginContext",
    "Respondent",
    "Store",
    "StoreRecord",
    "TimeWindow",
    "TimelineEntry",
    "TravelDiary",
    "Trip",
    "TripCategory",
    "TripLeg",
    "ValidationResponse",
    "aggregate",
    "apply_validation",
    "build_confusion",
    "build_design",
    "build_diary",
    "check_day_coverage",
    "classify_group",
    "collapse_mode_response",
    "confusion_csv",
    "event_census",
    "fit",
    "flag_short_dwells",
    "group_legs",
    "haversine_m",
    "map_inferred_mode",
    "mismatch_rate",
    "mode_share",
    "parse_kml",
    "polyline_length_m",
    "precision",
    "recall",
    "rho_square",
    "trip_rate",
]
