"""Travel-mode taxonomy and label normalization.

Two vocabularies feed the 7-mode taxonomy:

* the free-text labels Google attaches to movement segments ("Driving",
  "On a bus", ...), normalized by :func:`map_inferred_mode`;
* the detailed answer options respondents pick when validating a trip
  ("Driving alone", ...), collapsed by :func:`collapse_mode_response`.

Unrecognized Google labels map to ``None`` (unmapped) rather than any
default mode; unrecognized survey responses are an error because the
survey form only offers known options.
"""

from __future__ import annotations

import json
from enum import Enum
from pathlib import Path

from .errors import UnknownModeResponseError


class ModeLabel(str, Enum):
    AUTOMOBILE = "automobile"
    LOCAL_TRANSIT = "local_transit"
    REGIONAL_TRANSIT = "regional_transit"
    TAXI_RIDEHAIL = "taxi_ridehail"
    MOTORCYCLE = "motorcycle"
    CYCLE = "cycle"
    WALK = "walk"

    @property
    def display(self) -> str:
        return _DISPLAY[self]


_DISPLAY = {
    ModeLabel.AUTOMOBILE: "Automobile",
    ModeLabel.LOCAL_TRANSIT: "Local Transit",
    ModeLabel.REGIONAL_TRANSIT: "Regional Transit",
    ModeLabel.TAXI_RIDEHAIL: "Taxi/Ridehail",
    ModeLabel.MOTORCYCLE: "Motorcycle",
    ModeLabel.CYCLE: "Cycle",
    ModeLabel.WALK: "Walk",
}

# Fixed taxonomy order used by the confusion matrix and all reports.
MODE_ORDER: tuple[ModeLabel, ...] = tuple(ModeLabel)

# Google movement labels -> mode. Keys are lowercase; lookup is
# case-insensitive. Includes the canonical display names so that mapping a
# mode's own display text is a no-op round trip.
DEFAULT_MODE_MAPPING: dict[str, ModeLabel] = {
    "driving": ModeLabel.AUTOMOBILE,
    "in a car": ModeLabel.AUTOMOBILE,
    "on a bus": ModeLabel.LOCAL_TRANSIT,
    "on a tram": ModeLabel.LOCAL_TRANSIT,
    "on a subway": ModeLabel.LOCAL_TRANSIT,
    "on the subway": ModeLabel.LOCAL_TRANSIT,
    "on a ferry": ModeLabel.LOCAL_TRANSIT,
    "on a train": ModeLabel.REGIONAL_TRANSIT,
    "in a taxi": ModeLabel.TAXI_RIDEHAIL,
    "in a rideshare": ModeLabel.TAXI_RIDEHAIL,
    "in a taxi or rideshare": ModeLabel.TAXI_RIDEHAIL,
    "motorcycling": ModeLabel.MOTORCYCLE,
    "on a motorcycle": ModeLabel.MOTORCYCLE,
    "cycling": ModeLabel.CYCLE,
    "on a bicycle": ModeLabel.CYCLE,
    "walking": ModeLabel.WALK,
    "on foot": ModeLabel.WALK,
    "running": ModeLabel.WALK,
    "automobile": ModeLabel.AUTOMOBILE,
    "local transit": ModeLabel.LOCAL_TRANSIT,
    "regional transit": ModeLabel.REGIONAL_TRANSIT,
    "taxi/ridehail": ModeLabel.TAXI_RIDEHAIL,
    "motorcycle": ModeLabel.MOTORCYCLE,
    "cycle": ModeLabel.CYCLE,
    "walk": ModeLabel.WALK,
}


def map_inferred_mode(
    raw_label: str, mapping: dict[str, ModeLabel] | None = None
) -> ModeLabel | None:
    """Normalize a Google movement label to the 7-mode taxonomy.

    Returns None for labels outside the mapping table (an unmapped leg is a
    value the pipeline carries along, never an error and never a default).
    """
    table = DEFAULT_MODE_MAPPING if mapping is None else mapping
    return table.get(raw_label.strip().lower())


def load_mode_mapping(path: str | Path) -> dict[str, ModeLabel]:
    """Load a mapping override from a JSON file of {label: mode value}."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return {str(k).strip().lower(): ModeLabel(v) for k, v in raw.items()}


# Dropdown options offered when a respondent validates a trip leg. The three
# occupancy variants of driving all collapse to Automobile.
MODE_RESPONSE_OPTIONS: tuple[str, ...] = (
    "Driving alone",
    "Driving with household members only",
    "Driving with non-household members only",
    "Local transit (bus, streetcar, subway)",
    "Regional transit (GO train, GO bus)",
    "Taxi or ride-hailing",
    "Motorcycle",
    "Cycling",
    "Walking",
)

_RESPONSE_COLLAPSE: dict[str, ModeLabel] = {
    "local transit (bus, streetcar, subway)": ModeLabel.LOCAL_TRANSIT,
    "regional transit (go train, go bus)": ModeLabel.REGIONAL_TRANSIT,
    "taxi or ride-hailing": ModeLabel.TAXI_RIDEHAIL,
    "motorcycle": ModeLabel.MOTORCYCLE,
    "cycling": ModeLabel.CYCLE,
    "walking": ModeLabel.WALK,
    # canonical mode values are accepted too (used by batch tooling)
    **{m.value: m for m in ModeLabel},
}


def collapse_mode_response(response: str) -> ModeLabel:
    """Collapse a detailed survey mode response to the 7-mode taxonomy."""
    text = response.strip().lower()
    if text.startswith("driving"):
        return ModeLabel.AUTOMOBILE
    try:
        return _RESPONSE_COLLAPSE[text]
    except KeyError:
        raise UnknownModeResponseError(f"unknown mode response: {response!r}") from None
