"""Shared fixture builders for the test suite."""

from __future__ import annotations

from datetime import date, datetime, timedelta, timezone

from glhdiary.diary import (
    Activity,
    Employment,
    Gender,
    IncomeBand,
    Respondent,
    TravelDiary,
    TripLeg,
    WorkplaceArrangement,
)
from glhdiary.kml import GeoPoint, TimeWindow
from glhdiary.modes import MODE_ORDER, ModeLabel

FIG2_DAY = date(2023, 7, 2)

# (kind, name, address, local HH:MM begin, HH:MM end, (lat, lon) endpoints)
_PLACES = {
    "golden": (43.8419, -79.3940),
    "mikaku": (43.8421, -79.3905),
    "home": (43.8152, -79.3978),
    "alley": (43.8442, -79.3847),
    "burgundy": (43.8071, -79.4410),
}

FIG2_ROWS = [
    ("visit", "Golden Court Plaza 黃金商場", "330 Hwy 7, Richmond Hill, ON L4B 3P8",
     "13:30", "14:26", ("golden",)),
    ("move", "Driving", None, "14:26", "14:29", ("golden", "mikaku")),
    ("visit", "Mikaku Udon Bar", "360 Hwy 7 Unit 10, Richmond Hill, ON L4B 3Y7",
     "14:29", "14:55", ("mikaku",)),
    ("move", "Driving", None, "14:55", "14:59", ("mikaku", "home")),
    ("visit", "Home (11 Gandhi Ln)", "11 Gandhi Ln, Markham, ON L3T 7Z2",
     "14:59", "15:44", ("home",)),
    ("move", "Driving", None, "15:44", "15:47", ("home", "alley")),
    ("visit", "The Alley Hub", "8750 Bayview Ave Unit 1, Richmond Hill, ON L4B 4V9",
     "15:47", "15:57", ("alley",)),
    ("move", "Driving", None, "15:57", "16:08", ("alley", "burgundy")),
    ("visit", "46 Burgundy Trail", "46 Burgundy Trail, Thornhill, ON L4J 8V9",
     "16:08", "17:57", ("burgundy",)),
    ("move", "Driving", None, "17:57", "18:06", ("burgundy", "home")),
]


def _placemark(kind: str, name: str, address: str | None, begin: str, end: str,
               places: tuple[str, ...]) -> str:
    # Figure-2 timestamps are Toronto local (EDT, UTC-4) on 2023-07-02.
    span = (
        f"<TimeSpan><begin>2023-07-02T{begin}:00-04:00</begin>"
        f"<end>2023-07-02T{end}:00-04:00</end></TimeSpan>"
    )
    addr = f"<address>{address}</address>" if address else ""
    coords = " ".join(f"{_PLACES[p][1]},{_PLACES[p][0]},0" for p in places)
    if kind == "visit":
        geometry = f"<Point><coordinates>{coords}</coordinates></Point>"
    else:
        geometry = f"<LineString><coordinates>{coords}</coordinates></LineString>"
    return f"<Placemark><name>{name}</name>{addr}{span}{geometry}</Placemark>"


def figure2_kml(rows=None) -> bytes:
    """The reconstructed 2023-07-02 day export (5 visits, 5 movements)."""
    marks = "".join(_placemark(*row) for row in (rows if rows is not None else FIG2_ROWS))
    return (
        '<?xml version="1.0" encoding="UTF-8"?>'
        '<kml xmlns="http://www.opengis.net/kml/2.2" '
        'xmlns:gx="http://www.google.com/kml/ext/2.2">'
        f"<Document><name>history-2023-07-02</name>{marks}</Document></kml>"
    ).encode("utf-8")


def figure2_respondent(respondent_id: str = "r-fig2") -> Respondent:
    return Respondent(
        id=respondent_id,
        age=34,
        gender=Gender.FEMALE,
        household_size=3,
        employment=Employment.FULL_TIME,
        workplace_arrangement=WorkplaceArrangement.HOME_OR_HYBRID,
        income_band=IncomeBand.FROM_80K_TO_125K,
    )


_T0 = datetime(2023, 7, 2, 12, 0, tzinfo=timezone.utc)


def window(start_min: float, end_min: float) -> TimeWindow:
    return TimeWindow(_T0 + timedelta(minutes=start_min), _T0 + timedelta(minutes=end_min))


def make_activity(start_min: float = 0.0, end_min: float = 30.0, name: str = "Somewhere",
                  purpose=None, day: date = FIG2_DAY) -> Activity:
    return Activity(
        name=name,
        address=None,
        location=GeoPoint(43.7, -79.4),
        window=window(start_min, end_min),
        source_date=day,
        purpose=purpose,
    )


def make_leg(start_min: float = 0.0, end_min: float = 10.0,
             validated: ModeLabel | None = None, inferred: ModeLabel | None = None,
             distance_m: float = 1000.0, day: date = FIG2_DAY) -> TripLeg:
    return TripLeg(
        name="Driving",
        window=window(start_min, end_min),
        source_date=day,
        path=(GeoPoint(43.7, -79.4), GeoPoint(43.71, -79.41)),
        raw_mode_label="Driving",
        inferred_mode=inferred,
        validated_mode=validated,
        distance_m=distance_m,
    )


def diary_of(events, respondent_id: str = "r") -> TravelDiary:
    days = tuple(sorted({e.source_date for e in events})) or (FIG2_DAY,)
    return TravelDiary(respondent_id=respondent_id, days=days, events=tuple(events))


# Mode confusion counts as published: rows are respondent-validated modes,
# columns Google-inferred, both in MODE_ORDER.
TABLE2_COUNTS = (
    (3642, 30, 0, 0, 1, 10, 45),
    (32, 483, 2, 0, 0, 2, 18),
    (8, 24, 30, 0, 0, 0, 2),
    (66, 4, 2, 8, 0, 1, 4),
    (4, 1, 0, 0, 1, 1, 1),
    (7, 5, 0, 0, 0, 135, 16),
    (16, 4, 0, 0, 0, 6, 1095),
)

TABLE2_PRECISION_PCT = (96.5, 87.7, 88.2, 100.0, 50.0, 87.1, 92.7)
TABLE2_RECALL_PCT = (97.7, 89.9, 46.9, 9.4, 12.5, 82.8, 97.7)


def legs_from_counts(counts=TABLE2_COUNTS) -> list[TripLeg]:
    """Expand a confusion-count table into one leg per tallied pair."""
    legs = []
    minute = 0
    for i, validated in enumerate(MODE_ORDER):
        for j, inferred in enumerate(MODE_ORDER):
            for _ in range(counts[i][j]):
                legs.append(
                    make_leg(minute, minute + 0.5, validated=validated, inferred=inferred)
                )
                minute += 1
    return legs


# Published coefficients of the inference-error logit, in FEATURE_NAMES order.
TABLE3_BETA = (3.15, -7.01, -6.17, -2.63, -7.73, 1.50, 0.93, -0.70, 0.16, 0.94, -0.45)


def simulate_design_rows(n: int, seed: int, beta=TABLE3_BETA):
    """Draw design rows with outcomes generated from ``beta``.

    Feature draws: self-reported mode with probabilities mirroring the
    published row shares (taxi/ride-hail and motorcycle carry no dummy);
    speed band 20/35/45 over <5 / 5-19 / >=20 km/h; distance >= 5 km with
    p=0.35; ln density ~ N(0.5, 1); age<30 with p=0.25; full-time with
    p=0.57. All independent; seeded and deterministic.
    """
    import numpy as np

    from glhdiary.logit import DesignRow, N_FEATURES

    rng = np.random.default_rng(seed)
    mode_p = np.array([0.653, 0.094, 0.0112, 0.0149, 0.0014, 0.0286, 0.1965])
    modes = rng.choice(7, size=n, p=mode_p / mode_p.sum())
    dummy_for_mode = {0: 1, 1: 2, 2: 3, 5: 4, 6: 4}
    speed_band = rng.choice(3, size=n, p=[0.20, 0.35, 0.45])
    dist_ge5 = rng.random(n) < 0.35
    ln_density = rng.normal(0.5, 1.0, size=n)
    age_lt30 = rng.random(n) < 0.25
    fulltime = rng.random(n) < 0.57

    X = np.zeros((n, N_FEATURES))
    X[:, 0] = 1.0
    for i, mode in enumerate(modes):
        dummy = dummy_for_mode.get(int(mode))
        if dummy is not None:
            X[i, dummy] = 1.0
    X[speed_band == 0, 5] = 1.0
    X[speed_band == 1, 6] = 1.0
    X[dist_ge5, 7] = 1.0
    X[:, 8] = ln_density
    X[age_lt30, 9] = 1.0
    X[fulltime, 10] = 1.0

    p = 1.0 / (1.0 + np.exp(-(X @ np.asarray(beta))))
    y = (rng.random(n) < p).astype(int)
    return [DesignRow(y=int(yi), x=tuple(xi)) for yi, xi in zip(y, X)]
