"""Descriptive statistics: trip/activity distributions, mode shares, trip
rate, and the sample-vs-reference demographic comparison."""

from __future__ import annotations

import csv
import io
import math
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .diary import (
    Activity,
    Employment,
    Gender,
    IncomeBand,
    PurposeCategory,
    Respondent,
)
from .errors import UnknownCategoryError, ZeroPersonDaysError
from .geo import EARTH_RADIUS_M, haversine_m, polyline_length_m  # noqa: F401  (re-export)
from .modes import ModeLabel
from .trips import Trip

TRIP_DISTANCE_EDGES_KM = (0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, math.inf)
TRIP_DURATION_EDGES_MIN = (0.0, 10.0, 30.0, 60.0, 120.0, math.inf)
ACTIVITY_DURATION_EDGES_MIN = (0.0, 5.0, 10.0, 30.0, 60.0, 120.0, 240.0, math.inf)

# Out-of-home activity classes reported in the composition breakdown.
OUT_OF_HOME_CLASSES = (
    PurposeCategory.SHOPPING_ERRANDS,
    PurposeCategory.WORK,
    PurposeCategory.SCHOOL,
    PurposeCategory.OTHER,
)


@dataclass(frozen=True, slots=True)
class Histogram:
    """Counts over left-closed right-open bins; shares are counts/total."""

    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def shares(self) -> tuple[float, ...]:
        total = self.total
        if total == 0:
            return tuple(0.0 for _ in self.counts)
        return tuple(c / total for c in self.counts)

    @classmethod
    def from_values(cls, values: Iterable[float], edges: Sequence[float]) -> "Histogram":
        counts = [0] * (len(edges) - 1)
        for v in values:
            i = bisect_right(edges, v) - 1
            if i < 0:
                raise ValueError(f"value below first bin edge: {v}")
            counts[min(i, len(counts) - 1)] += 1
        return cls(bin_edges=tuple(edges), counts=tuple(counts))


def trip_distance_histogram(trips: Sequence[Trip]) -> Histogram:
    return Histogram.from_values(
        (t.distance_m / 1000.0 for t in trips), TRIP_DISTANCE_EDGES_KM
    )


@dataclass(frozen=True, slots=True)
class TripDurationStats:
    histogram: Histogram
    mean_min: float | None
    median_min: float | None


def trip_duration_stats(trips: Sequence[Trip]) -> TripDurationStats:
    """Duration histogram plus mean and lower-median, in minutes."""
    minutes = sorted(t.duration_s / 60.0 for t in trips)
    hist = Histogram.from_values(minutes, TRIP_DURATION_EDGES_MIN)
    if not minutes:
        return TripDurationStats(hist, mean_min=None, median_min=None)
    return TripDurationStats(
        histogram=hist,
        mean_min=sum(minutes) / len(minutes),
        median_min=minutes[(len(minutes) - 1) // 2],
    )


# Folding of the 7-mode taxonomy into the four reported shares.
_AGGREGATE_MODE = {
    ModeLabel.AUTOMOBILE: "automobile",
    ModeLabel.TAXI_RIDEHAIL: "automobile",
    ModeLabel.MOTORCYCLE: "automobile",
    ModeLabel.LOCAL_TRANSIT: "transit",
    ModeLabel.REGIONAL_TRANSIT: "transit",
    ModeLabel.WALK: "walk",
    ModeLabel.CYCLE: "cycle",
}

AGGREGATE_MODES = ("automobile", "transit", "walk", "cycle")


@dataclass(frozen=True, slots=True)
class ModeShare:
    shares: Mapping[str, float]
    total: int
    unlabeled: int  # trips with no main mode, excluded from the shares


def mode_share(trips: Sequence[Trip]) -> ModeShare:
    counts = dict.fromkeys(AGGREGATE_MODES, 0)
    unlabeled = 0
    for trip in trips:
        if trip.main_mode is None:
            unlabeled += 1
        else:
            counts[_AGGREGATE_MODE[trip.main_mode]] += 1
    total = sum(counts.values())
    if total == 0:
        return ModeShare(shares={m: 0.0 for m in AGGREGATE_MODES}, total=0, unlabeled=unlabeled)
    return ModeShare(
        shares={m: counts[m] / total for m in AGGREGATE_MODES},
        total=total,
        unlabeled=unlabeled,
    )


def trip_rate(trip_count: int, respondents: int, days_per_respondent: int) -> float:
    """Trips per person-day."""
    if respondents <= 0 or days_per_respondent <= 0:
        raise ZeroPersonDaysError(
            f"person-days must be positive: {respondents} x {days_per_respondent}"
        )
    return trip_count / (respondents * days_per_respondent)


@dataclass(frozen=True, slots=True)
class ActivityComposition:
    shares: Mapping[PurposeCategory, float]
    total: int  # out-of-home activities with a validated purpose
    excluded_home: int
    excluded_unvalidated: int


def activity_composition(activities: Sequence[Activity]) -> ActivityComposition:
    """Shares of out-of-home activity classes.

    Home and work-from-home episodes are home-located and drop out of the
    denominator, as do activities without a validated purpose.
    """
    counts = dict.fromkeys(OUT_OF_HOME_CLASSES, 0)
    excluded_home = excluded_unvalidated = 0
    for activity in activities:
        if activity.purpose is None:
            excluded_unvalidated += 1
        elif activity.purpose.category in (PurposeCategory.HOME, PurposeCategory.WORK_FROM_HOME):
            excluded_home += 1
        else:
            counts[activity.purpose.category] += 1
    total = sum(counts.values())
    shares = {
        c: (counts[c] / total if total else 0.0) for c in OUT_OF_HOME_CLASSES
    }
    return ActivityComposition(
        shares=shares,
        total=total,
        excluded_home=excluded_home,
        excluded_unvalidated=excluded_unvalidated,
    )


def activity_duration_histograms(
    activities: Sequence[Activity],
) -> dict[PurposeCategory, Histogram]:
    """One duration histogram (minutes) per out-of-home activity class."""
    buckets: dict[PurposeCategory, list[float]] = {c: [] for c in OUT_OF_HOME_CLASSES}
    for activity in activities:
        if activity.purpose is not None and activity.purpose.category in buckets:
            buckets[activity.purpose.category].append(activity.duration_s / 60.0)
    return {
        c: Histogram.from_values(values, ACTIVITY_DURATION_EDGES_MIN)
        for c, values in buckets.items()
    }


# --- Demographic marginals -------------------------------------------------

MARGINAL_ATTRIBUTES = ("gender", "age_band", "household_size", "employment", "income_band")

_GENDER_CATEGORY = {
    Gender.MALE: "Male",
    Gender.FEMALE: "Female",
    Gender.OTHER_UNSTATED: "Other/Unstated",
}

_EMPLOYMENT_CATEGORY = {
    Employment.FULL_TIME: "Employed full-time",
    Employment.PART_TIME: "Employed part-time",
    Employment.NOT_EMPLOYED: "Not employed",
}

_INCOME_CATEGORY = {
    IncomeBand.BELOW_40K: "below $39,999",
    IncomeBand.FROM_40K_TO_80K: "$40,000 - $79,999",
    IncomeBand.FROM_80K_TO_125K: "$80,000 - $124,999",
    IncomeBand.FROM_125K_TO_200K: "$125,000 - $199,999",
    IncomeBand.ABOVE_200K: "$200,000 and above",
    IncomeBand.DECLINE_UNKNOWN: "Decline to answer/don't know",
}


def _age_band(age: int) -> str | None:
    # The comparison covers ages 20+; younger respondents drop out of the
    # age marginal only.
    if age < 20:
        return None
    if age < 30:
        return "20-29"
    if age < 40:
        return "30-39"
    if age < 50:
        return "40-49"
    if age < 65:
        return "50-64"
    return "65+"


def respondent_category(respondent: Respondent, attribute: str) -> str | None:
    if attribute == "gender":
        return _GENDER_CATEGORY[respondent.gender]
    if attribute == "age_band":
        return _age_band(respondent.age)
    if attribute == "household_size":
        return str(respondent.household_size) if respondent.household_size < 5 else "5+"
    if attribute == "employment":
        return _EMPLOYMENT_CATEGORY[respondent.employment]
    if attribute == "income_band":
        return _INCOME_CATEGORY[respondent.income_band]
    raise ValueError(f"unknown attribute: {attribute}")


@dataclass(frozen=True, slots=True)
class MarginalTable:
    attribute: str
    categories: tuple[str, ...]
    sample_share: tuple[float, ...]
    reference_share: tuple[float | None, ...]
    diff_pp: tuple[float | None, ...]
    sample_n: int


ReferenceMarginals = Mapping[str, Sequence[tuple[str, float | None]]]


def load_reference_csv(path: str | Path) -> dict[str, list[tuple[str, float | None]]]:
    """Read reference marginals from a CSV of attribute,category,share.

    Share is a fraction in [0, 1]; an empty share marks a category the
    reference source does not report (kept so sample shares still cover it).
    """
    reference: dict[str, list[tuple[str, float | None]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            share = row["share"].strip()
            reference.setdefault(row["attribute"].strip(), []).append(
                (row["category"].strip(), float(share) if share else None)
            )
    return reference


def marginals_comparison(
    respondents: Sequence[Respondent], reference: ReferenceMarginals
) -> list[MarginalTable]:
    """Sample vs. reference share per demographic attribute, in percentage points."""
    tables: list[MarginalTable] = []
    for attribute in MARGINAL_ATTRIBUTES:
        if attribute not in reference:
            continue
        categories = tuple(c for c, _ in reference[attribute])
        ref_shares = tuple(s for _, s in reference[attribute])
        counts = dict.fromkeys(categories, 0)
        for respondent in respondents:
            category = respondent_category(respondent, attribute)
            if category is None:
                continue
            if category not in counts:
                raise UnknownCategoryError(
                    f"category {category!r} of attribute {attribute!r} missing from reference"
                )
            counts[category] += 1
        n = sum(counts.values())
        sample = tuple(counts[c] / n if n else 0.0 for c in categories)
        diffs = tuple(
            (s - r) * 100.0 if r is not None else None for s, r in zip(sample, ref_shares)
        )
        tables.append(
            MarginalTable(
                attribute=attribute,
                categories=categories,
                sample_share=sample,
                reference_share=ref_shares,
                diff_pp=diffs,
                sample_n=n,
            )
        )
    return tables


# --- Report assembly --------------------------------------------------------


def _histogram_json(hist: Histogram) -> dict:
    return {
        "bin_edges": [None if math.isinf(e) else e for e in hist.bin_edges],
        "counts": list(hist.counts),
        "shares": list(hist.shares),
    }


def build_stats_report(
    respondents: Sequence[Respondent],
    person_days: int,
    trips: Sequence[Trip],
    activities: Sequence[Activity],
    reference: ReferenceMarginals | None = None,
) -> dict:
    """Assemble the machine-readable descriptive-statistics report."""
    shares = mode_share(trips)
    durations = trip_duration_stats(trips)
    composition = activity_composition(activities)
    report = {
        "schema": "glh-report/1",
        "respondents": len(respondents),
        "person_days": person_days,
        "trips": {
            "count": len(trips),
            "per_person_day": (len(trips) / person_days) if person_days > 0 else None,
            "distance_km_histogram": _histogram_json(trip_distance_histogram(trips)),
            "duration_min_histogram": _histogram_json(durations.histogram),
            "duration_mean_min": durations.mean_min,
            "duration_median_min": durations.median_min,
            "mode_share": dict(shares.shares),
            "mode_share_total": shares.total,
            "unlabeled_trips": shares.unlabeled,
        },
        "activities": {
            "count": len(activities),
            "out_of_home_composition": {c.value: s for c, s in composition.shares.items()},
            "out_of_home_total": composition.total,
            "excluded_home": composition.excluded_home,
            "excluded_unvalidated": composition.excluded_unvalidated,
            "duration_min_histograms": {
                c.value: _histogram_json(h)
                for c, h in activity_duration_histograms(activities).items()
            },
        },
    }
    if reference is not None:
        report["marginals"] = [
            {
                "attribute": t.attribute,
                "categories": list(t.categories),
                "sample_share": list(t.sample_share),
                "reference_share": list(t.reference_share),
                "diff_pp": list(t.diff_pp),
                "sample_n": t.sample_n,
            }
            for t in marginals_comparison(respondents, reference)
        ]
    return report


def _edge_label(lo: float, hi: float) -> str:
    if math.isinf(hi):
        return f">= {lo:g}"
    return f"[{lo:g}, {hi:g})"


def format_histogram_rows(hist: Histogram) -> list[str]:
    rows = []
    for i, count in enumerate(hist.counts):
        label = _edge_label(hist.bin_edges[i], hist.bin_edges[i + 1])
        rows.append(f"  {label:<14} {count:>8} {hist.shares[i] * 100.0:>7.1f}%")
    return rows


def format_stats_text(report: dict) -> str:
    """Plain-text dump of the report for terminals and logs."""
    lines = [
        f"respondents: {report['respondents']}   person-days: {report['person_days']}",
        f"trips: {report['trips']['count']}"
        + (
            f"   per person-day: {report['trips']['per_person_day']:.2f}"
            if report["trips"]["per_person_day"] is not None
            else ""
        ),
        "trip distance (km):",
    ]

    def hist_from_json(d: dict) -> Histogram:
        edges = tuple(math.inf if e is None else e for e in d["bin_edges"])
        return Histogram(bin_edges=edges, counts=tuple(d["counts"]))

    lines += format_histogram_rows(hist_from_json(report["trips"]["distance_km_histogram"]))
    lines.append("trip duration (min):")
    lines += format_histogram_rows(hist_from_json(report["trips"]["duration_min_histogram"]))
    mean = report["trips"]["duration_mean_min"]
    median = report["trips"]["duration_median_min"]
    if mean is not None:
        lines.append(f"  mean {mean:.1f} min, median {median:.1f} min")
    lines.append("mode share:")
    for mode in AGGREGATE_MODES:
        lines.append(f"  {mode:<12} {report['trips']['mode_share'][mode] * 100.0:>6.1f}%")
    lines.append("out-of-home activity composition:")
    for category, share in report["activities"]["out_of_home_composition"].items():
        lines.append(f"  {category:<18} {share * 100.0:>6.1f}%")
    for table in report.get("marginals", ()):
        lines.append(f"marginals: {table['attribute']} (n={table['sample_n']})")
        for i, category in enumerate(table["categories"]):
            ref = table["reference_share"][i]
            diff = table["diff_pp"][i]
            lines.append(
                f"  {category:<32} sample {table['sample_share'][i] * 100.0:>5.1f}%"
                + (f"  reference {ref * 100.0:>5.1f}%  diff {diff:+.1f} pp" if ref is not None else "")
            )
    return "\n".join(lines) + "\n"


def histogram_csv(hist: Histogram) -> str:
    """CSV rendering of one histogram (bin lower/upper edge, count, share)."""
    out = io.StringIO()
    out.write("bin_lo,bin_hi,count,share\n")
    for i, count in enumerate(hist.counts):
        hi = hist.bin_edges[i + 1]
        out.write(
            f"{hist.bin_edges[i]:g},{'inf' if math.isinf(hi) else format(hi, 'g')},"
            f"{count},{hist.shares[i]:.6f}\n"
        )
    return out.getvalue()
