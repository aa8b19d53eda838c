"""Batch command-line client for the pipeline.

Subcommands operate on a store directory and write their outputs through a
temp file + atomic rename, so interrupted runs never leave partial files.
Exit status: 0 success, 1 input error, 2 internal error; errors go to
stderr as single-line JSON.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
from datetime import date
from pathlib import Path

from .confusion import build_confusion, confusion_csv
from .diary import (
    Activity,
    Employment,
    Gender,
    IncomeBand,
    Respondent,
    TripLeg,
    WorkplaceArrangement,
)
from .errors import GlhDiaryError
from .kml import GeoPoint, parse_kml
from .logit import (
    build_design,
    fit,
    fit_report_json,
    fit_report_text,
    load_zones_csv,
    lookup_density,
)
from .metrics import build_stats_report, format_stats_text, load_reference_csv
from .modes import load_mode_mapping
from .serialization import canonical_json_bytes
from .store import Store
from .trips import aggregate, trips_csv

_DATE_RE = re.compile(r"(\d{4}-\d{2}-\d{2})")


def _atomic_write_bytes(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def _read_respondents_csv(path: Path) -> list[Respondent]:
    respondents = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            home = None
            if row.get("home_lat") and row.get("home_lon"):
                home = GeoPoint(float(row["home_lat"]), float(row["home_lon"]))
            respondents.append(
                Respondent(
                    id=row["respondent_id"].strip(),
                    age=int(row["age"]),
                    gender=Gender(row["gender"].strip()),
                    household_size=int(row["household_size"]),
                    employment=Employment(row["employment"].strip()),
                    workplace_arrangement=WorkplaceArrangement(
                        row["workplace_arrangement"].strip()
                    ),
                    income_band=IncomeBand(row["income_band"].strip()),
                    home_location=home,
                )
            )
    return respondents


def cmd_ingest(args: argparse.Namespace) -> int:
    if args.mode_map:
        # swap in the configured mapping for this process
        from . import modes

        modes.DEFAULT_MODE_MAPPING.clear()
        modes.DEFAULT_MODE_MAPPING.update(load_mode_mapping(args.mode_map))

    respondents = _read_respondents_csv(Path(args.respondents_csv))
    kml_root = Path(args.kml_dir)
    store = Store(args.out)
    for respondent in respondents:
        record = store.register(respondent)
        day_dir = kml_root / respondent.id
        if not day_dir.is_dir():
            continue
        for kml_path in sorted(day_dir.glob("*.kml")):
            match = _DATE_RE.search(kml_path.name)
            if match is None:
                raise GlhDiaryError(f"cannot find a date in filename {kml_path.name!r}")
            store.add_day(respondent.id, date.fromisoformat(match.group(1)), kml_path.read_bytes())
    print(f"ingested {len(respondents)} respondents into {args.out}")
    return 0


def cmd_trips(args: argparse.Namespace) -> int:
    store = Store(args.store)
    table = {r.respondent_id: aggregate(r.diary) for r in store.records()}
    _atomic_write_bytes(Path(args.out), trips_csv(table).encode("utf-8"))
    print(f"wrote {sum(len(t) for t in table.values())} trips to {args.out}")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    store = Store(args.store)
    records = list(store.records())
    respondents = [r.respondent for r in records]
    person_days = sum(len(r.diary.days) for r in records)
    trips = [t for r in records for t in aggregate(r.diary)]
    activities = [e for r in records for e in r.diary.events if isinstance(e, Activity)]
    reference = load_reference_csv(args.census) if args.census else None
    report = build_stats_report(respondents, person_days, trips, activities, reference)
    _atomic_write_bytes(Path(args.out), canonical_json_bytes(report))
    sys.stdout.write(format_stats_text(report))
    if args.histograms_dir:
        from .metrics import Histogram, histogram_csv
        import math

        for name in ("distance_km_histogram", "duration_min_histogram"):
            data = report["trips"][name]
            hist = Histogram(
                bin_edges=tuple(math.inf if e is None else e for e in data["bin_edges"]),
                counts=tuple(data["counts"]),
            )
            _atomic_write_bytes(
                Path(args.histograms_dir) / f"{name}.csv", histogram_csv(hist).encode("utf-8")
            )
    return 0


def cmd_confusion(args: argparse.Namespace) -> int:
    store = Store(args.store)
    legs = [e for r in store.records() for e in r.diary.events if isinstance(e, TripLeg)]
    matrix = build_confusion(legs)
    _atomic_write_bytes(Path(args.out), confusion_csv(matrix).encode("utf-8"))
    print(f"matrix total {matrix.total}, excluded {matrix.excluded}, written to {args.out}")
    return 0


def cmd_logit(args: argparse.Namespace) -> int:
    store = Store(args.store)
    zones = load_zones_csv(args.zones)
    rows = []
    skipped = 0
    for record in store.records():
        for event in record.diary.events:
            if not isinstance(event, TripLeg):
                continue
            if (
                event.validated_mode is None
                or event.inferred_mode is None
                or event.duration_s <= 0.0
            ):
                skipped += 1
                continue
            origin = lookup_density(event.path[0], zones)
            rows.append(build_design(event, record.respondent, origin))
    result = fit(rows)
    payload = fit_report_json(result)
    payload["skipped_legs"] = skipped
    _atomic_write_bytes(Path(args.out), canonical_json_bytes(payload))
    sys.stdout.write(fit_report_text(result))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    host, _, port = args.listen.rpartition(":")
    app = create_app(
        Store(args.store),
        census_path=args.census,
        static_dir=args.static_dir,
    )
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="glh-diary",
        description="Google Location History travel-diary pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse KML exports and build diaries into a store")
    p.add_argument("--kml-dir", required=True, help="directory with one subdir per respondent")
    p.add_argument("--respondents-csv", required=True)
    p.add_argument("--out", required=True, help="store directory to create/extend")
    p.add_argument("--mode-map", help="JSON file overriding the inferred-mode mapping")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("trips", help="export the aggregated trip table as CSV")
    p.add_argument("--store", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_trips)

    p = sub.add_parser("stats", help="write the descriptive-statistics JSON report")
    p.add_argument("--store", required=True)
    p.add_argument("--census", help="reference marginals CSV (attribute,category,share)")
    p.add_argument("--out", required=True)
    p.add_argument("--histograms-dir", help="also write per-histogram CSV files here")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("confusion", help="export the mode confusion matrix as CSV")
    p.add_argument("--store", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_confusion)

    p = sub.add_parser("logit", help="estimate the mode-inference-error logit model")
    p.add_argument("--store", required=True)
    p.add_argument("--zones", required=True, help="zone density CSV")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_logit)

    p = sub.add_parser("serve", help="run the HTTP survey service")
    p.add_argument("--store", required=True)
    p.add_argument("--listen", default="127.0.0.1:8000")
    p.add_argument("--census", help="reference marginals CSV for /export/stats")
    p.add_argument("--static-dir", help="serve the validation UI from this directory")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GlhDiaryError as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}), file=sys.stderr)
        return 1
    except Exception as exc:  # internal failure, not an input problem
        print(json.dumps({"error": "internal", "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
