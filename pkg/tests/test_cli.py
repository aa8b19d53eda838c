"""CLI subcommands as a thin client over the pipeline."""

import json

import pytest

from glhdiary.cli import main
from glhdiary.store import Store, load

from helpers import (
    FIG2_DAY,
    diary_of,
    figure2_kml,
    figure2_respondent,
    legs_from_counts,
    simulate_design_rows,
)

RESPONDENTS_CSV = (
    "respondent_id,age,gender,household_size,employment,"
    "workplace_arrangement,income_band,home_lat,home_lon\n"
    "r-fig2,34,female,3,full_time,home_or_hybrid,80k_to_125k,43.8152,-79.3978\n"
)


@pytest.fixture
def ingested_store(tmp_path):
    kml_dir = tmp_path / "kml"
    (kml_dir / "r-fig2").mkdir(parents=True)
    (kml_dir / "r-fig2" / "history-2023-07-02.kml").write_bytes(figure2_kml())
    respondents = tmp_path / "respondents.csv"
    respondents.write_text(RESPONDENTS_CSV)
    out = tmp_path / "store"
    status = main(
        [
            "ingest",
            "--kml-dir", str(kml_dir),
            "--respondents-csv", str(respondents),
            "--out", str(out),
        ]
    )
    assert status == 0
    return out


class TestIngest:
    def test_empty_inputs_exit_zero(self, tmp_path):
        kml_dir = tmp_path / "kml"
        kml_dir.mkdir()
        respondents = tmp_path / "respondents.csv"
        respondents.write_text(RESPONDENTS_CSV.splitlines()[0] + "\n")
        status = main(
            [
                "ingest",
                "--kml-dir", str(kml_dir),
                "--respondents-csv", str(respondents),
                "--out", str(tmp_path / "store"),
            ]
        )
        assert status == 0
        assert load(tmp_path / "store") == {}

    def test_fixture_ingest_builds_diary(self, ingested_store):
        records = load(ingested_store)
        assert list(records) == ["r-fig2"]
        assert len(records["r-fig2"].diary.events) == 10
        assert records["r-fig2"].respondent.home_location is not None

    def test_bad_kml_exits_one(self, tmp_path, capsys):
        kml_dir = tmp_path / "kml"
        (kml_dir / "r-fig2").mkdir(parents=True)
        (kml_dir / "r-fig2" / "history-2023-07-02.kml").write_bytes(b"<kml><broken>")
        respondents = tmp_path / "respondents.csv"
        respondents.write_text(RESPONDENTS_CSV)
        status = main(
            [
                "ingest",
                "--kml-dir", str(kml_dir),
                "--respondents-csv", str(respondents),
                "--out", str(tmp_path / "store"),
            ]
        )
        assert status == 1
        error = json.loads(capsys.readouterr().err.strip())
        assert error["error"] == "malformed_xml"


class TestTrips:
    def test_trip_table_written(self, ingested_store, tmp_path):
        out = tmp_path / "trips.csv"
        assert main(["trips", "--store", str(ingested_store), "--out", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 6
        assert lines[1].split(",")[2] == "single_mode"


class TestConfusion:
    def test_engineered_store_reproduces_published_matrix(self, tmp_path):
        store = Store(tmp_path / "store")
        respondent = figure2_respondent("r-matrix")
        store.register(respondent)
        diary = diary_of(legs_from_counts(), respondent_id="r-matrix")
        record = store.get("r-matrix")
        from dataclasses import replace

        store.put(replace(record, diary=diary))
        out = tmp_path / "matrix.csv"
        assert main(["confusion", "--store", str(tmp_path / "store"), "--out", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[1] == "Automobile,3642,30,0,0,1,10,45,97.7"
        assert lines[-1] == "Precision (%),96.5,87.7,88.2,100.0,50.0,87.1,92.7,"


class TestStats:
    def test_report_written(self, ingested_store, tmp_path):
        census = tmp_path / "census.csv"
        census.write_text(
            "attribute,category,share\ngender,Male,0.488\ngender,Female,0.512\n"
        )
        out = tmp_path / "report.json"
        status = main(
            [
                "stats",
                "--store", str(ingested_store),
                "--census", str(census),
                "--out", str(out),
            ]
        )
        assert status == 0
        report = json.loads(out.read_text())
        assert report["trips"]["count"] == 5
        assert report["marginals"][0]["attribute"] == "gender"


def build_logit_store(root, n_legs_per_respondent=150):
    """Store with enough variation in modes, speeds, origins, and
    respondents for a well-posed fit."""
    import random
    from dataclasses import replace

    from glhdiary.kml import GeoPoint
    from glhdiary.modes import ModeLabel

    from helpers import make_leg

    store = Store(root)
    rng = random.Random(5)
    profiles = [("r-young", 25, "full_time"), ("r-mid", 45, "part_time"), ("r-old", 67, "full_time")]
    for respondent_id, age, employment in profiles:
        from glhdiary.diary import Employment

        respondent = replace(
            figure2_respondent(respondent_id), age=age, employment=Employment(employment)
        )
        store.register(respondent)
        legs = []
        minute = 0.0
        for _ in range(n_legs_per_respondent):
            validated = rng.choice(list(ModeLabel))
            agree = rng.random() < 0.8
            inferred = validated if agree else rng.choice(
                [m for m in ModeLabel if m is not validated]
            )
            origin = rng.choice([GeoPoint(43.70, -79.40), GeoPoint(43.80, -79.40)])
            leg = make_leg(
                minute,
                minute + rng.choice([4.0, 12.0, 40.0]),
                validated=validated,
                inferred=inferred,
                distance_m=rng.choice([800.0, 3000.0, 9000.0]),
            )
            legs.append(replace(leg, path=(origin, leg.path[1])))
            minute += 60.0
        store.put(
            replace(store.get(respondent_id), diary=diary_of(legs, respondent_id=respondent_id))
        )
    return store


class TestLogit:
    def test_synthetic_store_fits_and_converges(self, tmp_path):
        build_logit_store(tmp_path / "store")
        zones = tmp_path / "zones.csv"
        zones.write_text(
            "zone_id,centroid_lat,centroid_lon,density_kppl_km2\n"
            "1,43.70,-79.40,5.0\n2,43.80,-79.40,1.2\n"
        )
        out = tmp_path / "fit.json"
        status = main(
            [
                "logit",
                "--store", str(tmp_path / "store"),
                "--zones", str(zones),
                "--out", str(out),
            ]
        )
        assert status == 0
        fit = json.loads(out.read_text())
        assert fit["converged"] is True
        assert fit["n_obs"] == 450
        assert 0.0 <= fit["rho_square"] < 1.0

    def test_missing_zone_file_is_internal_error_free(self, ingested_store, tmp_path, capsys):
        status = main(
            [
                "logit",
                "--store", str(ingested_store),
                "--zones", str(tmp_path / "nope.csv"),
                "--out", str(tmp_path / "fit.json"),
            ]
        )
        assert status == 2  # filesystem problem, not a domain error
        assert "message" in json.loads(capsys.readouterr().err.strip())
