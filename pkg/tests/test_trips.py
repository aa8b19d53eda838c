"""Leg grouping and trip classification."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from glhdiary.diary import TripLeg
from glhdiary.errors import EmptyGroupError
from glhdiary.kml import parse_kml
from glhdiary.modes import ModeLabel
from glhdiary.trips import TripCategory, aggregate, classify_group, group_legs, trips_csv
from glhdiary import build_diary

from helpers import FIG2_DAY, diary_of, figure2_kml, figure2_respondent, make_activity, make_leg


def events_from_pattern(pattern):
    """'A' is an activity; a mode label is a leg validated with that mode."""
    events = []
    for i, symbol in enumerate(pattern):
        start = i * 10.0
        if symbol == "A":
            events.append(make_activity(start, start + 10))
        else:
            events.append(
                make_leg(start, start + 10, validated=symbol, distance_m=100.0 * (i + 1))
            )
    return events


class TestGroupLegs:
    def test_single_leg_between_activities(self):
        groups = group_legs(events_from_pattern(["A", ModeLabel.WALK, "A"]))
        assert groups == [[1]]

    def test_boundary_at_activity(self):
        pattern = ["A", ModeLabel.WALK, ModeLabel.WALK, "A", ModeLabel.WALK, "A"]
        assert group_legs(events_from_pattern(pattern)) == [[1, 2], [4]]

    def test_empty(self):
        assert group_legs([]) == []

    @given(
        st.lists(
            st.sampled_from(["A", ModeLabel.WALK, ModeLabel.AUTOMOBILE, ModeLabel.CYCLE]),
            max_size=12,
        )
    )
    def test_partition_property(self, pattern):
        events = events_from_pattern(pattern)
        groups = group_legs(events)
        flattened = [i for group in groups for i in group]
        leg_indices = [i for i, e in enumerate(events) if isinstance(e, TripLeg)]
        assert flattened == leg_indices  # every leg exactly once, in order
        for group in groups:
            assert group == list(range(group[0], group[-1] + 1))


class TestClassifyGroup:
    def test_pure_walk_group(self):
        trip = classify_group([make_leg(0, 10, validated=ModeLabel.WALK)])
        assert trip.category is TripCategory.SINGLE_MODE
        assert trip.main_mode is ModeLabel.WALK
        assert trip.access_mode is ModeLabel.WALK
        assert trip.egress_mode is ModeLabel.WALK

    def test_walk_plus_one_other_mode_is_single_mode(self):
        legs = [
            make_leg(0, 10, validated=ModeLabel.WALK, distance_m=400),
            make_leg(10, 30, validated=ModeLabel.LOCAL_TRANSIT, distance_m=5000),
            make_leg(30, 40, validated=ModeLabel.WALK, distance_m=300),
        ]
        trip = classify_group(legs)
        assert trip.category is TripCategory.SINGLE_MODE
        assert trip.main_mode is ModeLabel.LOCAL_TRANSIT
        assert trip.access_mode is ModeLabel.WALK
        assert trip.egress_mode is ModeLabel.WALK

    def test_two_non_walk_modes_is_multimodal(self):
        legs = [
            make_leg(0, 20, validated=ModeLabel.LOCAL_TRANSIT, distance_m=3000),
            make_leg(20, 60, validated=ModeLabel.REGIONAL_TRANSIT, distance_m=20000),
        ]
        trip = classify_group(legs)
        assert trip.category is TripCategory.MULTIMODAL
        assert trip.main_mode is ModeLabel.REGIONAL_TRANSIT  # longest-distance leg
        assert trip.access_mode is ModeLabel.LOCAL_TRANSIT
        assert trip.egress_mode is ModeLabel.REGIONAL_TRANSIT

    def test_multimodal_tie_goes_to_earliest_leg(self):
        legs = [
            make_leg(0, 10, validated=ModeLabel.CYCLE, distance_m=1000),
            make_leg(10, 20, validated=ModeLabel.AUTOMOBILE, distance_m=1000),
        ]
        assert classify_group(legs).main_mode is ModeLabel.CYCLE

    def test_standalone_non_walk_leg_gets_walk_access_egress(self):
        trip = classify_group([make_leg(0, 10, validated=ModeLabel.AUTOMOBILE)])
        assert trip.category is TripCategory.SINGLE_MODE
        assert trip.main_mode is ModeLabel.AUTOMOBILE
        assert trip.access_mode is ModeLabel.WALK
        assert trip.egress_mode is ModeLabel.WALK

    def test_unvalidated_leg_falls_back_to_inferred_and_flags(self):
        trip = classify_group([make_leg(0, 10, inferred=ModeLabel.AUTOMOBILE)])
        assert trip.main_mode is ModeLabel.AUTOMOBILE
        assert "InferredFallback" in trip.flags

    def test_unlabeled_leg_flagged_and_retained(self):
        trip = classify_group([make_leg(0, 10)])
        assert trip.main_mode is None
        assert "UnlabeledLeg" in trip.flags

    def test_distance_and_duration(self):
        legs = [
            make_leg(0, 10, validated=ModeLabel.WALK, distance_m=700),
            make_leg(12, 30, validated=ModeLabel.WALK, distance_m=1300),
        ]
        trip = classify_group(legs, indices=(3, 4))
        assert trip.distance_m == 2000.0
        assert trip.duration_s == 30 * 60.0  # door to door, includes the 2-min gap
        assert trip.legs_duration_s == 28 * 60.0
        assert trip.leg_indices == (3, 4)
        assert trip.depart == legs[0].window.begin
        assert trip.arrive == legs[1].window.end

    def test_empty_group_rejected(self):
        with pytest.raises(EmptyGroupError):
            classify_group([])


class TestAggregate:
    def test_figure2_yields_five_single_mode_auto_trips(self, fig2_respondent):
        diary = build_diary(fig2_respondent, {FIG2_DAY: parse_kml(figure2_kml())})
        trips = aggregate(diary)
        assert len(trips) == 5
        for trip in trips:
            assert trip.category is TripCategory.SINGLE_MODE
            assert trip.main_mode is ModeLabel.AUTOMOBILE  # inferred fallback
            assert trip.access_mode is ModeLabel.WALK
            assert trip.egress_mode is ModeLabel.WALK

    def test_no_legs_no_trips(self):
        assert aggregate(diary_of([make_activity(0, 10)])) == []

    @given(
        st.lists(
            st.sampled_from(["A", ModeLabel.WALK, ModeLabel.AUTOMOBILE, ModeLabel.LOCAL_TRANSIT]),
            max_size=10,
        )
    )
    def test_partition_and_order_preservation(self, pattern):
        diary = diary_of(events_from_pattern(pattern))
        trips = aggregate(diary)
        n_legs = sum(1 for e in diary.events if isinstance(e, TripLeg))
        assert sum(len(t.leg_indices) for t in trips) == n_legs
        all_indices = [i for t in trips for i in t.leg_indices]
        assert len(set(all_indices)) == len(all_indices)
        departs = [t.depart for t in trips]
        assert departs == sorted(departs)
        for trip in trips:
            assert trip.depart == diary.events[trip.leg_indices[0]].window.begin
            assert trip.distance_m == sum(
                diary.events[i].distance_m for i in trip.leg_indices
            )

    def test_csv_export_columns(self, fig2_respondent):
        diary = build_diary(fig2_respondent, {FIG2_DAY: parse_kml(figure2_kml())})
        csv_text = trips_csv({"r-fig2": aggregate(diary)})
        lines = csv_text.strip().splitlines()
        assert lines[0].split(",")[:6] == [
            "respondent_id", "trip_index", "category", "main_mode", "access_mode", "egress_mode",
        ]
        assert len(lines) == 6
        first = lines[1].split(",")
        assert first[0] == "r-fig2"
        assert first[2] == "single_mode"
        assert first[3] == "automobile"
