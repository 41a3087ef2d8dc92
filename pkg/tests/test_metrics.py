"""Mobility measures: gyration radii, displacements, daily abroad series."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geoflow.metrics import (
    build_mobility_profiles,
    daily_abroad_series,
    destination_diversity,
    displacements,
    is_mobile,
    mobility_rate,
    radius_of_gyration,
    user_gyration_radii,
)
from geoflow.residence import build_profiles
from geoflow.sphere import EARTH_RADIUS_KM, haversine_km
from helpers import Y2012, ev, rotate_points, traj

HALF_TURN_KM = math.pi * EARTH_RADIUS_KM


# ---------------------------------------------------------------- gyration


def test_single_point_has_zero_radius():
    assert radius_of_gyration([(40.0, -3.0)]) == 0.0


def test_identical_points_have_zero_radius():
    assert radius_of_gyration([(40.0, -3.0)] * 5) == pytest.approx(0.0, abs=1e-9)


def test_equatorial_pair_radius_is_quarter_arc():
    # center sits midway; each point is half a degree away
    want = HALF_TURN_KM / 360.0  # 55.59754011676645
    assert radius_of_gyration([(0.0, 0.0), (0.0, 1.0)]) == pytest.approx(want, abs=1e-9)
    assert want == pytest.approx(55.59754011676645, abs=1e-12)


def test_radius_matches_direct_formula():
    pts = [(48.8566, 2.3522), (52.52, 13.405), (40.4168, -3.7038)]
    from geoflow.sphere import center_of_mass

    center = center_of_mass(pts)
    want = math.sqrt(sum(haversine_km(center, p) ** 2 for p in pts) / len(pts))
    assert radius_of_gyration(pts) == pytest.approx(want, abs=1e-9)


def test_radius_invariant_under_duplication():
    pts = [(10.0, 20.0), (30.0, -40.0), (-5.0, 5.0)]
    assert radius_of_gyration(pts * 4) == pytest.approx(radius_of_gyration(pts), abs=1e-9)


@given(
    st.lists(
        st.tuples(st.floats(-60, 60), st.floats(-170, 170)), min_size=2, max_size=8
    ),
    st.tuples(st.floats(0.1, 1.0), st.floats(0.1, 1.0), st.floats(0.1, 1.0)),
    st.floats(0.1, 3.0),
)
def test_radius_invariant_under_rigid_rotation(pts, axis, angle):
    base = radius_of_gyration(pts)
    rotated = radius_of_gyration(rotate_points(pts, axis, angle))
    assert rotated == pytest.approx(base, rel=1e-9, abs=1e-9)


def test_degenerate_center_falls_back_to_first_point():
    # antipodal pair: the vector mean vanishes, so measure from the first point
    pts = [(0.0, 0.0), (0.0, 180.0)]
    want = math.sqrt((0.0**2 + HALF_TURN_KM**2) / 2)
    assert radius_of_gyration(pts) == pytest.approx(want, abs=1e-6)


def test_user_gyration_radii_groups_by_user():
    events = [
        ev("a", 1, 0.0, 0.0, country="AA"),
        ev("a", 2, 0.0, 1.0, country="AA"),
        ev("b", 1, 10.0, 10.0, country="BB"),
    ]
    radii = user_gyration_radii(events)
    assert set(radii) == {"a", "b"}
    assert radii["a"] == pytest.approx(HALF_TURN_KM / 360.0, abs=1e-9)
    assert radii["b"] == 0.0


# ---------------------------------------------------------------- displacements


def test_displacements_are_consecutive_distances():
    t = traj("u", (0, 0.0, 0.0), (10, 0.0, 1.0), (20, 0.0, 3.0))
    d = displacements(t)
    assert len(d) == 2
    assert d[0] == pytest.approx(haversine_km((0, 0), (0, 1)), abs=1e-12)
    assert d[1] == pytest.approx(haversine_km((0, 1), (0, 3)), abs=1e-12)


def test_displacements_of_short_trajectories():
    assert displacements(traj("u", (0, 0.0, 0.0))) == []
    assert displacements(traj("u")) == []


# ---------------------------------------------------------------- mobility


def make_profiles(user_events):
    return build_profiles(user_events)


def test_is_mobile_needs_two_countries():
    profiles = make_profiles(
        [ev("home", 1, country="AA"), ev("roam", 1, country="AA"), ev("roam", 2, country="BB")]
    )
    assert not is_mobile(profiles["home"])
    assert is_mobile(profiles["roam"])


def test_mobility_rate_counts_mobile_residents():
    events = []
    for i in range(4):
        events.append(ev(f"u{i}", 1, country="AA"))
    events.append(ev("u0", 2, country="BB"))  # one of four residents goes abroad
    profiles = make_profiles(events)
    assert mobility_rate("AA", profiles) == 0.25
    with pytest.raises(ValueError):
        mobility_rate("BB", profiles)  # nobody resides in BB


def test_destination_diversity_counts_distinct_foreign_countries():
    events = [
        ev("u1", 1, country="AA"),
        ev("u1", 2, country="BB"),
        ev("u1", 3, country="CC"),
        ev("u2", 1, country="AA"),
        ev("u2", 2, country="BB"),
    ]
    profiles = make_profiles(events)
    assert destination_diversity("AA", profiles) == 2  # BB and CC


def test_build_mobility_profiles_rates_and_means():
    events = [
        ev("u1", 1, 0.0, 0.0, country="AA"),
        ev("u1", 2, 0.0, 1.0, country="AA"),
        ev("u2", 1, 0.0, 0.0, country="AA"),
        ev("u2", 2, 0.0, 0.0, country="BB"),
    ]
    profiles = make_profiles(events)
    out = build_mobility_profiles(profiles, events)
    aa = out["AA"]
    assert aa.n_residents == 2
    assert aa.mobility_rate == 0.5
    r1 = radius_of_gyration([(0.0, 0.0), (0.0, 1.0)])
    r2 = radius_of_gyration([(0.0, 0.0), (0.0, 0.0)])
    assert aa.mean_radius_km == pytest.approx((r1 + r2) / 2, abs=1e-9)
    assert aa.countries_visited == 1


def test_build_mobility_profiles_mobile_only_mean():
    events = [
        ev("u1", 1, 0.0, 0.0, country="AA"),
        ev("u1", 2, 0.0, 1.0, country="AA"),
        ev("u2", 1, 0.0, 0.0, country="AA"),
        ev("u2", 2, 0.0, 0.0, country="BB"),
    ]
    profiles = make_profiles(events)
    out = build_mobility_profiles(profiles, events, gyration_over="mobile")
    assert out["AA"].mean_radius_km == pytest.approx(0.0, abs=1e-9)  # only u2 is mobile


def test_build_mobility_profiles_rejects_unknown_mode():
    with pytest.raises(ValueError):
        build_mobility_profiles({}, [], gyration_over="everyone")


# ---------------------------------------------------------------- daily series


def day_ts(day, offset=0):
    return Y2012 + day * 86400 + offset


def resident_events(user, country, n=3):
    """Enough home events to pin residence regardless of extras."""
    return [ev(user, day_ts(300 + i), country=country) for i in range(n)]


def test_outbound_counts_distinct_users_per_day():
    events = resident_events("u1", "AA") + [
        ev("u1", day_ts(5, 100), country="BB"),
        ev("u1", day_ts(5, 200), country="CC"),  # same user, same day, twice abroad
        ev("u1", day_ts(6), country="BB"),
    ]
    profiles = build_profiles(events)
    series = daily_abroad_series(profiles, events, "outbound")
    assert series["AA"].values[5] == 1
    assert series["AA"].values[6] == 1
    assert sum(series["AA"].values) == 2


def test_inbound_keys_by_event_country():
    events = resident_events("u1", "AA") + [ev("u1", day_ts(5), country="BB")]
    profiles = build_profiles(events)
    series = daily_abroad_series(profiles, events, "inbound")
    assert series["BB"].values[5] == 1
    assert sum(series["AA"].values) == 0


def test_home_events_do_not_count():
    events = resident_events("u1", "AA")
    profiles = build_profiles(events)
    series = daily_abroad_series(profiles, events, "outbound")
    assert sum(series["AA"].values) == 0
    assert series["AA"].normalized == [0.0] * 366


def test_events_outside_year_are_ignored():
    events = resident_events("u1", "AA") + [
        ev("u1", Y2012 - 50, country="BB"),
        ev("u1", Y2012 + 366 * 86400 + 50, country="BB"),
    ]
    profiles = build_profiles(events)
    series = daily_abroad_series(profiles, events, "outbound")
    assert sum(series["AA"].values) == 0


def test_leap_year_has_366_days_other_years_365():
    events = resident_events("u1", "AA")
    profiles = build_profiles(events)
    assert len(daily_abroad_series(profiles, events, "outbound", year=2012)["AA"].values) == 366
    assert len(daily_abroad_series(profiles, events, "outbound", year=2013)["AA"].values) == 365


def test_normalization_peaks_at_100():
    events = resident_events("u1", "AA") + resident_events("u2", "AA") + [
        ev("u1", day_ts(3), country="BB"),
        ev("u2", day_ts(3), country="BB"),
        ev("u1", day_ts(9), country="BB"),
    ]
    profiles = build_profiles(events)
    series = daily_abroad_series(profiles, events, "outbound")
    s = series["AA"]
    assert s.values[3] == 2 and s.values[9] == 1
    assert max(s.normalized) == 100.0
    assert s.normalized[9] == 50.0


def test_series_cover_every_observed_country():
    events = resident_events("u1", "AA") + [ev("u1", day_ts(1), country="BB")]
    profiles = build_profiles(events)
    series = daily_abroad_series(profiles, events, "outbound")
    assert set(series) == {"AA", "BB"}


def test_unknown_direction_rejected():
    with pytest.raises(ValueError):
        daily_abroad_series({}, [], "sideways")
