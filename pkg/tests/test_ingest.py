"""Event parsing, boundary validation, and country lookup."""

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from geoflow.ingest import (
    BoundaryIndex,
    CountryBoundary,
    EventFormat,
    GeoEvent,
    Trajectory,
    build_trajectories,
    label_events,
    load_boundaries,
    parse_events,
)
from helpers import ev, point_in_rings_crossing

SQUARE = [(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0), (0.0, 0.0)]


def ring(*pts):
    return [tuple(map(float, p)) for p in pts]


# ---------------------------------------------------------------- parsing


def test_parse_basic_line():
    report = parse_events(["u1,100,10.5,-3.25,web"])
    assert report.n_lines == 1
    assert report.n_malformed == 0
    assert not report.header_skipped
    e = report.events[0]
    assert (e.user_id, e.timestamp, e.lat, e.lon, e.source) == ("u1", 100, 10.5, -3.25, "web")
    assert e.country is None


def test_parse_line_with_country_column():
    report = parse_events(["u1,100,1.0,2.0,web,de"])
    assert report.events[0].country == "DE"


def test_parse_detects_header():
    report = parse_events(["user_id,timestamp,lat,lon,source", "u1,100,1.0,2.0,web"])
    assert report.header_skipped
    assert report.n_lines == 2
    assert len(report.events) == 1


def test_numeric_second_field_is_not_a_header():
    report = parse_events(["u1,100,1.0,2.0,web", "u2,200,1.0,2.0,web"])
    assert not report.header_skipped
    assert len(report.events) == 2


def test_parse_accounting_invariant():
    lines = [
        "user_id,timestamp,lat,lon,source",
        "u1,100,1.0,2.0,web",
        "",
        "u2,nope,1.0,2.0,web",
        "u3,300,95.0,2.0,web",
        "u4,400,1.0,181.0,web",
        "u5,500,1.0,2.0",
        "u6,600,1.0,2.0,web,deu",
        "u7,700,1.0,2.0,web",
    ]
    report = parse_events(lines)
    assert report.n_lines == len(lines)
    assert len(report.events) + report.n_malformed + 1 == report.n_lines
    assert [e.user_id for e in report.events] == ["u1", "u7"]


def test_parse_error_line_numbers_are_one_based():
    report = parse_events(["u1,100,1.0,2.0,web", "broken"])
    assert report.errors[0][0] == 2


def test_parse_rejects_out_of_range_coordinates():
    for line in ("u,1,90.0001,0,web", "u,1,-90.5,0,web", "u,1,0,180.5,web", "u,1,0,-200,web"):
        assert parse_events([line]).n_malformed == 1


def test_parse_rejects_negative_timestamp():
    assert parse_events(["u,-5,0,0,web"]).n_malformed == 1


def test_parse_accepts_boundary_coordinates():
    report = parse_events(["u,1,90.0,-180.0,web", "v,1,-90.0,180.0,web"])
    assert report.n_malformed == 0
    # -180 is canonicalized onto the +180 side of the seam
    assert report.events[0].lon == 180.0


def test_parse_custom_delimiter():
    report = parse_events(["u1;100;1.0;2.0;web"], fmt=EventFormat(delimiter=";"))
    assert report.events[0].user_id == "u1"


@given(st.integers(min_value=0, max_value=2**31), st.floats(-90, 90), st.floats(-180, 180))
def test_parse_round_trips_well_formed_lines(ts, lat, lon):
    report = parse_events([f"u,{ts},{lat!r},{lon!r},app"])
    assert report.n_malformed == 0
    e = report.events[0]
    assert (e.timestamp, e.lat) == (ts, lat)


# ---------------------------------------------------------------- boundaries


def test_ring_must_be_closed():
    with pytest.raises(ValueError, match="closed"):
        BoundaryIndex([CountryBoundary("AA", [[ring((0, 0), (1, 0), (1, 1), (0, 1))]][0:1])])


def test_ring_needs_four_vertices():
    with pytest.raises(ValueError):
        BoundaryIndex([CountryBoundary("AA", [[ring((0, 0), (1, 0), (0, 0))]])])


def test_ring_rejects_antimeridian_jump():
    jump = ring((179.0, 0), (-179.0, 0), (-179.0, 1), (179.0, 1), (179.0, 0))
    with pytest.raises(ValueError):
        BoundaryIndex([CountryBoundary("AA", [[jump]])])


def test_duplicate_codes_rejected():
    poly = [[SQUARE]]
    with pytest.raises(ValueError, match="duplicate"):
        BoundaryIndex([CountryBoundary("AA", poly), CountryBoundary("AA", poly)])


def test_locate_inside_outside():
    index = BoundaryIndex([CountryBoundary("AA", [[SQUARE]])])
    assert index.locate(5.0, 5.0) == "AA"
    assert index.locate(15.0, 5.0) is None
    assert index.locate(-0.001, 5.0) is None


def test_locate_point_on_edge_and_vertex():
    index = BoundaryIndex([CountryBoundary("AA", [[SQUARE]])])
    assert index.locate(0.0, 5.0) == "AA"  # on a vertical edge
    assert index.locate(5.0, 0.0) == "AA"  # on a horizontal edge
    assert index.locate(0.0, 0.0) == "AA"  # on a vertex


def test_hole_is_outside_enclosing_ring():
    outer = SQUARE
    hole = ring((4, 4), (6, 4), (6, 6), (4, 6), (4, 4))
    index = BoundaryIndex([CountryBoundary("AA", [[outer, hole]])])
    assert index.locate(5.0, 5.0) is None  # inside the hole
    assert index.locate(2.0, 2.0) == "AA"  # between outer ring and hole
    assert index.locate(4.0, 5.0) == "AA"  # on the hole's edge: boundary is inclusive


def test_shared_border_goes_to_smaller_code():
    left = [[ring((0, 0), (10, 0), (10, 10), (0, 10), (0, 0))]]
    right = [[ring((10, 0), (20, 0), (20, 10), (10, 10), (10, 0))]]
    for order in ([("AA", left), ("AB", right)], [("AB", right), ("AA", left)]):
        index = BoundaryIndex([CountryBoundary(c, p) for c, p in order])
        assert index.locate(10.0, 5.0) == "AA"  # on the shared edge
        assert index.locate(9.0, 5.0) == "AA"
        assert index.locate(11.0, 5.0) == "AB"


def test_multipolygon_country():
    island_a = [ring((0, 0), (2, 0), (2, 2), (0, 2), (0, 0))]
    island_b = [ring((5, 5), (7, 5), (7, 7), (5, 7), (5, 5))]
    index = BoundaryIndex([CountryBoundary("AA", [island_a, island_b])])
    assert index.locate(1.0, 1.0) == "AA"
    assert index.locate(6.0, 6.0) == "AA"
    assert index.locate(3.5, 3.5) is None


def test_ray_cast_matches_independent_crossing_test():
    """Interior/exterior classification agrees with a second formulation."""
    concave = [
        ring((0, 0), (8, 0), (8, 3), (3, 3), (3, 5), (8, 5), (8, 8), (0, 8), (0, 0))
    ]
    index = BoundaryIndex([CountryBoundary("AA", [concave])])
    for i in range(-2, 23):
        for j in range(-2, 23):
            # offsets keep probe points safely away from all edges
            x, y = i * 0.45 + 0.017, j * 0.45 + 0.013
            want = point_in_rings_crossing(x, y, concave)
            got = index.locate(x, y) == "AA"
            assert got == want, (x, y)


def test_label_events_assigns_and_drops():
    index = BoundaryIndex([CountryBoundary("AA", [[SQUARE]])])
    events = [ev("u", 1, lat=5.0, lon=5.0), ev("u", 2, lat=50.0, lon=50.0)]
    labeled, dropped = label_events(events, index)
    assert [e.country for e in labeled] == ["AA"]
    assert dropped == 1


def test_label_events_keeps_existing_labels():
    index = BoundaryIndex([CountryBoundary("AA", [[SQUARE]])])
    events = [ev("u", 1, lat=5.0, lon=5.0, country="ZZ")]
    labeled, dropped = label_events(events, index)
    assert labeled[0].country == "ZZ"
    assert dropped == 0


def test_label_events_without_index_drops_unlabeled():
    events = [ev("u", 1, country="AA"), ev("u", 2)]
    labeled, dropped = label_events(events, None)
    assert len(labeled) == 1 and dropped == 1


def test_load_boundaries_geojson(tmp_path):
    gj = {
        "type": "FeatureCollection",
        "features": [
            {
                "type": "Feature",
                "properties": {"code": "AA"},
                "geometry": {"type": "Polygon", "coordinates": [list(map(list, SQUARE))]},
            },
            {
                "type": "Feature",
                "properties": {"code": "BB"},
                "geometry": {
                    "type": "MultiPolygon",
                    "coordinates": [
                        [[[20, 0], [22, 0], [22, 2], [20, 2], [20, 0]]],
                        [[[30, 0], [32, 0], [32, 2], [30, 2], [30, 0]]],
                    ],
                },
            },
        ],
    }
    path = tmp_path / "b.geojson"
    path.write_text(json.dumps(gj), encoding="utf-8")
    boundaries = load_boundaries(str(path))
    index = BoundaryIndex(boundaries)
    assert index.locate(5.0, 5.0) == "AA"
    assert index.locate(21.0, 1.0) == "BB"
    assert index.locate(31.0, 1.0) == "BB"


# ---------------------------------------------------------------- trajectories


def test_build_trajectories_groups_and_sorts():
    events = [
        ev("b", 30),
        ev("a", 20),
        ev("a", 10),
        ev("b", 5),
    ]
    trajs = build_trajectories(events)
    assert list(trajs) == ["a", "b"]
    assert [e.timestamp for e in trajs["a"].events] == [10, 20]
    assert [e.timestamp for e in trajs["b"].events] == [5, 30]


def test_build_trajectories_stable_for_equal_timestamps():
    first = ev("u", 100, lat=1.0)
    second = ev("u", 100, lat=2.0)
    trajs = build_trajectories([first, second])
    assert trajs["u"].events == [first, second]


@given(st.lists(st.tuples(st.sampled_from("ab"), st.integers(0, 50)), max_size=30))
def test_build_trajectories_partitions_events(pairs):
    events = [ev(u, ts) for u, ts in pairs]
    trajs = build_trajectories(events)
    assert sum(len(t.events) for t in trajs.values()) == len(events)
    for user, t in trajs.items():
        assert t.user_id == user
        assert all(e.user_id == user for e in t.events)
        stamps = [e.timestamp for e in t.events]
        assert stamps == sorted(stamps)
