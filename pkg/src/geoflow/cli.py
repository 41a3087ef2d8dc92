"""Command-line pipeline over file artifacts.

Each stage subcommand reads its predecessor's emitted files from the
configured work directory and writes its own; `run` executes every stage
in order. All randomness flows from the single `seed` config key, and no
artifact embeds timestamps or machine state, so identical configs produce
byte-identical outputs.

Exit codes: 0 success, 2 usage error, 3 malformed config, 4 missing input
file, 5 stage-order violation (a required intermediate artifact is
absent), 6 data error.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Any

from . import clean as clean_mod
from . import community as community_mod
from . import ingest as ingest_mod
from . import metrics as metrics_mod
from . import models as models_mod
from . import network as network_mod
from . import residence as residence_mod
from . import synth as synth_mod
from . import tables
from .config import ConfigError, load_config

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_MISSING_INPUT = 4
EXIT_STAGE_ORDER = 5
EXIT_DATA = 6

STAGES = ["ingest", "clean", "profile", "metrics", "network", "communities", "fit-gravity", "fit-powerlaw"]


class StageOrderError(RuntimeError):
    """A stage ran before the stage that produces its input artifact."""


def _workdir(config: dict[str, Any]) -> str:
    path = config["paths"]["workdir"]
    os.makedirs(path, exist_ok=True)
    return path


def _artifact(config: dict[str, Any], name: str, producer: str) -> str:
    path = os.path.join(config["paths"]["workdir"], name)
    if not os.path.exists(path):
        raise StageOrderError(f"missing artifact {path}; run the {producer!r} stage first")
    return path


def _external(config: dict[str, Any], key: str, required: bool) -> str | None:
    path = config["paths"][key]
    if not path:
        if required:
            raise FileNotFoundError(f"config paths.{key} is not set but this stage needs it")
        return None
    if not os.path.exists(path):
        raise FileNotFoundError(f"input file not found: {path} (config paths.{key})")
    return path


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------


def stage_ingest(config: dict[str, Any]) -> None:
    workdir = _workdir(config)
    events_path = _external(config, "events", required=True)
    with open(events_path, encoding="utf-8") as fh:
        report = ingest_mod.parse_events(fh)
    boundaries_path = _external(config, "boundaries", required=False)
    index = None
    if boundaries_path:
        index = ingest_mod.BoundaryIndex(ingest_mod.load_boundaries(boundaries_path))
    labeled, dropped = ingest_mod.label_events(report.events, index)
    tables.write_events(os.path.join(workdir, "events_labeled.csv"), labeled)
    tables.write_json(
        os.path.join(workdir, "ingest_report.json"),
        {
            "n_lines": report.n_lines,
            "n_events": len(report.events),
            "n_malformed": report.n_malformed,
            "header_skipped": report.header_skipped,
            "n_unlocatable_dropped": dropped,
            "n_labeled": len(labeled),
            "errors_first_10": [[lineno, reason] for lineno, reason in report.errors[:10]],
        },
    )


def stage_clean(config: dict[str, Any]) -> None:
    workdir = _workdir(config)
    events = tables.read_events(_artifact(config, "events_labeled.csv", "ingest"))
    trajectories = ingest_mod.build_trajectories(events)
    speed_kept: list[ingest_mod.GeoEvent] = []
    speed_removed = 0
    for user_id in sorted(trajectories):
        filtered, removed = clean_mod.speed_filter(
            trajectories[user_id], config["clean"]["max_speed_kmh"]
        )
        speed_removed += removed
        speed_kept.extend(filtered.events)
    retained, cleaned, stats = clean_mod.source_popularity_filter(
        speed_kept, config["clean"]["coverage"], config["clean"]["weight_mode"]
    )
    tables.write_events(os.path.join(workdir, "events_clean.csv"), cleaned)
    rows = []
    for country in sorted(stats.rankings):
        keep = retained.get(country, set())
        for source, mass in stats.rankings[country]:
            rows.append([country, source, mass, source in keep])
    tables.write_rows(
        os.path.join(workdir, "cleaning_report.csv"),
        ["country", "source", "mass", "retained"],
        rows,
    )
    tables.write_json(
        os.path.join(workdir, "cleaning_stats.json"),
        {
            "speed_removed": speed_removed,
            "users_before": stats.users_before,
            "users_after": stats.users_after,
            "events_before": stats.events_before,
            "events_after": stats.events_after,
            "user_fraction": stats.user_fraction,
            "event_fraction": stats.event_fraction,
        },
    )


def _load_profiles(config: dict[str, Any]) -> tuple[list[ingest_mod.GeoEvent], dict[str, residence_mod.UserProfile]]:
    events = tables.read_events(_artifact(config, "events_clean.csv", "clean"))
    return events, residence_mod.build_profiles(events)


def stage_profile(config: dict[str, Any]) -> None:
    workdir = _workdir(config)
    _, profiles = _load_profiles(config)
    census_path = _external(config, "census", required=False)
    census: dict[str, int] = {}
    gdp: dict[str, float] = {}
    if census_path:
        census, gdp = tables.read_census(census_path)
    stats = residence_mod.compute_country_stats(
        profiles,
        census,
        gdp,
        min_penetration=config["residence"]["min_penetration"],
        min_residents=config["residence"]["min_residents"],
    )
    tables.write_rows(
        os.path.join(workdir, "profiles.csv"),
        ["user_id", "residence", "total_events", "distinct_countries"],
        (
            [p.user_id, p.residence, p.total_events, p.distinct_countries]
            for p in (profiles[u] for u in sorted(profiles))
        ),
    )
    tables.write_rows(
        os.path.join(workdir, "country_stats.csv"),
        ["code", "residents", "population", "penetration", "included", "reason"],
        (
            [s.code, s.residents, s.population, s.penetration, s.included, s.reason.replace(",", ";")]
            for s in (stats[c] for c in sorted(stats))
        ),
    )


def _load_country_stats(config: dict[str, Any]) -> dict[str, residence_mod.CountryStats]:
    rows = tables.read_rows(
        _artifact(config, "country_stats.csv", "profile"),
        ["code", "residents", "population", "penetration", "included", "reason"],
    )
    out: dict[str, residence_mod.CountryStats] = {}
    for code, residents, population, penetration, included, reason in rows:
        out[code] = residence_mod.CountryStats(
            code=code,
            residents=int(residents),
            population=int(population) if population else None,
            penetration=float(penetration),
            included=included == "true",
            reason=reason,
        )
    return out


def stage_metrics(config: dict[str, Any]) -> None:
    workdir = _workdir(config)
    events, profiles = _load_profiles(config)
    mobility = metrics_mod.build_mobility_profiles(
        profiles, events, gyration_over=config["metrics"]["gyration_over"]
    )
    tables.write_rows(
        os.path.join(workdir, "mobility_profiles.csv"),
        ["code", "n_residents", "mobility_rate", "mean_radius_km", "countries_visited"],
        (
            [m.code, m.n_residents, m.mobility_rate, m.mean_radius_km, m.countries_visited]
            for m in (mobility[c] for c in sorted(mobility))
        ),
    )
    year = config["year"]
    for direction in ("outbound", "inbound"):
        series = metrics_mod.daily_abroad_series(profiles, events, direction, year=year)
        rows = []
        for code in sorted(series):
            s = series[code]
            for day, (value, norm) in enumerate(zip(s.values, s.normalized)):
                rows.append([code, day, value, norm])
        tables.write_rows(
            os.path.join(workdir, f"daily_{direction}.csv"),
            ["code", "day", "count", "normalized"],
            rows,
        )
    trajectories = ingest_mod.build_trajectories(events)
    disp_rows = []
    for user_id in sorted(trajectories):
        for d in metrics_mod.displacements(trajectories[user_id]):
            disp_rows.append([user_id, d])
    tables.write_rows(os.path.join(workdir, "displacements.csv"), ["user_id", "km"], disp_rows)
    radii = metrics_mod.user_gyration_radii(events)
    tables.write_rows(
        os.path.join(workdir, "gyration.csv"),
        ["user_id", "km"],
        ([u, radii[u]] for u in sorted(radii)),
    )


def stage_network(config: dict[str, Any]) -> None:
    workdir = _workdir(config)
    _, profiles = _load_profiles(config)
    stats = _load_country_stats(config)
    raw_net = network_mod.build_flow_network(profiles)
    tables.write_rows(
        os.path.join(workdir, "edges_raw.csv"),
        ["origin", "destination", "raw_weight"],
        ([e.origin, e.destination, e.raw_weight] for _, e in sorted(raw_net.edges.items())),
    )
    net = network_mod.normalize_and_filter(
        raw_net,
        stats,
        min_outgoing=config["network"]["min_outgoing"],
        min_penetration=config["network"]["min_penetration"],
    )
    tables.write_rows(
        os.path.join(workdir, "edges.csv"),
        ["origin", "destination", "raw_weight", "est_weight"],
        (
            [e.origin, e.destination, e.raw_weight, e.est_weight]
            for _, e in sorted(net.edges.items())
        ),
    )
    balances = network_mod.inflow_outflow_balance(net)
    tables.write_rows(
        os.path.join(workdir, "balances.csv"),
        ["code", "inflow", "outflow", "balance"],
        (
            [b.code, b.inflow, b.outflow, b.balance]
            for b in (balances[c] for c in sorted(balances))
        ),
    )
    top = network_mod.top_k_flows(net, k=config["network"]["top_k"], weight="est")
    tables.write_rows(
        os.path.join(workdir, "top_flows.csv"),
        ["rank", "origin", "destination", "raw_weight", "est_weight"],
        ([i + 1, e.origin, e.destination, e.raw_weight, e.est_weight] for i, e in enumerate(top)),
    )


def _load_flow_edges(config: dict[str, Any], weights: str) -> tuple[dict[tuple[str, str], float], list[str]]:
    edge_rows = tables.read_rows(
        _artifact(config, "edges.csv", "network"),
        ["origin", "destination", "raw_weight", "est_weight"],
    )
    balance_rows = tables.read_rows(
        _artifact(config, "balances.csv", "network"),
        ["code", "inflow", "outflow", "balance"],
    )
    nodes = [row[0] for row in balance_rows]
    edges = {
        (o, d): float(raw) if weights == "raw" else float(est)
        for o, d, raw, est in edge_rows
    }
    return edges, nodes


def stage_communities(config: dict[str, Any]) -> None:
    workdir = _workdir(config)
    weights = config["communities"]["weights"]
    edges, nodes = _load_flow_edges(config, weights)
    max_levels = config["communities"]["max_levels"]
    if not nodes:
        raise ValueError("empty network: nothing to partition")
    hierarchy = community_mod.hierarchical_partition(
        edges,
        max_levels=max_levels,
        seed=config["seed"],
        restarts=config["communities"]["restarts"],
        nodes=nodes,
    )
    header = ["country"] + [f"level{k}" for k in range(1, max_levels + 1)]
    rows = [[code] + [level.assignment[code] for level in hierarchy.levels] for code in sorted(nodes)]
    tables.write_rows(os.path.join(workdir, "communities.csv"), header, rows)
    tables.write_json(
        os.path.join(workdir, "communities_report.json"),
        {
            "q_per_level": [level.q for level in hierarchy.levels],
            "communities_per_level": [level.n_communities for level in hierarchy.levels],
            "parents_per_level": [
                {str(child): parent for child, parent in sorted(parents.items())}
                for parents in hierarchy.parents
            ],
        },
    )


def stage_fit_gravity(config: dict[str, Any]) -> None:
    workdir = _workdir(config)
    stats = _load_country_stats(config)
    capitals_path = _external(config, "capitals", required=True)
    distances = models_mod.capital_distances(tables.read_capitals(capitals_path))
    min_distance = config["fit"]["min_distance_km"]
    est_edges, _ = _load_flow_edges(config, "est")
    raw_edges, _ = _load_flow_edges(config, "raw")
    census_pops = {
        c: float(s.population) for c, s in stats.items() if s.population and s.population > 0
    }
    platform_pops = {c: float(s.residents) for c, s in stats.items() if s.residents > 0}
    report: dict[str, Any] = {}
    for name, flows, pops in (
        ("est_census", est_edges, census_pops),
        ("raw_platform", raw_edges, platform_pops),
    ):
        # A leg can be unfittable on a small corpus (e.g. identical resident
        # counts make ln p collinear with the intercept); record why and keep
        # the other leg rather than aborting the run.
        try:
            fit = models_mod.fit_gravity(flows, pops, distances, min_distance_km=min_distance)
        except ValueError as exc:
            report[name] = {"error": str(exc)}
            continue
        report[name] = {
            "logA": fit.logA,
            "alpha": fit.alpha,
            "beta": fit.beta,
            "gamma": fit.gamma,
            "r2": fit.r2,
            "n_pairs": fit.n_pairs,
            "n_zero_excluded": fit.n_zero_excluded,
            "n_short_excluded": fit.n_short_excluded,
            "n_missing_distance": fit.n_missing_distance,
        }
    tables.write_json(os.path.join(workdir, "gravity_fit.json"), report)


def _powerlaw_report(samples: list[float], xmin: float) -> dict[str, Any]:
    fit = models_mod.fit_power_law(samples, xmin)
    out: dict[str, Any] = {
        "exponent": fit.exponent,
        "xmin": fit.xmin,
        "n_tail": fit.n_tail,
        "stderr": fit.stderr,
    }
    try:
        b_beta, b_intercept, b_r2 = models_mod.binned_powerlaw_check([x for x in samples if x >= xmin])
        out["binned_check"] = {"exponent": b_beta, "intercept": b_intercept, "r2": b_r2}
    except ValueError as exc:
        out["binned_check"] = {"error": str(exc)}
    return out


def stage_fit_powerlaw(config: dict[str, Any]) -> None:
    workdir = _workdir(config)
    xmin = config["fit"]["powerlaw_xmin_km"]
    report: dict[str, Any] = {}
    for name, artifact in (("displacements", "displacements.csv"), ("gyration", "gyration.csv")):
        rows = tables.read_rows(_artifact(config, artifact, "metrics"), ["user_id", "km"])
        samples = [float(km) for _, km in rows]
        try:
            report[name] = _powerlaw_report(samples, xmin)
        except ValueError as exc:
            report[name] = {"error": str(exc)}
    tables.write_json(os.path.join(workdir, "powerlaw_fit.json"), report)


def cmd_validate(config: dict[str, Any]) -> None:
    workdir = _workdir(config)
    reference_path = _external(config, "reference", required=True)
    balance_rows = tables.read_rows(
        _artifact(config, "balances.csv", "network"),
        ["code", "inflow", "outflow", "balance"],
    )
    inflows = {row[0]: float(row[1]) for row in balance_rows}
    report: dict[str, Any] = {}
    for name, column in (("arrivals", 1), ("receipts", 2)):
        try:
            reference = tables.read_reference(reference_path, column=column)
            r2, matched = models_mod.validate_external(inflows, reference)
            report[name] = {"r2": r2, "matched_countries": matched}
        except ValueError as exc:
            report[name] = {"error": str(exc)}
    tables.write_json(os.path.join(workdir, "validate.json"), report)


def cmd_synth(config: dict[str, Any], out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    section = config["synth"]
    a, alpha, beta, gamma = section["gravity"]
    world = synth_mod.make_world(
        section["n_countries"],
        seed=config["seed"],
        A=a,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        n_blocks=section["n_blocks"],
        block_boost=section["block_boost"],
    )
    events, truth = synth_mod.generate_events(
        world,
        users_per_country=section["users_per_country"],
        events_per_user=section["events_per_user"],
        trip_rate=section["trip_rate"],
        bot_fraction=section["bot_fraction"],
        year=config["year"],
    )
    events_path = os.path.join(out_dir, "events.csv")
    with open(events_path, "w", encoding="utf-8", newline="\n") as fh:
        for line in synth_mod.event_lines(events):
            fh.write(line + "\n")
    boundaries = synth_mod.world_boundaries(world)
    features = []
    for b in boundaries:
        features.append(
            {
                "type": "Feature",
                "properties": {"code": b.code},
                "geometry": {
                    "type": "Polygon",
                    "coordinates": [[[lon, lat] for lon, lat in ring] for ring in b.polygons[0]],
                },
            }
        )
    boundaries_path = os.path.join(out_dir, "boundaries.geojson")
    tables.write_json(boundaries_path, {"type": "FeatureCollection", "features": features})
    census_path = os.path.join(out_dir, "census.csv")
    tables.write_rows(
        census_path,
        ["code", "population"],
        ([c.code, c.population] for c in sorted(world.countries, key=lambda c: c.code)),
    )
    capitals_path = os.path.join(out_dir, "capitals.csv")
    tables.write_rows(
        capitals_path,
        ["code", "lat", "lon"],
        ([c.code, c.capital[0], c.capital[1]] for c in sorted(world.countries, key=lambda c: c.code)),
    )
    tables.write_json(
        os.path.join(out_dir, "truth.json"),
        {
            "residences": truth.residences,
            "bots": sorted(truth.bots),
            "sources": truth.sources,
            "planted_mobility": truth.planted_mobility,
            "realized_mobile": truth.realized_mobile,
            "realized_edges": {f"{o}:{d}": n for (o, d), n in truth.realized_edges.items()},
            "n_users": truth.n_users,
            "n_humans": truth.n_humans,
            "world": {
                "seed": world.seed,
                "A": world.A,
                "alpha": world.alpha,
                "beta": world.beta,
                "gamma": world.gamma,
                "block_boost": world.block_boost,
                "countries": [
                    {
                        "code": c.code,
                        "population": c.population,
                        "capital": list(c.capital),
                        "penetration": c.penetration,
                        "block": c.block,
                    }
                    for c in world.countries
                ],
            },
        },
    )
    pipeline_config = {
        "seed": config["seed"],
        "year": config["year"],
        "paths": {
            "workdir": os.path.join(out_dir, "artifacts"),
            "events": events_path,
            "boundaries": boundaries_path,
            "census": census_path,
            "capitals": capitals_path,
            "reference": "",
        },
        # Desk-scale corpus: the full-scale inclusion thresholds
        # (10k residents, 500 mobile, 0.05% penetration) would empty a
        # few-thousand-user world, so the gates are opened wide here.
        "residence": {"min_residents": 1, "min_penetration": 0.0},
        "network": {
            "min_outgoing": 1,
            "min_penetration": 0.0,
            "top_k": config["network"]["top_k"],
        },
        "clean": dict(config["clean"]),
        "metrics": dict(config["metrics"]),
        "communities": dict(config["communities"]),
        "fit": dict(config["fit"]),
        "synth": dict(section),
    }
    tables.write_json(os.path.join(out_dir, "config.json"), pipeline_config)


def cmd_run(config: dict[str, Any]) -> None:
    stage_ingest(config)
    stage_clean(config)
    stage_profile(config)
    stage_metrics(config)
    stage_network(config)
    stage_communities(config)
    stage_fit_gravity(config)
    stage_fit_powerlaw(config)


def cmd_report(config: dict[str, Any]) -> str:
    workdir = config["paths"]["workdir"]
    lines: list[str] = []

    def add(line: str) -> None:
        lines.append(line)

    ingest_report = tables.read_json(_artifact(config, "ingest_report.json", "ingest"))
    add("PIPELINE REPORT")
    add("")
    add(f"[ingest_report.json] lines={ingest_report['n_lines']} events={ingest_report['n_events']} "
        f"malformed={ingest_report['n_malformed']} unlocatable={ingest_report['n_unlocatable_dropped']}")
    cleaning = tables.read_json(_artifact(config, "cleaning_stats.json", "clean"))
    add(f"[cleaning_stats.json] speed_removed={cleaning['speed_removed']} "
        f"user_survival={cleaning['user_fraction']:.6g} event_survival={cleaning['event_fraction']:.6g}")
    stats = _load_country_stats(config)
    included = sorted(c for c, s in stats.items() if s.included)
    add(f"[country_stats.csv] countries={len(stats)} included={len(included)}")
    mob_rows = tables.read_rows(
        _artifact(config, "mobility_profiles.csv", "metrics"),
        ["code", "n_residents", "mobility_rate", "mean_radius_km", "countries_visited"],
    )
    rates = [float(r[2]) for r in mob_rows]
    mean_rate = sum(rates) / len(rates) if rates else 0.0
    add(f"[mobility_profiles.csv] countries={len(mob_rows)} mean_mobility_rate={mean_rate:.6g}")
    edge_rows = tables.read_rows(
        _artifact(config, "edges.csv", "network"),
        ["origin", "destination", "raw_weight", "est_weight"],
    )
    add(f"[edges.csv] edges={len(edge_rows)}")
    top_rows = tables.read_rows(
        _artifact(config, "top_flows.csv", "network"),
        ["rank", "origin", "destination", "raw_weight", "est_weight"],
    )
    if top_rows:
        first = top_rows[0]
        add(f"[top_flows.csv] top flow {first[1]}->{first[2]} est={float(first[4]):.6g}")
    communities = tables.read_json(_artifact(config, "communities_report.json", "communities"))
    qs = " ".join(f"{q:.6g}" for q in communities["q_per_level"])
    ns = " ".join(str(n) for n in communities["communities_per_level"])
    add(f"[communities_report.json] q_per_level=[{qs}] communities_per_level=[{ns}]")
    gravity = tables.read_json(_artifact(config, "gravity_fit.json", "fit-gravity"))
    for mode in sorted(gravity):
        g = gravity[mode]
        if "error" in g:
            add(f"[gravity_fit.json:{mode}] error={g['error']}")
        else:
            add(f"[gravity_fit.json:{mode}] alpha={g['alpha']:.6g} beta={g['beta']:.6g} "
                f"gamma={g['gamma']:.6g} r2={g['r2']:.6g} n_pairs={g['n_pairs']}")
    powerlaw = tables.read_json(_artifact(config, "powerlaw_fit.json", "fit-powerlaw"))
    for name in sorted(powerlaw):
        p = powerlaw[name]
        if "error" in p:
            add(f"[powerlaw_fit.json:{name}] error={p['error']}")
        else:
            add(f"[powerlaw_fit.json:{name}] exponent={p['exponent']:.6g} "
                f"stderr={p['stderr']:.6g} n_tail={p['n_tail']}")
    validate_path = os.path.join(workdir, "validate.json")
    if os.path.exists(validate_path):
        validation = tables.read_json(validate_path)
        for name in sorted(validation):
            v = validation[name]
            if "error" in v:
                add(f"[validate.json:{name}] error={v['error']}")
            else:
                add(f"[validate.json:{name}] r2={v['r2']:.6g} matched={v['matched_countries']}")
    text = "\n".join(lines) + "\n"
    with open(os.path.join(workdir, "report.txt"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return text


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

_EPILOG = """exit codes:
  0  success
  2  usage error
  3  malformed config (bad JSON, unknown key, wrong type or range)
  4  missing input file (events, boundaries, census, capitals, reference, config)
  5  stage-order violation (needed artifact not produced yet)
  6  data error (malformed rows, degenerate fits, empty networks, ...)

config keys can be overridden via environment variables with the GEOFLOW_
prefix: GEOFLOW_SEED=7, GEOFLOW_CLEAN_COVERAGE=0.9, GEOFLOW_NETWORK_TOP_K=10.
"""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geoflow",
        description="Country-level mobility mining over geo-located event streams.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "ingest": "parse events and label them with countries",
        "clean": "apply the speed filter and the source-popularity filter",
        "profile": "assign residences and compute country statistics",
        "metrics": "mobility rates, gyration radii, displacement and daily series",
        "network": "build, filter, and normalize the country flow network",
        "communities": "hierarchical modularity partitioning of the flow network",
        "fit-gravity": "fit the gravity model to the flow network",
        "fit-powerlaw": "fit power laws to displacements and gyration radii",
        "validate": "correlate estimated inflows against a reference table",
        "synth": "generate a synthetic world with ground truth",
        "run": "run every pipeline stage in order",
        "report": "print an aggregate summary of all artifacts",
    }
    for name, help_text in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", "-c", default=None, help="JSON config file")
        if name == "synth":
            p.add_argument("--out", default="synthetic", help="output directory for the synthetic world")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"geoflow: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"geoflow: {exc}", file=sys.stderr)
        return EXIT_MISSING_INPUT
    handlers = {
        "ingest": lambda: stage_ingest(config),
        "clean": lambda: stage_clean(config),
        "profile": lambda: stage_profile(config),
        "metrics": lambda: stage_metrics(config),
        "network": lambda: stage_network(config),
        "communities": lambda: stage_communities(config),
        "fit-gravity": lambda: stage_fit_gravity(config),
        "fit-powerlaw": lambda: stage_fit_powerlaw(config),
        "validate": lambda: cmd_validate(config),
        "synth": lambda: cmd_synth(config, args.out),
        "run": lambda: cmd_run(config),
        "report": lambda: print(cmd_report(config), end=""),
    }
    try:
        handlers[args.command]()
    except StageOrderError as exc:
        print(f"geoflow: stage order: {exc}", file=sys.stderr)
        return EXIT_STAGE_ORDER
    except FileNotFoundError as exc:
        print(f"geoflow: {exc}", file=sys.stderr)
        return EXIT_MISSING_INPUT
    except (ValueError, KeyError, AssertionError) as exc:
        print(f"geoflow: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
