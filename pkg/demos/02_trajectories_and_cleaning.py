"""Parse an event stream, label countries, and run both cleaning filters.

The stream here is synthetic plus a few hand-broken lines, so the parser's
accounting and the speed filter's work are visible.
"""

from geoflow.clean import source_popularity_filter, speed_filter
from geoflow.ingest import BoundaryIndex, GeoEvent, build_trajectories, label_events, parse_events
from geoflow.synth import event_lines, generate_events, make_world, world_boundaries

world = make_world(4, seed=7)
events, truth = generate_events(world, users_per_country=40, events_per_user=15, trip_rate=0.4)

lines = event_lines(events)
lines.insert(100, "u000003,not_a_timestamp,10.0,20.0,app_web")  # broken on purpose
lines.insert(200, "u000004,1335000000,95.0,20.0,app_web")  # latitude out of range

report = parse_events(lines)
print(f"lines in: {report.n_lines}   events out: {len(report.events)}   malformed: {report.n_malformed}")
for lineno, reason in report.errors:
    print(f"  line {lineno}: {reason}")

index = BoundaryIndex(world_boundaries(world))
labeled, dropped = label_events(report.events, index)
print(f"labeled {len(labeled)} events with countries ({dropped} outside all boundaries)")

# a teleporting event: 1 second after an existing one, half a world away
victim = labeled[10]
labeled.append(
    GeoEvent(victim.user_id, victim.timestamp + 1, -victim.lat, victim.lon - 170.0, victim.source, None)
)

trajectories = build_trajectories(labeled)
print(f"\n{len(trajectories)} trajectories; longest has "
      f"{max(len(t.events) for t in trajectories.values())} events")

kept = []
removed_total = 0
for user_id in sorted(trajectories):
    filtered, removed = speed_filter(trajectories[user_id], max_speed_kmh=1000.0)
    removed_total += removed
    kept.extend(filtered.events)
print(f"speed filter removed {removed_total} event(s)")

retained, cleaned, stats = source_popularity_filter(kept, coverage=0.95, weight_mode="users")
print("\nsource filter at 95% coverage:")
print(f"  users  {stats.users_before} -> {stats.users_after}  ({stats.user_fraction:.1%} kept)")
print(f"  events {stats.events_before} -> {stats.events_after}  ({stats.event_fraction:.1%} kept)")
for country in sorted(retained):
    ranked = [s for s, _ in stats.rankings[country]]
    print(f"  {country}: kept {sorted(retained[country])} of {ranked}")

bot_sources = {truth.sources[u] for u in truth.bots}
leaked = bot_sources & {e.source for e in cleaned}
print(f"\nbot sources leaked through: {len(leaked)}")
