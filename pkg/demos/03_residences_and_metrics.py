"""From cleaned events to residences, penetration rates, and mobility metrics."""

import statistics

from geoflow.ingest import BoundaryIndex, build_trajectories, label_events
from geoflow.metrics import (
    build_mobility_profiles,
    daily_abroad_series,
    displacements,
    user_gyration_radii,
)
from geoflow.residence import build_profiles, compute_country_stats
from geoflow.synth import generate_events, make_world, world_boundaries

world = make_world(5, seed=3)
events, truth = generate_events(world, users_per_country=60, events_per_user=25, trip_rate=0.5)
index = BoundaryIndex(world_boundaries(world))
labeled, _ = label_events(events, index)

profiles = build_profiles(labeled)
hits = sum(1 for uid, p in profiles.items() if p.residence == truth.residences[uid])
print(f"residence assignment: {hits}/{len(profiles)} match the planted truth")

census = {c.code: c.population for c in world.countries}
stats = compute_country_stats(profiles, census, min_penetration=0.0, min_residents=1)
print("\ncountry statistics:")
for code in sorted(stats):
    s = stats[code]
    print(f"  {code}  residents={s.residents:>3}  penetration={s.penetration:.5f}  included={s.included}")

mobility = build_mobility_profiles(profiles, labeled)
print("\nmobility by residence country:")
for code in sorted(mobility):
    m = mobility[code]
    print(
        f"  {code}  rate={m.mobility_rate:.3f} (planted {truth.planted_mobility[code]:.3f})"
        f"  mean_r_g={m.mean_radius_km:,.0f} km  destinations={m.countries_visited}"
    )

radii = user_gyration_radii(labeled)
stay_home = sum(1 for r in radii.values() if r < 100.0)
print(f"\nradius of gyration: median {statistics.median(radii.values()):,.1f} km; "
      f"{stay_home}/{len(radii)} users stay within 100 km")

trajectories = build_trajectories(labeled)
hops = [d for t in trajectories.values() for d in displacements(t)]
short = sum(1 for d in hops if d < 100.0)
print(f"displacements: {len(hops):,} hops, {short / len(hops):.1%} under 100 km "
      f"(longest {max(hops):,.0f} km)")

series = daily_abroad_series(profiles, labeled, "outbound", year=2012)
code, s = next(iter(sorted(series.items())))
peak = max(range(len(s.values)), key=lambda d: s.values[d])
print(f"\ndaily outbound series for {code}: {sum(s.values)} user-days abroad, "
      f"peak {s.values[peak]} users on day {peak} (normalized {s.normalized[peak]:.0f})")
