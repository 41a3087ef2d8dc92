"""Build a seeded synthetic world and look at what gets planted.

Everything downstream of this script is deterministic: same seed, same
world, same events, byte for byte.
"""

from geoflow.models import capital_distances
from geoflow.synth import event_lines, expected_flows, generate_events, make_world

world = make_world(6, seed=42, A=2.0, alpha=0.8, beta=0.6, gamma=1.0, n_blocks=2, block_boost=3.0)

print("countries:")
for c in world.countries:
    print(
        f"  {c.code}  pop={c.population:>9,}  capital=({c.capital[0]:+.1f}, {c.capital[1]:+.1f})"
        f"  penetration={c.penetration}  block={c.block}"
    )

distances = capital_distances({c.code: c.capital for c in world.countries})
closest = min((d, pair) for pair, d in distances.items() if pair[0] != pair[1])
print(f"\nclosest capitals: {closest[1][0]}-{closest[1][1]} at {closest[0]:,.0f} km")

# planted pairwise flow intensities, gravity shaped with a block boost
flows = expected_flows(world)
top = sorted(flows.items(), key=lambda kv: -kv[1])[:5]
print("\nstrongest planted flows:")
for (origin, destination), f in top:
    print(f"  {origin} -> {destination}  {f:,.0f}")

events, truth = generate_events(world, users_per_country=50, events_per_user=20, trip_rate=0.5)
print(f"\ngenerated {len(events):,} events for {len(truth.residences)} users")
print(f"bots planted: {len(truth.bots)} ({', '.join(sorted(truth.sources[u] for u in truth.bots)[:3])}, ...)")
print("planted mobility per country:")
for code, p in truth.planted_mobility.items():
    print(f"  {code}  p_mobile={p:.3f}  realized={truth.realized_mobile[code]}")

print("\nfirst event lines as the ingest stage will see them:")
for line in event_lines(events)[:4]:
    print(f"  {line}")
