"""Directed country-to-country flow network.

Edges count distinct resident users of the origin seen in the destination.
Normalization divides each edge by the origin's penetration rate to
estimate people flow, after dropping countries with too little outgoing
population or penetration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .metrics import is_mobile
from .residence import CountryStats, UserProfile


@dataclass(slots=True)
class FlowEdge:
    origin: str
    destination: str
    raw_weight: int  # distinct users
    est_weight: float | None = None  # people estimate, set by normalization


@dataclass(slots=True)
class FlowNetwork:
    """Directed weighted graph over country codes; no self-loops."""

    nodes: list[str]  # sorted codes
    edges: dict[tuple[str, str], FlowEdge]
    mobile_residents: dict[str, int]  # outgoing population per node
    stats: dict[str, CountryStats] = field(default_factory=dict)
    normalized: bool = False

    def weight(self, origin: str, destination: str, kind: str = "raw") -> float:
        edge = self.edges.get((origin, destination))
        if edge is None:
            return 0.0
        if kind == "raw":
            return float(edge.raw_weight)
        if edge.est_weight is None:
            raise ValueError("est weights not set; normalize first")
        return edge.est_weight


def build_flow_network(profiles: Mapping[str, UserProfile]) -> FlowNetwork:
    """Edges (residence -> visited country) weighted by distinct users.

    A user visiting the same country repeatedly still counts once per edge;
    a user visiting two countries feeds two edges. Every country seen in
    any profile becomes a node, even without incident edges.
    """
    weights: dict[tuple[str, str], int] = {}
    mobile: dict[str, int] = {}
    nodes: set[str] = set()
    for profile in profiles.values():
        nodes.update(profile.counts)
        home = profile.residence
        if is_mobile(profile):
            mobile[home] = mobile.get(home, 0) + 1
        for country in profile.counts:
            if country != home:
                key = (home, country)
                weights[key] = weights.get(key, 0) + 1
    edges = {
        key: FlowEdge(origin=key[0], destination=key[1], raw_weight=w)
        for key, w in sorted(weights.items())
    }
    return FlowNetwork(
        nodes=sorted(nodes),
        edges=edges,
        mobile_residents={c: mobile.get(c, 0) for c in sorted(nodes)},
    )


def normalize_and_filter(
    network: FlowNetwork,
    stats: Mapping[str, CountryStats],
    min_outgoing: int = 500,
    min_penetration: float = 0.0005,
) -> FlowNetwork:
    """Drop under-covered countries, then convert raw flows to people estimates.

    A country survives when its outgoing population (distinct mobile
    residents) reaches min_outgoing and its penetration reaches
    min_penetration; failing either removes the node with all incident
    edges. Surviving edges get est_weight = raw_weight / penetration(origin).
    """
    surviving: list[str] = []
    for code in network.nodes:
        st = stats.get(code)
        penetration = st.penetration if st is not None else 0.0
        if penetration >= min_penetration and network.mobile_residents.get(code, 0) >= min_outgoing:
            surviving.append(code)
    keep = set(surviving)
    edges: dict[tuple[str, str], FlowEdge] = {}
    for (origin, destination), edge in sorted(network.edges.items()):
        if origin not in keep or destination not in keep:
            continue
        penetration = stats[origin].penetration
        assert penetration > 0.0, f"zero penetration on surviving node {origin}"
        edges[(origin, destination)] = FlowEdge(
            origin=origin,
            destination=destination,
            raw_weight=edge.raw_weight,
            est_weight=edge.raw_weight / penetration,
        )
    return FlowNetwork(
        nodes=surviving,
        edges=edges,
        mobile_residents={c: network.mobile_residents.get(c, 0) for c in surviving},
        stats={c: stats[c] for c in surviving if c in stats},
        normalized=True,
    )


@dataclass(slots=True)
class BalanceEntry:
    code: str
    inflow: float
    outflow: float
    balance: float  # inflow - outflow


def inflow_outflow_balance(network: FlowNetwork) -> dict[str, BalanceEntry]:
    """Per-country estimated inflow, outflow, and their difference."""
    if not network.normalized:
        raise ValueError("balance requires a normalized network")
    inflows: dict[str, list[float]] = {c: [] for c in network.nodes}
    outflows: dict[str, list[float]] = {c: [] for c in network.nodes}
    for (origin, destination), edge in sorted(network.edges.items()):
        assert edge.est_weight is not None
        outflows[origin].append(edge.est_weight)
        inflows[destination].append(edge.est_weight)
    out: dict[str, BalanceEntry] = {}
    for code in network.nodes:
        inflow = math.fsum(inflows[code])
        outflow = math.fsum(outflows[code])
        out[code] = BalanceEntry(code=code, inflow=inflow, outflow=outflow, balance=inflow - outflow)
    return out


def global_balance(network: FlowNetwork) -> float:
    """Sum of all per-country balances, compensated to avoid rounding drift.

    Every edge enters once as inflow (+) and once as outflow (-), so the
    exact sum is zero; summing the signed terms in one compensated pass
    returns exactly 0.0 rather than accumulating per-country rounding.
    """
    if not network.normalized:
        raise ValueError("balance requires a normalized network")
    terms: list[float] = []
    for _, edge in sorted(network.edges.items()):
        assert edge.est_weight is not None
        terms.append(edge.est_weight)
        terms.append(-edge.est_weight)
    return math.fsum(terms)


def top_k_flows(network: FlowNetwork, k: int = 30, weight: str = "est") -> list[FlowEdge]:
    """The k heaviest edges, ties by (origin, destination) code order."""
    if weight not in ("est", "raw"):
        raise ValueError(f"weight must be 'est' or 'raw', got {weight!r}")
    if weight == "est" and not network.normalized:
        raise ValueError("est ranking requires a normalized network")

    def sort_key(edge: FlowEdge) -> tuple[float, str, str]:
        w = edge.est_weight if weight == "est" else float(edge.raw_weight)
        assert w is not None
        return (-w, edge.origin, edge.destination)

    ranked = sorted(network.edges.values(), key=sort_key)
    return ranked[: max(k, 0)]
