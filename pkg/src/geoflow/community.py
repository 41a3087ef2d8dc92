"""Directed weighted modularity and hierarchical modularity optimization.

Modularity compares intra-community weight against a null model that
preserves every node's in-strength and out-strength, diagonal terms
included. The optimizer is a two-phase local search: seeded greedy sweeps
with graph aggregation, then a refinement loop applying the single best
relocation or community merge per pass. Multi-restart with the trivial
one-community partition (Q = 0) always in the candidate set keeps the
result deterministic and nonnegative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .network import FlowNetwork

Node = Hashable
EdgeMap = Mapping[tuple[Node, Node], float]

# Minimum modularity gain for any local move; Q is scale-free, so this
# absolute cutoff behaves identically under edge-weight rescaling.
GAIN_EPS = 1e-12
# A community splits in the hierarchy only if its internal partition
# scores above this, filtering float-noise "improvements" over Q=0.
SPLIT_EPS = 1e-9


@dataclass(slots=True)
class Partition:
    """Community assignment (dense ids from 0) with its modularity score."""

    assignment: dict[Node, int]
    q: float

    def communities(self) -> list[list[Node]]:
        groups: dict[int, list[Node]] = {}
        for node, cid in self.assignment.items():
            groups.setdefault(cid, []).append(node)
        return [sorted(groups[cid]) for cid in sorted(groups)]

    @property
    def n_communities(self) -> int:
        return len(set(self.assignment.values()))


@dataclass(slots=True)
class PartitionHierarchy:
    """Nested partitions; level k+1 refines level k."""

    levels: list[Partition]
    parents: list[dict[int, int | None]]  # per level: community id -> parent id


def _coerce(
    graph: FlowNetwork | EdgeMap, weights: str, nodes: Iterable[Node] | None
) -> tuple[list[Node], dict[tuple[Node, Node], float]]:
    if isinstance(graph, FlowNetwork):
        edge_map: dict[tuple[Node, Node], float] = {}
        for key, edge in graph.edges.items():
            if weights == "est":
                if edge.est_weight is None:
                    raise ValueError("est weights not set; normalize first or use weights='raw'")
                edge_map[key] = edge.est_weight
            else:
                edge_map[key] = float(edge.raw_weight)
        node_list: list[Node] = list(graph.nodes)
    else:
        edge_map = {k: float(w) for k, w in graph.items()}
        endpoints = {u for u, _ in edge_map} | {v for _, v in edge_map}
        node_list = list(nodes) if nodes is not None else sorted(endpoints)
        missing = endpoints - set(node_list)
        if missing:
            raise ValueError(f"edges reference nodes outside the node set: {sorted(missing)}")
    for key, w in edge_map.items():
        if not math.isfinite(w) or w < 0.0:
            raise ValueError(f"edge {key} has invalid weight {w}")
    return node_list, edge_map


class _Graph:
    """Index-based adjacency over a canonical (sorted) node order."""

    __slots__ = ("n", "out_nbrs", "in_nbrs", "self_w", "s_out", "s_in", "total")

    def __init__(self, n: int, edges: Mapping[tuple[int, int], float]):
        self.n = n
        self.out_nbrs: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        self.in_nbrs: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        self.self_w = [0.0] * n
        self.s_out = [0.0] * n
        self.s_in = [0.0] * n
        for (i, j), w in sorted(edges.items()):
            self.s_out[i] += w
            self.s_in[j] += w
            if i == j:
                self.self_w[i] += w
            else:
                self.out_nbrs[i].append((j, w))
                self.in_nbrs[j].append((i, w))
        self.total = math.fsum(w for _, w in sorted(edges.items()))


def _build_graph(node_list: Sequence[Node], edge_map: EdgeMap) -> tuple[list[Node], _Graph]:
    canonical = sorted(node_list)
    index = {node: i for i, node in enumerate(canonical)}
    edges = {(index[u], index[v]): w for (u, v), w in edge_map.items()}
    return canonical, _Graph(len(canonical), edges)


def _q_of(graph: _Graph, comm: Sequence[int]) -> float:
    """Modularity of an index-based assignment, compensated summation."""
    internal: dict[int, list[float]] = {}
    s_out_c: dict[int, list[float]] = {}
    s_in_c: dict[int, list[float]] = {}
    for i in range(graph.n):
        c = comm[i]
        s_out_c.setdefault(c, []).append(graph.s_out[i])
        s_in_c.setdefault(c, []).append(graph.s_in[i])
        if graph.self_w[i]:
            internal.setdefault(c, []).append(graph.self_w[i])
        for j, w in graph.out_nbrs[i]:
            if comm[j] == c:
                internal.setdefault(c, []).append(w)
    total = graph.total
    terms = []
    for c in sorted(s_out_c):
        w_in = math.fsum(internal.get(c, ()))
        null = math.fsum(s_out_c[c]) * math.fsum(s_in_c[c]) / total
        terms.append(w_in - null)
    return math.fsum(terms) / total


def modularity(
    graph: FlowNetwork | EdgeMap,
    partition: Mapping[Node, int],
    weights: str = "est",
    nodes: Iterable[Node] | None = None,
) -> float:
    """Q = (1/W) sum_ij [w_ij - s_out_i * s_in_j / W] * delta(c_i, c_j).

    The sum runs over all ordered node pairs including i = j, so the null
    model charges every community for its members' own strength products.
    The one-community partition scores exactly zero by construction;
    W must be positive.
    """
    node_list, edge_map = _coerce(graph, weights, nodes)
    unassigned = [n for n in node_list if n not in partition]
    if unassigned:
        raise ValueError(f"partition misses nodes: {unassigned[:5]}")
    canonical, g = _build_graph(node_list, edge_map)
    if g.total <= 0.0:
        raise ValueError("modularity undefined: total edge weight is zero")
    comm = [partition[n] for n in canonical]
    return _q_of(g, comm)


def _renumber(comm: list[int]) -> list[int]:
    """Dense ids ordered by each community's smallest member index."""
    mapping: dict[int, int] = {}
    for c in comm:
        if c not in mapping:
            mapping[c] = len(mapping)
    return [mapping[c] for c in comm]


def _sweep(graph: _Graph, comm: list[int], s_out_c: list[float], s_in_c: list[float], order: np.ndarray) -> bool:
    """One greedy pass of best-gain single-node moves; True if any node moved."""
    total = graph.total
    moved = False
    for raw_i in order:
        i = int(raw_i)
        a = comm[i]
        k_out: dict[int, float] = {}
        for j, w in graph.out_nbrs[i]:
            c = comm[j]
            k_out[c] = k_out.get(c, 0.0) + w
        k_in: dict[int, float] = {}
        for j, w in graph.in_nbrs[i]:
            c = comm[j]
            k_in[c] = k_in.get(c, 0.0) + w
        s_oa = s_out_c[a] - graph.s_out[i]
        s_ia = s_in_c[a] - graph.s_in[i]
        link_a = k_out.get(a, 0.0) + k_in.get(a, 0.0)
        best_gain = GAIN_EPS
        best_c = a
        for c in sorted(set(k_out) | set(k_in)):  # ascending: ties keep lowest id
            if c == a:
                continue
            link_c = k_out.get(c, 0.0) + k_in.get(c, 0.0)
            gain = (
                (link_c - link_a)
                - (graph.s_out[i] * (s_in_c[c] - s_ia) + graph.s_in[i] * (s_out_c[c] - s_oa)) / total
            ) / total
            if gain > best_gain:
                best_gain = gain
                best_c = c
        if best_c != a:
            comm[i] = best_c
            s_out_c[a] -= graph.s_out[i]
            s_in_c[a] -= graph.s_in[i]
            s_out_c[best_c] += graph.s_out[i]
            s_in_c[best_c] += graph.s_in[i]
            moved = True
    return moved


def _aggregate(graph: _Graph, comm: list[int]) -> tuple[_Graph, list[int]]:
    """Collapse communities into super-nodes; returns (new graph, dense comm)."""
    dense = _renumber(comm)
    n_super = max(dense) + 1
    edges: dict[tuple[int, int], float] = {}
    for i in range(graph.n):
        ci = dense[i]
        if graph.self_w[i]:
            key = (ci, ci)
            edges[key] = edges.get(key, 0.0) + graph.self_w[i]
        for j, w in graph.out_nbrs[i]:
            key = (ci, dense[j])
            edges[key] = edges.get(key, 0.0) + w
    return _Graph(n_super, edges), dense


def _one_restart(graph: _Graph, rng: np.random.Generator) -> list[int]:
    """Greedy sweeps with aggregation until no move improves modularity."""
    membership = list(range(graph.n))  # original node -> current super-node
    g = graph
    while True:
        comm = list(range(g.n))
        s_out_c = list(g.s_out)
        s_in_c = list(g.s_in)
        any_move = False
        while _sweep(g, comm, s_out_c, s_in_c, rng.permutation(g.n)):
            any_move = True
        if not any_move:
            break
        prev_n = g.n
        g, dense = _aggregate(g, comm)
        # dense[s] is the super-node s's new id, so chain it through membership
        membership = [dense[m] for m in membership]
        if g.n == prev_n:
            break
    return _renumber(membership)


def _refine(graph: _Graph, comm: list[int]) -> list[int]:
    """Apply the single best relocation or merge per pass until none helps.

    Relocation targets include every existing community and one empty
    community (splitting a node off); merges join two whole communities.
    Scan order is fixed, so equal gains resolve to the first candidate:
    node-ascending then target-id-ascending, relocations before merges.
    """
    total = graph.total
    comm = _renumber(comm)
    while True:
        n_comm = max(comm) + 1
        s_out_c = [0.0] * n_comm
        s_in_c = [0.0] * n_comm
        size = [0] * n_comm
        for i in range(graph.n):
            c = comm[i]
            s_out_c[c] += graph.s_out[i]
            s_in_c[c] += graph.s_in[i]
            size[c] += 1
        cross: dict[tuple[int, int], float] = {}
        for i in range(graph.n):
            ci = comm[i]
            for j, w in graph.out_nbrs[i]:
                cj = comm[j]
                if ci != cj:
                    key = (ci, cj)
                    cross[key] = cross.get(key, 0.0) + w
        best_gain = GAIN_EPS
        best_move: tuple[int, int] | None = None
        best_merge: tuple[int, int] | None = None
        for i in range(graph.n):
            a = comm[i]
            k_out: dict[int, float] = {}
            for j, w in graph.out_nbrs[i]:
                c = comm[j]
                k_out[c] = k_out.get(c, 0.0) + w
            k_in: dict[int, float] = {}
            for j, w in graph.in_nbrs[i]:
                c = comm[j]
                k_in[c] = k_in.get(c, 0.0) + w
            s_oa = s_out_c[a] - graph.s_out[i]
            s_ia = s_in_c[a] - graph.s_in[i]
            link_a = k_out.get(a, 0.0) + k_in.get(a, 0.0)
            targets = list(range(n_comm))
            if size[a] > 1:
                targets.append(n_comm)  # fresh empty community, considered last
            for c in targets:
                if c == a:
                    continue
                if c < n_comm:
                    link_c = k_out.get(c, 0.0) + k_in.get(c, 0.0)
                    s_oc, s_ic = s_out_c[c], s_in_c[c]
                else:
                    link_c, s_oc, s_ic = 0.0, 0.0, 0.0
                gain = (
                    (link_c - link_a)
                    - (graph.s_out[i] * (s_ic - s_ia) + graph.s_in[i] * (s_oc - s_oa)) / total
                ) / total
                if gain > best_gain:
                    best_gain = gain
                    best_move = (i, c)
                    best_merge = None
        for c in range(n_comm):
            for d in range(c + 1, n_comm):
                joint = cross.get((c, d), 0.0) + cross.get((d, c), 0.0)
                gain = (joint - (s_out_c[c] * s_in_c[d] + s_out_c[d] * s_in_c[c]) / total) / total
                if gain > best_gain:
                    best_gain = gain
                    best_move = None
                    best_merge = (c, d)
        if best_move is not None:
            i, c = best_move
            comm[i] = c
            comm = _renumber(comm)
        elif best_merge is not None:
            c, d = best_merge
            comm = _renumber([c if x == d else x for x in comm])
        else:
            return comm


def optimize_partition(
    graph: FlowNetwork | EdgeMap,
    seed: int = 0,
    restarts: int = 20,
    weights: str = "est",
    nodes: Iterable[Node] | None = None,
) -> Partition:
    """Best partition found over seeded restarts; never below Q = 0.

    Deterministic in (graph, seed, restarts): nodes are processed in a
    canonical sorted order and each restart's visit order comes from its
    own seeded generator, so the input ordering of nodes and edges is
    irrelevant. Equal scores resolve to the earliest restart, with the
    one-community partition acting as restart number minus one.
    """
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    node_list, edge_map = _coerce(graph, weights, nodes)
    if not node_list:
        raise ValueError("empty node set")
    canonical, g = _build_graph(node_list, edge_map)
    flat = {node: 0 for node in canonical}
    if g.total <= 0.0:
        return Partition(assignment=flat, q=0.0)
    best_q = 0.0
    best_comm: list[int] | None = None
    for restart in range(restarts):
        rng = np.random.default_rng([seed, restart])
        comm = _one_restart(g, rng)
        comm = _refine(g, comm)
        q = _q_of(g, comm)
        if q > best_q:
            best_q = q
            best_comm = comm
    if best_comm is None:
        return Partition(assignment=flat, q=0.0)
    dense = _renumber(best_comm)
    return Partition(assignment={canonical[i]: dense[i] for i in range(g.n)}, q=best_q)


def _sub_seed(seed: int, level: int, parent: int) -> int:
    return int(np.random.SeedSequence([seed, level, parent]).generate_state(1)[0])


def hierarchical_partition(
    graph: FlowNetwork | EdgeMap,
    max_levels: int = 3,
    seed: int = 0,
    restarts: int = 20,
    weights: str = "est",
    nodes: Iterable[Node] | None = None,
    min_split_size: int = 3,
) -> PartitionHierarchy:
    """Iteratively re-partition inside each community, up to max_levels.

    Each community of the current level with at least min_split_size nodes
    is re-optimized on its induced sub-network (internal edges only); the
    split is adopted only when the sub-network partition scores clearly
    above zero. Unsplit communities carry down unchanged, so every level
    refines the previous one. Every level's q is scored on the full network.
    """
    if max_levels < 1:
        raise ValueError("max_levels must be >= 1")
    node_list, edge_map = _coerce(graph, weights, nodes)
    top = optimize_partition(edge_map, seed=seed, restarts=restarts, nodes=node_list)
    levels = [top]
    parents: list[dict[int, int | None]] = [{cid: None for cid in sorted(set(top.assignment.values()))}]
    for level in range(2, max_levels + 1):
        current = levels[-1].assignment
        members_of: dict[int, list[Node]] = {}
        for node, cid in current.items():
            members_of.setdefault(cid, []).append(node)
        new_assignment: dict[Node, int] = {}
        parent_of: dict[int, int | None] = {}
        next_id = 0
        for cid in sorted(members_of):
            members = sorted(members_of[cid])
            groups: list[list[Node]] = [members]
            if len(members) >= min_split_size:
                inside = set(members)
                sub_edges = {
                    (u, v): w for (u, v), w in edge_map.items() if u in inside and v in inside
                }
                if sub_edges and math.fsum(sub_edges.values()) > 0.0:
                    sub = optimize_partition(
                        sub_edges,
                        seed=_sub_seed(seed, level, cid),
                        restarts=restarts,
                        nodes=members,
                    )
                    if sub.n_communities > 1 and sub.q > SPLIT_EPS:
                        groups = sub.communities()
            for group in groups:
                for node in group:
                    new_assignment[node] = next_id
                parent_of[next_id] = cid
                next_id += 1
        q = modularity(edge_map, new_assignment, nodes=node_list)
        levels.append(Partition(assignment=new_assignment, q=q))
        parents.append(parent_of)
    return PartitionHierarchy(levels=levels, parents=parents)
