"""Packings of pairwise-far paths: the packing side of the coarse duality.

Exact mode enumerates all canonical simple paths, builds the conflict
relation "set-distance < r" and extracts a maximum independent set of the
conflict graph by branch-and-bound with greedy clique-cover bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import networkx as nx

from .errors import CapacityError, InputError
from .graph import Graph, Number, as_vertex_set, leq, set_distance
from .paths import (
    PathWitness,
    enumerate_chordless_paths,
    enumerate_paths,
    is_a_path,
    make_path,
)

EXACT_PACKING_VERTEX_CAP = 16
GALLAI_EXHAUSTIVE_CAP = 14


@dataclass(frozen=True)
class PackingInstance:
    host: Graph
    x: frozenset
    y: frozenset
    l: Number = 0
    r: Number = 1
    mode: str = "exact"

    def __post_init__(self):
        as_vertex_set(self.host, self.x)
        as_vertex_set(self.host, self.y)
        if self.l < 0 or not self.r > 0:
            raise InputError("need l >= 0 and r > 0")
        if self.mode not in ("exact", "greedy"):
            raise InputError(f"unknown mode {self.mode!r}")


@dataclass
class PackingSolution:
    paths: Tuple[PathWitness, ...]
    certified_min_pairwise_distance: Optional[Number]
    optimal: bool
    nodes_explored: int = 0

    @property
    def size(self) -> int:
        return len(self.paths)

    def to_json_dict(self) -> dict:
        return {
            "size": self.size,
            "paths": [p.to_json_dict() for p in self.paths],
            "optimal": self.optimal,
            "stats": {"nodes_explored": self.nodes_explored},
        }


def _min_pairwise_distance(g: Graph, members: Sequence[frozenset]):
    best = None
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            d = set_distance(g, members[i], members[j])
            if best is None or d < best:
                best = d
    return best


def max_independent_set(conflicts: List[set], order: Sequence[int]):
    """Maximum independent set of a conflict graph given as adjacency sets.

    ``order`` fixes the deterministic branching order.  Returns the chosen
    indices (list) and the number of search nodes explored.
    """
    n = len(conflicts)
    best: List[int] = []
    nodes = 0

    def clique_cover_bound(cands: List[int]) -> int:
        # greedy clique cover: its size bounds the independent set from above
        cliques: List[List[int]] = []
        for v in cands:
            for cl in cliques:
                if all(u in conflicts[v] for u in cl):
                    cl.append(v)
                    break
            else:
                cliques.append([v])
        return len(cliques)

    def expand(cands: List[int], chosen: List[int]):
        nonlocal best, nodes
        nodes += 1
        if not cands:
            if len(chosen) > len(best):
                best = list(chosen)
            return
        if len(chosen) + clique_cover_bound(cands) <= len(best):
            return
        v = cands[0]
        # branch 1: take v
        expand([u for u in cands[1:] if u not in conflicts[v]], chosen + [v])
        # branch 2: skip v
        expand(cands[1:], chosen)

    expand(list(order), [])
    return best, nodes


def max_far_packing(inst: PackingInstance) -> PackingSolution:
    """Maximum collection of simple (l,x,y)-paths pairwise at set-distance at
    least r (exact mode), or a maximal greedy collection."""
    g = inst.host
    if inst.mode == "exact":
        if len(g) > EXACT_PACKING_VERTEX_CAP:
            raise CapacityError(
                "exact packing capped by path enumeration",
                cap=EXACT_PACKING_VERTEX_CAP,
                actual=len(g),
            )
        # chordless paths suffice: shortcutting keeps endpoints and shrinks
        # vertex sets, so it never breaks a far packing
        enum = enumerate_chordless_paths(g, inst.l, inst.x, inst.y, cap=None)
        paths = enum.paths
        vsets = [p.vertex_set for p in paths]
        conflicts: List[set] = [set() for _ in paths]
        for i in range(len(paths)):
            for j in range(i + 1, len(paths)):
                if not leq(inst.r, set_distance(g, vsets[i], vsets[j])):
                    conflicts[i].add(j)
                    conflicts[j].add(i)
        chosen, nodes = max_independent_set(conflicts, range(len(paths)))
        chosen_paths = tuple(paths[i] for i in sorted(chosen))
        mind = _min_pairwise_distance(g, [p.vertex_set for p in chosen_paths])
        return PackingSolution(chosen_paths, mind, optimal=True, nodes_explored=nodes)

    # greedy: repeatedly insert a shortest valid path, then exclude every
    # vertex at distance < r from it; paths in the remainder are r-far
    x = as_vertex_set(g, inst.x)
    y = as_vertex_set(g, inst.y)
    allowed = set(g.vertices)
    chosen_paths: List[PathWitness] = []
    while True:
        p = _shortest_lxy_path(g, allowed, x.members, y.members, inst.l)
        if p is None:
            break
        chosen_paths.append(p)
        for v in list(allowed):
            d = set_distance(g, frozenset([v]), p.vertex_set)
            if not leq(inst.r, d):
                allowed.discard(v)
    mind = _min_pairwise_distance(g, [p.vertex_set for p in chosen_paths])
    return PackingSolution(tuple(chosen_paths), mind, optimal=False)


def _shortest_lxy_path(g: Graph, allowed: set, x: frozenset, y: frozenset, l):
    """Shortest simple (l,x,y)-path inside ``allowed``, canonical tie-break.

    Endpoint distance is measured in the full host graph.
    """
    best = None
    for s in sorted(x & allowed):
        # BFS tree inside allowed (unweighted hop count is fine for greedy
        # ordering even on weighted hosts)
        parent = {s: None}
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for n in g.neighbors(u):
                    if n in allowed and n not in parent:
                        parent[n] = u
                        nxt.append(n)
            frontier = nxt
        from .graph import distance as _dist

        for t in sorted(y):
            if t not in parent:
                continue
            if not leq(l, _dist(g, s, t)):
                continue
            seq = []
            v = t
            while v is not None:
                seq.append(v)
                v = parent[v]
            seq.reverse()
            cand = make_path(g, seq)
            key = (cand.length, cand.sequence)
            if best is None or key < (best.length, best.sequence):
                best = cand
    return best


def menger_packing(g: Graph, x, y) -> int:
    """Maximum number of fully vertex-disjoint x-y paths, by vertex-capacitated
    maximum flow (each vertex split into an in/out pair of capacity one)."""
    x = as_vertex_set(g, x)
    y = as_vertex_set(g, y)
    if not x.members or not y.members:
        return 0
    dg = nx.DiGraph()
    src, dst = "s", "t"
    for v in g.vertices:
        dg.add_edge(("in", v), ("out", v), capacity=1)
    for u, v in g.edges:
        dg.add_edge(("out", u), ("in", v), capacity=len(g.vertices))
        dg.add_edge(("out", v), ("in", u), capacity=len(g.vertices))
    for v in x:
        dg.add_edge(src, ("in", v), capacity=1)
    for v in y:
        dg.add_edge(("out", v), dst, capacity=len(g.vertices))
    value, _ = nx.maximum_flow(dg, src, dst)
    return value


def _enumerate_a_paths(g: Graph, a) -> Tuple[PathWitness, ...]:
    """Chordless A-paths without internal A-vertices: every A-path contains
    one as a vertex subset, so packing maxima and hitting sets agree with the
    full family."""
    a = as_vertex_set(g, a)
    enum = enumerate_chordless_paths(g, 0, a, a, cap=None)
    return tuple(
        p for p in enum.paths
        if is_a_path(g, p, a) and not frozenset(p.sequence[1:-1]) & a.members
    )


@dataclass
class GallaiResult:
    count: int
    paths: Tuple[PathWitness, ...]
    mode: str


def gallai_packing(g: Graph, a, with_witness: bool = False):
    """Maximum number of vertex-disjoint A-paths (exhaustive, desk scale)."""
    if len(g) > GALLAI_EXHAUSTIVE_CAP:
        raise CapacityError(
            "exhaustive A-path packing capped",
            cap=GALLAI_EXHAUSTIVE_CAP,
            actual=len(g),
        )
    paths = _enumerate_a_paths(g, a)
    conflicts: List[set] = [set() for _ in paths]
    for i in range(len(paths)):
        for j in range(i + 1, len(paths)):
            if paths[i].vertex_set & paths[j].vertex_set:
                conflicts[i].add(j)
                conflicts[j].add(i)
    chosen, _ = max_independent_set(conflicts, range(len(paths)))
    result = GallaiResult(
        len(chosen), tuple(paths[i] for i in sorted(chosen)), "exhaustive"
    )
    return result if with_witness else result.count
