"""Minimum ball covers hitting path families, plus duality reports.

The cover side is a set-cover over vertex-centered balls of a fixed radius;
exact solving branches on the family member with fewest covering candidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import CapacityError, InputError, InternalInconsistencyError
from .graph import (
    CenteredSet,
    Graph,
    Number,
    VertexSet,
    _ball,
    as_vertex_set,
    leq,
)
from .packing import (
    GallaiResult,
    PackingInstance,
    _enumerate_a_paths,
    gallai_packing,
    max_far_packing,
    max_independent_set,
)
from .paths import enumerate_chordless_paths


@dataclass(frozen=True)
class CoverInstance:
    host: Graph
    radius: Number
    #: implicit path family (l, x, y) ...
    l: Optional[Number] = None
    x: Optional[frozenset] = None
    y: Optional[frozenset] = None
    #: ... or an explicit list of member vertex sets
    explicit_family: Optional[Tuple[frozenset, ...]] = None
    mode: str = "exact"

    def __post_init__(self):
        if self.radius < 0:
            raise InputError("negative cover radius")
        implicit = self.l is not None and self.x is not None and self.y is not None
        if implicit == (self.explicit_family is not None):
            raise InputError("give either (l, x, y) or explicit_family")
        if self.mode not in ("exact", "greedy"):
            raise InputError(f"unknown mode {self.mode!r}")

    def family(self) -> Tuple[frozenset, ...]:
        if self.explicit_family is not None:
            for member in self.explicit_family:
                if not member:
                    raise InputError("empty family member cannot be hit")
                as_vertex_set(self.host, member)
            return self.explicit_family
        # a set hits every path iff it hits every chordless path
        enum = enumerate_chordless_paths(self.host, self.l, self.x, self.y, cap=None)
        return tuple(p.vertex_set for p in enum.paths)


@dataclass
class CoverSolution:
    centered: CenteredSet
    count: int
    optimal: bool
    nodes_explored: int = 0

    def to_json_dict(self) -> dict:
        return {
            "count": self.count,
            "centers": sorted(self.centered.centers.members),
            "radius": _json_num(self.centered.radius),
            "optimal": self.optimal,
        }


def _json_num(x):
    from fractions import Fraction

    return str(x) if isinstance(x, Fraction) else x


def min_set_cover(universe: Sequence[int], sets: Dict[int, frozenset]):
    """Exact minimum set cover by branch-and-bound.

    ``sets`` maps candidate ids to covered element sets.  Branches on the
    element covered by fewest candidates; deterministic tie-break by id.
    Returns (chosen ids sorted, nodes explored).
    """
    universe = frozenset(universe)
    for el in universe:
        if not any(el in s for s in sets.values()):
            raise InternalInconsistencyError(f"element {el} is uncoverable")
    candidates = sorted(c for c in sets if sets[c] & universe)

    # greedy upper bound
    best: Optional[List[int]] = None
    uncovered = set(universe)
    greedy: List[int] = []
    while uncovered:
        c = max(candidates, key=lambda c: (len(sets[c] & uncovered), -c))
        greedy.append(c)
        uncovered -= sets[c]
    best = greedy

    max_size = max((len(sets[c] & universe) for c in candidates), default=1) or 1
    nodes = 0

    def search(uncovered: frozenset, chosen: List[int]):
        nonlocal best, nodes
        nodes += 1
        if not uncovered:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + math.ceil(len(uncovered) / max_size) >= len(best):
            return
        pivot = min(
            uncovered,
            key=lambda el: (sum(1 for c in candidates if el in sets[c]), el),
        )
        covers = [c for c in candidates if pivot in sets[c]]
        covers.sort(key=lambda c: (-len(sets[c] & uncovered), c))
        for c in covers:
            chosen.append(c)
            search(uncovered - sets[c], chosen)
            chosen.pop()

    search(universe, [])
    return sorted(best), nodes


def min_ball_hitting(inst: CoverInstance) -> CoverSolution:
    """Minimum number of radius-``inst.radius`` vertex-centered balls whose
    union intersects every family member."""
    g = inst.host
    family = inst.family()
    if not family:
        empty = VertexSet(frozenset(), g)
        return CoverSolution(CenteredSet(empty, empty, inst.radius), 0, True)

    balls = {c: _ball(g, c, inst.radius) for c in g.vertices}
    hit_sets = {
        c: frozenset(i for i, member in enumerate(family) if balls[c] & member)
        for c in g.vertices
    }
    universe = range(len(family))

    if inst.mode == "greedy":
        chosen: List[int] = []
        uncovered = set(universe)
        while uncovered:
            c = max(g.vertices, key=lambda c: (len(hit_sets[c] & uncovered), -c))
            chosen.append(c)
            uncovered -= hit_sets[c]
        optimal = False
        nodes = 0
    else:
        chosen, nodes = min_set_cover(universe, hit_sets)
        optimal = True

    member_union = frozenset().union(*family)
    z = frozenset().union(*(balls[c] for c in chosen)) & member_union
    centered = CenteredSet(
        VertexSet(z, g), VertexSet(frozenset(chosen), g), inst.radius
    )
    return CoverSolution(centered, len(chosen), optimal, nodes)


# ---------------------------------------------------------------------------
# duality report


@dataclass
class DualityCell:
    value: Optional[int]
    exact: bool
    flag: Optional[str] = None


@dataclass
class DualityReport:
    fingerprint: str
    packing_by_r: Dict[Number, DualityCell] = field(default_factory=dict)
    cover_by_radius: Dict[Number, DualityCell] = field(default_factory=dict)

    def check_weak_duality(self) -> List[str]:
        """Weak duality: r > 2*beta forces cover(beta) >= packing(r).
        Returns the list of violated (r, beta) pairs (empty = all good)."""
        bad = []
        for r, pc in self.packing_by_r.items():
            for beta, cc in self.cover_by_radius.items():
                if pc.value is None or cc.value is None:
                    continue
                if not pc.exact or not cc.exact:
                    continue
                if r > 2 * beta and cc.value < pc.value:
                    bad.append(f"r={r} beta={beta}: cover {cc.value} < packing {pc.value}")
        return bad

    def to_json_dict(self) -> dict:
        return {
            "fingerprint": self.fingerprint,
            "packing": {
                str(r): {"value": c.value, "exact": c.exact, "flag": c.flag}
                for r, c in self.packing_by_r.items()
            },
            "cover": {
                str(b): {"value": c.value, "exact": c.exact, "flag": c.flag}
                for b, c in self.cover_by_radius.items()
            },
        }

    def to_csv(self) -> str:
        lines = ["kind,threshold,value,exact,flag"]
        for r, c in sorted(self.packing_by_r.items()):
            lines.append(f"packing,{r},{c.value},{c.exact},{c.flag or ''}")
        for b, c in sorted(self.cover_by_radius.items()):
            lines.append(f"cover,{b},{c.value},{c.exact},{c.flag or ''}")
        return "\n".join(lines) + "\n"


def graph_fingerprint(g: Graph, *extra) -> str:
    import hashlib

    payload = repr((g.vertices, g.edges, sorted(g.weights.items()) if g.weights else None, extra))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def duality_sweep(
    g: Graph, x, y, l: Number, r_values: Sequence[Number], beta_values: Sequence[Number]
) -> DualityReport:
    """Fill packing and cover tables; exact where caps permit, greedy with a
    per-cell flag otherwise."""
    x = as_vertex_set(g, x)
    y = as_vertex_set(g, y)
    report = DualityReport(graph_fingerprint(g, sorted(x.members), sorted(y.members), l))
    for r in r_values:
        try:
            sol = max_far_packing(PackingInstance(g, x.members, y.members, l, r, "exact"))
            report.packing_by_r[r] = DualityCell(sol.size, True)
        except CapacityError:
            sol = max_far_packing(PackingInstance(g, x.members, y.members, l, r, "greedy"))
            report.packing_by_r[r] = DualityCell(sol.size, False, "capacity:greedy")
    for beta in beta_values:
        try:
            sol = min_ball_hitting(CoverInstance(g, beta, l=l, x=x.members, y=y.members))
            report.cover_by_radius[beta] = DualityCell(sol.count, True)
        except CapacityError:
            sol = min_ball_hitting(
                CoverInstance(g, beta, l=l, x=x.members, y=y.members, mode="greedy")
            )
            report.cover_by_radius[beta] = DualityCell(sol.count, False, "capacity:greedy")
    return report


# ---------------------------------------------------------------------------
# Gallai dichotomy


@dataclass
class GallaiVerdict:
    branch: str  # "packing" | "hitting"
    k: int
    packing: Optional[GallaiResult] = None
    hitting_set: Optional[frozenset] = None

    def to_json_dict(self) -> dict:
        doc = {"branch": self.branch, "k": self.k}
        if self.packing is not None:
            doc["packing"] = [list(p.sequence) for p in self.packing.paths]
        if self.hitting_set is not None:
            doc["hitting_set"] = sorted(self.hitting_set)
        return doc


def gallai_check(g: Graph, a, k: int) -> GallaiVerdict:
    """Either k disjoint A-paths, or a vertex set of size <= 2k-2 hitting all
    A-paths (the classical dichotomy, verified exhaustively)."""
    if k < 1:
        raise InputError("k must be positive")
    a = as_vertex_set(g, a)
    result = gallai_packing(g, a.members, with_witness=True)
    if result.count >= k:
        return GallaiVerdict("packing", k, packing=result)
    paths = _enumerate_a_paths(g, a.members)
    if not paths:
        return GallaiVerdict("hitting", k, hitting_set=frozenset())
    sets = {v: frozenset(i for i, p in enumerate(paths) if v in p.vertex_set) for v in g.vertices}
    chosen, _ = min_set_cover(range(len(paths)), sets)
    if len(chosen) > 2 * k - 2:
        raise InternalInconsistencyError(
            f"Gallai bound violated: hitting set {len(chosen)} > {2 * k - 2}"
        )
    return GallaiVerdict("hitting", k, hitting_set=frozenset(chosen))


def min_separating_balls(g: Graph, x, y, radius: Number, size_cap: int):
    """Fewest radius-balls whose union meets every x-y path.

    A ball union hits every x-y path exactly when deleting it leaves no x-y
    path, so this searches center subsets by iterative deepening and checks
    separation directly — scaling past the path-enumeration cap.  Returns
    (count, chosen centers); raises CapacityError when size_cap balls do not
    suffice.
    """
    from itertools import combinations

    x = as_vertex_set(g, x)
    y = as_vertex_set(g, y)
    balls = {c: _ball(g, c, radius) for c in g.vertices}

    def separated(union: frozenset) -> bool:
        free_x = x.members - union
        if not free_x:
            return True
        seen = set(free_x)
        stack = list(free_x)
        while stack:
            u = stack.pop()
            if u in y.members:
                return False
            for n in g.neighbors(u):
                if n not in union and n not in seen:
                    seen.add(n)
                    stack.append(n)
        return True

    verts = sorted(g.vertices)
    for size in range(size_cap + 1):
        for centers in combinations(verts, size):
            union = frozenset().union(*(balls[c] for c in centers)) \
                if centers else frozenset()
            if separated(union):
                return size, frozenset(centers)
    raise CapacityError(
        "no separating ball family within the size cap",
        cap=size_cap,
        actual=None,
    )
