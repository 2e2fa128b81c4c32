"""Tree machinery: separations, locations, tree-decompositions, subtree
Helly/selection theorems, and the centered hitting construction they power.

The hitting construction extends a tree-decomposition of a location by one
leaf per separation, traces each fattened member component onto the tree, and
reduces to the subtree Helly problem; the packing branch recombines labeled
components across members.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import (
    CapacityError,
    InputError,
    InternalInconsistencyError,
    PreconditionError,
)
from .graph import (
    CenteredRefusal,
    CenteredSet,
    Graph,
    Number,
    VertexSet,
    as_vertex_set,
    certify_centered,
    leq,
    neighborhood,
    set_distance,
)
from .paths import FatMinorModel

#: exact model-union enumeration bound
MODEL_ENUM_CAP = 12


# ---------------------------------------------------------------------------
# separations and locations


@dataclass(frozen=True)
class Separation:
    """A separation given by its side vertex sets; separator-internal edges
    canonically belong to side A, so edge data is derived, not stored."""

    host: Graph
    a: frozenset
    b: frozenset

    def __post_init__(self):
        for v in self.a | self.b:
            self.host._require_vertex(v)
        if self.a | self.b != frozenset(self.host.vertices):
            raise InputError("separation sides must cover the host")
        only_a = self.a - self.b
        only_b = self.b - self.a
        for u in only_a:
            for n in self.host.neighbors(u):
                if n in only_b:
                    raise InputError(
                        f"edge {u}-{n} crosses the separation strictly"
                    )

    @property
    def separator(self) -> frozenset:
        return self.a & self.b

    @property
    def order(self) -> int:
        return len(self.a & self.b)

    def flip(self) -> "Separation":
        return Separation(self.host, self.b, self.a)

    def to_json_dict(self) -> dict:
        return {
            "a": sorted(self.a),
            "b": sorted(self.b),
            "separator": sorted(self.separator),
        }


@dataclass(frozen=True)
class Location:
    host: Graph
    separations: Tuple[Separation, ...]

    def __post_init__(self):
        seps = self.separations
        for s in seps:
            if s.host is not self.host and s.host != self.host:
                raise InputError("location separations must share one host")
        for s, t in itertools.combinations(seps, 2):
            if not (s.a <= t.b and t.a <= s.b):
                raise InputError(
                    "location invariant violated: small sides not mutually "
                    "nested into big sides"
                )

    @property
    def core(self) -> frozenset:
        """Vertices on every big side (the part the decomposition covers)."""
        out = frozenset(self.host.vertices)
        for s in self.separations:
            out &= s.b
        return out

    def to_json_dict(self) -> dict:
        return {"separations": [s.to_json_dict() for s in self.separations]}


def location_from_json_dict(g: Graph, doc: dict) -> Location:
    seps = tuple(
        Separation(g, frozenset(d["a"]), frozenset(d["b"]))
        for d in doc["separations"]
    )
    return Location(g, seps)


# ---------------------------------------------------------------------------
# tree-decompositions


@dataclass
class TreeDecomposition:
    tree: Graph
    bags: Dict[int, frozenset]

    def __post_init__(self):
        if not self.tree.is_tree():
            raise InputError("decomposition tree is not a tree")
        if set(self.bags) != set(self.tree.vertices):
            raise InputError("bags must be indexed by the tree nodes")
        self.bags = {t: frozenset(bag) for t, bag in self.bags.items()}

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags.values()) - 1

    @property
    def max_bag_size(self) -> int:
        return max(len(b) for b in self.bags.values())

    @property
    def adhesion(self) -> int:
        best = 0
        for u, v in self.tree.edges:
            best = max(best, len(self.bags[u] & self.bags[v]))
        return best

    def validate(self, host: Graph) -> List[str]:
        """All violated decomposition axioms for ``host`` (empty = valid)."""
        problems = []
        covered = frozenset().union(*self.bags.values()) if self.bags else frozenset()
        missing = frozenset(host.vertices) - covered
        if missing:
            problems.append(f"vertices not in any bag: {sorted(missing)}")
        for u, v in host.edges:
            if not any(u in b and v in b for b in self.bags.values()):
                problems.append(f"edge {u}-{v} in no bag")
        for v in host.vertices:
            trace = [t for t, b in self.bags.items() if v in b]
            if trace and not self.tree.is_connected_set(trace):
                problems.append(f"trace of vertex {v} is disconnected")
        return problems

    def is_path_decomposition(self) -> bool:
        return all(len(self.tree.neighbors(t)) <= 2 for t in self.tree.vertices)

    def to_json_dict(self) -> dict:
        return {
            "tree": {
                "vertices": list(self.tree.vertices),
                "edges": [list(e) for e in self.tree.edges],
            },
            "bags": {str(t): sorted(b) for t, b in self.bags.items()},
        }


def decomposition_from_json_dict(doc: dict) -> TreeDecomposition:
    t = Graph(doc["tree"]["vertices"], [tuple(e) for e in doc["tree"]["edges"]])
    bags = {int(k): frozenset(v) for k, v in doc["bags"].items()}
    return TreeDecomposition(t, bags)


def min_degree_decomposition(g: Graph) -> TreeDecomposition:
    """Heuristic tree-decomposition from a minimum-degree elimination
    ordering.  The width is whatever it is — callers must read it, the
    routine never claims optimality."""
    if not len(g):
        raise InputError("empty graph has no decomposition")
    adj = {v: set(g.neighbors(v)) for v in g.vertices}
    order: List[int] = []
    bags: Dict[int, frozenset] = {}
    elim_index: Dict[int, int] = {}
    remaining = set(g.vertices)
    while remaining:
        v = min(remaining, key=lambda u: (len(adj[u] & remaining), u))
        nbrs = adj[v] & remaining - {v}
        node = len(order)
        bags[node] = frozenset({v} | nbrs)
        elim_index[v] = node
        order.append(v)
        for a in nbrs:
            adj[a].update(nbrs - {a})
        remaining.discard(v)
    edges = []
    for node, v in enumerate(order):
        later = [u for u in bags[node] if u != v and elim_index[u] > node]
        if later:
            parent_vertex = min(later, key=lambda u: elim_index[u])
            edges.append((node, elim_index[parent_vertex]))
    tree = Graph(range(len(order)), edges)
    if not tree.is_tree():  # isolated pieces: chain the roots together
        comps = tree.components()
        extra = [
            (sorted(comps[i])[0], sorted(comps[i + 1])[0])
            for i in range(len(comps) - 1)
        ]
        tree = Graph(range(len(order)), edges + extra)
    return TreeDecomposition(tree, bags)


# ---------------------------------------------------------------------------
# subtree theorems


@dataclass
class TreeHellyResult:
    branch: str  # "packing" | "hitting"
    packing: Tuple[int, ...] = ()
    hitting: frozenset = frozenset()


def _check_subtrees(t: Graph, subtrees: Sequence[frozenset]):
    if not t.is_tree():
        raise InputError("host is not a tree")
    for i, s in enumerate(subtrees):
        if not s:
            raise InputError(f"subtree {i} is empty")
        if not t.is_connected_set(s):
            raise InputError(f"subtree {i} is disconnected")


def tree_helly(t: Graph, subtrees: Sequence[frozenset], k: int) -> TreeHellyResult:
    """Either ``k`` pairwise disjoint subtrees, or at most ``k-1`` tree nodes
    hitting every subtree.

    Greedy and exact: root at the lowest id; repeatedly take the subtree whose
    top (shallowest) node is deepest — that top hits every subtree meeting the
    taken one, so the greedy packing size is the true maximum.
    """
    subtrees = [frozenset(s) for s in subtrees]
    _check_subtrees(t, subtrees)
    if k < 0:
        raise InputError("negative k")
    if not subtrees:
        if k == 0:
            return TreeHellyResult("packing")
        return TreeHellyResult("hitting", hitting=frozenset())

    root = min(t.vertices)
    depth = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for u in frontier:
            for n in t.neighbors(u):
                if n not in depth:
                    depth[n] = depth[u] + 1
                    nxt.append(n)
        frontier = nxt

    def top(s: frozenset) -> int:
        return min(s, key=lambda v: (depth[v], v))

    remaining = list(range(len(subtrees)))
    picks: List[int] = []
    tops: List[int] = []
    while remaining:
        i = max(remaining, key=lambda j: (depth[top(subtrees[j])], -top(subtrees[j]), -j))
        picks.append(i)
        tops.append(top(subtrees[i]))
        remaining = [j for j in remaining if not (subtrees[j] & subtrees[i])]
    if len(picks) >= k:
        return TreeHellyResult("packing", packing=tuple(picks[:k]))
    return TreeHellyResult("hitting", hitting=frozenset(tops))


def multi_family_select(
    t: Graph, families: Sequence[Sequence[frozenset]], quotas: Sequence[int]
) -> List[List[int]]:
    """Pick ``quotas[i]`` members from family ``i`` so that all picked
    subtrees are pairwise disjoint.

    Requires each family to contain ``sum(quotas)`` pairwise disjoint members
    (re-verified); existence is then guaranteed, so a failed search reports a
    precondition violation.
    """
    if len(families) != len(quotas):
        raise InputError("one quota per family required")
    if any(q < 0 for q in quotas):
        raise InputError("negative quota")
    k = sum(quotas)
    clean = [[frozenset(s) for s in fam] for fam in families]
    for i, fam in enumerate(clean):
        _check_subtrees(t, fam)
        if quotas[i] > len(fam):
            raise InputError(f"quota {quotas[i]} exceeds family {i} size")
        res = tree_helly(t, fam, k)
        if res.branch != "packing":
            raise PreconditionError(
                f"family {i} lacks {k} pairwise disjoint members", detail=i
            )

    selection: List[List[int]] = [[] for _ in clean]

    def extend(fam_idx: int, start: int, used: frozenset) -> bool:
        if fam_idx == len(clean):
            return True
        if len(selection[fam_idx]) == quotas[fam_idx]:
            return extend(fam_idx + 1, 0, used)
        fam = clean[fam_idx]
        for j in range(start, len(fam)):
            if fam[j] & used:
                continue
            selection[fam_idx].append(j)
            if extend(fam_idx, j + 1, used | fam[j]):
                return True
            selection[fam_idx].pop()
        return False

    if not extend(0, 0, frozenset()):
        raise PreconditionError(
            "certified selection does not exist; some family's disjointness "
            "certificate must be wrong",
            detail=None,
        )
    return selection


# ---------------------------------------------------------------------------
# component-exchangeable families

Member = Tuple[frozenset, ...]  # ordered labeled components


@dataclass
class ExchangeableFamily:
    host: Graph
    members: Tuple[Member, ...]
    component_count: int

    def __post_init__(self):
        self.members = tuple(
            tuple(frozenset(c) for c in m) for m in self.members
        )
        for m in self.members:
            if len(m) != self.component_count:
                raise InputError(
                    f"member has {len(m)} labeled components, "
                    f"expected {self.component_count}"
                )
            for c in m:
                if not c:
                    raise InputError("empty labeled component")
                if not self.host.is_connected_set(c):
                    raise InputError(f"component {sorted(c)} is disconnected")
            for c1, c2 in itertools.combinations(m, 2):
                if c1 & c2:
                    raise InputError("labeled components of a member overlap")

    def union(self, m: Member) -> frozenset:
        return frozenset().union(*m)

    def verify_exchange(self, samples: int = 100, seed: int = 0) -> bool:
        """Sampled recombination check: pick component j from a random member
        per label; whenever the picks are pairwise disjoint, the recombined
        tuple must be a member."""
        if not self.members:
            return True
        member_set = set(self.members)
        rng = random.Random(seed)
        c = self.component_count
        for _ in range(samples):
            picks = tuple(
                rng.choice(self.members)[j] for j in range(c)
            )
            if any(a & b for a, b in itertools.combinations(picks, 2)):
                continue
            if picks not in member_set:
                return False
        return True


# ---------------------------------------------------------------------------
# the centered hitting lemma


@dataclass
class EasyTreeResult:
    branch: str  # "packing" | "hitting"
    packing: Tuple[Member, ...] = ()
    centered: Optional[CenteredSet] = None
    center_budget: int = 0
    radius_budget: Number = 0


def _fattened(g: Graph, component: frozenset, l_vertices: frozenset, r: Number):
    return frozenset(neighborhood(g, component, r).members) & l_vertices


def easy_tree_hitting(
    g: Graph,
    l,
    fam: ExchangeableFamily,
    loc: Location,
    td: TreeDecomposition,
    r: Number,
    k: int,
    xi: int,
    eta: Number,
) -> EasyTreeResult:
    """Either ``k`` members pairwise at distance > 2r, or a centered set —
    at most (c·k−1)·xi centers, radius at most eta+r — hitting every member.

    All hypotheses are verified up front and violations are reported with the
    offending object.
    """
    l = as_vertex_set(g, l)
    if k < 1:
        raise InputError("k must be positive")
    c = fam.component_count
    for m in fam.members:
        if not fam.union(m) <= l.members:
            raise PreconditionError("family member leaves the ambient subgraph",
                                    detail=m)

    # hypothesis: td decomposes the location core and holds every separator
    core = loc.core
    problems = td.validate(g.induced(core))
    if problems:
        raise PreconditionError("not a tree-decomposition of the location core",
                                detail=problems)
    anchor: Dict[int, int] = {}
    for idx, sep in enumerate(loc.separations):
        home = [t for t, b in td.bags.items() if sep.separator <= b]
        if not home:
            raise PreconditionError("separator not inside any bag",
                                    detail=sep.to_json_dict())
        anchor[idx] = min(home)

    # hypothesis: every bag is (xi, eta)-centered
    bag_certs: Dict[int, CenteredSet] = {}
    for t, bag in td.bags.items():
        cert = certify_centered(g, bag, xi, eta, "exact")
        if isinstance(cert, CenteredRefusal):
            raise PreconditionError(f"bag at node {t} is not ({xi},{eta})-centered",
                                    detail=sorted(bag))
        bag_certs[t] = cert

    # hypothesis: fattened components connected inside l; none buried in a
    # small side away from its separator
    for m in fam.members:
        for comp in m:
            fat = _fattened(g, comp, l.members, r)
            if not g.is_connected_set(fat):
                raise PreconditionError(
                    "fattened component disconnected in the ambient subgraph",
                    detail=sorted(comp),
                )
            for sep in loc.separations:
                away = sep.a - neighborhood(g, sep.separator, r).members
                if comp <= away:
                    raise PreconditionError(
                        "member component buried inside a small side",
                        detail={"component": sorted(comp),
                                "separation": sep.to_json_dict()},
                    )

    if not fam.members:
        empty = VertexSet(frozenset(), g)
        return EasyTreeResult(
            "hitting",
            centered=CenteredSet(empty, empty, eta + r),
            center_budget=(c * k - 1) * xi,
            radius_budget=eta + r,
        )

    # direct packing attempt: members pairwise farther than 2r
    unions = [fam.union(m) for m in fam.members]
    far: List[set] = [set() for _ in unions]
    for i, j in itertools.combinations(range(len(unions)), 2):
        if set_distance(g, unions[i], unions[j]) > 2 * r:
            far[i].add(j)
            far[j].add(i)
    packing = _find_clique(far, k)
    if packing is not None:
        return EasyTreeResult("packing",
                              packing=tuple(fam.members[i] for i in packing))

    # extended tree: one fresh leaf per separation, bag = the small side
    next_id = max(td.tree.vertices) + 1
    leaf_of: Dict[int, int] = {}
    edges = list(td.tree.edges)
    nodes = list(td.tree.vertices)
    ext_bags = dict(td.bags)
    for idx in range(len(loc.separations)):
        leaf = next_id + idx
        leaf_of[idx] = leaf
        nodes.append(leaf)
        edges.append((anchor[idx], leaf))
        ext_bags[leaf] = loc.separations[idx].a
    ext_tree = Graph(nodes, edges)
    leaf_nodes = set(leaf_of.values())

    traces: List[List[frozenset]] = []
    for j in range(c):
        fam_traces = []
        for m in fam.members:
            fat = _fattened(g, m[j], l.members, r)
            tr = frozenset(t for t in ext_tree.vertices if ext_bags[t] & fat)
            if not tr & (frozenset(td.tree.vertices)):
                raise InternalInconsistencyError(
                    "component trace confined to a separation leaf; the "
                    "burial hypothesis should have ruled this out"
                )
            if not ext_tree.is_connected_set(tr):
                raise InternalInconsistencyError(
                    "disconnected trace of a connected fattened component"
                )
            fam_traces.append(tr)
        traces.append(fam_traces)

    for j in range(c):
        res = tree_helly(ext_tree, traces[j], c * k)
        if res.branch == "hitting":
            nodes_hit = {
                anchor[next(i for i, lf in leaf_of.items() if lf == t)]
                if t in leaf_nodes else t
                for t in res.hitting
            }
            z = neighborhood(
                g, frozenset().union(*(td.bags[t] for t in nodes_hit)), r
            ).members
            centers = frozenset().union(
                *(bag_certs[t].centers.members for t in nodes_hit)
            )
            cert = CenteredSet(VertexSet(z, g), VertexSet(centers, g), eta + r)
            for m in fam.members:
                if not (z & fam.union(m)):
                    raise InternalInconsistencyError(
                        "constructed hitting set misses a member"
                    )
            if cert.center_count > (c * k - 1) * xi:
                raise InternalInconsistencyError("center budget exceeded")
            return EasyTreeResult(
                "hitting",
                centered=cert,
                center_budget=(c * k - 1) * xi,
                radius_budget=eta + r,
            )

    # every component index admits c·k disjoint traces: recombine
    selection = multi_family_select(ext_tree, traces, [k] * c)
    recombined: List[Member] = []
    for beta in range(k):
        recombined.append(tuple(fam.members[selection[j][beta]][j] for j in range(c)))
    for m1, m2 in itertools.combinations(recombined, 2):
        d = set_distance(g, frozenset().union(*m1), frozenset().union(*m2))
        if not d > 2 * r:
            raise InternalInconsistencyError(
                "recombined members are not pairwise far"
            )
    return EasyTreeResult("packing", packing=tuple(recombined))


def _find_clique(adjacency: List[set], k: int) -> Optional[List[int]]:
    """A k-clique in the compatibility graph, or None."""
    n = len(adjacency)

    def extend(chosen: List[int], cands: List[int]) -> Optional[List[int]]:
        if len(chosen) == k:
            return chosen
        if len(chosen) + len(cands) < k:
            return None
        for idx, v in enumerate(cands):
            res = extend(chosen + [v], [u for u in cands[idx + 1:] if u in adjacency[v]])
            if res is not None:
                return res
        return None

    return extend([], list(range(n)))


# ---------------------------------------------------------------------------
# rooted fat minors of path patterns


def _path_order(pattern: Graph) -> List[int]:
    """Vertices of a path-shaped pattern in chain order (lowest end first)."""
    if len(pattern) == 1:
        return list(pattern.vertices)
    ends = [v for v in pattern.vertices if len(pattern.neighbors(v)) == 1]
    if len(ends) != 2 or len(pattern.edges) != len(pattern) - 1 \
            or not pattern.is_tree():
        raise InputError("pattern is not a path")
    order = [min(ends)]
    while len(order) < len(pattern):
        nxt = [n for n in pattern.neighbors(order[-1]) if n not in order]
        order.append(nxt[0])
    return order


def _distinct_reps(root_sets: Sequence[frozenset], pool: frozenset):
    """A system of distinct representatives for the root sets within pool,
    or None."""

    def extend(i: int, used: frozenset):
        if i == len(root_sets):
            return ()
        for v in sorted(root_sets[i] & pool - used):
            rest = extend(i + 1, used | {v})
            if rest is not None:
                return (v,) + rest
        return None

    return extend(0, frozenset())


def _is_support(g: Graph, u: frozenset, root_sets: Sequence[frozenset]) -> bool:
    """True iff ``u`` is connected and holds distinct representatives of all
    root sets — exactly the sets that carry a rooted 0-fat path-pattern
    model (see :func:`_extract_path_model`)."""
    if not u or not g.is_connected_set(u):
        return False
    return _distinct_reps(root_sets, u) is not None


def _minimal_supports(g: Graph, root_sets: Sequence[frozenset]) -> List[frozenset]:
    if len(g) > MODEL_ENUM_CAP:
        raise CapacityError(
            "exact model-union enumeration capped",
            cap=MODEL_ENUM_CAP,
            actual=len(g),
        )
    verts = sorted(g.vertices)
    out = []
    for bits in range(1, 1 << len(verts)):
        u = frozenset(verts[i] for i in range(len(verts)) if bits >> i & 1)
        if not _is_support(g, u, root_sets):
            continue
        if all(not _is_support(g, u - {v}, root_sets) for v in u):
            out.append(u)
    return out


def _tree_path(g: Graph, inside: frozenset, s: int, t: int) -> List[int]:
    """A path from s to t through ``inside`` (BFS tree, deterministic)."""
    parent = {s: None}
    frontier = [s]
    while frontier and t not in parent:
        nxt = []
        for u in frontier:
            for n in sorted(g.neighbors(u)):
                if n in inside and n not in parent:
                    parent[n] = u
                    nxt.append(n)
        frontier = nxt
    if t not in parent:
        raise InternalInconsistencyError("support not connected")
    path = [t]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def _extract_path_model(
    g: Graph,
    support: frozenset,
    pattern: Graph,
    roots: Mapping[int, frozenset],
) -> FatMinorModel:
    """A rooted 0-fat model of a ≤3-vertex path pattern whose union stays
    inside ``support``.

    The construction splits a connecting tree: for three roots, the middle
    branch set is the arm from the middle representative to the x1–x3 path,
    with a corner case when the arm lands on an endpoint representative.
    """
    order = _path_order(pattern)
    root_sets = [roots[h] for h in order]
    reps = _distinct_reps(root_sets, support)
    if reps is None:
        raise InputError("support has no distinct root representatives")

    if len(order) == 1:
        return FatMinorModel(pattern, {order[0]: (reps[0],)}, {}, 0,
                             roots=dict(roots))

    if len(order) == 2:
        x1, x2 = reps
        comp = next(
            c for c in g.induced(support - {x1}).components() if x2 in c
        )
        step = min(v for v in g.neighbors(x1) if v in comp)
        return FatMinorModel(
            pattern,
            {order[0]: (x1,), order[1]: tuple(sorted(comp))},
            {(order[0], order[1]): (x1, step)},
            0,
            roots=dict(roots),
        )

    x1, x2, x3 = reps
    p13 = _tree_path(g, support, x1, x3)
    p13set = frozenset(p13)

    # BFS from the middle representative until the x1-x3 path is touched;
    # the parent chain then avoids p13 except at the touch point y
    parent = {x2: None}
    frontier = [x2]
    y = x2 if x2 in p13set else None
    while y is None:
        nxt = []
        for u in frontier:
            for n in sorted(g.neighbors(u)):
                if n in support and n not in parent:
                    parent[n] = u
                    if n in p13set:
                        y = n
                        break
                    nxt.append(n)
            if y is not None:
                break
        if y is None and not nxt:
            raise InternalInconsistencyError("support not connected")
        frontier = nxt
    arm = [y]
    while parent[arm[-1]] is not None:
        arm.append(parent[arm[-1]])
    arm.reverse()  # x2 ... y
    i = p13.index(y)

    h1, h2, h3 = order
    if 0 < i < len(p13) - 1:
        s1 = tuple(p13[:i])
        s2 = tuple(arm)
        s3 = tuple(p13[i + 1:])
        e12 = (p13[i - 1], y)
        e23 = (y, p13[i + 1])
    elif i == 0:  # the arm lands on x1: keep {x1} as the first branch set
        s1 = (x1,)
        s2 = tuple(arm[:-1])  # arm minus y = x1; nonempty since x2 != x1
        s3 = tuple(p13[1:])
        e12 = (arm[-2], x1)
        e23 = (arm[-2], x1, p13[1])  # through x1, legal at fatness 0
    else:  # lands on x3
        s3 = (x3,)
        s2 = tuple(arm[:-1])
        s1 = tuple(p13[:-1])
        e23 = (arm[-2], x3)
        e12 = (p13[-2], x3, arm[-2])
    return FatMinorModel(
        pattern,
        {h1: s1, h2: s2, h3: s3},
        {(h1, h2): tuple(e12), (h2, h3): tuple(e23)},
        0,
        roots=dict(roots),
    )


def _reaches(g: Graph, allowed: frozenset, start: int, targets: frozenset) -> bool:
    if start in targets:
        return True
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for n in g.neighbors(u):
                if n in targets:
                    return True
                if n in allowed and n not in seen:
                    seen.add(n)
                    nxt.append(n)
        frontier = nxt
    return False


# ---------------------------------------------------------------------------
# two disjoint rooted connected sets, by boundary dynamic programming


def _forget_times(g: Graph, order: Sequence[int]) -> Dict[int, int]:
    pos = {v: i for i, v in enumerate(order)}
    out = {}
    for v in order:
        last = pos[v]
        for n in g.neighbors(v):
            last = max(last, pos[n])
        out[v] = last
    return out


def two_disjoint_connected_transversals(
    g: Graph,
    root_sets: Sequence[frozenset],
    order: Optional[Sequence[int]] = None,
    boundary_cap: int = 8,
):
    """Two vertex-disjoint connected sets, each holding distinct
    representatives of every root set — or None.

    Sweeps the vertices in ``order`` tracking only the boundary (vertices
    with unprocessed neighbors): label assignment, connectivity blocks per
    label, and which root subsets already have distinct representatives.
    Works whenever the order has small boundary (row-major on grids).
    """
    if order is None:
        order = sorted(g.vertices)
    order = list(order)
    if sorted(order) != sorted(g.vertices):
        raise InputError("order must list every vertex once")
    forget_at = _forget_times(g, order)
    boundary = 0
    alive = 0
    for i, v in enumerate(order):
        alive += 1
        boundary = max(boundary, alive)
        alive -= sum(1 for u in order[: i + 1] if forget_at[u] == i)
    if boundary > boundary_cap:
        raise CapacityError(
            "sweep boundary too wide for the disjoint-transversal search",
            cap=boundary_cap,
            actual=boundary,
        )

    # flatten the sweep into sequential phases so every transition has an
    # unambiguous predecessor layer for witness reconstruction
    phases: List[tuple] = []
    for step, v in enumerate(order):
        phases.append(("intro", v))
        for u in sorted(u for u in order[: step + 1] if forget_at[u] == step):
            phases.append(("forget", u))

    idx = range(len(root_sets))
    full = frozenset(idx)
    init = (frozenset(), frozenset([frozenset()]), frozenset([frozenset()]),
            frozenset())
    layers = [{init}]
    origin: Dict[tuple, tuple] = {}
    active: set = set()

    def used(state, label):
        blocks, _, _, closed = state
        return label in closed or any(lab == label for lab, _ in blocks)

    for p, (kind, v) in enumerate(phases):
        nxt = set()
        if kind == "intro":
            nbrs = frozenset(g.neighbors(v)) & frozenset(active)
            for state in layers[-1]:
                blocks, sdr1, sdr2, closed = state
                if state not in nxt:
                    nxt.add(state)
                    origin[(p, state)] = (state, v, 0)
                for label in (1, 2):
                    if label in closed:
                        continue
                    if label == 2 and not used(state, 1) and not used(state, 2):
                        continue  # symmetry: first labeled vertex gets label 1
                    touching = [b for lab, b in blocks
                                if lab == label and b & nbrs]
                    merged = frozenset({v}).union(*touching)
                    new_blocks = frozenset(
                        (lab, b) for lab, b in blocks
                        if not (lab == label and b & nbrs)
                    ) | {(label, merged)}
                    sdr = sdr1 if label == 1 else sdr2
                    grown = sdr | frozenset(
                        s | {i} for s in sdr for i in idx
                        if i not in s and v in root_sets[i]
                    )
                    new_state = (
                        new_blocks,
                        grown if label == 1 else sdr1,
                        grown if label == 2 else sdr2,
                        closed,
                    )
                    if new_state not in nxt:
                        nxt.add(new_state)
                        origin[(p, new_state)] = (state, v, label)
            active.add(v)
        else:
            for state in layers[-1]:
                blocks, sdr1, sdr2, closed = state
                home = [(lab, b) for lab, b in blocks if v in b]
                if not home:
                    out_state = state
                else:
                    lab, b = home[0]
                    rest = blocks - {(lab, b)}
                    shrunk = b - {v}
                    if shrunk:
                        out_state = (rest | {(lab, shrunk)}, sdr1, sdr2, closed)
                    else:
                        if any(l2 == lab for l2, _ in rest):
                            continue  # a second component would be stranded
                        if full not in (sdr1 if lab == 1 else sdr2):
                            continue  # closed component missing some root
                        out_state = (rest, sdr1, sdr2, closed | {lab})
                if out_state not in nxt:
                    nxt.add(out_state)
                    origin[(p, out_state)] = (state, v, None)
            active.discard(v)
        layers.append(nxt)

    final = next(
        (s for s in layers[-1] if s[3] == frozenset({1, 2})), None
    )
    if final is None:
        return None
    assignment: Dict[int, int] = {}
    state = final
    for p in range(len(phases) - 1, -1, -1):
        prev, v, label = origin[(p, state)]
        if label is not None:
            assignment[v] = label
        state = prev
    side1 = frozenset(v for v, lab in assignment.items() if lab == 1)
    side2 = frozenset(v for v, lab in assignment.items() if lab == 2)
    return side1, side2


def min_transversal_blocker(
    g: Graph, root_sets: Sequence[frozenset], size_cap: int
) -> frozenset:
    """Smallest vertex set whose removal leaves no connected component with
    distinct representatives of every root set."""

    def survives(z: frozenset) -> bool:
        rest = g.induced(frozenset(g.vertices) - z)
        return any(
            _distinct_reps(root_sets, frozenset(comp)) is not None
            for comp in rest.components()
            if g.is_connected_set(comp)
        )

    if not survives(frozenset()):
        return frozenset()
    verts = sorted(g.vertices)
    for size in range(1, size_cap + 1):
        for combo in itertools.combinations(verts, size):
            z = frozenset(combo)
            if not survives(z):
                return z
    raise CapacityError(
        "no blocker within the budget", cap=size_cap, actual=None
    )


# ---------------------------------------------------------------------------
# rooted fat-minor packing/covering dichotomy


@dataclass
class RootedMinorResult:
    branch: str  # "packing" | "hitting"
    models: Tuple[FatMinorModel, ...] = ()
    centered: Optional[CenteredSet] = None
    center_budget: int = 0
    radius_budget: Number = 0


def rooted_fat_minor_ep(
    g: Graph,
    td: TreeDecomposition,
    pattern: Graph,
    roots: Mapping[int, frozenset],
    k: int,
    r: Number,
    l: Number = 0,
) -> RootedMinorResult:
    """Either ``k`` rooted fat pattern models pairwise at distance >= r, or a
    centered set — at most ``max_bag_size * k`` centers, radius at most
    max(ceil((r-1)/2), l/2) — hitting every rooted model.

    Exact scope: path patterns on at most three vertices at fatness zero.
    Hosts beyond the enumeration cap are handled for k = 2 and r <= 2 by a
    boundary sweep over the vertex order (exact for grid-like hosts).
    """
    if k < 1 or r <= 0:
        raise InputError("need k >= 1 and r > 0")
    order = _path_order(pattern)
    if len(order) > 3:
        raise CapacityError(
            "patterns beyond three vertices are outside the exact desk scope",
            cap=3,
            actual=len(order),
        )
    if l != 0:
        raise CapacityError(
            "positive fatness is outside the exact desk scope", cap=0, actual=l
        )
    root_sets = []
    for h in order:
        if h not in roots or not roots[h]:
            raise InputError(f"pattern vertex {h} has no usable root set")
        root_sets.append(as_vertex_set(g, roots[h]).members)
    problems = td.validate(g)
    if problems:
        raise InputError(f"invalid tree-decomposition: {problems}")

    rp = max(math.ceil((r - 1) / 2), 0)  # packing threshold shift, l = 0
    rho = rp  # cover radius, l = 0
    beta = td.max_bag_size
    budget = beta * k

    if len(g) <= MODEL_ENUM_CAP:
        supports = _minimal_supports(g, root_sets)
        if supports:
            far: List[set] = [set() for _ in supports]
            for i, j in itertools.combinations(range(len(supports)), 2):
                if set_distance(g, supports[i], supports[j]) > 2 * rp:
                    far[i].add(j)
                    far[j].add(i)
            chosen = _find_clique(far, k)
            if chosen is not None:
                models = tuple(
                    _extract_path_model(g, supports[i], pattern, roots)
                    for i in chosen
                )
                _check_model_packing(g, models, r)
                return RootedMinorResult("packing", models=models)
        from .covering import min_set_cover

        if not supports:
            empty = VertexSet(frozenset(), g)
            return RootedMinorResult(
                "hitting",
                centered=CenteredSet(empty, empty, rho),
                center_budget=budget,
                radius_budget=rho,
            )
        sets = {
            v: frozenset(i for i, u in enumerate(supports) if v in u)
            for v in g.vertices
        }
        z, _ = min_set_cover(range(len(supports)), sets)
        z = frozenset(z)
        if len(z) > budget:
            raise InternalInconsistencyError("hitting budget exceeded")
        zc = VertexSet(z, g)
        return RootedMinorResult(
            "hitting",
            centered=CenteredSet(zc, zc, rho),
            center_budget=budget,
            radius_budget=rho,
        )

    # large host: boundary sweep, disjointness threshold only
    if k != 2 or rp != 0:
        raise CapacityError(
            "large hosts are supported only for k=2 at disjointness "
            "threshold (r <= 2)",
            cap=MODEL_ENUM_CAP,
            actual=len(g),
        )
    witness = two_disjoint_connected_transversals(g, root_sets)
    if witness is not None:
        models = tuple(
            _extract_path_model(g, side, pattern, roots) for side in witness
        )
        _check_model_packing(g, models, r)
        return RootedMinorResult("packing", models=models)
    z = min_transversal_blocker(g, root_sets, budget)
    zc = VertexSet(z, g)
    return RootedMinorResult(
        "hitting",
        centered=CenteredSet(zc, zc, rho),
        center_budget=budget,
        radius_budget=rho,
    )


def _check_model_packing(g: Graph, models: Sequence[FatMinorModel], r: Number):
    from .paths import check_fat_minor

    for m in models:
        report = check_fat_minor(g, m)
        if not report:
            raise InternalInconsistencyError(
                f"constructed model invalid: {report.violations}"
            )
    for m1, m2 in itertools.combinations(models, 2):
        d = set_distance(g, m1.union_vertices(), m2.union_vertices())
        if not leq(r, d):
            raise InternalInconsistencyError("packed models too close")
