"""Path objects: X-Y paths with far endpoints, A-paths, and fat minor models.

Paths are canonicalized up to reversal (a path equals its reversal as a
subgraph); the stored orientation is the lexicographically smaller one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import CapacityError, InputError
from .graph import Graph, Number, VertexSet, as_vertex_set, distance, leq, set_distance

#: default vertex-count limit for uncapped path enumeration
ENUM_VERTEX_LIMIT = 16


@dataclass(frozen=True)
class PathWitness:
    """A simple path plus its certified endpoint distance in the host graph."""

    sequence: Tuple[int, ...]
    endpoint_distance: Number

    @property
    def end_a(self) -> int:
        return self.sequence[0]

    @property
    def end_b(self) -> int:
        return self.sequence[-1]

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.sequence)

    @property
    def length(self) -> int:
        return len(self.sequence) - 1

    def to_json_dict(self) -> dict:
        return {"vertices": list(self.sequence)}


def canonical_sequence(seq: Sequence[int]) -> Tuple[int, ...]:
    seq = tuple(seq)
    rev = tuple(reversed(seq))
    return seq if seq <= rev else rev


def make_path(g: Graph, sequence: Sequence[int]) -> PathWitness:
    """Validate ``sequence`` as a simple path in ``g`` and certify its
    endpoint distance.  A single vertex is a valid length-0 path."""
    seq = tuple(int(v) for v in sequence)
    if not seq:
        raise InputError("empty vertex sequence is not a path")
    if len(set(seq)) != len(seq):
        raise InputError("path vertices must be distinct")
    for v in seq:
        g._require_vertex(v)
    for u, v in zip(seq, seq[1:]):
        if not g.has_edge(u, v):
            raise InputError(f"consecutive vertices {u},{v} are not adjacent")
    seq = canonical_sequence(seq)
    return PathWitness(seq, distance(g, seq[0], seq[-1]))


def is_lxy_path(g: Graph, p: PathWitness, l: Number, x, y) -> bool:
    """True iff ``p`` runs between ``x`` and ``y`` with endpoint distance at
    least ``l``.  Internal vertices may revisit ``x`` or ``y``."""
    x = as_vertex_set(g, x)
    y = as_vertex_set(g, y)
    a, b = p.end_a, p.end_b
    ends_ok = (a in x and b in y) or (a in y and b in x)
    if not ends_ok:
        return False
    return leq(l, p.endpoint_distance)


def is_a_path(g: Graph, p: PathWitness, a) -> bool:
    """True iff both ends lie in ``a`` and are distinct."""
    a = as_vertex_set(g, a)
    return p.end_a != p.end_b and p.end_a in a and p.end_b in a


@dataclass(frozen=True)
class PathEnumeration:
    paths: Tuple[PathWitness, ...]
    truncated: bool


def enumerate_paths(
    g: Graph, l: Number, x, y, cap: Optional[int] = None
) -> PathEnumeration:
    """All simple paths from ``x`` to ``y`` with endpoint distance >= ``l``,
    deduplicated up to reversal, in canonical lexicographic order.

    Uncapped enumeration is refused above :data:`ENUM_VERTEX_LIMIT` host
    vertices; with a finite ``cap`` the first ``cap`` canonical paths are
    returned and truncation is flagged.
    """
    x = as_vertex_set(g, x)
    y = as_vertex_set(g, y)
    if cap is None and len(g) > ENUM_VERTEX_LIMIT:
        raise CapacityError(
            f"uncapped path enumeration limited to {ENUM_VERTEX_LIMIT} vertices",
            cap=ENUM_VERTEX_LIMIT,
            actual=len(g),
        )
    if not x.members or not y.members:
        return PathEnumeration((), False)

    found = set()

    def extend(seq: list, seen: set):
        tail = seq[-1]
        if tail in y.members and leq(l, distance(g, seq[0], tail)):
            found.add(canonical_sequence(seq))
        for n in g.neighbors(tail):
            if n not in seen:
                seen.add(n)
                seq.append(n)
                extend(seq, seen)
                seq.pop()
                seen.remove(n)

    for start in sorted(x.members | y.members):
        if start in x.members:
            extend([start], {start})

    ordered = sorted(found)
    truncated = cap is not None and len(ordered) > cap
    if truncated:
        ordered = ordered[:cap]
    paths = tuple(PathWitness(s, distance(g, s[0], s[-1])) for s in ordered)
    return PathEnumeration(paths, truncated)


# ---------------------------------------------------------------------------
# fat minor models


@dataclass(frozen=True)
class FatMinorModel:
    """An ``l``-fat model of a small pattern graph inside a host graph.

    ``branch_sets`` maps pattern vertices to host vertex tuples inducing the
    branch subgraphs; ``edge_paths`` maps pattern edges to host paths.
    ``roots``, when present, prescribes a root set per pattern vertex.
    """

    pattern: Graph
    branch_sets: Mapping[int, Tuple[int, ...]]
    edge_paths: Mapping[Tuple[int, int], Tuple[int, ...]]
    fatness: Number
    roots: Optional[Mapping[int, frozenset]] = None

    def union_vertices(self) -> frozenset:
        out = set()
        for vs in self.branch_sets.values():
            out.update(vs)
        for seq in self.edge_paths.values():
            out.update(seq)
        return frozenset(out)

    def to_json_dict(self) -> dict:
        doc = {
            "pattern": {"vertices": list(self.pattern.vertices),
                        "edges": [list(e) for e in self.pattern.edges]},
            "branch_sets": {str(h): sorted(vs) for h, vs in self.branch_sets.items()},
            "edge_paths": {f"{e[0]}-{e[1]}": list(p) for e, p in self.edge_paths.items()},
            "fatness": self.fatness,
        }
        if self.roots is not None:
            doc["roots"] = {str(h): sorted(r) for h, r in self.roots.items()}
        return doc


@dataclass
class ModelReport:
    valid: bool
    violations: List[str] = field(default_factory=list)

    def __bool__(self):
        return self.valid


def check_fat_minor(g: Graph, m: FatMinorModel) -> ModelReport:
    """Verify every invariant of a (rooted) fat minor model; the report lists
    each violated condition."""
    violations = []
    pat = m.pattern
    if len(pat.edges) != len(set(pat.edges)):
        raise InputError("pattern has parallel edges")

    branch = {}
    for h in pat.vertices:
        vs = m.branch_sets.get(h)
        if not vs:
            violations.append(f"branch set missing or empty for pattern vertex {h}")
            continue
        for v in vs:
            g._require_vertex(v)
        branch[h] = frozenset(vs)
        if not g.is_connected_set(branch[h]):
            violations.append(f"branch set of {h} is not connected")

    for h1 in pat.vertices:
        for h2 in pat.vertices:
            if h1 < h2 and h1 in branch and h2 in branch:
                if branch[h1] & branch[h2]:
                    violations.append(f"disjointness: branch sets {h1},{h2} overlap")

    paths = {}
    for e in pat.edges:
        seq = m.edge_paths.get(e) or m.edge_paths.get((e[1], e[0]))
        if seq is None:
            violations.append(f"edge path missing for pattern edge {e}")
            continue
        try:
            pw = make_path(g, seq)
        except InputError as exc:
            violations.append(f"edge path for {e} invalid: {exc}")
            continue
        paths[e] = frozenset(seq)
        u, v = e
        if u in branch and v in branch:
            seq = tuple(seq)
            ok = (seq[0] in branch[u] and seq[-1] in branch[v]) or (
                seq[0] in branch[v] and seq[-1] in branch[u]
            )
            if not ok:
                violations.append(f"edge path for {e} does not join its branch sets")

    # pairwise fatness between non-incident pieces
    pieces = [(h, branch[h]) for h in pat.vertices if h in branch]
    pieces += [(e, paths[e]) for e in pat.edges if e in paths]

    def incident(x, y) -> bool:
        xe, ye = isinstance(x, tuple), isinstance(y, tuple)
        if xe == ye:
            return False
        v, e = (y, x) if xe else (x, y)
        return v in e

    if m.fatness > 0:
        for i, (xi, si) in enumerate(pieces):
            for xj, sj in pieces[i + 1:]:
                if incident(xi, xj):
                    continue
                d = set_distance(g, si, sj) if si and sj else None
                if d is not None and not leq(m.fatness, d):
                    violations.append(
                        f"fatness: dist({xi},{xj}) = {d} < {m.fatness}"
                    )

    if m.roots is not None:
        for h in pat.vertices:
            r = m.roots.get(h)
            if r is None:
                violations.append(f"root set missing for pattern vertex {h}")
            elif h in branch and not (branch[h] & frozenset(r)):
                violations.append(f"root condition: branch set of {h} misses its roots")

    return ModelReport(not violations, violations)


@dataclass(frozen=True)
class ModelRefusal:
    reason: str


def lxy_path_to_rooted_k2(g: Graph, p: PathWitness, l: Number, x, y):
    """Split an ``(l, x, y)``-path into an ``(x, y)``-rooted ``l``-fat
    K2-minor model: singleton branch sets at the ends, the path itself as the
    edge path.  Single-vertex paths are refused (K2 needs two branch sets)."""
    x = as_vertex_set(g, x)
    y = as_vertex_set(g, y)
    if not is_lxy_path(g, p, l, x, y):
        raise InputError("input is not an (l,x,y)-path")
    if len(p.sequence) == 1:
        return ModelRefusal("single-vertex path cannot split into two branch sets")
    a, b = p.end_a, p.end_b
    if not (a in x and b in y):
        a, b = b, a
    k2 = Graph([1, 2], [(1, 2)])
    return FatMinorModel(
        pattern=k2,
        branch_sets={1: (a,), 2: (b,)},
        edge_paths={(1, 2): p.sequence},
        fatness=l,
        roots={1: frozenset(x.members), 2: frozenset(y.members)},
    )


def model_distance(g: Graph, m1: FatMinorModel, m2: FatMinorModel) -> Number:
    """Distance between two models: distance between their unions."""
    return set_distance(g, m1.union_vertices(), m2.union_vertices())


def enumerate_chordless_paths(
    g: Graph, l: Number, x, y, cap: Optional[int] = None
) -> PathEnumeration:
    """Like :func:`enumerate_paths`, restricted to chordless (induced) paths.

    Sufficient for packing and covering computations: shortcutting along a
    chord keeps the endpoints, never increases the vertex set, and so never
    decreases distances to other paths — optima over chordless paths equal
    optima over all simple paths, and a set hitting every chordless path hits
    every path.
    """
    x = as_vertex_set(g, x)
    y = as_vertex_set(g, y)
    if cap is None and len(g) > ENUM_VERTEX_LIMIT:
        raise CapacityError(
            f"uncapped path enumeration limited to {ENUM_VERTEX_LIMIT} vertices",
            cap=ENUM_VERTEX_LIMIT,
            actual=len(g),
        )
    if not x.members or not y.members:
        return PathEnumeration((), False)

    found = set()

    def extend(seq: list, seen: set):
        tail = seq[-1]
        if tail in y.members and leq(l, distance(g, seq[0], tail)):
            found.add(canonical_sequence(seq))
        for n in g.neighbors(tail):
            if n in seen:
                continue
            # chordless: the new vertex may touch only the current tail
            if any(g.has_edge(n, w) for w in seq[:-1]):
                continue
            seen.add(n)
            seq.append(n)
            extend(seq, seen)
            seq.pop()
            seen.remove(n)

    for start in sorted(x.members):
        extend([start], {start})

    ordered = sorted(found)
    truncated = cap is not None and len(ordered) > cap
    if truncated:
        ordered = ordered[:cap]
    paths = tuple(PathWitness(s, distance(g, s[0], s[-1])) for s in ordered)
    return PathEnumeration(paths, truncated)
