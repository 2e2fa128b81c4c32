"""Finite graphs, shortest-path metrics, neighborhoods and centered-set
certificates.

A :class:`Graph` is immutable after construction.  Distances are exact
integers on unweighted graphs; on weighted graphs they keep whatever numeric
type the weights carry (``Fraction`` weights give exact rational distances,
floats are compared with an absolute tolerance of ``TOL``).
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .errors import CapacityError, InputError

TOL = 1e-9

#: hard cap for the exhaustive centered-set search
EXACT_CENTER_CAP = 20

Number = Union[int, float, Fraction]
INF = math.inf


def is_exact(x: Number) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def leq(a: Number, b: Number) -> bool:
    """``a <= b`` with float tolerance; exact when both sides are exact."""
    if a is INF:
        return b is INF
    if b is INF:
        return True
    if is_exact(a) and is_exact(b):
        return a <= b
    return a <= b + TOL


def _norm_edge(u: int, v: int) -> tuple:
    return (u, v) if u <= v else (v, u)


class Graph:
    """A finite simple graph with optional strictly positive edge weights."""

    __slots__ = ("vertices", "edges", "weights", "_vset", "_adj", "_dist_cache")

    def __init__(
        self,
        vertices: Iterable[int],
        edges: Iterable[tuple],
        weights: Optional[Mapping[tuple, Number]] = None,
    ):
        vs = sorted(set(int(v) for v in vertices))
        self.vertices = tuple(vs)
        self._vset = frozenset(vs)
        es = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if u not in self._vset or v not in self._vset:
                raise InputError(f"edge ({u},{v}) uses an undeclared vertex")
            es.add(_norm_edge(u, v))
        self.edges = tuple(sorted(es))
        if weights is not None:
            w = {}
            for e, val in weights.items():
                e = _norm_edge(*e)
                if e not in es:
                    raise InputError(f"weight given for non-edge {e}")
                if not val > 0:
                    raise InputError(f"non-positive weight {val} on edge {e}")
                w[e] = val
            missing = es - set(w)
            if missing:
                raise InputError(f"edges without weight: {sorted(missing)[:3]}")
            self.weights = w
        else:
            self.weights = None
        adj = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = {v: tuple(sorted(ns)) for v, ns in adj.items()}
        self._dist_cache = {}

    # -- basic accessors ---------------------------------------------------

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    def __len__(self) -> int:
        return len(self.vertices)

    def has_vertex(self, v: int) -> bool:
        return v in self._vset

    def neighbors(self, v: int) -> tuple:
        self._require_vertex(v)
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def edge_weight(self, u: int, v: int) -> Number:
        if not self.has_edge(u, v):
            raise InputError(f"({u},{v}) is not an edge")
        return 1 if self.weights is None else self.weights[_norm_edge(u, v)]

    def _require_vertex(self, v: int):
        if v not in self._vset:
            raise InputError(f"unknown vertex id {v}")

    def __repr__(self):
        kind = "weighted " if self.weighted else ""
        return f"<{kind}Graph |V|={len(self.vertices)} |E|={len(self.edges)}>"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.edges == other.edges
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.vertices, self.edges))

    # -- structure helpers -------------------------------------------------

    def induced(self, vs: Iterable[int]) -> "Graph":
        vs = set(vs)
        for v in vs:
            self._require_vertex(v)
        edges = [e for e in self.edges if e[0] in vs and e[1] in vs]
        weights = None
        if self.weights is not None:
            weights = {e: self.weights[e] for e in edges}
        return Graph(vs, edges, weights)

    def components(self) -> list:
        """Connected components as sorted vertex lists, in id order."""
        seen = set()
        comps = []
        for v in self.vertices:
            if v in seen:
                continue
            stack = [v]
            comp = set()
            while stack:
                u = stack.pop()
                if u in comp:
                    continue
                comp.add(u)
                stack.extend(n for n in self._adj[u] if n not in comp)
            seen |= comp
            comps.append(sorted(comp))
        return comps

    def is_connected_set(self, vs: Iterable[int]) -> bool:
        vs = set(vs)
        if not vs:
            return False
        start = next(iter(vs))
        stack = [start]
        seen = {start}
        while stack:
            u = stack.pop()
            for n in self._adj[u]:
                if n in vs and n not in seen:
                    seen.add(n)
                    stack.append(n)
        return seen == vs

    def is_tree(self) -> bool:
        return (
            len(self.edges) == len(self.vertices) - 1
            and len(self.components()) == 1
        )

    # -- metrics -----------------------------------------------------------

    def dist_from(self, source: int) -> dict:
        """Single-source shortest-path lengths (cached per graph)."""
        self._require_vertex(source)
        cached = self._dist_cache.get(source)
        if cached is not None:
            return cached
        if self.weights is None:
            dist = {source: 0}
            frontier = [source]
            d = 0
            while frontier:
                d += 1
                nxt = []
                for u in frontier:
                    for n in self._adj[u]:
                        if n not in dist:
                            dist[n] = d
                            nxt.append(n)
                frontier = nxt
        else:
            dist = {}
            heap = [(0, source)]
            zero = 0
            while heap:
                d, u = heapq.heappop(heap)
                if u in dist:
                    continue
                dist[u] = d if d != 0 else zero
                for n in self._adj[u]:
                    if n not in dist:
                        heapq.heappush(heap, (d + self.weights[_norm_edge(u, n)], n))
        full = {v: dist.get(v, INF) for v in self.vertices}
        self._dist_cache[source] = full
        return full


# ---------------------------------------------------------------------------
# vertex sets and centered sets


@dataclass(frozen=True)
class VertexSet:
    """A subset of the vertices of a fixed host graph."""

    members: frozenset
    host: Graph

    def __post_init__(self):
        for v in self.members:
            if not self.host.has_vertex(v):
                raise InputError(f"vertex {v} not in host graph")

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, v):
        return v in self.members


def as_vertex_set(g: Graph, s) -> VertexSet:
    if isinstance(s, VertexSet):
        if s.host is not g and s.host != g:
            raise InputError("vertex set belongs to a different graph")
        return s
    return VertexSet(frozenset(int(v) for v in s), g)


@dataclass(frozen=True)
class CenteredSet:
    """Certificate that ``z`` lies in at most ``len(centers)`` balls of
    radius ``radius`` around ``centers``."""

    z: VertexSet
    centers: VertexSet
    radius: Number

    def __post_init__(self):
        g = self.z.host
        if self.z.members:
            ball = neighborhood(g, self.centers, self.radius)
            uncovered = self.z.members - ball.members
            if uncovered:
                raise InputError(
                    f"centered-set invariant violated: {sorted(uncovered)} "
                    f"outside radius {self.radius} of centers"
                )

    @property
    def center_count(self) -> int:
        return len(self.centers)


@dataclass(frozen=True)
class CenteredRefusal:
    """Typed refusal: no center set within the requested budget exists
    (``mode='exact'``) or was found (``mode='greedy'``)."""

    obligation: str
    mode: str
    k: int
    radius: Number


# ---------------------------------------------------------------------------
# operations


def distance(g: Graph, u: int, v: int) -> Number:
    """Shortest-path distance; ``inf`` across components."""
    g._require_vertex(v)
    return g.dist_from(u)[v]


def set_distance(g: Graph, s, t) -> Number:
    s = as_vertex_set(g, s)
    t = as_vertex_set(g, t)
    if not s.members or not t.members:
        raise InputError("set_distance over an empty set")
    if s.members & t.members:
        return 0
    small, large = (s, t) if len(s) <= len(t) else (t, s)
    best = INF
    for u in small:
        du = g.dist_from(u)
        for v in large:
            d = du[v]
            if d < best:
                best = d
    return best


def neighborhood(g: Graph, s, r: Number) -> VertexSet:
    """``{v : dist(v, s) <= r}``; equals ``s`` when ``r == 0``."""
    s = as_vertex_set(g, s)
    if r < 0:
        raise InputError("negative radius")
    out = set(s.members)
    for u in s:
        du = g.dist_from(u)
        for v, d in du.items():
            if v not in out and leq(d, r):
                out.add(v)
    return VertexSet(frozenset(out), g)


def _ball(g: Graph, center: int, r: Number) -> frozenset:
    du = g.dist_from(center)
    return frozenset(v for v, d in du.items() if leq(d, r))


def certify_centered(g: Graph, z, k: int, r: Number, mode: str = "exact"):
    """Search for at most ``k`` vertex centers whose radius-``r`` balls cover
    ``z``.  Returns a :class:`CenteredSet` on success, else a
    :class:`CenteredRefusal`.

    Exact mode is a set-cover branch-and-bound over all vertices as candidate
    centers and is refused above :data:`EXACT_CENTER_CAP` host vertices.
    """
    z = as_vertex_set(g, z)
    if k < 0 or r < 0:
        raise InputError("negative center count or radius")
    if not z.members:
        return CenteredSet(z, VertexSet(frozenset(), g), r)
    if mode not in ("exact", "greedy"):
        raise InputError(f"unknown mode {mode!r}")
    if mode == "exact" and len(g) > EXACT_CENTER_CAP:
        raise CapacityError(
            f"exact centered-set search capped at {EXACT_CENTER_CAP} vertices",
            cap=EXACT_CENTER_CAP,
            actual=len(g),
        )

    balls = {c: _ball(g, c, r) & z.members for c in g.vertices}
    candidates = [c for c in g.vertices if balls[c]]

    if mode == "greedy":
        chosen = []
        uncovered = set(z.members)
        while uncovered and len(chosen) < k:
            best = max(candidates, key=lambda c: (len(balls[c] & uncovered), -c))
            if not balls[best] & uncovered:
                break
            chosen.append(best)
            uncovered -= balls[best]
        if uncovered:
            return CenteredRefusal("greedy-cover-exhausted", "greedy", k, r)
        return CenteredSet(z, VertexSet(frozenset(chosen), g), r)

    target = set(z.members)

    def search(uncovered: frozenset, chosen: tuple):
        if not uncovered:
            return chosen
        if len(chosen) >= k:
            return None
        # branch on the uncovered vertex with fewest covering candidates
        pivot = min(
            uncovered,
            key=lambda u: (sum(1 for c in candidates if u in balls[c]), u),
        )
        covers = [c for c in candidates if pivot in balls[c]]
        if not covers:
            return None
        covers.sort(key=lambda c: (-len(balls[c] & uncovered), c))
        for c in covers:
            res = search(uncovered - balls[c], chosen + (c,))
            if res is not None:
                return res
        return None

    res = search(frozenset(target), ())
    if res is None:
        return CenteredRefusal("exhaustive-center-search-failed", "exact", k, r)
    return CenteredSet(z, VertexSet(frozenset(res), g), r)


# ---------------------------------------------------------------------------
# ingestion / serialization


def _weight_from_text(tok: str) -> Number:
    try:
        return int(tok)
    except ValueError:
        pass
    if "/" in tok:
        return Fraction(tok)
    return float(tok)


def from_edge_list(text: str) -> Graph:
    """Parse whitespace edge-list text: one ``u v [weight]`` per line."""
    vertices = set()
    edges = []
    weights = {}
    any_weight = False
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) not in (2, 3):
            raise InputError(f"line {lineno}: expected 'u v [weight]'")
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError as exc:
            raise InputError(f"line {lineno}: bad vertex id") from exc
        if u < 0 or v < 0:
            raise InputError(f"line {lineno}: vertex ids must be nonnegative")
        vertices.update((u, v))
        edges.append((u, v))
        if len(toks) == 3:
            any_weight = True
            weights[_norm_edge(u, v)] = _weight_from_text(toks[2])
    if any_weight:
        for e in edges:
            if _norm_edge(*e) not in weights:
                weights[_norm_edge(*e)] = 1
        return Graph(vertices, edges, weights)
    return Graph(vertices, edges)


def to_edge_list(g: Graph) -> str:
    lines = []
    for u, v in g.edges:
        if g.weighted:
            lines.append(f"{u} {v} {g.weights[(u, v)]}")
        else:
            lines.append(f"{u} {v}")
    return "\n".join(lines) + ("\n" if lines else "")


def _weight_to_json(w: Number):
    if isinstance(w, Fraction):
        return str(w)
    return w


def to_json_dict(g: Graph) -> dict:
    doc = {
        "vertices": list(g.vertices),
        "edges": [list(e) for e in g.edges],
    }
    if g.weighted:
        doc["weights"] = [_weight_to_json(g.weights[e]) for e in g.edges]
    return doc


def from_json_dict(doc: dict) -> Graph:
    try:
        vertices = doc["vertices"]
        edges = [tuple(e) for e in doc["edges"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad graph document: {exc}") from exc
    weights = None
    if "weights" in doc:
        raw = doc["weights"]
        if len(raw) != len(edges):
            raise InputError("weights array does not parallel edges array")
        weights = {}
        for e, w in zip(edges, raw):
            if isinstance(w, str):
                w = _weight_from_text(w)
            weights[_norm_edge(*e)] = w
    return Graph(vertices, edges, weights)


def from_json(text: str) -> Graph:
    return from_json_dict(json.loads(text))


def to_json(g: Graph) -> str:
    return json.dumps(to_json_dict(g), sort_keys=True)
