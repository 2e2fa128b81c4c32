"""Instance families: grids with their designated terminal sets, the
lower-bound constructions, and deterministic random fixtures.

Random streams are pure functions of their seed; partial-k-tree instances
ship the width-k decomposition they were built from.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import InputError
from .graph import Graph, distance, to_json_dict as graph_to_json_dict
from .trees import TreeDecomposition

DEFAULT_CAPS = {"max_vertices": 12, "min_vertices": 4, "edge_probability": 0.3}


@dataclass(frozen=True)
class Annotation:
    """An expected property of an instance.  ``tag`` records its standing:
    ``asserted`` values are taken as given and re-verified at desk scale
    where feasible; ``derived`` values were computed by this library."""

    name: str
    value: object
    tag: str = "asserted"
    params: Mapping[str, object] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "tag": self.tag,
            "params": dict(self.params),
        }


@dataclass(frozen=True)
class InstanceSpec:
    family: str
    params: Mapping[str, object]
    graph: Graph
    x: Optional[frozenset] = None
    y: Optional[frozenset] = None
    a: Optional[frozenset] = None
    roots: Optional[Tuple[frozenset, ...]] = None
    annotations: Tuple[Annotation, ...] = ()
    decomposition: Optional[TreeDecomposition] = None

    def to_json_dict(self) -> dict:
        doc = {
            "family": self.family,
            "params": dict(self.params),
            "graph": graph_to_json_dict(self.graph),
            "annotations": [a.to_json_dict() for a in self.annotations],
        }
        for key in ("x", "y", "a"):
            val = getattr(self, key)
            if val is not None:
                doc[key] = sorted(val)
        if self.roots is not None:
            doc["roots"] = [sorted(r) for r in self.roots]
        if self.decomposition is not None:
            doc["decomposition"] = self.decomposition.to_json_dict()
        return doc


# ---------------------------------------------------------------------------
# grids


def grid(rows: int, cols: int) -> Graph:
    """The rows-by-cols grid, unit weights, row-major ids from 0."""
    if rows < 1 or cols < 1:
        raise InputError("grid dimensions must be positive")
    edges = []
    for i in range(rows):
        for j in range(cols):
            v = i * cols + j
            if j + 1 < cols:
                edges.append((v, v + 1))
            if i + 1 < rows:
                edges.append((v, v + cols))
    return Graph(range(rows * cols), edges)


def grid_row(rows: int, cols: int, i: int) -> frozenset:
    if not 0 <= i < rows:
        raise InputError(f"row {i} out of range")
    return frozenset(i * cols + j for j in range(cols))


def grid_column(rows: int, cols: int, j: int) -> frozenset:
    if not 0 <= j < cols:
        raise InputError(f"column {j} out of range")
    return frozenset(i * cols + j for i in range(rows))


def menger_lower_bound_instance(r: int, n: int) -> InstanceSpec:
    """The r-by-n grid with first/last columns as terminals: packing at far
    threshold r is stuck at one, yet small balls need many to cover."""
    if r < 2 or n < r:
        raise InputError("need r >= 2 and n >= r")
    g = grid(r, n)
    x = grid_column(r, n, 0)
    y = grid_column(r, n, n - 1)
    annotations = (
        Annotation("packing_at_threshold", 1, "asserted", {"r": r}),
        Annotation("cover_lower_bound", "ceil(r/(2*s+1))", "asserted",
                   {"radius": "s"}),
        Annotation("ball_row_bound", "2*s+1", "asserted", {"radius": "s"}),
    )
    return InstanceSpec("menger_lower_bound", {"r": r, "n": n}, g,
                        x=x, y=y, annotations=annotations)


def rooted_p3_grid(w: int) -> InstanceSpec:
    """The w-by-w grid rooted at first column, first row and last column: no
    two disjoint rooted three-vertex-path models, yet every hitting set must
    grow with w."""
    if w < 3:
        raise InputError("need w >= 3")
    g = grid(w, w)
    roots = (grid_column(w, w, 0), grid_row(w, w, 0), grid_column(w, w, w - 1))
    annotations = (
        Annotation("two_disjoint_rooted_models", False, "asserted"),
        Annotation("min_hitting_size", "grows with w", "asserted"),
    )
    return InstanceSpec("rooted_p3_grid", {"w": w}, g, roots=roots,
                        annotations=annotations)


# ---------------------------------------------------------------------------
# random fixtures


def _random_connected_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = set()
    for v in range(1, n):
        edges.add((rng.randrange(v), v))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < p:
                edges.add((u, v))
    return Graph(range(n), sorted(edges))


def _random_subset(rng: random.Random, n: int, nonempty: bool = True) -> frozenset:
    out = frozenset(v for v in range(n) if rng.random() < 0.35)
    if nonempty and not out:
        out = frozenset([rng.randrange(n)])
    return out


def _random_partial_k_tree(rng: random.Random, n: int, k: int):
    """A k-tree built by clique attachment, then sparsified while keeping
    connectivity; returns the graph and its construction decomposition."""
    n = max(n, k + 1)
    base = tuple(range(k + 1))
    edges = {(u, v) for i, u in enumerate(base) for v in base[i + 1:]}
    bags: Dict[int, frozenset] = {0: frozenset(base)}
    tree_edges: List[Tuple[int, int]] = []
    # every k-subset of an existing bag is attachable; remember which bag
    # introduced it
    cliques: List[Tuple[Tuple[int, ...], int]] = [
        (tuple(sorted(set(base) - {u})), 0) for u in base
    ]
    for v in range(k + 1, n):
        cl, owner = cliques[rng.randrange(len(cliques))]
        node = len(bags)
        bags[node] = frozenset(cl) | {v}
        tree_edges.append((owner, node))
        for u in cl:
            edges.add((min(u, v), max(u, v)))
        for u in cl:
            cliques.append((tuple(sorted((set(cl) - {u}) | {v})), node))
        cliques.append((tuple(sorted(cl)), node))
    g = Graph(range(n), sorted(edges))
    # sparsify: drop edges that leave the graph connected
    kept = set(g.edges)
    for e in sorted(kept):
        if rng.random() < 0.25:
            trial = Graph(range(n), sorted(kept - {e}))
            if trial.is_connected_set(frozenset(range(n))):
                kept.discard(e)
    g = Graph(range(n), sorted(kept))
    td = TreeDecomposition(
        Graph(range(len(bags)), tree_edges), bags
    )
    return g, td


def random_instances(
    seed: int,
    count: int,
    caps: Optional[Mapping[str, object]] = None,
    family: str = "general",
) -> List[InstanceSpec]:
    """A deterministic stream of test instances."""
    if count < 0:
        raise InputError("count must be nonnegative")
    merged = dict(DEFAULT_CAPS)
    if caps:
        merged.update(caps)
    lo = int(merged["min_vertices"])
    hi = int(merged["max_vertices"])
    if not 1 <= lo <= hi:
        raise InputError("bad vertex bounds")
    p = float(merged["edge_probability"])

    m = re.fullmatch(r"partial-(\d+)-tree", family)
    if family != "general" and not m:
        raise InputError(f"unknown family {family!r}")

    rng = random.Random(seed)
    out = []
    for idx in range(count):
        n = rng.randint(lo, hi)
        if family == "general":
            g = _random_connected_graph(rng, n, p)
            spec = InstanceSpec(
                "general",
                {"seed": seed, "index": idx, "n": n},
                g,
                x=_random_subset(rng, n),
                y=_random_subset(rng, n),
                a=_random_subset(rng, n),
            )
        else:
            k = int(m.group(1))
            g, td = _random_partial_k_tree(rng, n, k)
            spec = InstanceSpec(
                family,
                {"seed": seed, "index": idx, "n": len(g), "k": k},
                g,
                x=_random_subset(rng, len(g)),
                y=_random_subset(rng, len(g)),
                a=_random_subset(rng, len(g)),
                decomposition=td,
            )
        out.append(spec)
    return out


def verify_instance(spec: InstanceSpec) -> Dict[str, str]:
    """Re-check asserted annotations at desk scale; returns a per-annotation
    verdict (verified / failed / skipped)."""
    report: Dict[str, str] = {}
    g = spec.graph
    for ann in spec.annotations:
        if ann.name == "packing_at_threshold":
            r = ann.params["r"]
            # every path holds a first-column vertex; those are pairwise
            # closer than r, so two far paths cannot coexist
            xs = sorted(spec.x)
            close = all(
                distance(g, u, v) < r
                for i, u in enumerate(xs) for v in xs[i + 1:]
            )
            reachable = any(
                distance(g, u, v) < float("inf")
                for u in spec.x for v in spec.y
            )
            ok = close and reachable and ann.value == 1
            report[ann.name] = "verified" if ok else "failed"
        elif ann.name == "ball_row_bound":
            rows = spec.params["r"]
            n = spec.params["n"]
            ok = True
            for s in (1, 2):
                for c in g.vertices:
                    touched = {
                        v // n for v in g.vertices
                        if distance(g, c, v) <= s
                    }
                    if len(touched) > 2 * s + 1:
                        ok = False
            report[ann.name] = "verified" if ok else "failed"
        else:
            report[ann.name] = "skipped"
    if spec.decomposition is not None:
        problems = spec.decomposition.validate(g)
        report["decomposition"] = "verified" if not problems else "failed"
    return report
