import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarse_menger.errors import (
    CapacityError,
    InputError,
    InternalInconsistencyError,
    PreconditionError,
)
from coarse_menger.graph import Graph, certify_centered, neighborhood, set_distance
from coarse_menger.graph import CenteredSet
from coarse_menger.tangles import (
    Tangle,
    TangleRefusal,
    build_gfrtz_tangle,
    easy_tangle_trichotomy,
    enumerate_separations,
    tangle_decompose,
    verify_tangle,
)
from coarse_menger.trees import Separation

from conftest import path_graph, random_connected


def two_cliques(bridge_len=3):
    """Two K4's joined by a path — the classic two-tangle host."""
    edges = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    edges += [(i, j) for i in range(10, 14) for j in range(i + 1, 14) if i != j]
    # bridge 3 - 4 - ... - 10
    prev = 3
    for v in range(4, 4 + bridge_len):
        edges.append((prev, v))
        prev = v
    edges.append((prev, 10))
    verts = list(range(4)) + list(range(4, 4 + bridge_len)) + list(range(10, 14))
    return Graph(verts, edges)


def test_enumerate_separations_on_p4():
    g = path_graph(4)
    seps = enumerate_separations(g, 2)
    # every separation has order < 2 and is canonically oriented once
    assert all(s.order < 2 for s in seps)
    keys = {(s.a, s.b) for s in seps}
    assert len(keys) == len(seps)
    for s in seps:
        assert (s.b, s.a) not in keys or s.a == s.b


def test_enumerate_separations_capacity():
    g = path_graph(12)
    with pytest.raises(CapacityError):
        enumerate_separations(g, 2)


def test_tangle_orders_members():
    g = path_graph(3)
    with pytest.raises(InputError):
        Tangle(g, 1, (Separation(g, frozenset([0, 1]), frozenset([1, 2])),))


def test_verify_tangle_on_two_clique_host():
    g = two_cliques(1)
    # orient every small separation towards the K4 on vertices 10..13
    members = []
    for s in enumerate_separations(g, 2):
        if frozenset(range(10, 14)) <= s.b:
            members.append(s)
        else:
            members.append(s.flip())
    t = Tangle(g, 2, tuple(members))
    assert verify_tangle(g, t)


def test_verify_tangle_detects_unoriented_separation():
    g = path_graph(4)
    t = Tangle(g, 2, ())
    verdict = verify_tangle(g, t)
    assert not verdict and verdict.axiom == "T1"


def test_verify_tangle_detects_big_side_everything():
    g = Graph([0, 1], [(0, 1)])
    whole = frozenset([0, 1])
    members = tuple(
        s if s.a == whole else s.flip() if s.b == whole else s
        for s in enumerate_separations(g, 2)
    )
    # orienting the trivial separation with A = V violates T3 (or T1 first)
    t = Tangle(g, 2, tuple(m for m in members if m.a == whole))
    verdict = verify_tangle(g, t)
    assert not verdict


def family_around(g, vertices):
    return [frozenset([v]) for v in vertices]


def test_build_family_tangle_on_two_cliques():
    g = two_cliques(1)
    fam = family_around(g, range(10, 14))
    t = build_gfrtz_tangle(g, frozenset(g.vertices), fam, r_prime=0, theta=2,
                           z=frozenset())
    assert isinstance(t, Tangle)
    assert verify_tangle(g, t)
    # every member keeps the clique-side family on its big side
    for s in t.members:
        assert any(m <= s.b for m in fam)


def test_build_family_tangle_refusal_when_family_splits():
    g = two_cliques(1)
    fam = family_around(g, [0, 13])  # one member in each clique
    t = build_gfrtz_tangle(g, frozenset(g.vertices), fam, r_prime=0, theta=2,
                           z=frozenset())
    assert isinstance(t, TangleRefusal)


# ---------------------------------------------------------------------------
# trichotomy


def test_trichotomy_precondition_r_prime():
    g = path_graph(4)
    with pytest.raises(PreconditionError):
        easy_tangle_trichotomy(g, frozenset(g.vertices), [], k=1, theta=1,
                               r=4, r_prime=1, z=frozenset(), xi=1, eta=0)


def test_trichotomy_hitting_outcome():
    g = path_graph(7)
    fam = [frozenset([2, 3]), frozenset([3, 4])]
    res = easy_tangle_trichotomy(g, frozenset(g.vertices), fam, k=2, theta=2,
                                 r=2, r_prime=1, z=frozenset(), xi=1, eta=0)
    assert res.outcome == 1
    assert isinstance(res.centered, CenteredSet)
    for m in fam:
        assert res.z_star & m


def test_trichotomy_never_silently_fails():
    rng = random.Random(99)
    outcomes = set()
    done = 0
    while done < 60:
        g = random_connected(rng, rng.randint(4, 8))
        l_verts = frozenset(rng.sample(g.vertices, max(2, len(g.vertices) - 2)))
        comps = [c for c in g.induced(l_verts).components()]
        if not comps:
            continue
        l_verts = frozenset(comps[0])
        z = neighborhood(g, l_verts, 1).members - l_verts | frozenset()
        z = frozenset(v for v in g.vertices if v not in l_verts
                      and any(n in l_verts for n in g.neighbors(v)))
        fam = [frozenset([v]) for v in sorted(l_verts)[:3]]
        k, theta, r, rp = 2, 2, 2, 1
        xi = max(1, len(z))
        # drop instances whose hypotheses fail; the rest must resolve
        try:
            res = easy_tangle_trichotomy(g, l_verts, fam, k, theta, r, rp, z,
                                         xi, 0)
        except (PreconditionError, CapacityError):
            continue
        assert res.outcome in (1, 2, 3)
        if res.outcome == 3:
            assert verify_tangle(g, res.tangle)
        outcomes.add(res.outcome)
        done += 1
    assert 1 in outcomes


# ---------------------------------------------------------------------------
# decomposition


def test_decompose_validates_theta_sequence():
    g = path_graph(4)
    with pytest.raises(InputError):
        tangle_decompose(g, frozenset(g.vertices), [], k=2, thetas=[2],
                         r=2, r_prime=1, z=frozenset(), xi=1, eta=0)
    with pytest.raises(InputError):
        tangle_decompose(g, frozenset(g.vertices), [], k=2, thetas=[3, 2],
                         r=2, r_prime=1, z=frozenset(), xi=1, eta=0)


def test_decompose_base_case_k1():
    g = path_graph(5)
    l = frozenset([1, 2, 3])
    z = frozenset([0, 4])
    res = tangle_decompose(g, l, [], k=1, thetas=[1], r=2, r_prime=1, z=z,
                           xi=2, eta=0)
    assert res.pieces == ()
    assert neighborhood(g, z, 1).members >= res.z_star >= z


def test_decompose_hits_every_unabsorbed_member():
    rng = random.Random(5)
    checked = 0
    while checked < 25:
        g = random_connected(rng, rng.randint(4, 8))
        l_comp = sorted(g.vertices)
        l = frozenset(l_comp)
        z = frozenset()
        fam = [frozenset([v]) for v in rng.sample(g.vertices,
                                                  min(3, len(g.vertices)))]
        try:
            res = tangle_decompose(g, l, fam, k=2, thetas=[2, 2], r=2,
                                   r_prime=1, z=z, xi=1, eta=0)
        except (PreconditionError, CapacityError):
            continue
        checked += 1
        for m in fam:
            hit = bool(res.z_star & m)
            inside = any(m <= p.vertices for p in res.pieces)
            assert hit or inside
        for p in res.pieces:
            assert g.is_connected_set(p.vertices)
            assert p.z_h <= res.z_star
