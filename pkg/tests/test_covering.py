import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarse_menger.covering import (
    CoverInstance,
    duality_sweep,
    gallai_check,
    graph_fingerprint,
    min_ball_hitting,
    min_separating_balls,
    min_set_cover,
)
from coarse_menger.errors import CapacityError, InputError, InternalInconsistencyError
from coarse_menger.generators import grid, grid_column
from coarse_menger.graph import Graph, _ball

from conftest import cycle_graph, path_graph, small_connected_graphs


def test_instance_requires_exactly_one_family_source():
    g = path_graph(3)
    with pytest.raises(InputError):
        CoverInstance(g, 0)
    with pytest.raises(InputError):
        CoverInstance(g, 0, l=0, x=frozenset([0]), y=frozenset([2]),
                      explicit_family=(frozenset([1]),))


def test_min_set_cover_exact():
    sets = {0: frozenset([1, 2]), 1: frozenset([2, 3]), 2: frozenset([1, 3]),
            3: frozenset([1, 2, 3])}
    chosen, _ = min_set_cover([1, 2, 3], sets)
    assert chosen == [3]


def test_min_set_cover_uncoverable():
    with pytest.raises(InternalInconsistencyError):
        min_set_cover([1, 9], {0: frozenset([1])})


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_min_set_cover_matches_subset_scan(seed):
    rng = random.Random(seed)
    universe = list(range(rng.randint(1, 7)))
    sets = {i: frozenset(rng.sample(universe, rng.randint(1, len(universe))))
            for i in range(rng.randint(1, 6))}
    if not frozenset(universe) <= frozenset().union(*sets.values()):
        return
    chosen, _ = min_set_cover(universe, sets)
    brute = min(
        (len(c) for n in range(len(sets) + 1)
         for c in itertools.combinations(sets, n)
         if frozenset(universe) <= frozenset().union(frozenset(), *(sets[i] for i in c))),
    )
    assert len(chosen) == brute


def test_cover_on_path_middle_vertex():
    g = path_graph(5)
    sol = min_ball_hitting(CoverInstance(g, 0, l=0, x=frozenset([0]), y=frozenset([4])))
    assert sol.count == 1 and sol.optimal


def test_cover_radius_one_on_grid():
    g = grid(3, 5)
    sol = min_ball_hitting(
        CoverInstance(g, 1, l=0, x=grid_column(3, 5, 0), y=grid_column(3, 5, 4))
    )
    # one radius-1 ball spans a full column of a 3-row grid
    assert sol.count == 1


def test_cover_radius_zero_on_grid_needs_a_column():
    g = grid(3, 5)
    sol = min_ball_hitting(
        CoverInstance(g, 0, l=0, x=grid_column(3, 5, 0), y=grid_column(3, 5, 4))
    )
    assert sol.count == 3


def test_explicit_family_rejects_empty_member():
    g = path_graph(3)
    with pytest.raises(InputError):
        min_ball_hitting(CoverInstance(g, 0, explicit_family=(frozenset(),)))


def test_empty_family_has_empty_cover():
    g = path_graph(4)
    sol = min_ball_hitting(
        CoverInstance(g, 0, l=10, x=frozenset([0]), y=frozenset([1]))
    )
    assert sol.count == 0


@settings(max_examples=30, deadline=None)
@given(small_connected_graphs(max_n=7), st.integers(min_value=0, max_value=10**6),
       st.integers(min_value=0, max_value=1))
def test_greedy_cover_is_feasible_and_not_smaller(g, seed, beta):
    rng = random.Random(seed)
    x = frozenset(rng.sample(g.vertices, min(2, len(g.vertices))))
    y = frozenset(rng.sample(g.vertices, min(2, len(g.vertices))))
    inst = CoverInstance(g, beta, l=0, x=x, y=y)
    exact = min_ball_hitting(inst)
    greedy = min_ball_hitting(CoverInstance(g, beta, l=0, x=x, y=y, mode="greedy"))
    assert greedy.count >= exact.count
    family = inst.family()
    union = frozenset().union(
        frozenset(), *(_ball(g, c, beta) for c in greedy.centered.centers.members)
    )
    assert all(union & member for member in family)


@settings(max_examples=25, deadline=None)
@given(small_connected_graphs(max_n=7), st.integers(min_value=0, max_value=10**6),
       st.integers(min_value=0, max_value=1))
def test_separating_balls_agree_with_path_cover(g, seed, beta):
    """Independent route to the same number: hitting every chordless path
    equals separating x from y by the ball union."""
    rng = random.Random(seed)
    x = frozenset(rng.sample(g.vertices, min(2, len(g.vertices))))
    y = frozenset(rng.sample(g.vertices, min(2, len(g.vertices))))
    cover = min_ball_hitting(CoverInstance(g, beta, l=0, x=x, y=y))
    size, _ = min_separating_balls(g, x, y, beta, size_cap=len(g.vertices))
    assert size == cover.count


def test_separating_balls_scales_past_enumeration_cap():
    g = grid(3, 9)
    size, centers = min_separating_balls(
        g, grid_column(3, 9, 0), grid_column(3, 9, 8), 1, size_cap=3
    )
    assert size == 1


def test_separating_balls_capacity():
    g = grid(3, 5)
    with pytest.raises(CapacityError):
        min_separating_balls(g, grid_column(3, 5, 0), grid_column(3, 5, 4), 0,
                             size_cap=1)


def test_duality_sweep_weak_duality_clean():
    g = grid(3, 4)
    rep = duality_sweep(g, grid_column(3, 4, 0), grid_column(3, 4, 3), 0,
                        [1, 2, 3], [0, 1])
    assert rep.check_weak_duality() == []
    assert rep.packing_by_r[1].exact
    csv = rep.to_csv()
    assert csv.startswith("kind,threshold,value,exact,flag")


def test_fingerprint_depends_on_graph():
    assert graph_fingerprint(path_graph(4)) != graph_fingerprint(path_graph(5))
    assert graph_fingerprint(path_graph(4)) == graph_fingerprint(path_graph(4))


def test_gallai_check_packing_branch():
    g = Graph(range(4), [(0, 1), (2, 3)])
    verdict = gallai_check(g, frozenset(range(4)), 2)
    assert verdict.branch == "packing"


def test_gallai_check_hitting_branch_respects_bound():
    # star: every A-path crosses the center, so one vertex hits all
    g = Graph(range(5), [(0, i) for i in range(1, 5)])
    verdict = gallai_check(g, frozenset([1, 2, 3, 4]), 3)
    assert verdict.branch == "hitting"
    assert len(verdict.hitting_set) <= 2 * 3 - 2


@settings(max_examples=25, deadline=None)
@given(small_connected_graphs(max_n=7), st.integers(min_value=0, max_value=10**6),
       st.integers(min_value=1, max_value=3))
def test_gallai_dichotomy_always_resolves(g, seed, k):
    rng = random.Random(seed)
    a = frozenset(rng.sample(g.vertices, min(3, len(g.vertices))))
    verdict = gallai_check(g, a, k)
    if verdict.branch == "packing":
        assert verdict.packing.count >= k
    else:
        assert len(verdict.hitting_set) <= 2 * k - 2
