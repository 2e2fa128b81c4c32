import json
import re

import pytest

from coarse_menger.errors import InputError
from coarse_menger.generators import (
    grid,
    grid_column,
    grid_row,
    menger_lower_bound_instance,
    random_instances,
    rooted_p3_grid,
    verify_instance,
)
from coarse_menger.graph import distance


def test_grid_shape():
    g = grid(3, 4)
    assert len(g.vertices) == 12
    assert len(g.edges) == 3 * 3 + 2 * 4  # horizontal + vertical
    assert distance(g, 0, 11) == 2 + 3


def test_grid_rows_and_columns():
    assert grid_row(2, 3, 1) == frozenset([3, 4, 5])
    assert grid_column(2, 3, 0) == frozenset([0, 3])


def test_menger_instance_annotations():
    spec = menger_lower_bound_instance(3, 6)
    assert spec.family == "menger_lower_bound"
    names = {a.name for a in spec.annotations}
    assert "packing_at_threshold" in names
    doc = spec.to_json_dict()
    json.dumps(doc)  # must be serializable as-is


def test_menger_instance_preconditions():
    with pytest.raises(InputError):
        menger_lower_bound_instance(1, 5)
    with pytest.raises(InputError):
        menger_lower_bound_instance(4, 3)


def test_rooted_p3_grid_roots():
    spec = rooted_p3_grid(4)
    assert len(spec.roots) == 3
    with pytest.raises(InputError):
        rooted_p3_grid(2)


def test_random_instances_deterministic():
    a = random_instances(7, 5)
    b = random_instances(7, 5)
    assert [s.to_json_dict() for s in a] == [s.to_json_dict() for s in b]
    assert [s.to_json_dict() for s in a] != \
        [s.to_json_dict() for s in random_instances(8, 5)]


def test_random_instances_respect_caps():
    for spec in random_instances(3, 10, {"max_vertices": 6}):
        assert len(spec.graph.vertices) <= 6


def test_partial_k_tree_family_has_valid_decomposition():
    for spec in random_instances(11, 6, family="partial-2-tree"):
        assert spec.decomposition is not None
        assert spec.decomposition.validate(spec.graph) == []
        assert spec.decomposition.width <= 2


def test_unknown_family_rejected():
    with pytest.raises(InputError):
        random_instances(0, 1, family="strange")


def test_verify_instance_grid():
    spec = menger_lower_bound_instance(2, 4)
    report = verify_instance(spec)
    assert all(v != "failed" for v in report.values()), report


def test_verify_instance_random():
    for spec in random_instances(21, 5):
        report = verify_instance(spec)
        assert all(v != "failed" for v in report.values()), report
