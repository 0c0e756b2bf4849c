from __future__ import annotations

import pytest
from hypothesis import given

from digitop.graph_core import DigitalSpace, complete_graph, complete_multipartite_graph, cycle_graph, rim
from digitop.normality import FailureReason, NormalityChecker, infer_dimension, is_normal_space

from conftest import graphs


def naive_normal(g, n):
    """Definition read literally: no memo, no shortcuts."""
    if n == 0:
        return len(g) == 2 and g.edge_count == 0
    if len(g) == 0:
        return False
    seen, stack = {g.vertices[0]}, [g.vertices[0]]
    while stack:
        for w in g.neighbors(stack.pop()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(g):
        return False
    return all(naive_normal(rim(g, v), n - 1) for v in g.vertices)


ICOSAHEDRON = DigitalSpace(12, [
    (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (2, 3), (3, 4), (4, 5), (5, 1),
    (1, 6), (2, 6), (2, 7), (3, 7), (3, 8), (4, 8), (4, 9), (5, 9), (5, 10), (1, 10),
    (6, 7), (7, 8), (8, 9), (9, 10), (10, 6), (11, 6), (11, 7), (11, 8), (11, 9), (11, 10)])


@pytest.mark.parametrize("g, n", [
    (DigitalSpace(2), 0),
    (cycle_graph(4), 1),
    (cycle_graph(9), 1),
    (complete_multipartite_graph(2, 2, 2), 2),
    (complete_multipartite_graph(2, 2, 2, 2), 3),
    (ICOSAHEDRON, 2),
])
def test_known_normal_spaces(g, n):
    v = is_normal_space(g, n)
    assert v.is_normal and v.failure_reason is None
    assert infer_dimension(g) == n


def test_triangle_is_not_a_circle():
    v = is_normal_space(cycle_graph(3), 1)
    assert not v
    assert v.failure_reason is FailureReason.RIM_FAILURE and v.failing_vertex == 0
    assert infer_dimension(cycle_graph(3)) is None


@pytest.mark.parametrize("g, n, reason", [
    (DigitalSpace(0), 2, FailureReason.EMPTY),
    (DigitalSpace(3), 0, FailureReason.WRONG_BASE_CASE),
    (complete_graph(2), 0, FailureReason.WRONG_BASE_CASE),
    (DigitalSpace(8, [(i, (i + 1) % 4) for i in range(4)] + [(4 + i, 4 + (i + 1) % 4) for i in range(4)]),
     1, FailureReason.NOT_CONNECTED),
])
def test_failure_reasons(g, n, reason):
    assert is_normal_space(g, n).failure_reason is reason


def test_failure_depth_counts_rim_levels():
    # a cone over C_3: the apex's rim is C_3, whose rims are K_2
    g = DigitalSpace(4, [(0, 1), (1, 2), (0, 2), (3, 0), (3, 1), (3, 2)])
    v = is_normal_space(g, 2)
    assert v.failure_reason is FailureReason.RIM_FAILURE and v.failure_depth == 2


def test_negative_dimension():
    with pytest.raises(ValueError):
        is_normal_space(cycle_graph(4), -1)


@given(graphs(max_n=8))
def test_agrees_with_naive_definition(g):
    checker = NormalityChecker()
    for n in range(4):
        assert bool(is_normal_space(g, n, checker)) == naive_normal(g, n)


def test_memo_reuses_isomorphic_rims():
    checker = NormalityChecker()
    assert is_normal_space(ICOSAHEDRON, 2, checker)
    assert checker.hits > 0


def test_verdict_json():
    d = is_normal_space(cycle_graph(3), 1).to_json_dict()
    assert d == {"is_normal": False, "dimension_checked": 1, "failing_vertex": 0,
                 "failure_reason": "rim-failure", "failure_depth": 1}
