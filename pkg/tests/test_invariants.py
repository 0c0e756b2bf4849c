from __future__ import annotations

import itertools

import pytest
from hypothesis import given

from digitop.graph_core import DigitalSpace, complete_graph, complete_multipartite_graph, cycle_graph
from digitop.invariants import (InvariantReport, betti_numbers_gf2, clique_complex, dominated_core,
                                euler_characteristic, invariant_report)

from conftest import graphs, random_graph

np = pytest.importorskip("numpy")


def dense_rank_mod2(m):
    """Plain row reduction of a 0/1 numpy matrix over GF(2)."""
    m = m.copy() % 2
    rank, rows, cols = 0, *m.shape
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, c]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(rows):
            if r != rank and m[r, c]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def oracle_betti(g, max_dim):
    simplices = [[c for c in itertools.combinations(range(len(g)), k + 1)
                  if all(g.rows[u] >> v & 1 for u, v in itertools.combinations(c, 2))]
                 for k in range(max_dim + 2)]
    ranks = [0]
    for k in range(1, max_dim + 2):
        idx = {s: i for i, s in enumerate(simplices[k - 1])}
        m = np.zeros((len(simplices[k]), len(simplices[k - 1])), dtype=np.uint8)
        for r, s in enumerate(simplices[k]):
            for face in itertools.combinations(s, k):
                m[r, idx[face]] = 1
        ranks.append(dense_rank_mod2(m) if m.size else 0)
    ranks.append(0)
    return [len(simplices[k]) - ranks[k] - ranks[k + 1] for k in range(max_dim + 1)]


@pytest.mark.parametrize("g, euler, betti", [
    (complete_graph(1), 1, (1,)),
    (DigitalSpace(2), 2, (2,)),
    (cycle_graph(5), 0, (1, 1)),
    (complete_graph(4), 1, (1,)),
    (complete_multipartite_graph(2, 2, 2), 2, (1, 0, 1)),
    (complete_multipartite_graph(2, 2, 2, 2), 0, (1, 0, 0, 1)),
])
def test_known_spaces(g, euler, betti):
    assert euler_characteristic(g) == euler
    r = invariant_report(g)
    assert (r.euler, r.betti_gf2) == (euler, betti)


def test_empty_graph():
    r = invariant_report(DigitalSpace(0))
    assert (r.euler, r.betti_gf2, r.components, r.normal_dimension) == (0, (), 0, None)


@given(graphs(max_n=8))
def test_betti_match_dense_oracle(g):
    assert betti_numbers_gf2(g, 3) == oracle_betti(g, 3)


def test_betti_match_dense_oracle_on_larger_random_graphs(rng):
    for _ in range(20):
        g = random_graph(rng, rng.randint(8, 13), 0.45)
        assert betti_numbers_gf2(g, 3) == oracle_betti(g, 3)


@given(graphs(max_n=9))
def test_euler_poincare(g):
    top = len(clique_complex(g).counts)
    betti = betti_numbers_gf2(g, max(top, 0))
    assert sum((-1) ** k * b for k, b in enumerate(betti)) == euler_characteristic(g)


@given(graphs(max_n=9))
def test_dominated_core_keeps_homology(g):
    core = dominated_core(g)
    assert len(core) <= len(g)
    assert betti_numbers_gf2(core, 4) == betti_numbers_gf2(g, 4)
    assert euler_characteristic(core) == euler_characteristic(g)


def test_dominated_core_collapses_cones_to_a_point():
    cone = DigitalSpace(6, [(i, (i + 1) % 5) for i in range(5)] + [(5, i) for i in range(5)])
    assert len(dominated_core(cone)) == 1


def test_report_padding_and_json():
    r = invariant_report(cycle_graph(4), max_dim=3)
    assert r.betti_gf2 == (1, 1, 0, 0) and r.normal_dimension == 1
    assert InvariantReport.from_json_dict(r.to_json_dict()) == r
    assert r.to_json_dict()["vertices"] == 4 and r.to_json_dict()["edges"] == 4


def test_report_rejects_inconsistent_numbers():
    with pytest.raises(AssertionError):
        InvariantReport(euler=1, betti_gf2=(1, 1), components=1, normal_dimension=None,
                        vertex_count=3, edge_count=3)


def test_negative_max_dim():
    with pytest.raises(ValueError):
        betti_numbers_gf2(cycle_graph(4), -1)
