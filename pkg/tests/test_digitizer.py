from __future__ import annotations

import itertools
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from digitop.digitizer import (GridSpec, ImplicitObject, Interval, RefinementReport, WindowTruncationWarning,
                               builtin_object, digitize, digitize_lcl, refinement_experiment,
                               select_cells, stabilization_index)
from digitop.geometry import Box, BoxRegion, intersection_graph, lcl_certificate
from digitop.graph_core import DigitalSpace
from digitop.invariants import InvariantReport, invariant_report

F = Fraction


def circle_meets_cell(box, r=1):
    """Exact test: the closed cell meets the circle iff the nearest point is
    inside the disk and the farthest corner is outside or on it."""
    near = sum(min(max(F(0), iv.lo), iv.hi) ** 2 for iv in box.intervals)
    far = max(sum(c * c for c in corner)
              for corner in itertools.product(*((iv.lo, iv.hi) for iv in box.intervals)))
    return near <= r * r <= far


def window(*bounds):
    return Box.of(bounds)


# -- interval arithmetic --------------------------------------------------------

intervals = st.tuples(st.fractions(-5, 5, max_denominator=8), st.fractions(-5, 5, max_denominator=8)).map(
    lambda t: Interval(min(t), max(t)))


@given(intervals, intervals, st.fractions(0, 1, max_denominator=8), st.fractions(0, 1, max_denominator=8))
def test_interval_ops_enclose_pointwise_values(a, b, s, t):
    x = a.lo + s * (a.hi - a.lo)
    y = b.lo + t * (b.hi - b.lo)
    for iv, v in [(a + b, x + y), (a - b, x - y), (a * b, x * y), (a.sq(), x * x), (3 * a, 3 * x)]:
        assert iv.lo <= v <= iv.hi


def test_square_is_tight():
    assert Interval(F(-1), F(2)).sq() == Interval(F(0), F(4))
    assert Interval(F(-3), F(-1)).sq() == Interval(F(1), F(9))


# -- grids ----------------------------------------------------------------------

def test_grid_must_divide_window():
    with pytest.raises(ValueError):
        GridSpec(F(2, 3), window((0, 1), (0, 1)))
    with pytest.raises(ValueError):
        GridSpec(0, window((0, 1), (0, 1)))
    with pytest.raises(ValueError):
        GridSpec(1, window((0, 1), (0, 0)))
    assert GridSpec("1/4", window((-2, 2), (0, 1))).shape == (16, 4)


def test_default_window_snaps_to_grid():
    g = GridSpec.around(builtin_object("circle"), F(1, 2))
    assert g.window == window((-2, 2), (-2, 2))


def test_unknown_object():
    with pytest.raises(ValueError):
        builtin_object("hexagon")


# -- selection --------------------------------------------------------------------

def test_circle_selection_matches_exact_oracle():
    grid = GridSpec(F(1, 2), window((-2, 2), (-2, 2)))
    picked = {e.boxes[0] for e in select_cells(builtin_object("circle"), grid).elements}
    expected = {grid.cell(i) for i in itertools.product(range(8), repeat=2)
                if circle_meets_cell(grid.cell(i))}
    assert picked == expected


@given(st.fractions(F(1, 4), 3, max_denominator=6), st.sampled_from([F(1, 2), F(1, 3), F(1, 4)]))
def test_circle_selection_oracle_random_radius(r, h):
    obj = builtin_object("circle", radius=r)
    grid = GridSpec(h, window((-4, 4), (-4, 4)))
    picked = {e.boxes[0] for e in select_cells(obj, grid).elements}
    shape = grid.shape
    expected = {grid.cell(i) for i in itertools.product(*map(range, shape))
                if circle_meets_cell(grid.cell(i), r)}
    assert picked == expected


def test_torus_selection_is_conservative():
    obj = builtin_object("torus-surface")
    grid = GridSpec(F(1, 2), window((-5, 5), (-5, 5), (-3, 3)))
    picked = {e.boxes[0] for e in select_cells(obj, grid).elements}
    # sample points on the torus with rational coordinates (Pythagorean angles)
    for (c1, s1), (c2, s2) in itertools.product([(1, 0), (F(3, 5), F(4, 5)), (0, 1), (F(-5, 13), F(12, 13))],
                                                repeat=2):
        p = ((2 + c2) * c1, (2 + c2) * s1, s2)
        assert any(b.contains(Box.of([(x, x) for x in p])) for b in picked)


def test_empty_and_full_objects():
    nothing = ImplicitObject(2, lambda xs: Interval.point(1))
    grid = GridSpec(1, window((0, 3), (0, 3)))
    assert len(select_cells(nothing, grid)) == 0
    cover, g = digitize(nothing, grid)
    assert len(g) == 0 and cover.ambient_dimension == 2
    everything = ImplicitObject(2, lambda xs: Interval.point(-1), mode="solid")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", WindowTruncationWarning)
        assert len(select_cells(everything, grid)) == 9


def test_truncation_warning():
    with pytest.warns(WindowTruncationWarning):
        select_cells(builtin_object("circle", radius=2), GridSpec(1, window((-2, 2), (-2, 2))))


def test_point_object_gives_single_vertex():
    obj = builtin_object("disk", radius=0, center=(F(1, 3), F(1, 3)))
    _, g = digitize(obj, GridSpec(1, window((-2, 2), (-2, 2))))
    assert g == DigitalSpace(1)


# -- graphs -------------------------------------------------------------------------

def test_index_graph_equals_geometric_intersection_graph():
    for obj in (builtin_object("circle"), builtin_object("ellipse"), builtin_object("disk", radius=F(3, 2))):
        cover, g = digitize(obj, GridSpec.around(obj, F(1, 2)))
        assert g == intersection_graph(cover)


def test_nerve_matches_cubical_homology_of_union():
    obj = builtin_object("circle")
    cover, g = digitize(obj, GridSpec.around(obj, F(1, 4)))
    union = BoxRegion(tuple(e.boxes[0] for e in cover.elements))
    assert union.complex().betti_numbers() == list(invariant_report(g, max_dim=2).betti_gf2)


@pytest.mark.parametrize("kind, h, euler, betti", [
    ("circle", F(1, 8), 0, (1, 1)),
    ("ellipse", F(1, 4), 0, (1, 1)),
    ("disk", F(1, 4), 1, (1,)),
    ("sphere-2", F(1, 4), 2, (1, 0, 1)),
])
def test_fine_digitizations(kind, h, euler, betti):
    obj = builtin_object(kind, radius=F(3, 2) if kind == "sphere-2" else 1)
    _, g = digitize(obj, GridSpec.around(obj, h))
    r = invariant_report(g, check_normality=False)
    assert (r.euler, r.betti_gf2, r.components) == (euler, betti, 1)


def test_grid_cells_are_not_lcl():
    obj = builtin_object("disk", radius=2)
    cover, g = digitize(obj, GridSpec.around(obj, F(1, 2)))
    assert not lcl_certificate(cover, g)


def test_lcl_digitization_of_disk():
    obj = builtin_object("disk", radius=2)
    cover, g = digitize_lcl(obj, GridSpec.around(obj, F(1, 2)))
    assert lcl_certificate(cover, g)
    r = invariant_report(g, check_normality=False)
    assert (r.euler, r.betti_gf2) == (1, (1,))
    with pytest.raises(ValueError):
        digitize_lcl(builtin_object("ball"), GridSpec.around(builtin_object("ball"), 1))


# -- refinement ---------------------------------------------------------------------

def rep(euler, betti, comps=1):
    return InvariantReport(euler, betti, comps, None, 0, 0)


@pytest.mark.parametrize("reports, p", [
    ([rep(1, (1,)), rep(0, (1, 1)), rep(0, (1, 1))], 1),
    ([rep(0, (1, 1))] * 3, 0),
    ([rep(1, (1,)), rep(0, (1, 1))], None),
    ([rep(0, (1, 1))], None),
    ([], None),
])
def test_stabilization_index(reports, p):
    assert stabilization_index(reports) == p


def test_circle_refinement():
    r = refinement_experiment(builtin_object("circle"), 4, 1)
    assert r.stabilization_index is not None and r.stabilization_index < 4
    last = r.reports[-1]
    assert (last.euler, last.betti_gf2, last.components) == (0, (1, 1), 1)
    assert [lv.cell_edge for lv in r.levels] == [1, F(1, 2), F(1, 4), F(1, 8)]
    lines = r.to_csv().splitlines()
    assert lines[0] == "level,h,vertices,edges,euler,betti0,betti1,components"
    assert lines[-1].startswith("3,1/8,") and lines[-1].endswith(",0,1,1,1")


def test_empty_refinement_stabilizes_at_zero():
    nothing = ImplicitObject(2, lambda xs: Interval.point(1))
    r = refinement_experiment(nothing, 3, 1, window=window((0, 2), (0, 2)))
    assert r.stabilization_index == 0
    assert all(x.vertex_count == 0 and x.euler == 0 for x in r.reports)


def test_refinement_arguments():
    with pytest.raises(ValueError):
        refinement_experiment(builtin_object("circle"), 0, 1)
    with pytest.raises(ValueError):
        refinement_experiment(builtin_object("circle"), 2, 1, ratio=2)


def test_refinement_report_json():
    r = refinement_experiment(builtin_object("circle"), 2, F(1, 2), keep_graphs=True)
    d = r.to_json_dict()
    assert d["levels"][1]["h"] == "1/4" and d["levels"][0]["report"]["betti_gf2"] == [1, 1]
    assert r.levels[0].graph is not None and isinstance(r, RefinementReport)
