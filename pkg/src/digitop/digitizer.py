"""Grid digitization of implicit curves, surfaces and solids.

A cell of the grid is kept when it meets the object.  The test evaluates the
object's defining function with interval arithmetic over the closed cell, so
for the builtin quadrics (sums of squares of independent coordinates) it is
exact, and for anything else it may keep a few extra cells but never drops
one that meets the object.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import warnings
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .geometry import Box, Cover, intersection_graph
from .graph_core import DigitalSpace
from .invariants import InvariantReport, invariant_report

__all__ = [
    "BUILTIN_KINDS",
    "GridSpec",
    "ImplicitObject",
    "Interval",
    "LevelResult",
    "RefinementReport",
    "WindowTruncationWarning",
    "builtin_object",
    "digitize",
    "digitize_lcl",
    "refinement_experiment",
    "select_cells",
    "stabilization_index",
]


class WindowTruncationWarning(UserWarning):
    """Selected cells reach the edge of the window; the object may be cut off."""


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    @classmethod
    def point(cls, x) -> Interval:
        x = Fraction(x)
        return cls(x, x)

    def __add__(self, other):
        if not isinstance(other, Interval):
            other = Interval.point(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> Interval:
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        if not isinstance(other, Interval):
            other = Interval.point(other)
        return self + (-other)

    def __rsub__(self, other):
        return Interval.point(other) - self

    def __mul__(self, other):
        if not isinstance(other, Interval):
            c = Fraction(other)
            return Interval(min(c * self.lo, c * self.hi), max(c * self.lo, c * self.hi))
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def sq(self) -> Interval:
        """Exact range of x^2 (tighter than self * self when 0 is inside)."""
        a, b = self.lo * self.lo, self.hi * self.hi
        if self.lo <= 0 <= self.hi:
            return Interval(Fraction(0), max(a, b))
        return Interval(min(a, b), max(a, b))

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi


Evaluator = Callable[[Sequence[Interval]], Interval]


@dataclass(frozen=True)
class ImplicitObject:
    """Zero set (``mode="surface"``) or sublevel set f <= 0 (``mode="solid"``).

    ``evaluator`` maps one interval per coordinate to an interval enclosing
    the function's values on that box.  ``support`` is an optional box known
    to contain the object; it is used to pick a default window.
    """

    ambient_dimension: int
    evaluator: Evaluator
    mode: str = "surface"
    kind: str = "custom"
    support: Box | None = None

    def __post_init__(self):
        if self.mode not in ("surface", "solid"):
            raise ValueError(f"mode must be 'surface' or 'solid', not {self.mode!r}")
        if self.ambient_dimension < 1:
            raise ValueError("ambient dimension must be positive")

    def enclosure(self, box: Box) -> Interval:
        return self.evaluator([Interval(iv.lo, iv.hi) for iv in box.intervals])

    def meets(self, box: Box) -> bool:
        e = self.enclosure(box)
        return e.contains_zero() if self.mode == "surface" else e.lo <= 0


def _center(center, n: int) -> tuple[Fraction, ...]:
    c = tuple(Fraction(x) for x in (center if center is not None else (0,) * n))
    if len(c) != n:
        raise ValueError(f"center needs {n} coordinates")
    return c


def _quadric(n: int, radius, center, mode: str, kind: str, axes=None) -> ImplicitObject:
    r = Fraction(radius)
    if r < 0:
        raise ValueError("radius must be non-negative")
    c = _center(center, n)
    axes = tuple(Fraction(a) for a in axes) if axes is not None else (r,) * n
    if any(a <= 0 for a in axes) and kind == "ellipse":
        raise ValueError("ellipse semi-axes must be positive")
    if kind == "ellipse":
        def f(xs):
            return sum(((x - ci).sq() * (1 / (a * a)) for x, ci, a in zip(xs, c, axes)),
                       Interval.point(0)) - 1
    else:
        def f(xs):
            return sum(((x - ci).sq() for x, ci in zip(xs, c)), Interval.point(0)) - r * r
    support = Box.of((ci - a, ci + a) for ci, a in zip(c, axes))
    return ImplicitObject(n, f, mode, kind, support)


def _torus(R, r, center) -> ImplicitObject:
    R, r = Fraction(R), Fraction(r)
    if not 0 < r < R:
        raise ValueError("torus needs 0 < r < R")
    c = _center(center, 3)

    def f(xs):
        x, y, z = (xi - ci for xi, ci in zip(xs, c))
        s = x.sq() + y.sq()
        return (s + z.sq() + (R * R - r * r)).sq() - 4 * R * R * s

    support = Box.of([(c[0] - R - r, c[0] + R + r), (c[1] - R - r, c[1] + R + r), (c[2] - r, c[2] + r)])
    return ImplicitObject(3, f, "surface", "torus-surface", support)


BUILTIN_KINDS = ("circle", "sphere-2", "ellipse", "torus-surface", "disk", "ball")


def builtin_object(kind: str, radius=1, center=None, axes=None, major=2,
                   minor=1) -> ImplicitObject:
    """One of the builtin objects.

    circle/disk live in the plane, sphere-2/ball in 3-space; ``ellipse`` uses
    ``axes`` (default (2, 1)); ``torus-surface`` uses ``major``/``minor``.
    """
    if kind == "circle":
        return _quadric(2, radius, center, "surface", kind)
    if kind == "disk":
        return _quadric(2, radius, center, "solid", kind)
    if kind == "sphere-2":
        return _quadric(3, radius, center, "surface", kind)
    if kind == "ball":
        return _quadric(3, radius, center, "solid", kind)
    if kind == "ellipse":
        return _quadric(2, 1, center, "surface", kind, axes if axes is not None else (2, 1))
    if kind == "torus-surface":
        return _torus(major, minor, center)
    raise ValueError(f"unknown object kind {kind!r}; choose from {', '.join(BUILTIN_KINDS)}")


@dataclass(frozen=True)
class GridSpec:
    """Cubes of edge ``cell_edge`` tiling ``window``, aligned to its lower corner."""

    cell_edge: Fraction
    window: Box

    def __post_init__(self):
        h = Fraction(self.cell_edge)
        object.__setattr__(self, "cell_edge", h)
        if h <= 0:
            raise ValueError("cell edge must be positive")
        if self.window.dimension != self.window.ambient_dimension:
            raise ValueError("window must have full dimension")
        for iv in self.window.intervals:
            if (iv.hi - iv.lo) % h:
                raise ValueError(f"cell edge {h} does not divide window extent {iv.hi - iv.lo}")

    @classmethod
    def around(cls, obj: ImplicitObject, h, margin: int = 2) -> GridSpec:
        """Window snapped to multiples of ``h`` with ``margin`` spare cells per side."""
        h = Fraction(h)
        if obj.support is None:
            raise ValueError("object has no support box; give the window explicitly")
        bounds = []
        for iv in obj.support.intervals:
            lo = math.floor(iv.lo / h) - margin
            hi = math.ceil(iv.hi / h) + margin
            bounds.append((lo * h, hi * h))
        return cls(h, Box.of(bounds))

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(int((iv.hi - iv.lo) / self.cell_edge) for iv in self.window.intervals)

    def cell(self, index: Sequence[int]) -> Box:
        h = self.cell_edge
        return Box.of((iv.lo + i * h, iv.lo + (i + 1) * h)
                      for iv, i in zip(self.window.intervals, index))


def _selected_indices(obj: ImplicitObject, grid: GridSpec) -> list[tuple[int, ...]]:
    if obj.ambient_dimension != grid.window.ambient_dimension:
        raise ValueError("object and window live in different dimensions")
    shape = grid.shape
    picked = [idx for idx in itertools.product(*(range(s) for s in shape))
              if obj.meets(grid.cell(idx))]
    if any(i in (0, s - 1) for idx in picked for i, s in zip(idx, shape)):
        warnings.warn("selected cells touch the window edge; the object may extend past it",
                      WindowTruncationWarning, stacklevel=3)
    return picked


def select_cells(obj: ImplicitObject, grid: GridSpec) -> Cover:
    """Closed grid cells that meet the object, in lexicographic index order."""
    picked = _selected_indices(obj, grid)
    return _box_cover([grid.cell(i) for i in picked], [",".join(map(str, i)) for i in picked],
                      obj.ambient_dimension)


def digitize(obj: ImplicitObject, grid: GridSpec) -> tuple[Cover, DigitalSpace]:
    """Selected cells and their intersection graph.

    Two closed grid cells meet exactly when their indices differ by at most
    one on every axis, so the graph is read off the indices directly.
    """
    picked = _selected_indices(obj, grid)
    cover = _box_cover([grid.cell(i) for i in picked], [",".join(map(str, i)) for i in picked],
                       obj.ambient_dimension)
    where = {idx: k for k, idx in enumerate(picked)}
    steps = [d for d in itertools.product((-1, 0, 1), repeat=obj.ambient_dimension) if d > (0,) * len(d)]
    edges = []
    for idx, k in where.items():
        for d in steps:
            other = where.get(tuple(i + di for i, di in zip(idx, d)))
            if other is not None:
                edges.append((k, other))
    return cover, DigitalSpace(len(picked), edges)


def digitize_lcl(obj: ImplicitObject, grid: GridSpec) -> tuple[Cover, DigitalSpace]:
    """Like :func:`digitize` but with running-bond bricks (2h x h) in the plane.

    Rows of bricks are offset by h, as in ``brick_tiling``, so no four bricks
    meet at a corner and the selected bricks form an LCL cover.  Odd rows
    start half a brick left of the window so the window is fully covered.
    Only planar objects are supported.
    """
    if obj.ambient_dimension != 2:
        raise ValueError("digitize_lcl supports planar objects only")
    h = grid.cell_edge
    (xl, xh), (yl, yh) = ((iv.lo, iv.hi) for iv in grid.window.intervals)
    cols = math.ceil((xh - xl) / (2 * h)) + 1
    rows = int((yh - yl) / h)
    boxes, labels = [], []
    for row in range(rows):
        for j in range(-1, cols):
            x0 = xl + (2 * j + row % 2) * h
            b = Box.of([(x0, x0 + 2 * h), (yl + row * h, yl + (row + 1) * h)])
            if obj.meets(b):
                boxes.append(b)
                labels.append(f"b{j}.{row}")
    cover = _box_cover(boxes, labels, 2)
    return cover, intersection_graph(cover)


def _box_cover(boxes: list[Box], labels: list[str], n: int) -> Cover:
    if not boxes:
        return Cover((), n, labels=())
    return Cover.from_boxes(boxes, labels)


# ---------------------------------------------------------------------------
# multiresolution experiment

@dataclass
class LevelResult:
    level: int
    cell_edge: Fraction
    report: InvariantReport
    cover: Cover | None = None
    graph: DigitalSpace | None = None

    def to_json_dict(self) -> dict:
        return {"level": self.level, "h": str(self.cell_edge), "report": self.report.to_json_dict()}


def stabilization_index(reports: Sequence[InvariantReport]) -> int | None:
    """Least p such that levels p, p+1, ... all agree on (euler, betti, components).

    At least two agreeing levels are required; a single trailing level on
    its own says nothing about stabilization, so the result is None then.
    """
    keys = [r.key() for r in reports]
    p = len(keys)
    while p > 0 and keys[p - 1] == keys[-1]:
        p -= 1
    return p if len(keys) - p >= 2 else None


@dataclass
class RefinementReport:
    levels: list[LevelResult] = field(default_factory=list)
    stabilization_index: int | None = None

    @property
    def reports(self) -> list[InvariantReport]:
        return [lv.report for lv in self.levels]

    def to_json_dict(self) -> dict:
        return {"levels": [lv.to_json_dict() for lv in self.levels],
                "stabilization_index": self.stabilization_index}

    def to_csv(self) -> str:
        width = max((len(r.betti_gf2) for r in self.reports), default=0)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["level", "h", "vertices", "edges", "euler",
                    *(f"betti{k}" for k in range(width)), "components"])
        for lv in self.levels:
            r = lv.report
            betti = list(r.betti_gf2) + [0] * (width - len(r.betti_gf2))
            w.writerow([lv.level, str(lv.cell_edge), r.vertex_count, r.edge_count, r.euler,
                        *betti, r.components])
        return buf.getvalue()


def refinement_experiment(obj: ImplicitObject, levels: int, h0, window: Box | None = None,
                          ratio=Fraction(1, 2), keep_graphs: bool = False,
                          check_normality: bool = False) -> RefinementReport:
    """Digitize at h_k = h0 * ratio^k for k < levels and compare invariants.

    The window is fixed across levels (by default the one chosen for h0), so
    h0 must divide it; with ratio 1/m every finer edge divides it too.
    Normality is off by default: square grids are not LCL covers and their
    graphs are not expected to be normal.
    """
    if levels < 1:
        raise ValueError("need at least one level")
    h0, ratio = Fraction(h0), Fraction(ratio)
    if not 0 < ratio < 1:
        raise ValueError("ratio must lie strictly between 0 and 1")
    if window is None:
        window = GridSpec.around(obj, h0).window
    out = RefinementReport()
    h = h0
    for k in range(levels):
        cover, graph = digitize(obj, GridSpec(h, window))
        report = invariant_report(graph, check_normality=check_normality)
        out.levels.append(LevelResult(k, h, report, cover if keep_graphs else None,
                                      graph if keep_graphs else None))
        h *= ratio
    out.stabilization_index = stabilization_index(out.reports)
    return out
