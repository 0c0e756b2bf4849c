"""Canonical LCL covers and their digital models."""

from __future__ import annotations

import enum
import itertools
import random
from fractions import Fraction
from collections.abc import Iterable, Sequence

from .geometry import (Box, CellComplexTiling, CertificateResult, Cover, CoverError,
                       intersection_graph, is_locally_centered, lcl_certificate)
from .graph_core import DigitalSpace

__all__ = [
    "LCLViolation",
    "RP2_FACETS",
    "SurfaceKind",
    "barycentric_subdivision",
    "brick_tiling",
    "circle_cover",
    "cross_polytope_facets",
    "dual_tiling",
    "minimal_sphere",
    "quotient_surface_model",
    "random_flag_sphere",
    "subdivide_edge",
]

N_MAX = 8


class LCLViolation(CoverError):
    def __init__(self, message: str, result: CertificateResult):
        super().__init__(message)
        self.result = result


def _require_lcl(cover: Cover, what: str) -> None:
    res = lcl_certificate(cover)
    if not res:
        raise LCLViolation(f"{what} is not an LCL cover: {res.witness}", res)


def minimal_sphere(n: int) -> tuple[Cover, DigitalSpace]:
    """The 2n+2 facets of the unit (n+1)-cube, covering its boundary n-sphere."""
    if not 0 <= n <= N_MAX:
        raise ValueError(f"n must lie in 0..{N_MAX}")
    boxes, labels = [], []
    for axis in range(n + 1):
        for side in (0, 1):
            bounds = [(0, 1)] * (n + 1)
            bounds[axis] = (side, side)
            boxes.append(Box.of(bounds))
            labels.append(f"{'-+'[side]}x{axis}")
    cover = Cover.from_boxes(boxes, labels)
    return cover, intersection_graph(cover)


def circle_cover(s: int) -> tuple[Cover, DigitalSpace]:
    """s closed arcs around a circle, as cells of a 1-dimensional tiling."""
    if s <= 2:
        raise CoverError(f"{s} arcs cannot form a cover of a circle by disks meeting in points")
    dims = [0] * s + [1] * s
    subfaces = [(s + i, i) for i in range(s)] + [(s + i, (i + 1) % s) for i in range(s)]
    tiling = CellComplexTiling(dims, subfaces, list(range(s, 2 * s)), name=f"circle-{s}")
    cover = Cover.from_tiling(tiling, labels=[f"arc{i}" for i in range(s)])
    lc = is_locally_centered(cover)
    if not lc:
        raise LCLViolation(f"{s} arcs: pairwise-meeting arcs {lc.witness.indices} share no point", lc)
    return cover, intersection_graph(cover)


def brick_tiling(n: int, extents: Sequence[int], offset: int = 1) -> Cover:
    """Running-bond patch of 2x1 (or 2x1x1) bricks.

    ``extents`` counts bricks along x, rows along y and (for n=3) layers
    along z.  Odd rows are shifted by ``offset`` along x; in 3D odd layers
    are additionally shifted by ``offset/2`` in x and y so that no brick
    faces line up between layers.  ``offset=0`` gives the aligned grid.
    """
    if n not in (2, 3):
        raise ValueError("brick tilings exist here for n = 2 or 3")
    extents = tuple(extents)
    if len(extents) != n:
        raise ValueError(f"need {n} extents, got {len(extents)}")
    if min(extents) < 3:
        raise ValueError("extents must be at least 3 per axis to contain an interior brick")
    boxes, labels = [], []
    layers = extents[2] if n == 3 else 1
    for layer in range(layers):
        shift = Fraction(offset * (layer % 2), 2)
        for row in range(extents[1]):
            for j in range(extents[0]):
                x0 = 2 * j + offset * (row % 2) + shift
                bounds = [(x0, x0 + 2), (row + shift, row + 1 + shift)]
                if n == 3:
                    bounds.append((layer, layer + 1))
                boxes.append(Box.of(bounds))
                labels.append(f"b{j}.{row}" + (f".{layer}" if n == 3 else ""))
    return Cover.from_boxes(boxes, labels)


# ---------------------------------------------------------------------------
# simplicial helpers for dual tilings

def _name(x) -> str:
    if isinstance(x, frozenset):
        return "{" + ",".join(sorted(_name(y) for y in x)) + "}"
    if isinstance(x, tuple):
        return "(" + ",".join(_name(y) for y in x) + ")"
    return str(x)


def _faces(facets: Iterable[Iterable]) -> list[frozenset]:
    seen = set()
    for f in facets:
        f = tuple(f)
        for k in range(1, len(f) + 1):
            seen.update(frozenset(c) for c in itertools.combinations(f, k))
    return sorted(seen, key=lambda s: (len(s), sorted(map(_name, s))))


def dual_tiling(facets: Iterable[Iterable], name: str = "") -> CellComplexTiling:
    """Dual block complex of a pure simplicial manifold given by its facets.

    Each simplex becomes a face of complementary dimension; the vertices
    become the top cells.  Two top cells meet exactly when the vertices are
    joined by an edge, so the intersection graph is the 1-skeleton.
    """
    facets = [frozenset(f) for f in facets]
    top = max(len(f) for f in facets) - 1
    faces = _faces(facets)
    pos = {s: i for i, s in enumerate(faces)}
    dims = [top - (len(s) - 1) for s in faces]
    subfaces = set()
    for f in facets:
        subs = [frozenset(c) for k in range(1, len(f) + 1) for c in itertools.combinations(f, k)]
        subfaces.update((pos[a], pos[b]) for a in subs for b in subs if a < b)
    cells = [pos[s] for s in faces if len(s) == 1]
    ids = [_name(s) for s in faces]
    return CellComplexTiling(dims, subfaces, cells, ids=ids, name=name)


def cross_polytope_facets(n: int) -> list[tuple]:
    """Facets of the boundary of the (n+1)-dimensional cross-polytope (an n-sphere)."""
    return [tuple((axis, sign) for axis, sign in enumerate(signs))
            for signs in itertools.product((1, -1), repeat=n + 1)]


def subdivide_edge(facets: Iterable[Iterable], u, v, w) -> list[frozenset]:
    """Stellar subdivision of edge uv by the new vertex w."""
    out = []
    for f in facets:
        f = frozenset(f)
        if u in f and v in f:
            out.append((f - {u}) | {w})
            out.append((f - {v}) | {w})
        else:
            out.append(f)
    return out


def random_flag_sphere(n: int, subdivisions: int, rng: random.Random) -> list[frozenset]:
    """Cross-polytope boundary refined by random edge subdivisions (stays flag)."""
    facets = [frozenset(f) for f in cross_polytope_facets(n)]
    for k in range(subdivisions if n >= 1 else 0):
        edges = sorted({frozenset(e) for f in facets for e in itertools.combinations(f, 2)},
                       key=lambda e: sorted(map(_name, e)))
        u, v = sorted(rng.choice(edges), key=_name)
        facets = subdivide_edge(facets, u, v, ("s", k))
    return facets


def barycentric_subdivision(facets: Iterable[Iterable]) -> list[frozenset]:
    out = []
    for f in facets:
        f = tuple(sorted(f, key=_name))
        for perm in itertools.permutations(f):
            out.append(frozenset(frozenset(perm[:k]) for k in range(1, len(f) + 1)))
    return out


# six-vertex projective plane (antipodal quotient of the icosahedron)
RP2_FACETS = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
              (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]


# ---------------------------------------------------------------------------
# quotient surfaces

class SurfaceKind(str, enum.Enum):
    TORUS = "torus"
    KLEIN_BOTTLE = "klein-bottle"
    PROJECTIVE_PLANE = "projective-plane"


def _brick_surface(p: int, q: int, klein: bool) -> CellComplexTiling:
    """Running bond on a p x 2q rectangle whose sides are glued.

    Left and right sides are glued straight.  Top and bottom are glued
    straight for the torus and through x -> -x for the Klein bottle.
    """
    width = 2 * q
    keys: dict[tuple, int] = {}
    dims: list[int] = []
    subfaces: list[tuple[int, int]] = []

    def face(key, dim):
        if key not in keys:
            keys[key] = len(dims)
            dims.append(dim)
        return keys[key]

    def vert(x, y):
        if y == p:
            y, x = 0, (-x if klein else x)
        return face(("v", x % width, y), 0)

    def hedge(x, y):
        a, b = vert(x, y), vert(x + 1, y)
        if y == p:
            x, y = ((-x - 1) if klein else x), 0
        e = face(("h", x % width, y), 1)
        subfaces.extend([(e, a), (e, b)])
        return e

    def vedge(x, row):
        e = face(("e", x % width, row), 1)
        subfaces.extend([(e, vert(x, row)), (e, vert(x, row + 1))])
        return e

    cells = []
    for row in range(p):
        for j in range(q):
            a = 2 * j + row % 2
            parts = [vedge(a, row), vedge(a + 2, row)]
            for y in (row, row + 1):
                parts += [hedge(a, y), hedge(a + 1, y)]
                parts += [vert(a + i, y) for i in range(3)]
            c = face(("b", j, row), 2)
            subfaces.extend((c, s) for s in parts)
            cells.append(c)
    ids = ["".join(map(str, k[:1])) + ".".join(map(str, k[1:])) for k in keys]
    return CellComplexTiling(dims, subfaces, cells, ids=ids,
                             name=f"{'klein' if klein else 'torus'}-{p}x{q}")


def quotient_surface_model(kind: SurfaceKind | str, p: int = 4, q: int = 4,
                           validate: bool = True) -> tuple[Cover, DigitalSpace]:
    """LCL tiling of a torus, Klein bottle or projective plane.

    Torus and Klein bottle use ``p`` rows of ``q`` bricks; ``p`` must be even
    so the row offsets match across the glued edge.  ``p >= 4`` keeps a
    brick from meeting one of its neighbours twice; ``q >= 4`` is needed
    because with three bricks a row closes into a triangle of bricks that
    meet pairwise but share no point.  The projective
    plane is the dual tiling of the barycentric subdivision of the six-vertex
    projective plane (31 cells); ``p`` and ``q`` are ignored for it.
    """
    kind = SurfaceKind(kind)
    if kind is SurfaceKind.PROJECTIVE_PLANE:
        tiling = dual_tiling(barycentric_subdivision(RP2_FACETS), name="projective-plane")
    else:
        if p < 4 or p % 2 or q < 4:
            raise ValueError(
                f"{kind.value} needs an even p >= 4 and q >= 4 (got p={p}, q={q}); smaller "
                "tilings wrap around and break local centering")
        tiling = _brick_surface(p, q, kind is SurfaceKind.KLEIN_BOTTLE)
    cover = Cover.from_tiling(tiling)
    graph = intersection_graph(cover)
    if validate:
        _require_lcl(cover, tiling.name)
    return cover, graph
