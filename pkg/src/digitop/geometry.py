"""Cover elements, intersection graphs and the LCL certificate stack.

Two kinds of cover are supported:

* box covers, whose elements are finite unions of closed axis-aligned boxes
  with exact rational corners (a single box in the common case);
* cell covers, whose elements are closed subcomplexes of one shared
  :class:`CellComplexTiling`.  This is how quotient surfaces are handled:
  intersections are read off the face lattice, never from coordinates.

Whether a region "is a k-disk" is decided by :func:`disk_failure`, a
necessary-conditions test on the cell structure of the region (see
:meth:`digitop.cellular.FiniteComplex.disk_failure`).
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from collections.abc import Iterable, Sequence
from typing import Any, Union

from .cellular import FiniteComplex
from .graph_core import DigitalSpace, enumerate_cliques, induced_subgraph, is_connected, maximal_cliques

__all__ = [
    "Box",
    "BoxMeet",
    "BoxRegion",
    "CellComplexTiling",
    "CellRegion",
    "CertificateResult",
    "Cover",
    "CoverError",
    "Reason",
    "RationalInterval",
    "Witness",
    "box_intersection",
    "coarsen",
    "common_intersection",
    "consistency_check",
    "disk_failure",
    "intersection_graph",
    "is_locally_centered",
    "lcl_certificate",
    "lump_certificate",
    "restrict_to_element",
]


class CoverError(ValueError):
    pass


def _q(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("coordinates must be exact; pass ints, Fractions or 'p/q' strings")
    return Fraction(x)


def _qstr(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# boxes

@dataclass(frozen=True, order=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _q(self.lo))
        object.__setattr__(self, "hi", _q(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    def intersect(self, other: RationalInterval) -> RationalInterval | None:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return RationalInterval(lo, hi) if lo <= hi else None

    def contains(self, other: RationalInterval) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


@dataclass(frozen=True, order=True)
class Box:
    intervals: tuple[RationalInterval, ...]

    @classmethod
    def of(cls, bounds: Iterable[Sequence]) -> Box:
        return cls(tuple(RationalInterval(lo, hi) for lo, hi in bounds))

    @property
    def ambient_dimension(self) -> int:
        return len(self.intervals)

    @property
    def dimension(self) -> int:
        return sum(not iv.degenerate for iv in self.intervals)

    def intersect(self, other: Box) -> Box | None:
        if self.ambient_dimension != other.ambient_dimension:
            raise CoverError("boxes live in different ambient dimensions")
        parts = []
        for a, b in zip(self.intervals, other.intervals):
            iv = a.intersect(b)
            if iv is None:
                return None
            parts.append(iv)
        return Box(tuple(parts))

    def contains(self, other: Box) -> bool:
        return all(a.contains(b) for a, b in zip(self.intervals, other.intervals))

    def to_json(self) -> list[list[str]]:
        return [[_qstr(iv.lo), _qstr(iv.hi)] for iv in self.intervals]

    def __repr__(self) -> str:
        return "Box(" + " x ".join(f"[{iv.lo},{iv.hi}]" for iv in self.intervals) + ")"


@dataclass(frozen=True)
class BoxMeet:
    box: Box
    dimension: int
    interiors_overlap: bool


def box_intersection(a: Box, b: Box) -> BoxMeet | None:
    """Componentwise intersection; None when the boxes are disjoint."""
    box = a.intersect(b)
    if box is None:
        return None
    overlap = all(iv.lo < iv.hi for iv in box.intervals)
    return BoxMeet(box, box.dimension, overlap)


# ---------------------------------------------------------------------------
# regions

def _normalize(boxes: Iterable[Box]) -> tuple[Box, ...]:
    uniq = sorted(set(boxes))
    keep = [b for b in uniq if not any(o != b and o.contains(b) for o in uniq)]
    return tuple(keep)


@dataclass(frozen=True)
class BoxRegion:
    """Finite union of closed boxes in one ambient space."""

    boxes: tuple[Box, ...]

    def __post_init__(self):
        object.__setattr__(self, "boxes", _normalize(self.boxes))
        if len({b.ambient_dimension for b in self.boxes}) > 1:
            raise CoverError("mixed ambient dimensions in one region")

    @property
    def ambient_dimension(self) -> int:
        return self.boxes[0].ambient_dimension if self.boxes else 0

    @property
    def is_empty(self) -> bool:
        return not self.boxes

    @property
    def dimension(self) -> int:
        return max((b.dimension for b in self.boxes), default=-1)

    def bounding_box(self) -> Box:
        m = self.ambient_dimension
        return Box(tuple(RationalInterval(min(b.intervals[a].lo for b in self.boxes),
                                          max(b.intervals[a].hi for b in self.boxes))
                         for a in range(m)))

    def intersect(self, other: BoxRegion) -> BoxRegion:
        out = []
        for a in self.boxes:
            for b in other.boxes:
                c = a.intersect(b)
                if c is not None:
                    out.append(c)
        return BoxRegion(tuple(out))

    def union(self, other: BoxRegion) -> BoxRegion:
        return BoxRegion(self.boxes + other.boxes)

    def complex(self) -> FiniteComplex:
        """Cubical subdivision over the coordinate arrangement of the boxes.

        Along each axis the distinct endpoints c_0 < c_1 < ... split the line
        into points (code 2i) and open gaps (code 2i+1); a cell is a tuple of
        codes and lies in the region iff it lies in one of the boxes.
        """
        m = self.ambient_dimension
        coords = [sorted({e for b in self.boxes for e in (b.intervals[a].lo, b.intervals[a].hi)})
                  for a in range(m)]
        pos = [{c: i for i, c in enumerate(cs)} for cs in coords]
        cells: set[tuple[int, ...]] = set()
        for b in self.boxes:
            ranges = [range(2 * pos[a][b.intervals[a].lo], 2 * pos[a][b.intervals[a].hi] + 1)
                      for a in range(m)]
            cells.update(itertools.product(*ranges))
        dims = {c: sum(x & 1 for x in c) for c in cells}
        facets = {}
        for c in cells:
            fs = []
            for a, x in enumerate(c):
                if x & 1:
                    fs.append(c[:a] + (x - 1,) + c[a + 1:])
                    fs.append(c[:a] + (x + 1,) + c[a + 1:])
            facets[c] = fs
        return FiniteComplex(dims, facets)


class CellComplexTiling:
    """Face lattice of a finite regular cell complex.

    Faces are numbered ``0..F-1``; ``closure[f]`` is the set of faces of
    ``f`` including ``f`` itself.  ``cells`` lists the top cells used as cover
    elements.  ``ids`` keeps caller-facing face identifiers for JSON.
    """

    def __init__(self, dims: Sequence[int], subfaces: Iterable[tuple[int, int]],
                 cells: Sequence[int], ids: Sequence | None = None, name: str = ""):
        self.dims = tuple(int(d) for d in dims)
        nf = len(self.dims)
        self.ids = tuple(ids) if ids is not None else tuple(range(nf))
        self.name = name
        direct: list[set[int]] = [set() for _ in range(nf)]
        for f, s in subfaces:
            if not (0 <= f < nf and 0 <= s < nf):
                raise CoverError(f"closure pair ({f}, {s}) refers to an unknown face")
            if f == s:
                continue
            if self.dims[s] >= self.dims[f]:
                raise CoverError(f"face {self.ids[s]} cannot lie in face {self.ids[f]} "
                                 "of equal or lower dimension")
            direct[f].add(s)
        closure: list[frozenset[int] | None] = [None] * nf
        for f in sorted(range(nf), key=self.dims.__getitem__):
            acc = {f}
            for s in direct[f]:
                acc |= closure[s]
            closure[f] = frozenset(acc)
        self.closure: tuple[frozenset[int], ...] = tuple(closure)
        self.facets = tuple(tuple(sorted(s for s in closure[f] if self.dims[s] == self.dims[f] - 1))
                            for f in range(nf))
        self.cells = tuple(cells)
        for c in self.cells:
            if not 0 <= c < nf:
                raise CoverError(f"cell {c} is not a face")

    @property
    def dimension(self) -> int:
        return max(self.dims, default=-1)

    def region(self, faces: Iterable[int]) -> CellRegion:
        acc: set[int] = set()
        for f in faces:
            acc |= self.closure[f]
        return CellRegion(frozenset(acc), self)

    def complex(self) -> FiniteComplex:
        return FiniteComplex({f: d for f, d in enumerate(self.dims)},
                             {f: self.facets[f] for f in range(len(self.dims))})

    def to_json_dict(self) -> dict[str, Any]:
        ids = self.ids
        return {
            "faces": [{"id": ids[f], "dim": d} for f, d in enumerate(self.dims)],
            "closure": [[ids[f], ids[s]] for f in range(len(self.dims))
                        for s in sorted(self.closure[f]) if s != f],
            "cells": [ids[c] for c in self.cells],
        }

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> CellComplexTiling:
        faces = data["faces"]
        ids = [f["id"] for f in faces]
        pos = {fid: k for k, fid in enumerate(ids)}
        if len(pos) != len(ids):
            raise CoverError("duplicate face ids")
        try:
            pairs = [(pos[a], pos[b]) for a, b in data.get("closure", [])]
            cells = [pos[c] for c in data["cells"]]
        except KeyError as exc:
            raise CoverError(f"unknown face id {exc.args[0]!r}") from None
        return cls([f["dim"] for f in faces], pairs, cells, ids=ids, name=data.get("name", ""))


@dataclass(frozen=True)
class CellRegion:
    """Closed subcomplex of a tiling (a set of faces closed under taking faces)."""

    faces: frozenset[int]
    tiling: CellComplexTiling = field(compare=False, repr=False)

    def __hash__(self) -> int:
        return hash((self.faces, id(self.tiling)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CellRegion):
            return NotImplemented
        return self.tiling is other.tiling and self.faces == other.faces

    @property
    def is_empty(self) -> bool:
        return not self.faces

    @property
    def dimension(self) -> int:
        dims = self.tiling.dims
        return max((dims[f] for f in self.faces), default=-1)

    def intersect(self, other: CellRegion) -> CellRegion:
        return CellRegion(self.faces & other.faces, self.tiling)

    def union(self, other: CellRegion) -> CellRegion:
        return CellRegion(self.faces | other.faces, self.tiling)

    def complex(self) -> FiniteComplex:
        t = self.tiling
        return FiniteComplex({f: t.dims[f] for f in self.faces},
                             {f: t.facets[f] for f in self.faces})


Region = Union[BoxRegion, CellRegion]


@lru_cache(maxsize=65536)
def disk_failure(region: Region, k: int) -> str | None:
    """None when ``region`` passes the k-disk certificate, else a reason."""
    return region.complex().disk_failure(k)


# ---------------------------------------------------------------------------
# covers

@dataclass(frozen=True, eq=False)
class Cover:
    elements: tuple[Region, ...]
    ambient_dimension: int
    tiling: CellComplexTiling | None = None
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != len(self.elements):
                raise CoverError("one label per element required")
        if self.tiling is None:
            for e in self.elements:
                if not isinstance(e, BoxRegion):
                    raise CoverError("box cover holds a non-box element")
                if not e.is_empty and e.ambient_dimension != self.ambient_dimension:
                    raise CoverError("element ambient dimension differs from the cover's")
        else:
            for e in self.elements:
                if not isinstance(e, CellRegion) or e.tiling is not self.tiling:
                    raise CoverError("cell cover elements must come from the cover's tiling")

    @classmethod
    def from_boxes(cls, boxes: Iterable[Box], labels: Sequence[str] | None = None) -> Cover:
        boxes = list(boxes)
        if not boxes:
            return cls((), 0, labels=labels)
        return cls(tuple(BoxRegion((b,)) for b in boxes), boxes[0].ambient_dimension, labels=labels)

    @classmethod
    def from_tiling(cls, tiling: CellComplexTiling, cells: Sequence[int] | None = None,
                    labels: Sequence[str] | None = None) -> Cover:
        cells = tiling.cells if cells is None else cells
        return cls(tuple(tiling.region([c]) for c in cells), tiling.dimension, tiling, labels)

    @property
    def kind(self) -> str:
        return "boxes" if self.tiling is None else "cells"

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, i: int) -> Region:
        return self.elements[i]

    @property
    def element_dimension(self) -> int:
        """Intrinsic dimension n of the disks making up the cover."""
        return max((e.dimension for e in self.elements), default=-1)

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def _check_index(self, i: int) -> None:
        if not isinstance(i, int) or not 0 <= i < len(self.elements):
            raise CoverError(f"element index {i!r} out of range 0..{len(self.elements) - 1}")

    # -- JSON ----------------------------------------------------------------
    def to_json_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"ambient_dimension": self.ambient_dimension}
        if self.tiling is None:
            elems = []
            for e in self.elements:
                if len(e.boxes) == 1:
                    elems.append({"box": e.boxes[0].to_json()})
                else:
                    elems.append({"boxes": [b.to_json() for b in e.boxes]})
            out["elements"] = elems
        else:
            t = self.tiling
            out["tiling"] = t.to_json_dict()
            single = [t.region([c]) for c in t.cells]
            if list(self.elements) != single:
                out["elements"] = [sorted((t.ids[f] for f in e.faces), key=_sort_key)
                                   for e in self.elements]
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> Cover:
        labels = data.get("labels")
        if "tiling" in data:
            t = CellComplexTiling.from_json_dict(data["tiling"])
            if "elements" in data:
                pos = {fid: k for k, fid in enumerate(t.ids)}
                elems = tuple(t.region(pos[f] for f in e) for e in data["elements"])
                return cls(elems, data.get("ambient_dimension", t.dimension), t, labels)
            cover = cls.from_tiling(t, labels=labels)
            if "ambient_dimension" in data:
                cover = cls(cover.elements, data["ambient_dimension"], t, labels)
            return cover
        n = data["ambient_dimension"]
        elems = []
        for e in data["elements"]:
            if "box" in e:
                elems.append(BoxRegion((Box.of(e["box"]),)))
            else:
                elems.append(BoxRegion(tuple(Box.of(b) for b in e["boxes"])))
        for e in elems:
            if e.ambient_dimension != n:
                raise CoverError("element dimension does not match ambient_dimension")
        return cls(tuple(elems), n, None, labels)

    @classmethod
    def from_json(cls, text: str) -> Cover:
        return cls.from_json_dict(json.loads(text))


def _sort_key(x):
    return (isinstance(x, str), x)


def common_intersection(cover: Cover, indices: Iterable[int]) -> tuple[Region, int] | None:
    """Common intersection of the indexed elements and its dimension."""
    idx = sorted(set(indices))
    if not idx:
        raise CoverError("need at least one element index")
    for i in idx:
        cover._check_index(i)
    region = cover.elements[idx[0]]
    for i in idx[1:]:
        region = region.intersect(cover.elements[i])
        if region.is_empty:
            return None
    if region.is_empty:
        return None
    return region, region.dimension


def intersection_graph(cover: Cover) -> DigitalSpace:
    """One vertex per element, an edge whenever two elements meet."""
    n = len(cover)
    edges = []
    if cover.tiling is not None:
        owners: dict[int, list[int]] = {}
        for i, e in enumerate(cover.elements):
            for f in e.faces:
                owners.setdefault(f, []).append(i)
        pairs = set()
        for os in owners.values():
            pairs.update(itertools.combinations(os, 2))
        edges = sorted(pairs)
    else:
        live = [i for i in range(n) if not cover.elements[i].is_empty]
        bbs = {i: cover.elements[i].bounding_box() for i in live}
        live.sort(key=lambda i: bbs[i].intervals[0].lo)
        active: list[int] = []
        for i in live:
            lo = bbs[i].intervals[0].lo
            active = [j for j in active if bbs[j].intervals[0].hi >= lo]
            for j in active:
                if bbs[i].intersect(bbs[j]) is None:
                    continue
                if not cover.elements[i].intersect(cover.elements[j]).is_empty:
                    edges.append((min(i, j), max(i, j)))
            active.append(i)
    return DigitalSpace(n, edges)


# ---------------------------------------------------------------------------
# certificates

class Reason(str, enum.Enum):
    EMPTY_COMMON_INTERSECTION = "empty-common-intersection"
    INTERIORS_OVERLAP = "interiors-overlap"
    SIZE_EXCEEDS_N_PLUS_1 = "size-exceeds-n-plus-1"
    WRONG_INTERSECTION_DIMENSION = "wrong-intersection-dimension"
    DISK_CERTIFICATE_FAILED = "disk-certificate-failed"
    UNION_CERTIFICATE_FAILED = "union-certificate-failed"


@dataclass(frozen=True)
class Witness:
    reason: Reason
    indices: tuple[int, ...]
    # second subcollection, for consistency mismatches
    other: tuple[int, ...] | None = None
    detail: str = ""

    def to_json_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"reason": self.reason.value, "indices": list(self.indices)}
        if self.other is not None:
            d["other"] = list(self.other)
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass(frozen=True)
class CertificateResult:
    passed: bool
    witness: Witness | None = None

    def __post_init__(self):
        if self.passed == (self.witness is not None):
            raise ValueError("a witness is present exactly when the certificate fails")

    def __bool__(self) -> bool:
        return self.passed

    def to_json_dict(self) -> dict[str, Any]:
        return {"passed": self.passed,
                "witness": None if self.witness is None else self.witness.to_json_dict()}


PASS = CertificateResult(True)


def _fail(reason: Reason, indices, other=None, detail: str = "") -> CertificateResult:
    return CertificateResult(False, Witness(reason, tuple(indices),
                                            None if other is None else tuple(other), detail))


class _Meets:
    """Memoized common intersections over index tuples of one cover."""

    def __init__(self, cover: Cover):
        self.cover = cover
        self._memo: dict[tuple[int, ...], Region] = {}

    def __call__(self, idx: tuple[int, ...]) -> Region:
        got = self._memo.get(idx)
        if got is None:
            if len(idx) == 1:
                got = self.cover.elements[idx[0]]
            else:
                got = self(idx[:-1]).intersect(self.cover.elements[idx[-1]])
            self._memo[idx] = got
        return got


def is_locally_centered(cover: Cover, graph: DigitalSpace | None = None,
                        meets: _Meets | None = None) -> CertificateResult:
    """Every clique of the intersection graph must have a common point."""
    g = intersection_graph(cover) if graph is None else graph
    meets = meets or _Meets(cover)
    for clique in enumerate_cliques(g):
        if len(clique) < 3:
            continue
        if meets(tuple(clique)).is_empty:
            return _fail(Reason.EMPTY_COMMON_INTERSECTION, clique)
    return PASS


def lump_certificate(cover: Cover, indices: Iterable[int],
                     meets: _Meets | None = None) -> CertificateResult:
    idx = tuple(sorted(set(indices)))
    if not idx:
        raise CoverError("lump certificate needs a nonempty subcollection")
    for i in idx:
        cover._check_index(i)
    n = cover.element_dimension
    meets = meets or _Meets(cover)
    elems = cover.elements
    for a, b in itertools.combinations(idx, 2):
        if meets((a, b)).dimension >= n:
            return _fail(Reason.INTERIORS_OVERLAP, (a, b))
    if len(idx) > n + 1:
        return _fail(Reason.SIZE_EXCEEDS_N_PLUS_1, idx, detail=f"{len(idx)} > {n + 1}")
    for k in range(1, len(idx) + 1):
        for sub in itertools.combinations(idx, k):
            region = meets(sub)
            if region.is_empty:
                return _fail(Reason.EMPTY_COMMON_INTERSECTION, sub)
            want = n - k + 1
            if region.dimension != want:
                return _fail(Reason.WRONG_INTERSECTION_DIMENSION, sub,
                             detail=f"dimension {region.dimension}, expected {want}")
            why = disk_failure(region, want)
            if why is not None:
                return _fail(Reason.DISK_CERTIFICATE_FAILED, sub, detail=why)
    for k in range(2, len(idx) + 1):
        for sub in itertools.combinations(idx, k):
            union = elems[sub[0]]
            for i in sub[1:]:
                union = union.union(elems[i])
            why = disk_failure(union, n)
            if why is not None:
                return _fail(Reason.UNION_CERTIFICATE_FAILED, sub, detail=why)
    return PASS


def lcl_certificate(cover: Cover, graph: DigitalSpace | None = None) -> CertificateResult:
    """Locally centered, and every maximal clique is a lump collection.

    Checking maximal cliques is enough: every clique sits inside one and
    lump collections are hereditary.
    """
    g = intersection_graph(cover) if graph is None else graph
    meets = _Meets(cover)
    lc = is_locally_centered(cover, g, meets)
    if not lc:
        return lc
    for clique in maximal_cliques(g):
        res = lump_certificate(cover, clique, meets)
        if not res:
            return res
    return PASS


def consistency_check(cover: Cover, graph: DigitalSpace | None = None) -> CertificateResult:
    """All k-cliques must meet in regions of one dimension and disk verdict."""
    g = intersection_graph(cover) if graph is None else graph
    meets = _Meets(cover)
    first: dict[int, tuple[tuple[int, ...], tuple[int, bool]]] = {}
    for clique in enumerate_cliques(g):
        region = meets(tuple(clique))
        if region.is_empty:
            return _fail(Reason.EMPTY_COMMON_INTERSECTION, clique)
        dim = region.dimension
        sig = (dim, disk_failure(region, dim) is None)
        k = len(clique)
        if k not in first:
            first[k] = (tuple(clique), sig)
            continue
        ref, ref_sig = first[k]
        if sig != ref_sig:
            reason = (Reason.WRONG_INTERSECTION_DIMENSION if sig[0] != ref_sig[0]
                      else Reason.DISK_CERTIFICATE_FAILED)
            return _fail(reason, ref, other=clique,
                         detail=f"dimension {ref_sig[0]} vs {sig[0]}")
    return PASS


# ---------------------------------------------------------------------------
# cover surgery

def coarsen(cover: Cover, groups: Sequence[Iterable[int]]) -> Cover:
    """Merge each group of elements into one element (their union)."""
    groups = [sorted(set(g)) for g in groups]
    seen = sorted(i for g in groups for i in g)
    if seen != list(range(len(cover))):
        raise CoverError("groups must partition the element indices")
    if any(not g for g in groups):
        raise CoverError("empty group")
    graph = intersection_graph(cover)
    merged = []
    for g in groups:
        if not is_connected(induced_subgraph(graph, g)):
            raise CoverError(f"group {g} has a disconnected union")
        region = cover.elements[g[0]]
        for i in g[1:]:
            region = region.union(cover.elements[i])
        merged.append(region)
    labels = ["+".join(cover.label(i) for i in g) for g in groups]
    return Cover(tuple(merged), cover.ambient_dimension, cover.tiling, labels)


def restrict_to_element(cover: Cover, i: int) -> Cover:
    """Traces ``D_i ∩ D_k`` of the other elements on element ``i``.

    Empty traces are dropped; labels record the source element of each trace.
    """
    cover._check_index(i)
    base = cover.elements[i]
    traces, labels = [], []
    for k, e in enumerate(cover.elements):
        if k == i:
            continue
        t = base.intersect(e)
        if not t.is_empty:
            traces.append(t)
            labels.append(cover.label(k))
    return Cover(tuple(traces), cover.ambient_dimension, cover.tiling, labels)
