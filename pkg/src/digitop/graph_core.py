"""Finite simple graphs with rim/ball vocabulary.

A :class:`DigitalSpace` stores its vertices in a fixed order and keeps one
adjacency bitset per vertex position, so adjacency tests and common-neighbour
queries are integer operations.  Vertex identifiers are opaque hashables;
most callers use the dense integers ``0..n-1``.
"""

from __future__ import annotations

import json
from collections.abc import Hashable, Iterable, Iterator, Sequence
from typing import Any

__all__ = [
    "CapacityError",
    "DigitalSpace",
    "GraphError",
    "UnknownVertexError",
    "ball",
    "clique_counts",
    "complete_graph",
    "complete_multipartite_graph",
    "connected_components",
    "cycle_graph",
    "enumerate_cliques",
    "induced_subgraph",
    "is_isomorphic",
    "joint_rim",
    "maximal_cliques",
    "path_graph",
    "refinement_certificate",
    "rim",
]

DEFAULT_ISOMORPHISM_CAP = 64


class GraphError(ValueError):
    pass


class UnknownVertexError(GraphError, KeyError):
    def __init__(self, vertex: Hashable):
        super().__init__(f"vertex {vertex!r} is not in the graph")
        self.vertex = vertex

    def __str__(self) -> str:
        return self.args[0]


class CapacityError(RuntimeError):
    """Raised when an exponential routine is asked to exceed its size cap."""


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class DigitalSpace:
    """Immutable simple undirected graph.

    ``DigitalSpace(4, [(0, 1), (1, 2)])`` builds a graph on ``0..3``; any
    sequence of distinct hashables may be given instead of a count.
    """

    __slots__ = ("_vertices", "_index", "_adj", "_hash")

    def __init__(self, vertices: int | Iterable[Hashable] = 0,
                 edges: Iterable[tuple[Hashable, Hashable]] = ()):
        if isinstance(vertices, int):
            verts = tuple(range(vertices))
        else:
            verts = tuple(vertices)
        index = {v: i for i, v in enumerate(verts)}
        if len(index) != len(verts):
            raise GraphError("duplicate vertex identifiers")
        adj = [0] * len(verts)
        for u, v in edges:
            if u not in index:
                raise UnknownVertexError(u)
            if v not in index:
                raise UnknownVertexError(v)
            i, j = index[u], index[v]
            if i == j:
                raise GraphError(f"self-loop at {u!r}")
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        self._vertices = verts
        self._index = index
        self._adj = tuple(adj)
        self._hash = None

    @classmethod
    def _from_rows(cls, vertices: tuple, rows: Sequence[int]) -> DigitalSpace:
        g = cls.__new__(cls)
        g._vertices = vertices
        g._index = {v: i for i, v in enumerate(vertices)}
        g._adj = tuple(rows)
        g._hash = None
        return g

    # -- basic accessors -------------------------------------------------
    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def rows(self) -> tuple[int, ...]:
        """Adjacency bitsets indexed by vertex position."""
        return self._adj

    def __len__(self) -> int:
        return len(self._vertices)

    def __contains__(self, v: Hashable) -> bool:
        return v in self._index

    def position(self, v: Hashable) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise UnknownVertexError(v) from None
        except TypeError:
            raise UnknownVertexError(v) from None

    @property
    def edge_positions(self) -> list[tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self._adj)
                for j in _bits(row >> (i + 1) << (i + 1))]

    @property
    def edges(self) -> list[tuple[Hashable, Hashable]]:
        vs = self._vertices
        return [(vs[i], vs[j]) for i, j in self.edge_positions]

    @property
    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self._adj) // 2

    def adjacent(self, u: Hashable, v: Hashable) -> bool:
        return bool(self._adj[self.position(u)] >> self.position(v) & 1)

    def neighbors(self, v: Hashable) -> list[Hashable]:
        return [self._vertices[j] for j in _bits(self._adj[self.position(v)])]

    def degree(self, v: Hashable) -> int:
        return self._adj[self.position(v)].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self._adj]

    def mask(self, vs: Iterable[Hashable]) -> int:
        m = 0
        for v in vs:
            m |= 1 << self.position(v)
        return m

    def relabeled(self) -> DigitalSpace:
        """Same graph on the dense identifiers ``0..n-1``."""
        return DigitalSpace._from_rows(tuple(range(len(self))), self._adj)

    # -- equality ----------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DigitalSpace):
            return NotImplemented
        if set(self._vertices) != set(other._vertices):
            return False
        return set(map(frozenset, self.edges)) == set(map(frozenset, other.edges))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self._vertices),
                               frozenset(map(frozenset, self.edges))))
        return self._hash

    def __repr__(self) -> str:
        return f"DigitalSpace(n={len(self)}, m={self.edge_count})"

    # -- serialization -----------------------------------------------------
    def to_json_dict(self) -> dict[str, Any]:
        return {"vertices": len(self), "edges": [list(e) for e in sorted(self.edge_positions)]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> DigitalSpace:
        n = data["vertices"]
        if not isinstance(n, int) or n < 0:
            raise GraphError("'vertices' must be a non-negative integer")
        edges = []
        for e in data.get("edges", []):
            i, j = e
            if not (0 <= i < n and 0 <= j < n):
                raise GraphError(f"edge {e} has an endpoint outside 0..{n - 1}")
            edges.append((i, j))
        return cls(n, edges)

    @classmethod
    def from_json(cls, text: str) -> DigitalSpace:
        return cls.from_json_dict(json.loads(text))

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        lines += [f'  {i} [label="{i}"];' for i in range(len(self))]
        lines += [f"  {i} -- {j};" for i, j in sorted(self.edge_positions)]
        lines.append("}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# standard graphs

def complete_graph(n: int) -> DigitalSpace:
    return DigitalSpace(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n: int) -> DigitalSpace:
    if n < 3:
        raise GraphError("a simple cycle needs at least 3 vertices")
    return DigitalSpace(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> DigitalSpace:
    return DigitalSpace(n, [(i, i + 1) for i in range(n - 1)])


def complete_multipartite_graph(*sizes: int) -> DigitalSpace:
    part = [k for k, s in enumerate(sizes) for _ in range(s)]
    n = len(part)
    return DigitalSpace(n, [(i, j) for i in range(n) for j in range(i + 1, n)
                            if part[i] != part[j]])


# ---------------------------------------------------------------------------
# rims and induced subgraphs

def _induced_by_mask(g: DigitalSpace, mask: int) -> DigitalSpace:
    pos = list(_bits(mask))
    new_index = {p: k for k, p in enumerate(pos)}
    rows = []
    for p in pos:
        r = 0
        for q in _bits(g.rows[p] & mask):
            r |= 1 << new_index[q]
        rows.append(r)
    return DigitalSpace._from_rows(tuple(g.vertices[p] for p in pos), rows)


def induced_subgraph(g: DigitalSpace, vs: Iterable[Hashable]) -> DigitalSpace:
    """Subgraph on ``vs`` keeping every edge of ``g`` between them."""
    return _induced_by_mask(g, g.mask(vs))


def rim(g: DigitalSpace, v: Hashable) -> DigitalSpace:
    return _induced_by_mask(g, g.rows[g.position(v)])


def ball(g: DigitalSpace, v: Hashable) -> DigitalSpace:
    p = g.position(v)
    return _induced_by_mask(g, g.rows[p] | 1 << p)


def joint_rim(g: DigitalSpace, vs: Sequence[Hashable]) -> DigitalSpace:
    """Induced subgraph on the common neighbours of all of ``vs``."""
    vs = list(vs)
    if not vs:
        raise GraphError("joint rim needs at least one vertex")
    if len(set(vs)) != len(vs):
        raise GraphError(f"duplicate vertices in {vs!r}")
    mask = -1
    for v in vs:
        mask &= g.rows[g.position(v)]
    return _induced_by_mask(g, mask & ((1 << len(g)) - 1))


def connected_components(g: DigitalSpace) -> list[set[Hashable]]:
    """Vertex sets of the components, ordered by their first vertex position."""
    remaining = (1 << len(g)) - 1
    out = []
    while remaining:
        seed = remaining & -remaining
        comp = frontier = seed
        while frontier:
            nxt = 0
            for p in _bits(frontier):
                nxt |= g.rows[p]
            frontier = nxt & ~comp
            comp |= frontier
        remaining &= ~comp
        out.append({g.vertices[p] for p in _bits(comp)})
    return out


def is_connected(g: DigitalSpace) -> bool:
    return len(connected_components(g)) == 1


# ---------------------------------------------------------------------------
# cliques

def _clique_masks(g: DigitalSpace, max_size: int | None) -> Iterator[tuple[int, ...]]:
    # ordered extension: each clique is grown only by higher positions
    n = len(g)
    limit = n if max_size is None else max_size
    rows = g.rows
    stack: list[tuple[tuple[int, ...], int]] = [((p,), rows[p] >> (p + 1) << (p + 1))
                                                for p in reversed(range(n))]
    while stack:
        clique, cands = stack.pop()
        yield clique
        if len(clique) < limit:
            for q in reversed(list(_bits(cands))):
                stack.append((clique + (q,), cands & rows[q] >> (q + 1) << (q + 1)))


def enumerate_cliques(g: DigitalSpace, max_size: int | None = None) -> list[tuple]:
    """All nonempty complete vertex subsets, sorted by (size, positions)."""
    if max_size is not None and max_size < 1:
        raise GraphError("max_size must be positive")
    found = sorted(_clique_masks(g, max_size), key=lambda c: (len(c), c))
    vs = g.vertices
    return [tuple(vs[p] for p in c) for c in found]


def clique_counts(g: DigitalSpace, max_size: int | None = None) -> list[int]:
    """``counts[k-1]`` is the number of k-cliques."""
    n = len(g)
    limit = n if max_size is None else max_size
    counts = [0] * (limit + 1)
    rows = g.rows
    high = [rows[p] >> (p + 1) << (p + 1) for p in range(n)]

    def grow(size: int, cands: int) -> None:
        counts[size] += 1
        if size == limit:
            return
        while cands:
            low = cands & -cands
            q = low.bit_length() - 1
            cands ^= low
            grow(size + 1, cands & high[q])

    for p in range(n):
        grow(1, high[p])
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    return counts[1:]


def maximal_cliques(g: DigitalSpace) -> list[tuple]:
    """Maximal cliques by Bron-Kerbosch with pivoting, sorted deterministically."""
    rows = g.rows
    out: list[tuple[int, ...]] = []

    def expand(r: tuple[int, ...], p: int, x: int) -> None:
        if not p and not x:
            out.append(r)
            return
        pivot = max(_bits(p | x), key=lambda u: (rows[u] & p).bit_count())
        for v in list(_bits(p & ~rows[pivot])):
            expand(r + (v,), p & rows[v], x & rows[v])
            p &= ~(1 << v)
            x |= 1 << v

    if len(g):
        expand((), (1 << len(g)) - 1, 0)
    vs = g.vertices
    return [tuple(vs[q] for q in c)
            for c in sorted((tuple(sorted(c)) for c in out), key=lambda c: (len(c), c))]


# ---------------------------------------------------------------------------
# isomorphism

def _refine(g: DigitalSpace, colors: list[int]) -> tuple[list[int], list]:
    """Colour refinement; colours are renamed by sorted signature so that
    isomorphic inputs yield identical colourings up to the bijection."""
    history = []
    n = len(g)
    rows = g.rows
    while True:
        sigs = [(colors[v], tuple(sorted(colors[u] for u in _bits(rows[v])))) for v in range(n)]
        table = {s: k for k, s in enumerate(sorted(set(sigs)))}
        new = [table[s] for s in sigs]
        history.append(tuple(sorted(table)))
        if len(table) == len(set(colors)):
            return new, history
        colors = new


def refinement_certificate(g: DigitalSpace) -> tuple:
    """Isomorphism-invariant fingerprint (equal for isomorphic graphs, but
    not necessarily distinct for non-isomorphic ones)."""
    colors, history = _refine(g, g.degrees())
    return (len(g), g.edge_count, tuple(history), tuple(sorted(colors)))


def is_isomorphic(g: DigitalSpace, h: DigitalSpace,
                  cap: int = DEFAULT_ISOMORPHISM_CAP) -> dict | None:
    """Return a vertex bijection ``g -> h`` preserving adjacency, or None."""
    if max(len(g), len(h)) > cap:
        raise CapacityError(f"isomorphism test limited to {cap} vertices")
    n = len(g)
    if n != len(h) or g.edge_count != h.edge_count:
        return None
    if sorted(g.degrees()) != sorted(h.degrees()):
        return None
    # refine both graphs against a shared colour table
    both = DigitalSpace._from_rows(
        tuple(range(2 * n)), list(g.rows) + [r << n for r in h.rows])
    colors, _ = _refine(both, both.degrees())
    cg, ch = colors[:n], colors[n:]
    if sorted(cg) != sorted(ch):
        return None
    order = sorted(range(n), key=lambda v: (sum(c == cg[v] for c in cg), -g.rows[v].bit_count(), v))
    gr, hr = g.rows, h.rows
    mapping: dict[int, int] = {}
    used = 0

    def extend(k: int) -> bool:
        nonlocal used
        if k == n:
            return True
        v = order[k]
        for w in range(n):
            if used >> w & 1 or ch[w] != cg[v]:
                continue
            ok = True
            for u, x in mapping.items():
                if (gr[v] >> u & 1) != (hr[w] >> x & 1):
                    ok = False
                    break
            if not ok:
                continue
            mapping[v] = w
            used |= 1 << w
            if extend(k + 1):
                return True
            del mapping[v]
            used &= ~(1 << w)
        return False

    if not extend(0):
        return None
    return {g.vertices[v]: h.vertices[w] for v, w in mapping.items()}
