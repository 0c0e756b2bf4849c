"""Euler characteristic and GF(2) homology of clique complexes."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .cellular import gf2_rank
from .graph_core import DigitalSpace, clique_counts, connected_components, enumerate_cliques, _bits
from .normality import NormalityChecker, infer_dimension

__all__ = [
    "CliqueComplex",
    "InvariantReport",
    "betti_numbers_gf2",
    "clique_complex",
    "dominated_core",
    "euler_characteristic",
    "invariant_report",
]


@dataclass(frozen=True)
class CliqueComplex:
    """Cliques grouped by size; ``simplices[k-1]`` holds the k-cliques."""

    simplices: tuple[tuple[tuple, ...], ...]

    @property
    def counts(self) -> list[int]:
        return [len(s) for s in self.simplices]

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1


def clique_complex(g: DigitalSpace, max_size: int | None = None) -> CliqueComplex:
    by_size: list[list[tuple]] = []
    for c in enumerate_cliques(g, max_size):
        while len(by_size) < len(c):
            by_size.append([])
        by_size[len(c) - 1].append(c)
    return CliqueComplex(tuple(tuple(s) for s in by_size))


def euler_characteristic(g: DigitalSpace) -> int:
    """Alternating clique count c_1 - c_2 + c_3 - ..."""
    return sum((-1) ** k * c for k, c in enumerate(clique_counts(g)))


def _clique_positions(g: DigitalSpace, max_size: int) -> list[list[tuple[int, ...]]]:
    pos_graph = g.relabeled()
    by_size: list[list[tuple[int, ...]]] = [[] for _ in range(max_size)]
    for c in enumerate_cliques(pos_graph, max_size):
        by_size[len(c) - 1].append(c)
    return by_size


def betti_numbers_gf2(g: DigitalSpace, max_dim: int, simplify: bool = False) -> list[int]:
    """Betti numbers b_0..b_max_dim of the clique complex over GF(2).

    ``b_k = dim ker d_k - rank d_(k+1)``.  With ``simplify=True`` dominated
    vertices are stripped first (see :func:`dominated_core`), which keeps the
    homotopy type and shrinks grid-like graphs drastically.
    """
    if max_dim < 0:
        raise ValueError("max_dim must be non-negative")
    if simplify:
        g = dominated_core(g)
    cliques = _clique_positions(g, max_dim + 2)
    index = [{c: i for i, c in enumerate(level)} for level in cliques]
    ranks = [0] * (max_dim + 3)
    for k in range(1, max_dim + 2):
        lower = index[k - 1]
        rows = []
        for c in cliques[k]:
            r = 0
            for drop in range(len(c)):
                r |= 1 << lower[c[:drop] + c[drop + 1:]]
            rows.append(r)
        ranks[k] = gf2_rank(rows)
    return [len(cliques[k]) - ranks[k] - ranks[k + 1] for k in range(max_dim + 1)]


def dominated_core(g: DigitalSpace) -> DigitalSpace:
    """Repeatedly delete a vertex v whose closed neighbourhood lies inside
    another vertex's closed neighbourhood.  Such a v has a cone as its rim,
    so the clique complex keeps its homotopy type."""
    rows = list(g.rows)
    alive = (1 << len(rows)) - 1
    changed = True
    while changed:
        changed = False
        for v in list(_bits(alive)):
            nv = (rows[v] & alive) | 1 << v
            for u in _bits(rows[v] & alive):
                nu = (rows[u] & alive) | 1 << u
                if nv & ~nu == 0:
                    alive &= ~(1 << v)
                    changed = True
                    break
    keep = list(_bits(alive))
    return _subgraph_positions(g, keep)


def _subgraph_positions(g: DigitalSpace, keep: list[int]) -> DigitalSpace:
    new = {p: k for k, p in enumerate(keep)}
    edges = [(new[i], new[j]) for i, j in g.edge_positions if i in new and j in new]
    return DigitalSpace(len(keep), edges)


@dataclass(frozen=True)
class InvariantReport:
    euler: int
    betti_gf2: tuple[int, ...]
    components: int
    normal_dimension: int | None
    vertex_count: int
    edge_count: int

    def __post_init__(self):
        ep = sum((-1) ** k * b for k, b in enumerate(self.betti_gf2))
        if ep != self.euler:
            raise AssertionError(f"Euler-Poincare mismatch: euler {self.euler}, betti {self.betti_gf2}")

    def key(self) -> tuple:
        """The data compared when looking for stabilization."""
        return (self.euler, self.betti_gf2, self.components)

    def to_json_dict(self) -> dict:
        return {"euler": self.euler, "betti_gf2": list(self.betti_gf2),
                "components": self.components, "normal_dimension": self.normal_dimension,
                "vertices": self.vertex_count, "edges": self.edge_count}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, d: dict) -> InvariantReport:
        return cls(d["euler"], tuple(d["betti_gf2"]), d["components"], d["normal_dimension"],
                   d["vertices"], d["edges"])


def invariant_report(g: DigitalSpace, max_dim: int | None = None, n_max: int = 8,
                     check_normality: bool = True,
                     checker: NormalityChecker | None = None) -> InvariantReport:
    """Euler characteristic, Betti numbers, components and normal dimension.

    Betti numbers are listed up to the last nonzero one, or padded with
    zeros to ``max_dim + 1`` entries when ``max_dim`` is given.

    Betti numbers run through the dominated core; the Euler characteristic is
    counted on ``g`` itself, so the Euler-Poincare check compares two
    independent computations.
    """
    euler = euler_characteristic(g)
    core = dominated_core(g)
    top = len(clique_counts(core)) - 1
    betti = betti_numbers_gf2(core, top) if top >= 0 else []
    while betti and betti[-1] == 0:
        betti.pop()
    if max_dim is not None:
        betti += [0] * (max_dim + 1 - len(betti))
    normal = infer_dimension(g, n_max, checker) if check_normality else None
    return InvariantReport(euler, tuple(betti), len(connected_components(g)), normal,
                           len(g), g.edge_count)
