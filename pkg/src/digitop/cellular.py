"""Finite regular cell complexes with GF(2) homology.

Cells are arbitrary hashables carrying a dimension and the list of their
codimension-one faces.  Over GF(2) the boundary of a cell of a regular complex
is simply the sum of its facets, so no orientation data is needed.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping, Sequence
from functools import cached_property

__all__ = ["FiniteComplex", "gf2_rank"]


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) of a matrix whose rows are given as integer bitsets."""
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            lead = r.bit_length() - 1
            p = pivots.get(lead)
            if p is None:
                pivots[lead] = r
                break
            r ^= p
    return len(pivots)


class _DSU:
    def __init__(self, items: Iterable[Hashable]):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def count(self) -> int:
        return len({self.find(x) for x in self.parent})


class FiniteComplex:
    def __init__(self, dims: Mapping[Hashable, int], facets: Mapping[Hashable, Sequence[Hashable]]):
        self.dims = dict(dims)
        self.facets = {c: tuple(facets.get(c, ())) for c in self.dims}

    def __len__(self) -> int:
        return len(self.dims)

    @property
    def dimension(self) -> int:
        return max(self.dims.values(), default=-1)

    def cells_of_dim(self, k: int) -> list:
        return [c for c, d in self.dims.items() if d == k]

    def f_vector(self) -> list[int]:
        return [len(self.cells_of_dim(k)) for k in range(self.dimension + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.f_vector()))

    @cached_property
    def _ranks(self) -> list[int]:
        # ranks[k] = rank of the boundary map from k-cells to (k-1)-cells
        top = self.dimension
        index: list[dict] = []
        for k in range(top + 1):
            index.append({c: i for i, c in enumerate(self.cells_of_dim(k))})
        ranks = [0] * (top + 2)
        for k in range(1, top + 1):
            lower = index[k - 1]
            rows = []
            for c in index[k]:
                r = 0
                for f in self.facets[c]:
                    r ^= 1 << lower[f]
                rows.append(r)
            ranks[k] = gf2_rank(rows)
        return ranks

    def betti_numbers(self, max_dim: int | None = None) -> list[int]:
        top = self.dimension
        hi = top if max_dim is None else max_dim
        ranks = self._ranks
        out = []
        for k in range(hi + 1):
            if k > top:
                out.append(0)
                continue
            nk = len(self.cells_of_dim(k))
            out.append(nk - ranks[k] - ranks[k + 1])
        return out

    def component_count(self) -> int:
        dsu = _DSU(self.dims)
        for c, fs in self.facets.items():
            for f in fs:
                dsu.union(c, f)
        return dsu.count() if self.dims else 0

    @cached_property
    def closures(self) -> dict:
        memo: dict = {}

        def close(c):
            got = memo.get(c)
            if got is None:
                acc = {c}
                for f in self.facets[c]:
                    acc |= close(f)
                got = memo[c] = frozenset(acc)
            return got

        for c in sorted(self.dims, key=self.dims.__getitem__):
            close(c)
        return memo

    def disk_failure(self, k: int) -> str | None:
        """Why this complex is not accepted as a k-disk, or None if accepted.

        Accepted means: nonempty, dimension k, pure, every (k-1)-cell on at
        most two k-cells, no pinch points (the k-cells around any lower cell
        are connected through (k-1)-cells), connected and GF(2)-acyclic.
        """
        if not self.dims:
            return "empty"
        if self.dimension != k:
            return "wrong-dimension"
        closures = self.closures
        tops = self.cells_of_dim(k)
        around: dict = {c: [] for c in self.dims}
        for t in tops:
            for c in closures[t]:
                around[c].append(t)
        if any(not ts for ts in around.values()):
            return "not-pure"
        if k >= 1:
            links: dict = {c: [] for c in self.dims}
            for e in self.cells_of_dim(k - 1):
                ts = around[e]
                if len(ts) > 2:
                    return "branching"
                if len(ts) == 2:
                    for c in closures[e]:
                        if c != e:
                            links[c].append(ts)
            for c, d in self.dims.items():
                if d > k - 2 or len(around[c]) < 2:
                    continue
                dsu = _DSU(around[c])
                for a, b in links[c]:
                    dsu.union(a, b)
                if dsu.count() != 1:
                    return "pinched"
        betti = self.betti_numbers()
        if betti[0] != 1:
            return "not-connected"
        if any(betti[1:]):
            return "not-acyclic"
        return None
