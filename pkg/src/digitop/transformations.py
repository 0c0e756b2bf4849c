"""Contractible graph transformations.

The four moves are the usual ones for digital spaces: a point may be deleted
or added when its rim is contractible, and an edge may be deleted or added
when the joint rim of its endpoints is contractible.  A graph is contractible
when some sequence of such point deletions takes it down to a single vertex.

Vertices are addressed by position (``0..n-1``).  Deleting a point shifts the
later positions down by one; an added point always receives position ``n``.
"""

from __future__ import annotations

import enum
import json
import threading
from collections import deque
from dataclasses import dataclass
from collections.abc import Iterable, Sequence

from .graph_core import (CapacityError, DigitalSpace, GraphError, _bits, enumerate_cliques,
                         induced_subgraph, is_connected, is_isomorphic, joint_rim, refinement_certificate, rim)
from .invariants import betti_numbers_gf2, euler_characteristic

__all__ = [
    "IllegalMoveError",
    "Move",
    "MoveKind",
    "SearchResult",
    "apply_move",
    "enumerate_moves",
    "equivalent_by_moves",
    "inverse_move",
    "is_contractible",
    "moves_from_json",
    "moves_to_json",
    "reduce",
]

DEFAULT_CONTRACTIBLE_CAP = 20


class IllegalMoveError(GraphError):
    pass


class MoveKind(str, enum.Enum):
    DELETE_POINT = "delete-point"
    ADD_POINT = "add-point"
    DELETE_EDGE = "delete-edge"
    ADD_EDGE = "add-edge"


@dataclass(frozen=True)
class Move:
    kind: MoveKind
    point: int | None = None
    edge: tuple[int, int] | None = None
    attach_set: frozenset[int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", MoveKind(self.kind))
        if self.edge is not None:
            object.__setattr__(self, "edge", tuple(sorted(self.edge)))
        if self.attach_set is not None:
            object.__setattr__(self, "attach_set", frozenset(self.attach_set))
        need = {MoveKind.DELETE_POINT: "point", MoveKind.ADD_POINT: "attach_set",
                MoveKind.DELETE_EDGE: "edge", MoveKind.ADD_EDGE: "edge"}[self.kind]
        if getattr(self, need) is None:
            raise ValueError(f"{self.kind.value} move needs '{need}'")

    def to_json_dict(self) -> dict:
        d: dict = {"kind": self.kind.value}
        if self.point is not None:
            d["point"] = self.point
        if self.edge is not None:
            d["edge"] = list(self.edge)
        if self.attach_set is not None:
            d["attach_set"] = sorted(self.attach_set)
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> Move:
        return cls(d["kind"], d.get("point"),
                   tuple(d["edge"]) if "edge" in d else None,
                   frozenset(d["attach_set"]) if "attach_set" in d else None)


def moves_to_json(moves: Sequence[Move]) -> str:
    return json.dumps([m.to_json_dict() for m in moves])


def moves_from_json(text: str) -> list[Move]:
    return [Move.from_json_dict(d) for d in json.loads(text)]


# ---------------------------------------------------------------------------
# contractibility

class _ContractibilityMemo:
    def __init__(self):
        self._buckets: dict[tuple, list[tuple[DigitalSpace, bool]]] = {}
        self._lock = threading.Lock()

    def get(self, g: DigitalSpace) -> bool | None:
        key = refinement_certificate(g)
        with self._lock:
            bucket = list(self._buckets.get(key, ()))
        for h, verdict in bucket:
            if is_isomorphic(g, h) is not None:
                return verdict
        return None

    def put(self, g: DigitalSpace, verdict: bool) -> None:
        with self._lock:
            self._buckets.setdefault(refinement_certificate(g), []).append((g, verdict))


_memo = _ContractibilityMemo()


def _delete_position(g: DigitalSpace, p: int) -> DigitalSpace:
    n = len(g)
    keep = [q for q in range(n) if q != p]
    new = {q: k for k, q in enumerate(keep)}
    return DigitalSpace(n - 1, [(new[i], new[j]) for i, j in g.edge_positions if i != p and j != p])


def is_contractible(g: DigitalSpace, cap: int = DEFAULT_CONTRACTIBLE_CAP) -> bool:
    """True iff point deletions with contractible rims reduce ``g`` to K_1."""
    if len(g) > cap:
        raise CapacityError(f"contractibility is only decided up to {cap} vertices (got {len(g)})")
    g = g.relabeled()
    n = len(g)
    if n == 0:
        return False
    if n == 1:
        return True
    full = (1 << n) - 1
    if any(r | 1 << p == full for p, r in enumerate(g.rows)):
        return True  # a cone
    if not is_connected(g):
        return False
    cached = _memo.get(g)
    if cached is not None:
        return cached
    verdict = False
    for p in range(n):
        if is_contractible(rim(g, p), cap) and is_contractible(_delete_position(g, p), cap):
            verdict = True
            break
    _memo.put(g, verdict)
    return verdict


# ---------------------------------------------------------------------------
# moves

def _is_legal(g: DigitalSpace, m: Move, cap: int) -> bool:
    n = len(g)
    if m.kind is MoveKind.DELETE_POINT:
        return 0 <= m.point < n and n > 1 and is_contractible(rim(g, m.point), cap)
    if m.kind is MoveKind.ADD_POINT:
        s = m.attach_set
        if not s or not all(0 <= v < n for v in s):
            return False
        return is_contractible(induced_subgraph(g, s), cap)
    u, v = m.edge
    if not (0 <= u < n and 0 <= v < n) or u == v:
        return False
    present = g.adjacent(u, v)
    if (m.kind is MoveKind.DELETE_EDGE) != present:
        return False
    return is_contractible(joint_rim(g, [u, v]), cap)


def enumerate_moves(g: DigitalSpace, attach_candidates: Iterable[Iterable[int]] = (),
                    include_add_edges: bool = False,
                    cap: int = DEFAULT_CONTRACTIBLE_CAP) -> list[Move]:
    """Legal delete moves of ``g``, plus add moves for the supplied attach sets
    (and for non-adjacent pairs when ``include_add_edges``)."""
    g = g.relabeled()
    n = len(g)
    moves = [Move(MoveKind.DELETE_POINT, point=p) for p in range(n)
             if n > 1 and is_contractible(rim(g, p), cap)]
    for i, j in g.edge_positions:
        if is_contractible(joint_rim(g, [i, j]), cap):
            moves.append(Move(MoveKind.DELETE_EDGE, edge=(i, j)))
    if include_add_edges:
        for i in range(n):
            for j in range(i + 1, n):
                if not g.rows[i] >> j & 1 and is_contractible(joint_rim(g, [i, j]), cap):
                    moves.append(Move(MoveKind.ADD_EDGE, edge=(i, j)))
    seen = set()
    for s in attach_candidates:
        m = Move(MoveKind.ADD_POINT, attach_set=frozenset(s))
        if m.attach_set not in seen and _is_legal(g, m, cap):
            seen.add(m.attach_set)
            moves.append(m)
    return moves


def apply_move(g: DigitalSpace, m: Move, cap: int = DEFAULT_CONTRACTIBLE_CAP) -> DigitalSpace:
    g = g.relabeled()
    if not _is_legal(g, m, cap):
        raise IllegalMoveError(f"{m.kind.value} move {m.to_json_dict()} is not legal here")
    n = len(g)
    if m.kind is MoveKind.DELETE_POINT:
        return _delete_position(g, m.point)
    if m.kind is MoveKind.ADD_POINT:
        return DigitalSpace(n + 1, g.edge_positions + [(v, n) for v in sorted(m.attach_set)])
    u, v = m.edge
    if m.kind is MoveKind.DELETE_EDGE:
        return DigitalSpace(n, [e for e in g.edge_positions if e != (u, v)])
    return DigitalSpace(n, g.edge_positions + [(u, v)])


def inverse_move(g: DigitalSpace, m: Move) -> Move:
    """The move undoing ``m`` once ``m`` has been applied to ``g``."""
    if m.kind is MoveKind.DELETE_POINT:
        # re-adding appends at the end; positions shift accordingly
        p = m.point
        attach = frozenset(q - (q > p) for q in _bits(g.relabeled().rows[p]))
        return Move(MoveKind.ADD_POINT, attach_set=attach)
    if m.kind is MoveKind.ADD_POINT:
        return Move(MoveKind.DELETE_POINT, point=len(g))
    if m.kind is MoveKind.DELETE_EDGE:
        return Move(MoveKind.ADD_EDGE, edge=m.edge)
    return Move(MoveKind.DELETE_EDGE, edge=m.edge)


def reduce(g: DigitalSpace, cap: int = DEFAULT_CONTRACTIBLE_CAP) -> tuple[DigitalSpace, list[Move]]:
    """Greedy normal form: apply the first legal point deletion, else the
    first legal edge deletion, until neither exists."""
    g = g.relabeled()
    applied: list[Move] = []
    while True:
        n = len(g)
        move = None
        for p in range(n):
            if n > 1 and is_contractible(rim(g, p), cap):
                move = Move(MoveKind.DELETE_POINT, point=p)
                break
        if move is None:
            for i, j in g.edge_positions:
                if is_contractible(joint_rim(g, [i, j]), cap):
                    move = Move(MoveKind.DELETE_EDGE, edge=(i, j))
                    break
        if move is None:
            return g, applied
        g = apply_move(g, move, cap)
        applied.append(move)


# ---------------------------------------------------------------------------
# bounded equivalence search

@dataclass(frozen=True)
class SearchResult:
    moves: list[Move] | None
    reason: str

    @property
    def found(self) -> bool:
        return self.moves is not None


def _neighbours(g: DigitalSpace, cap: int, max_attach: int) -> list[tuple[Move, DigitalSpace]]:
    attach = enumerate_cliques(g, max_attach)
    out = []
    for m in enumerate_moves(g, attach, include_add_edges=True, cap=cap):
        out.append((m, apply_move(g, m, cap)))
    return out


def _undo(h: DigitalSpace, path: Sequence[Move], start: DigitalSpace,
          sigma: dict[int, int], cap: int) -> list[Move]:
    """Moves taking ``start`` back to a copy of ``h``.

    ``path`` leads from ``h`` to a graph that ``sigma`` maps onto ``start``
    (sigma: label there -> label in start).  The moves are undone in reverse
    order while sigma tracks where each vertex of the intermediate state sits
    in the graph being rebuilt.
    """
    states = [h]
    for m in path:
        states.append(apply_move(states[-1], m, cap))
    cur, out = start, []
    for m, before in zip(reversed(path), reversed(states[:-1])):
        nb = len(before)
        if m.kind is MoveKind.DELETE_POINT:
            p = m.point
            attach = frozenset(sigma[q - (q > p)] for q in _bits(before.rows[p]))
            t = Move(MoveKind.ADD_POINT, attach_set=attach)
            new = len(cur)
            sigma = {q: new if q == p else sigma[q - (q > p)] for q in range(nb)}
        elif m.kind is MoveKind.ADD_POINT:
            c = sigma[nb]
            t = Move(MoveKind.DELETE_POINT, point=c)
            sigma = {q: sigma[q] - (sigma[q] > c) for q in range(nb)}
        else:
            kind = MoveKind.DELETE_EDGE if m.kind is MoveKind.ADD_EDGE else MoveKind.ADD_EDGE
            t = Move(kind, edge=(sigma[m.edge[0]], sigma[m.edge[1]]))
        cur = apply_move(cur, t, cap)
        out.append(t)
    return out


def equivalent_by_moves(g: DigitalSpace, h: DigitalSpace, budget: int,
                        cap: int = DEFAULT_CONTRACTIBLE_CAP,
                        max_attach: int = 3) -> SearchResult:
    """Look for at most ``budget`` moves turning ``g`` into a copy of ``h``.

    Both sides are expanded breadth-first (forward from ``g``, backward from
    ``h`` using inverse moves) and the layers are matched up to isomorphism.
    Graphs with different Euler characteristic or Betti numbers are rejected
    up front, since no move changes them.  Failure to find a sequence within
    the budget proves nothing.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    g, h = g.relabeled(), h.relabeled()
    eg, eh = euler_characteristic(g), euler_characteristic(h)
    if eg != eh:
        return SearchResult(None, f"euler {eg} != {eh}")
    top = max(len(g), len(h))
    bg, bh = betti_numbers_gf2(g, top, simplify=True), betti_numbers_gf2(h, top, simplify=True)
    if bg != bh:
        return SearchResult(None, f"betti_gf2 {bg} != {bh}")
    if is_isomorphic(g, h) is not None:
        return SearchResult([], "isomorphic")

    # layer -> list of (graph, path); forward paths start at g, backward paths start at h
    fwd: dict[tuple, list[tuple[DigitalSpace, list[Move]]]] = {}
    bwd: dict[tuple, list[tuple[DigitalSpace, list[Move]]]] = {}
    fwd.setdefault(refinement_certificate(g), []).append((g, []))
    bwd.setdefault(refinement_certificate(h), []).append((h, []))
    fq = deque([(g, [])])
    bq = deque([(h, [])])
    f_depth = b_depth = 0

    def meet(x: DigitalSpace, path: list[Move], other: dict, forward: bool):
        for y, ypath in other.get(refinement_certificate(x), ()):
            if forward:
                fpath, fend, bpath, bend = path, x, ypath, y
            else:
                fpath, fend, bpath, bend = ypath, y, path, x
            phi = is_isomorphic(fend, bend)
            if phi is None:
                continue
            return fpath + _undo(h, bpath, fend, {w: v for v, w in phi.items()}, cap)
        return None

    while f_depth + b_depth < budget:
        expand_forward = f_depth <= b_depth
        queue, seen, other, depth = ((fq, fwd, bwd, f_depth) if expand_forward
                                     else (bq, bwd, fwd, b_depth))
        nxt = deque()
        while queue:
            x, path = queue.popleft()
            for m, y in _neighbours(x, cap, max_attach):
                key = refinement_certificate(y)
                if any(is_isomorphic(y, z) is not None for z, _ in seen.get(key, ())):
                    continue
                ypath = path + [m]
                seen.setdefault(key, []).append((y, ypath))
                hit = meet(y, ypath, other, expand_forward)
                if hit is not None:
                    return SearchResult(hit, "found")
                nxt.append((y, ypath))
        if expand_forward:
            fq, f_depth = nxt, f_depth + 1
        else:
            bq, b_depth = nxt, b_depth + 1
        if not nxt:
            break
    return SearchResult(None, f"not found within budget {budget}")
