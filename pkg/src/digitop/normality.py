"""Recursive test for normal digital n-dimensional spaces.

A graph is a normal 0-space when it is exactly two non-adjacent points; for
n > 0 it must be nonempty, connected, and every rim must be a normal
(n-1)-space.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass
from collections.abc import Hashable

from .graph_core import DigitalSpace, is_connected, is_isomorphic, refinement_certificate, rim

__all__ = ["FailureReason", "NormalityChecker", "NormalityVerdict", "infer_dimension",
           "is_normal_space"]

DEFAULT_N_MAX = 8


class FailureReason(str, enum.Enum):
    NOT_CONNECTED = "not-connected"
    EMPTY = "empty"
    WRONG_BASE_CASE = "wrong-base-case"
    RIM_FAILURE = "rim-failure"


@dataclass(frozen=True)
class NormalityVerdict:
    is_normal: bool
    dimension_checked: int
    failing_vertex: Hashable | None = None
    failure_reason: FailureReason | None = None
    # number of rim levels descended before the innermost failure
    failure_depth: int = 0

    def __bool__(self) -> bool:
        return self.is_normal

    def to_json_dict(self) -> dict:
        return {
            "is_normal": self.is_normal,
            "dimension_checked": self.dimension_checked,
            "failing_vertex": self.failing_vertex,
            "failure_reason": None if self.failure_reason is None else self.failure_reason.value,
            "failure_depth": self.failure_depth,
        }


class NormalityChecker:
    """Memoizing checker; verdict reuse is keyed on isomorphism class."""

    def __init__(self, memo_cap: int = 64):
        self.memo_cap = memo_cap
        self._memo: dict[tuple, list[tuple[DigitalSpace, int, NormalityVerdict]]] = {}
        self._lock = threading.Lock()
        self.hits = 0

    def _lookup(self, g: DigitalSpace, n: int) -> NormalityVerdict | None:
        if len(g) > self.memo_cap:
            return None
        key = (n, refinement_certificate(g))
        with self._lock:
            bucket = list(self._memo.get(key, ()))
        for other, _, verdict in bucket:
            phi = is_isomorphic(g, other, cap=self.memo_cap)
            if phi is not None:
                self.hits += 1
                if verdict.is_normal:
                    return verdict
                inv = {w: v for v, w in phi.items()}
                return NormalityVerdict(False, n, inv.get(verdict.failing_vertex),
                                        verdict.failure_reason, verdict.failure_depth)
        return None

    def _store(self, g: DigitalSpace, n: int, verdict: NormalityVerdict) -> None:
        if len(g) > self.memo_cap:
            return
        key = (n, refinement_certificate(g))
        with self._lock:
            self._memo.setdefault(key, []).append((g, n, verdict))

    def check(self, g: DigitalSpace, n: int) -> NormalityVerdict:
        if n < 0:
            raise ValueError("dimension must be non-negative")
        if n == 0:
            if len(g) == 2 and g.edge_count == 0:
                return NormalityVerdict(True, 0)
            return NormalityVerdict(False, 0, None, FailureReason.WRONG_BASE_CASE)
        if len(g) == 0:
            return NormalityVerdict(False, n, None, FailureReason.EMPTY)
        if not is_connected(g):
            return NormalityVerdict(False, n, None, FailureReason.NOT_CONNECTED)
        cached = self._lookup(g, n)
        if cached is not None:
            return cached
        verdict = NormalityVerdict(True, n)
        for v in g.vertices:
            sub = self.check(rim(g, v), n - 1)
            if not sub.is_normal:
                depth = sub.failure_depth + 1 if sub.failure_reason is FailureReason.RIM_FAILURE else 1
                verdict = NormalityVerdict(False, n, v, FailureReason.RIM_FAILURE, depth)
                break
        self._store(g, n, verdict)
        return verdict


_default = NormalityChecker()


def is_normal_space(g: DigitalSpace, n: int, checker: NormalityChecker | None = None) -> NormalityVerdict:
    return (checker or _default).check(g, n)


def infer_dimension(g: DigitalSpace, n_max: int = DEFAULT_N_MAX,
                    checker: NormalityChecker | None = None) -> int | None:
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    passing = [n for n in range(n_max + 1) if is_normal_space(g, n, checker)]
    if len(passing) > 1:
        raise RuntimeError(f"graph is normal in several dimensions {passing}")
    return passing[0] if passing else None
