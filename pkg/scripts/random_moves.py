"""Random walks of contractible transformations and what they leave unchanged.

Starts from random graphs, applies random legal moves and reports how often
the Euler characteristic and GF(2) Betti numbers stayed fixed (they always
should).
"""
from __future__ import annotations

import argparse
import random
from dataclasses import dataclass

from digitop.graph_core import DigitalSpace, enumerate_cliques
from digitop.invariants import betti_numbers_gf2, euler_characteristic
from digitop.transformations import apply_move, enumerate_moves


@dataclass
class WalkConfig:
    seed: int = 20240917
    walks: int = 50
    steps: int = 10
    min_vertices: int = 4
    max_vertices: int = 9
    edge_probability: float = 0.5


def main(cfg: WalkConfig) -> int:
    rng = random.Random(cfg.seed)
    moves = broken = 0
    kinds: dict[str, int] = {}
    for _ in range(cfg.walks):
        n = rng.randint(cfg.min_vertices, cfg.max_vertices)
        g = DigitalSpace(n, [(i, j) for i in range(n) for j in range(i + 1, n)
                             if rng.random() < cfg.edge_probability])
        start = (euler_characteristic(g), betti_numbers_gf2(g, 4))
        for _ in range(cfg.steps):
            options = enumerate_moves(g, enumerate_cliques(g.relabeled(), 3), include_add_edges=True)
            if not options:
                break
            m = rng.choice(options)
            g = apply_move(g, m)
            moves += 1
            kinds[m.kind.value] = kinds.get(m.kind.value, 0) + 1
            broken += (euler_characteristic(g), betti_numbers_gf2(g, 4)) != start
    print(f"seed {cfg.seed}: {moves} moves {kinds}, invariant changes: {broken}")
    return 1 if broken else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(WalkConfig()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    raise SystemExit(main(WalkConfig(**vars(p.parse_args()))))
