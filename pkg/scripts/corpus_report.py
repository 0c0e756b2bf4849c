"""Certificates and invariants for every construction in the package.

Prints one row per cover: size, LCL / consistency verdicts, Euler
characteristic, GF(2) Betti numbers and the normal dimension.
"""
from __future__ import annotations

import argparse
import random
import time
from dataclasses import dataclass

from digitop.constructions import (SurfaceKind, brick_tiling, circle_cover, dual_tiling, minimal_sphere,
                                   quotient_surface_model, random_flag_sphere)
from digitop.geometry import Cover, consistency_check, intersection_graph, lcl_certificate
from digitop.invariants import invariant_report


@dataclass
class CorpusConfig:
    seed: int = 20240917
    random_spheres: int = 3
    max_sphere_dim: int = 4


def corpus(cfg: CorpusConfig):
    for n in range(cfg.max_sphere_dim + 1):
        yield f"minimal-sphere n={n}", minimal_sphere(n)[0]
    for s in (4, 6, 12):
        yield f"circle s={s}", circle_cover(s)[0]
    yield "bricks 4x4", brick_tiling(2, (4, 4))
    yield "squares 4x4", brick_tiling(2, (4, 4), offset=0)
    yield "bricks 3x3x3", brick_tiling(3, (3, 3, 3))
    for kind in SurfaceKind:
        yield kind.value, quotient_surface_model(kind, validate=False)[0]
    rng = random.Random(cfg.seed)
    for n in (1, 2, 3):
        for _ in range(cfg.random_spheres):
            k = rng.randint(0, 8)
            yield f"flag {n}-sphere +{k}", Cover.from_tiling(dual_tiling(random_flag_sphere(n, k, rng)))


def main(cfg: CorpusConfig) -> None:
    print(f"{'cover':24} {'size':>4} {'lcl':>5} {'cons':>5} {'euler':>5}  {'betti':14} normal  secs")
    for name, cover in corpus(cfg):
        start = time.perf_counter()
        g = intersection_graph(cover)
        lcl, cons = lcl_certificate(cover, g), consistency_check(cover, g)
        r = invariant_report(g)
        print(f"{name:24} {len(cover):>4} {str(lcl.passed):>5} {str(cons.passed):>5} {r.euler:>5}  "
              f"{str(r.betti_gf2):14} {str(r.normal_dimension):>6}  {time.perf_counter() - start:.2f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=CorpusConfig.seed)
    p.add_argument("--random-spheres", type=int, default=CorpusConfig.random_spheres)
    p.add_argument("--max-sphere-dim", type=int, default=CorpusConfig.max_sphere_dim)
    main(CorpusConfig(**vars(p.parse_args())))
