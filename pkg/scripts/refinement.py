"""Multiresolution digitization: invariants of a builtin object as the grid is refined.

    python scripts/refinement.py --object circle --h0 1 --levels 4 --out results/circle
"""
from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from digitop.digitizer import BUILTIN_KINDS, builtin_object, refinement_experiment


@dataclass
class RefinementConfig:
    object: str = "circle"
    radius: Fraction = Fraction(1)
    h0: Fraction = Fraction(1)
    levels: int = 4
    out: str | None = None


def main(cfg: RefinementConfig) -> int:
    obj = builtin_object(cfg.object, radius=cfg.radius)
    start = time.perf_counter()
    rep = refinement_experiment(obj, cfg.levels, cfg.h0, keep_graphs=cfg.out is not None)
    print(rep.to_csv(), end="")
    print(f"stabilization index: {rep.stabilization_index}  ({time.perf_counter() - start:.1f}s)")
    if cfg.out:
        d = Path(cfg.out)
        d.mkdir(parents=True, exist_ok=True)
        (d / "summary.csv").write_text(rep.to_csv())
        (d / "report.json").write_text(json.dumps(rep.to_json_dict(), indent=1))
        (d / "config.json").write_text(json.dumps(asdict(cfg), default=str, indent=1))
        for lv in rep.levels:
            (d / f"level{lv.level}.graph.json").write_text(lv.graph.to_json())
    return 0 if rep.stabilization_index is not None else 1


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--object", choices=BUILTIN_KINDS, default="circle")
    p.add_argument("--radius", type=Fraction, default=Fraction(1))
    p.add_argument("--h0", type=Fraction, default=Fraction(1))
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--out")
    raise SystemExit(main(RefinementConfig(**vars(p.parse_args()))))
