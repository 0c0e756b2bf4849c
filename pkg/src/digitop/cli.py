"""Command-line front end: ``python -m digitop <subcommand> ...``.

Every subcommand prints JSON on stdout (DOT or CSV where asked).  Exit status
is 0 on success, 1 when a certificate, verdict or search fails, and 2 on
usage errors (bad flags, unreadable or malformed input files).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .constructions import (LCLViolation, SurfaceKind, brick_tiling, circle_cover, minimal_sphere,
                            quotient_surface_model)
from .digitizer import BUILTIN_KINDS, GridSpec, builtin_object, digitize, digitize_lcl, refinement_experiment
from .geometry import (Box, Cover, CoverError, consistency_check, intersection_graph, is_locally_centered,
                       lcl_certificate, lump_certificate)
from .graph_core import DigitalSpace, GraphError, maximal_cliques
from .invariants import invariant_report
from .normality import is_normal_space
from .transformations import equivalent_by_moves, reduce

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_json(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _load_graph(path: str, flag: str = "--graph") -> DigitalSpace:
    data = _read_json(path)
    if isinstance(data, dict) and "graph" in data:   # output of construct/digitize
        data = data["graph"]
    try:
        return DigitalSpace.from_json_dict(data)
    except (GraphError, KeyError, TypeError) as exc:
        raise UsageError(f"{flag} {path}: not a graph file ({exc})") from exc


def _load_cover(path: str) -> Cover:
    data = _read_json(path)
    if isinstance(data, dict) and "cover" in data:
        data = data["cover"]
    try:
        return Cover.from_json_dict(data)
    except (CoverError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"--cover {path}: not a cover file ({exc})") from exc


def _emit(obj, out: str | None = None) -> None:
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=1)
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _window(text: str | None) -> Box | None:
    if text is None:
        return None
    try:
        bounds = [tuple(Fraction(x) for x in part.split(":")) for part in text.split(",")]
        if any(len(b) != 2 for b in bounds):
            raise ValueError
        return Box.of(bounds)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--window {text!r}: expected lo:hi,lo:hi,...") from exc


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


# ---------------------------------------------------------------------------
# subcommands

def cmd_construct(a) -> int:
    try:
        return _construct(a)
    except LCLViolation as exc:
        _emit({"error": str(exc), "certificate": exc.result.to_json_dict()}, a.out)
        return EXIT_FAIL


def _construct(a) -> int:
    kind = a.kind
    if kind == "minimal-sphere":
        cover, graph = minimal_sphere(a.n)
    elif kind == "circle":
        cover, graph = circle_cover(a.s)
    elif kind == "brick":
        extents = a.extents or ([4, 4] if a.n == 2 else [3, 3, 3])
        cover = brick_tiling(a.n, extents, offset=a.offset)
        graph = intersection_graph(cover)
    else:
        surface = {"torus": SurfaceKind.TORUS, "klein": SurfaceKind.KLEIN_BOTTLE,
                   "projective": SurfaceKind.PROJECTIVE_PLANE}[kind]
        cover, graph = quotient_surface_model(surface, a.p, a.q)
    _emit({"cover": cover.to_json_dict(), "graph": graph.to_json_dict()}, a.out)
    return EXIT_OK


def cmd_certify(a) -> int:
    cover = _load_cover(a.cover)
    graph = intersection_graph(cover)
    lumps = []
    for clique in maximal_cliques(graph):
        res = lump_certificate(cover, clique)
        lumps.append({"clique": list(clique), **res.to_json_dict()})
    results = {
        "locally_centered": is_locally_centered(cover, graph).to_json_dict(),
        "lumps": lumps,
        "lcl": lcl_certificate(cover, graph).to_json_dict(),
        "consistency": consistency_check(cover, graph).to_json_dict(),
    }
    _emit(results, a.out)
    ok = results["lcl"]["passed"] and results["consistency"]["passed"]
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(a) -> int:
    verdict = is_normal_space(_load_graph(a.graph), a.dim)
    _emit(verdict.to_json_dict(), a.out)
    return EXIT_OK if verdict.is_normal else EXIT_FAIL


def cmd_invariants(a) -> int:
    report = invariant_report(_load_graph(a.graph), a.max_dim, check_normality=not a.no_normality)
    _emit(report.to_json_dict(), a.out)
    return EXIT_OK


def _object(a):
    params = {"radius": a.radius}
    if a.center:
        params["center"] = [Fraction(x) for x in a.center.split(",")]
    if a.axes:
        params["axes"] = [Fraction(x) for x in a.axes.split(",")]
    params.update(major=a.major, minor=a.minor)
    try:
        return builtin_object(a.object, **params)
    except ValueError as exc:
        raise UsageError(f"--object {a.object}: {exc}") from exc


def cmd_digitize(a) -> int:
    obj = _object(a)
    window = _window(a.window)
    try:
        grid = GridSpec(a.h, window) if window is not None else GridSpec.around(obj, a.h)
    except ValueError as exc:
        raise UsageError(f"--h/--window: {exc}") from exc
    if a.lcl:
        if obj.ambient_dimension != 2:
            raise UsageError("--lcl needs a planar object (circle, ellipse or disk)")
        cover, graph = digitize_lcl(obj, grid)
    else:
        cover, graph = digitize(obj, grid)
    report = invariant_report(graph, check_normality=a.normality)
    out = {"cover": cover.to_json_dict(), "graph": graph.to_json_dict(),
           "report": report.to_json_dict()}
    if a.lcl:
        out["lcl"] = lcl_certificate(cover, graph).to_json_dict()
    _emit(out, a.out)
    return EXIT_OK


def cmd_experiment(a) -> int:
    obj = _object(a)
    try:
        rep = refinement_experiment(obj, a.levels, a.h0, _window(a.window),
                                    keep_graphs=a.out_dir is not None)
    except ValueError as exc:
        raise UsageError(f"--h0/--levels/--window: {exc}") from exc
    if a.out_dir:
        d = Path(a.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        for lv in rep.levels:
            (d / f"level{lv.level}.graph.json").write_text(lv.graph.to_json() + "\n")
            (d / f"level{lv.level}.report.json").write_text(lv.report.to_json() + "\n")
        (d / "summary.csv").write_text(rep.to_csv())
    if a.csv:
        Path(a.csv).write_text(rep.to_csv())
    _emit(rep.to_csv() if a.format == "csv" else rep.to_json_dict(), a.out)
    # no two agreeing finest levels counts as a failed verdict
    return EXIT_OK if rep.stabilization_index is not None else EXIT_FAIL


def cmd_reduce(a) -> int:
    result, moves = reduce(_load_graph(a.graph))
    _emit({"moves": [m.to_json_dict() for m in moves], "result": result.to_json_dict()}, a.out)
    return EXIT_OK


def cmd_equiv(a) -> int:
    g = _load_graph(a.graph_a, "--graph-a")
    h = _load_graph(a.graph_b, "--graph-b")
    res = equivalent_by_moves(g, h, a.budget)
    _emit({"found": res.found, "reason": res.reason,
           "moves": None if res.moves is None else [m.to_json_dict() for m in res.moves]}, a.out)
    return EXIT_OK if res.found else EXIT_FAIL


def cmd_export(a) -> int:
    g = _load_graph(a.graph)
    _emit(g.to_dot() if a.format == "dot" else g.to_json_dict(), a.out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def _object_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--object", required=True, choices=BUILTIN_KINDS)
    p.add_argument("--radius", type=_fraction, default=Fraction(1))
    p.add_argument("--center", help="comma-separated coordinates")
    p.add_argument("--axes", help="ellipse semi-axes, comma-separated")
    p.add_argument("--major", type=_fraction, default=Fraction(2), help="torus major radius")
    p.add_argument("--minor", type=_fraction, default=Fraction(1), help="torus minor radius")
    p.add_argument("--window", help="lo:hi per axis, comma-separated; write --window=-2:2,-2:2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="digitop", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--out", "-o", help="write to this file instead of stdout")
        return p

    p = add("construct", cmd_construct, "build a canonical LCL cover and its graph")
    p.add_argument("--kind", required=True,
                   choices=["minimal-sphere", "circle", "brick", "torus", "klein", "projective"])
    p.add_argument("--n", type=int, default=2, help="sphere dimension / brick dimension")
    p.add_argument("--s", type=int, default=4, help="number of arcs for --kind circle")
    p.add_argument("--p", type=int, default=4, help="rows of bricks on a surface")
    p.add_argument("--q", type=int, default=4, help="bricks per row on a surface")
    p.add_argument("--extents", type=int, nargs="+", help="brick patch size per axis")
    p.add_argument("--offset", type=int, default=1, help="row offset of a brick patch (0 = grid)")

    p = add("certify", cmd_certify, "run the LCL and consistency certificates on a cover")
    p.add_argument("--cover", required=True, help="Cover JSON file, or - for stdin")

    p = add("verify", cmd_verify, "check whether a graph is a normal n-space")
    p.add_argument("--graph", required=True)
    p.add_argument("--dim", type=int, required=True)

    p = add("invariants", cmd_invariants, "Euler characteristic, Betti numbers, components")
    p.add_argument("--graph", required=True)
    p.add_argument("--max-dim", type=int)
    p.add_argument("--no-normality", action="store_true", help="skip the normal-dimension search")

    p = add("digitize", cmd_digitize, "digitize a builtin object on a grid")
    _object_flags(p)
    p.add_argument("--h", type=_fraction, required=True, help="cell edge")
    p.add_argument("--lcl", action="store_true", help="use running-bond bricks (planar objects)")
    p.add_argument("--normality", action="store_true", help="also search for a normal dimension")

    p = add("experiment", cmd_experiment, "digitize at h0, h0/2, ... and compare invariants")
    _object_flags(p)
    p.add_argument("--h0", type=_fraction, required=True)
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--csv", help="also write the per-level CSV table here")
    p.add_argument("--out-dir", help="write per-level graph and report JSON here")
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = add("reduce", cmd_reduce, "greedily shrink a graph by contractible deletions")
    p.add_argument("--graph", required=True)

    p = add("equiv", cmd_equiv, "bounded search for a move sequence between two graphs")
    p.add_argument("--graph-a", required=True)
    p.add_argument("--graph-b", required=True)
    p.add_argument("--budget", type=int, required=True)

    p = add("export", cmd_export, "write a graph as DOT or JSON")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", choices=["dot", "json"], default="dot")
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:          # argparse has already printed the message
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"digitop {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CoverError, GraphError, ValueError) as exc:
        print(f"digitop {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
