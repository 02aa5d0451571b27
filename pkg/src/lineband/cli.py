"""Command-line entry point.

Exit codes: 0 affirmative, 1 negative (infeasible or violations), 2 usage or
internal error. The JSON report goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
import warnings
from pathlib import Path

from . import __version__
from .complex_arr import BoundaryAmbiguity, build_g6, crossing_parity, g6_report, menelaus_product, seeded_instances
from .exact import ScalarSyntaxError, format_scalar, parse_cli_scalar
from .feasibility import NotRealizable, ResourceCapExceeded, feasible, rmax
from .geometry import (
    GeometryError,
    achieved_radii,
    config_to_json,
    flatten_to_ball,
    load_config,
    save_config,
    verify_realization,
)
from .graphs import GraphError, catalog, format_graph, graph_from_spec

OK, NEGATIVE, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _graph(text: str):
    try:
        return graph_from_spec(text)
    except (GraphError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _scalar(text: str):
    try:
        return parse_cli_scalar(text)
    except (ScalarSyntaxError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


# ----------------------------------------------------------------------
# subcommands; each returns (exit code, results dict, inputs dict)


def cmd_feasible(args):
    res = feasible(args.graph, args.R, args.mode, args.jobs)
    if args.svg and res.certificate is not None:
        from .plotting import emit_svg

        emit_svg(res.certificate.config, args.graph, (1, args.R), args.svg)
    code = OK if res.feasible else NEGATIVE
    return code, res.to_dict(), {}


def cmd_rmax(args):
    def progress(r, res):
        _log(f"probe R={r!r}: {res.status}")

    try:
        res = rmax(args.graph, args.tol, args.rcap, args.mode, args.jobs, progress=progress if args.verbose else None)
    except NotRealizable as exc:
        _log(str(exc))
        return NEGATIVE, {"status": "not-realizable", "graph": format_graph(args.graph)}, {}
    out = {"graph": format_graph(args.graph), "tol": args.tol, "rcap": args.rcap}
    out.update(res.to_dict())
    if args.svg and res.witness is not None:
        from .plotting import emit_svg

        emit_svg(res.witness.config, args.graph, achieved_radii(res.witness.config, args.graph), args.svg)
    return OK, out, {}


def cmd_verify(args):
    cfg = load_config(args.config)
    res = verify_realization(cfg, args.graph, args.rin, args.rout, args.region)
    out = {
        "graph": format_graph(args.graph),
        "region": args.region,
        "r_in": format_scalar(args.rin),
        "r_out": format_scalar(args.rout),
        "ok": res.ok,
        "violations": [{"pair": f"{v.pair[0]}-{v.pair[1]}", "reason": v.reason} for v in res.violations],
    }
    if args.svg:
        from .plotting import emit_svg

        emit_svg(cfg, args.graph, (args.rin, args.rout), args.svg, region=args.region)
    return (OK if res.ok else NEGATIVE), out, {"config_sha256": _digest(args.config)}


def cmd_flatten(args):
    cfg = load_config(args.config)
    flat = flatten_to_ball(cfg, args.graph, args.R, args.eps)
    r_out = args.R * (1 - args.eps)
    if args.out:
        save_config(flat, args.out)
    if args.svg:
        from .plotting import emit_svg

        emit_svg(flat, args.graph, (1, r_out), args.svg, region="ball")
    out = {
        "graph": format_graph(args.graph),
        "R": format_scalar(args.R),
        "eps": format_scalar(args.eps),
        "ball_r_out": format_scalar(r_out),
        "config": json.loads(config_to_json(flat)),
    }
    return OK, out, {"config_sha256": _digest(args.config)}


def cmd_complex_g6(args):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", BoundaryAmbiguity)
        rep = g6_report(build_g6(), catalog("G6"))
    for w in caught:
        _log(f"warning: {w.message}")
    if args.svg and rep["separating_interval"] is not None:
        from .plotting import emit_g6_svg

        lo, hi = rep["separating_interval"]
        emit_g6_svg(lo if hi == "inf" else (lo + hi) / 2, args.svg)
    return (OK if rep["matches"] else NEGATIVE), rep, {}


def cmd_menelaus(args):
    bad_product, odd = [], []
    hist: dict[int, int] = {}
    for k, inst in enumerate(seeded_instances(args.seed, args.count, args.sides)):
        if menelaus_product(inst) != 1:
            bad_product.append(k)
        count, even = crossing_parity(inst)
        hist[count] = hist.get(count, 0) + 1
        if not even:
            odd.append(k)
    out = {
        "seed": args.seed,
        "count": args.count,
        "sides": args.sides,
        "product_failures": bad_product,
        "odd_crossings": odd,
        "crossing_histogram": {str(k): hist[k] for k in sorted(hist)},
    }
    return (OK if not bad_product and not odd else NEGATIVE), out, {}


def cmd_an_sweep(args):
    if args.max_n > 5:
        raise ResourceCapExceeded(
            f"A_{args.max_n} needs 4^{args.max_n * (args.max_n - 1) // 2 - 1} sign cases; "
            "the exhaustive search is capped at n = 5"
        )
    rows = []
    for n in range(2, args.max_n + 1):
        g = catalog(f"A{n}")
        res = rmax(g, args.tol, args.rcap, args.mode, args.jobs)
        rows.append({"n": n, "lo": res.lo, "hi": res.hi, "midpoint": res.midpoint, "status": res.status})
        _log(f"A{n}: [{res.lo:.8f}, {res.hi:.8f}] {res.status}")
    mids = [r["midpoint"] for r in rows if math.isfinite(r["hi"])]
    return OK, {"mode": args.mode, "rows": rows, "distance_to_3": [abs(m - 3) for m in mids]}, {}


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lineband", description="Realizability of graphs as line arrangements in bands and balls.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, jobs=True):
        if jobs:
            sp.add_argument("--jobs", type=int, default=None, help="worker processes (default: all CPUs)")
        sp.add_argument("--svg", type=Path, help="write an SVG figure here")

    sp = sub.add_parser("feasible", help="decide the band problem for (G, R)")
    sp.add_argument("--graph", type=_graph, required=True)
    sp.add_argument("--R", type=_scalar, required=True, help="radius, e.g. 5, 2.5, 3+2*s@2")
    sp.add_argument("--mode", choices=("fast", "certified"), default="certified")
    common(sp)
    sp.set_defaults(func=cmd_feasible)

    sp = sub.add_parser("rmax", help="bracket the largest feasible radius")
    sp.add_argument("--graph", type=_graph, required=True)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--rcap", type=float, default=100.0)
    sp.add_argument("--mode", choices=("fast", "certified"), default="fast")
    sp.add_argument("-v", "--verbose", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_rmax)

    sp = sub.add_parser("verify", help="check a configuration file against a graph")
    sp.add_argument("--config", type=Path, required=True)
    sp.add_argument("--graph", type=_graph, required=True)
    sp.add_argument("--rin", type=_scalar, default=_scalar("1"))
    sp.add_argument("--rout", type=_scalar, required=True)
    sp.add_argument("--region", choices=("band", "ball"), default="band")
    common(sp, jobs=False)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("flatten", help="turn a band realization into a ball realization")
    sp.add_argument("--config", type=Path, required=True)
    sp.add_argument("--graph", type=_graph, required=True)
    sp.add_argument("--R", type=_scalar, required=True)
    sp.add_argument("--eps", type=_scalar, default=_scalar("1/100"))
    sp.add_argument("--out", type=Path, help="write the flattened configuration JSON")
    common(sp, jobs=False)
    sp.set_defaults(func=cmd_flatten)

    sp = sub.add_parser("complex-g6", help="intersection norms of the complex G6 arrangement")
    common(sp, jobs=False)
    sp.set_defaults(func=cmd_complex_g6)

    sp = sub.add_parser("menelaus", help="randomized Menelaus product and crossing parity check")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=10_000)
    sp.add_argument("--sides", type=int, default=5)
    sp.set_defaults(func=cmd_menelaus, svg=None)

    sp = sub.add_parser("an-sweep", help="rmax over the paths A_2..A_n")
    sp.add_argument("--max-n", type=int, default=5)
    sp.add_argument("--tol", type=float, default=1e-4)
    sp.add_argument("--rcap", type=float, default=100.0)
    sp.add_argument("--mode", choices=("fast", "certified"), default="fast")
    sp.add_argument("--jobs", type=int, default=None)
    sp.set_defaults(func=cmd_an_sweep, svg=None)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code else OK
    start = time.perf_counter()
    try:
        code, results, inputs = args.func(args)
    except (ResourceCapExceeded, GeometryError, GraphError, ScalarSyntaxError, ValueError, OSError) as exc:
        _log(f"error: {exc}")
        return ERROR
    except Exception as exc:  # internal failure still honours the exit-code contract
        _log(f"internal error: {type(exc).__name__}: {exc}")
        return ERROR
    report = {
        "command": ["lineband"] + argv,
        "version": __version__,
        "inputs": inputs,
        "results": results,
        "timing": {"wall_ms": int((time.perf_counter() - start) * 1000)},
        "mode": getattr(args, "mode", None),
        "jobs": getattr(args, "jobs", None),
    }
    json.dump(report, sys.stdout, indent=2, sort_keys=True, ensure_ascii=False)
    sys.stdout.write("\n")
    return code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
