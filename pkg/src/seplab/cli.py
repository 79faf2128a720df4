"""Command line front end.

Subcommands: gen, cut, spheres, amalgam, profile, report, verify.
Exit codes: 0 success, 1 experiment or verification failure, 2 bad config
or bad arguments.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from ._version import __version__
from .errors import ConfigError, SepLabError
from .generate import (TessellationSpec, grid, random_regular, regular_tree,
                       tessellation_disk)
from .graph import bfs_root
from .io import load_graph, save_graph
from .profile import classify_growth, fit_against_log, profile_estimate
from .separator import cut_bounds
from .spheres import bounded_sphere_separation_test, delta_hat, sector_stats, \
    shadow_index
from .amalgam import ComplexSpec, LineFamily, build_X, cut_X_experiment, \
    volume_report
from . import experiment as _experiment

_LINE_ALIASES = {"reflection": "reflection-lines",
                 "reflection-lines": "reflection-lines",
                 "axis": "axis-orbit", "axis-orbit": "axis-orbit"}


def _parse_R(text: str) -> list[int]:
    """Comma list '6,9,12' or inclusive span '4..10'."""
    if ".." in text:
        a, b = text.split("..", 1)
        return list(range(int(a), int(b) + 1))
    return [int(t) for t in text.split(",") if t]


def _parse_pq(text: str) -> TessellationSpec:
    p, q = (int(t) for t in text.split(","))
    return TessellationSpec(p, q)


def _input_graph(args) -> tuple:
    """(graph, rooted disk or None) from --in or --pq/--radius."""
    if getattr(args, "infile", None):
        g = load_graph(args.infile)
        return g, None
    if getattr(args, "pq", None) and getattr(args, "radius", None) is not None:
        disk = tessellation_disk(_parse_pq(args.pq), args.radius, args.budget)
        return disk.graph, disk
    raise ConfigError("provide --in FILE or --pq P,Q with --radius R")


def _emit_csv(columns, rows, path: str | None) -> None:
    import csv as _csv
    out = open(path, "w", newline="") if path else sys.stdout
    try:
        w = _csv.writer(out, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_experiment._fmt(v) for v in row])
    finally:
        if path:
            out.close()


def _cmd_gen(args) -> int:
    if args.kind == "grid":
        g = grid(args.rows, args.cols)
    elif args.kind == "regular-tree":
        g = regular_tree(args.degree, args.depth)
    elif args.kind == "random-regular":
        g = random_regular(args.n, args.degree, seed=args.seed)
    else:
        g = tessellation_disk(_parse_pq(args.pq), args.radius, args.budget).graph
    save_graph(g, args.out, fmt=args.format)
    print(f"wrote {args.out}: n={g.n} m={g.m}")
    return 0


def _cmd_cut(args) -> int:
    g, _disk = _input_graph(args)
    beta = Fraction(args.beta)
    opts = {}
    if args.exact_threshold is not None:
        opts["exact_threshold"] = args.exact_threshold
    bounds = cut_bounds(g, beta, seed=args.seed, node_budget=args.budget,
                        **opts)
    print(f"n={g.n} beta={beta} lower={bounds.lower} upper={bounds.upper}"
          + (f" note={bounds.note}" if bounds.note else ""))
    if args.json_out:
        doc = {"n": g.n, "beta": str(beta), "lower": bounds.lower,
               "upper": bounds.upper, "note": bounds.note,
               "certificates": [c.to_dict() for c in bounds.certificates]}
        Path(args.json_out).write_text(json.dumps(doc, indent=2, sort_keys=True))
        print(f"certificates -> {args.json_out}")
    return 0


def _cmd_spheres(args) -> int:
    g, disk = _input_graph(args)
    b = disk.root if disk else bfs_root(g, args.root)
    delta = args.delta if args.delta is not None else delta_hat(b)
    beta = Fraction(args.beta)
    R_range = _parse_R(args.R)
    report = bounded_sphere_separation_test(b, delta, R_range, beta)
    rows = []
    for row in report.rows:
        alpha = khat = None
        if 3 * row.R <= b.radius:
            stats = sector_stats(shadow_index(b, row.R))
            alpha, khat = stats.alpha_hat, stats.K_hat_sector
        rows.append((row.R, row.sphere_size, row.thick_size,
                     row.bounds.lower, row.bounds.upper, alpha, khat))
    _emit_csv(_experiment.SPHERES_COLUMNS, rows, args.csv_out)
    print(f"delta={delta} max_upper={report.max_upper} "
          f"upper_slope={report.upper_slope:.4f}", file=sys.stderr)
    return 0


def _cmd_amalgam(args) -> int:
    spec = ComplexSpec(_parse_pq(args.pq), LineFamily(_LINE_ALIASES[args.lines]))
    beta = Fraction(args.beta)
    R_range = _parse_R(args.R)
    metas = [build_X(spec, R, budget=args.budget)[1] for R in sorted(set(R_range))]
    vol = volume_report(metas)
    curve = cut_X_experiment(spec, R_range, beta, budget=args.budget,
                             seed=args.seed)
    by_R = {int(pt.source.split("=", 1)[1]): pt for pt in curve.points}
    rows = [(vr.R, vr.vol_base, vr.vol_attached, vr.line_count, vr.vol_X,
             vr.ratio, by_R[vr.R].lower, by_R[vr.R].upper)
            for vr in vol.rows]
    _emit_csv(_experiment.AMALGAM_COLUMNS, rows, args.csv_out)
    for flag in vol.flags:
        print(f"flag: {flag}", file=sys.stderr)
    return 0


def _cmd_profile(args) -> int:
    g, _disk = _input_graph(args)
    family: dict = {"kind": args.family}
    if args.family in ("balls", "annuli", "sphere-shells"):
        family["root"] = args.root
    if args.family == "square-subgrids":
        if args.rows is None or args.cols is None:
            raise ConfigError("--family square-subgrids needs --rows and --cols")
        family["rows"], family["cols"] = args.rows, args.cols
    beta = Fraction(args.beta)
    opts = {"seed": args.seed}
    if args.exact_threshold is not None:
        opts["exact_threshold"] = args.exact_threshold
    curve = profile_estimate(g, family, beta, **opts)
    _emit_csv(_experiment.PROFILE_COLUMNS, curve.to_rows(), args.csv_out)
    if args.classify:
        tag = classify_growth(curve)
        a, b, r2 = fit_against_log(curve)
        print(f"growth={tag} r2={tag.r2:.4f} "
              f"log_fit a={a:.4f} R2={r2:.4f}", file=sys.stderr)
    return 0


def _cmd_report(args) -> int:
    cfg = json.loads(Path(args.config).read_text())
    if args.workers is not None:
        cfg["workers"] = args.workers
    summary = _experiment.run(cfg, args.out)
    for e in summary["experiments"]:
        line = f"{e['id']}: {e['status']}"
        if e["status"] != "ok":
            line += f" ({e.get('error', '?')})"
        print(line)
    print(f"bundle -> {args.out} ({summary['ok']} ok, {summary['failed']} failed)")
    return 0 if summary["failed"] == 0 else 1


def _cmd_verify(args) -> int:
    ok, failures = _experiment.verify(args.bundle)
    for f in failures:
        print(f"FAIL {f}")
    print("verify: " + ("pass" if ok else f"fail ({len(failures)} problems)"))
    return 0 if ok else 1


def _add_common(p, graph_input=True):
    p.add_argument("--beta", default="1/2", help="balance fraction (default 1/2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=2_000_000,
                   help="vertex budget for generators and the exact solver")
    if graph_input:
        p.add_argument("--in", dest="infile", help="graph file (json/edgelist)")
        p.add_argument("--pq", help="tessellation P,Q (with --radius)")
        p.add_argument("--radius", type=int, help="tessellation ball radius")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sep-lab",
                                 description="separation profile laboratory")
    ap.add_argument("-V", "--version", action="version",
                    version=f"sep-lab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a graph file")
    g.add_argument("--kind", required=True,
                   choices=["grid", "regular-tree", "random-regular",
                            "tessellation"])
    g.add_argument("--rows", type=int), g.add_argument("--cols", type=int)
    g.add_argument("--degree", type=int), g.add_argument("--depth", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--pq"), g.add_argument("--radius", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--budget", type=int, default=2_000_000)
    g.add_argument("--format", default="json",
                   choices=["json", "edgelist", "dot"])
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_gen)

    c = sub.add_parser("cut", help="balanced separator bounds on one graph")
    _add_common(c)
    c.add_argument("--exact-threshold", type=int, default=None)
    c.add_argument("--json-out", help="write bounds + certificates as JSON")
    c.set_defaults(func=_cmd_cut)

    s = sub.add_parser("spheres", help="sphere-neighborhood separation table")
    _add_common(s)
    s.add_argument("--R", required=True, help="radii: '4..10' or '4,6,8'")
    s.add_argument("--delta", type=int, default=None,
                   help="neighborhood width (default: fitted delta-hat)")
    s.add_argument("--root", type=int, default=0)
    s.add_argument("--csv-out", default=None)
    s.set_defaults(func=_cmd_spheres)

    a = sub.add_parser("amalgam", help="glued-sheet experiments")
    a.add_argument("--pq", required=True, help="tessellation P,Q")
    a.add_argument("--lines", required=True, choices=sorted(_LINE_ALIASES))
    a.add_argument("--R", required=True, help="radii: multiples of 3")
    a.add_argument("--beta", default="1/2")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--budget", type=int, default=2_000_000)
    a.add_argument("--csv-out", default=None)
    a.set_defaults(func=_cmd_amalgam)

    pr = sub.add_parser("profile", help="separation profile over a family")
    _add_common(pr)
    pr.add_argument("--family", required=True,
                    choices=["balls", "annuli", "sphere-shells",
                             "square-subgrids"])
    pr.add_argument("--root", type=int, default=0)
    pr.add_argument("--rows", type=int), pr.add_argument("--cols", type=int)
    pr.add_argument("--exact-threshold", type=int, default=None)
    pr.add_argument("--classify", action="store_true", default=True)
    pr.add_argument("--no-classify", dest="classify", action="store_false")
    pr.add_argument("--csv-out", default=None)
    pr.set_defaults(func=_cmd_profile)

    r = sub.add_parser("report", help="run a config; write a report bundle")
    r.add_argument("--config", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--workers", type=int, default=None,
                   help="override config worker count")
    r.set_defaults(func=_cmd_report)

    v = sub.add_parser("verify", help="re-verify a bundle's certificates")
    v.add_argument("--bundle", required=True)
    v.set_defaults(func=_cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except SepLabError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
