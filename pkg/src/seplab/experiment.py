"""Reproducible experiment runner.

A JSON config describes a batch of experiments (profile, cut, spheres,
amalgam) over generated or loaded graphs.  run() executes them and writes a
self-contained bundle: the exact config, a JSON summary with growth tags
and the tool version, pinned-column CSVs, SVG plots, serialized graphs, and
every separator certificate produced.  verify() re-checks all certificates
from the serialized graphs, so a bundle is evidence, not just output.

Determinism: every generator and solver is seeded from the config, plots
carry no timestamps, and JSON/CSV writers use fixed ordering, so a replay
of the same config yields byte-identical artifacts (with workers=1;
multi-worker runs write the same bytes because outputs are collected and
written in config order).  The time limit in budgets is recorded and
checked after each experiment (post-hoc flag); the node limit is enforced
inside generators and the exact solver.
"""
from __future__ import annotations

import csv
import hashlib
import io as _io
import json
import threading
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import numpy as np

from ._version import __version__
from .errors import ConfigError, InputError, SepLabError, VerificationError
from .generate import (TessellationSpec, grid, random_regular, regular_tree,
                       tessellation_disk)
from .graph import Graph, bfs_root
from .io import load_graph, to_json
from .profile import (FAMILY_KINDS, ProfileCurve, classify_growth,
                      fit_against_log, profile_estimate)
from .separator import SeparatorCertificate, cut_bounds, verify_certificate
from .spheres import (bounded_sphere_separation_test, delta_hat, sector_stats,
                      shadow_index)
from .amalgam import (ComplexSpec, LineFamily, build_X, cut_X_experiment,
                      volume_report)

EXPERIMENT_KINDS = ("profile", "cut", "spheres", "amalgam")
GRAPH_KINDS = ("grid", "regular-tree", "random-regular", "tessellation", "file")
EMBED_LIMIT = 100_000          # larger graphs are stored as a content hash

PROFILE_COLUMNS = ("family", "n", "lower", "upper", "source")
SPHERES_COLUMNS = ("R", "sphere_size", "thick_size", "cut_lower", "cut_upper",
                   "alpha_hat", "K_hat")
AMALGAM_COLUMNS = ("R", "vol_base", "vol_attached", "line_count", "vol_X",
                   "ratio", "lower", "upper")


# ---------------------------------------------------------------------------
# config validation
# ---------------------------------------------------------------------------

def _parse_beta(value) -> Fraction:
    if isinstance(value, str):
        return Fraction(value)
    return Fraction(value).limit_denominator(10**6)


def _check_graph_spec(spec, where: str, problems: list[str]) -> None:
    if not isinstance(spec, dict):
        problems.append(f"{where}: must be an object")
        return
    kind = spec.get("kind")
    if kind not in GRAPH_KINDS:
        problems.append(f"{where}.kind: expected one of {GRAPH_KINDS}, "
                        f"got {kind!r}")
        return
    need = {"grid": ("rows", "cols"), "regular-tree": ("degree", "depth"),
            "random-regular": ("n", "degree"), "tessellation": ("p", "q", "radius"),
            "file": ("path",)}[kind]
    for key in need:
        if key not in spec:
            problems.append(f"{where}.{key}: required for kind {kind!r}")
        elif kind != "file" and not isinstance(spec[key], int):
            problems.append(f"{where}.{key}: must be an integer")


@dataclass
class ExperimentConfig:
    """Validated batch description; see module docstring for the schema."""
    seed: int = 0
    beta: Fraction = Fraction(1, 2)
    delta: int | None = None
    node_limit: int = 2_000_000
    time_limit: float | None = None
    workers: int = 1
    experiments: list[dict] = field(default_factory=list)
    raw: dict = field(default_factory=dict)

    @staticmethod
    def from_dict(cfg: dict) -> "ExperimentConfig":
        problems: list[str] = []
        if not isinstance(cfg, dict):
            raise ConfigError("config: top level must be a JSON object")
        seed = cfg.get("seed", 0)
        if not isinstance(seed, int) or seed < 0:
            problems.append("seed: must be a non-negative integer")
        try:
            beta = _parse_beta(cfg.get("beta", "1/2"))
            if not (0 < beta < 1):
                problems.append("beta: must lie strictly between 0 and 1")
        except (ValueError, ZeroDivisionError, TypeError):
            problems.append("beta: unparseable fraction")
            beta = Fraction(1, 2)
        delta = cfg.get("delta")
        if delta is not None and (not isinstance(delta, int) or delta < 1):
            problems.append("delta: must be a positive integer or null")
        budgets = cfg.get("budgets", {})
        if not isinstance(budgets, dict):
            problems.append("budgets: must be an object")
            budgets = {}
        node_limit = budgets.get("node_limit", 2_000_000)
        if not isinstance(node_limit, int) or node_limit <= 0:
            problems.append("budgets.node_limit: must be a positive integer")
        time_limit = budgets.get("time_limit")
        if time_limit is not None and not isinstance(time_limit, (int, float)):
            problems.append("budgets.time_limit: must be a number or null")
        workers = cfg.get("workers", 1)
        if not isinstance(workers, int) or workers < 1:
            problems.append("workers: must be a positive integer")
        exps = cfg.get("experiments")
        if not isinstance(exps, list) or not exps:
            problems.append("experiments: must be a non-empty list")
            exps = []
        seen_ids = set()
        for i, exp in enumerate(exps):
            where = f"experiments[{i}]"
            if not isinstance(exp, dict):
                problems.append(f"{where}: must be an object")
                continue
            eid = exp.get("id")
            if not isinstance(eid, str) or not eid or any(
                    c for c in eid if not (c.isalnum() or c in "-_")):
                problems.append(f"{where}.id: must be a nonempty "
                                f"[A-Za-z0-9_-] string")
            elif eid in seen_ids:
                problems.append(f"{where}.id: duplicate id {eid!r}")
            else:
                seen_ids.add(eid)
            kind = exp.get("kind")
            if kind not in EXPERIMENT_KINDS:
                problems.append(f"{where}.kind: expected one of "
                                f"{EXPERIMENT_KINDS}, got {kind!r}")
                continue
            if kind in ("profile", "cut", "spheres"):
                _check_graph_spec(exp.get("graph"), f"{where}.graph", problems)
            if kind == "profile":
                fam = exp.get("family")
                if not isinstance(fam, dict) or fam.get("kind") not in FAMILY_KINDS:
                    problems.append(f"{where}.family.kind: expected one of "
                                    f"{FAMILY_KINDS}")
            if kind == "spheres":
                rr = exp.get("R_range")
                if (not isinstance(rr, list) or not rr
                        or not all(isinstance(r, int) and r >= 1 for r in rr)):
                    problems.append(f"{where}.R_range: must be a non-empty "
                                    f"list of radii >= 1")
            if kind == "amalgam":
                tiling = exp.get("tiling")
                if (not isinstance(tiling, list) or len(tiling) != 2
                        or not all(isinstance(v, int) for v in tiling)):
                    problems.append(f"{where}.tiling: must be [p, q]")
                if exp.get("lines") not in ("axis-orbit", "reflection-lines"):
                    problems.append(f"{where}.lines: expected 'axis-orbit' "
                                    f"or 'reflection-lines'")
                rr = exp.get("R_range")
                if (not isinstance(rr, list) or not rr
                        or not all(isinstance(r, int) and r % 3 == 0 and r >= 3
                                   for r in rr)):
                    problems.append(f"{where}.R_range: must be a non-empty "
                                    f"list of positive multiples of 3")
        if problems:
            raise ConfigError("invalid config: " + "; ".join(problems))
        return ExperimentConfig(seed=seed, beta=beta, delta=delta,
                                node_limit=node_limit, time_limit=time_limit,
                                workers=workers, experiments=exps, raw=cfg)


def _build_graph(spec: dict, seed: int, node_limit: int) -> Graph:
    kind = spec["kind"]
    if kind == "grid":
        return grid(spec["rows"], spec["cols"])
    if kind == "regular-tree":
        return regular_tree(spec["degree"], spec["depth"])
    if kind == "random-regular":
        return random_regular(spec["n"], spec["degree"], seed=spec.get("seed", seed))
    if kind == "tessellation":
        return tessellation_disk(TessellationSpec(spec["p"], spec["q"]),
                                 spec["radius"], node_limit).graph
    return load_graph(spec["path"])


# ---------------------------------------------------------------------------
# deterministic writers
# ---------------------------------------------------------------------------

def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.10g}"
    return "" if x is None else str(x)


def _write_csv(path: Path, columns, rows) -> None:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    path.write_text(buf.getvalue())


_PLOT_LOCK = threading.Lock()  # matplotlib is not thread safe


def _plot_curve(points, out_loglog: Path, out_semilog: Path, title: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    from matplotlib import pyplot as plt
    matplotlib.rcParams["svg.hashsalt"] = "seplab"
    ns = [p.n for p in points]
    lo = [p.lower for p in points]
    up = [p.upper for p in points]
    with _PLOT_LOCK:
        for path, yscale in ((out_loglog, "log"), (out_semilog, "linear")):
            fig, ax = plt.subplots(figsize=(5.0, 3.5))
            ax.plot(ns, lo, "o-", label="lower bound")
            ax.plot(ns, up, "s--", label="upper bound")
            ax.set_xscale("log")
            ax.set_yscale(yscale)
            ax.set_xlabel("n")
            ax.set_ylabel("cut bound")
            ax.set_title(title)
            ax.legend()
            fig.tight_layout()
            fig.savefig(path, format="svg", metadata={"Date": None})
            plt.close(fig)


def _store_graph(g: Graph, path: Path) -> dict:
    """Embed small graphs; record large ones by content hash."""
    if g.n <= EMBED_LIMIT:
        path.write_text(to_json(g))
        return {"path": path.name, "n": g.n, "m": g.m}
    digest = hashlib.sha256(g.edge_list().tobytes()).hexdigest()
    stub = {"content_hash": digest, "n": g.n, "m": g.m}
    _write_json(path, stub)
    return {"path": path.name, "n": g.n, "m": g.m, "content_hash": digest}


# ---------------------------------------------------------------------------
# per-kind runners
# ---------------------------------------------------------------------------

def _run_profile(exp: dict, cfg: ExperimentConfig, out: Path) -> dict:
    g = _build_graph(exp["graph"], cfg.seed, cfg.node_limit)
    beta = _parse_beta(exp.get("beta", cfg.beta))
    opts = {k: exp[k] for k in ("exact_threshold", "seed") if k in exp}
    opts.setdefault("seed", cfg.seed)
    curve = profile_estimate(g, exp["family"], beta, **opts)
    csv_path = out / f"{exp['id']}.csv"
    _write_csv(csv_path, PROFILE_COLUMNS, curve.to_rows())
    results: dict[str, Any] = {"points": len(curve.points), "beta": str(beta)}
    if exp.get("classify", True):
        tag = classify_growth(curve)
        results["growth"] = {
            "tag": tag.tag, "exponent": tag.exponent,
            "exponent_ci": list(tag.exponent_ci) if tag.exponent_ci else None,
            "r2": tag.r2,
        }
        a, b, r2 = fit_against_log(curve)
        results["log_fit"] = {"a": a, "b": b, "r2": r2}
    svgs = [out / f"{exp['id']}.loglog.svg", out / f"{exp['id']}.semilog.svg"]
    _plot_curve(curve.points, svgs[0], svgs[1], exp["id"])
    return {"results": results, "csv": csv_path.name,
            "svg": [p.name for p in svgs]}


def _run_cut(exp: dict, cfg: ExperimentConfig, out: Path) -> dict:
    g = _build_graph(exp["graph"], cfg.seed, cfg.node_limit)
    beta = _parse_beta(exp.get("beta", cfg.beta))
    opts = {k: exp[k] for k in ("exact_threshold", "strategies") if k in exp}
    bounds = cut_bounds(g, beta, seed=cfg.seed, node_budget=cfg.node_limit,
                        **opts)
    graph_info = _store_graph(g, out / f"{exp['id']}.graph.json")
    certs = []
    for k, c in enumerate(bounds.certificates):
        d = c.to_dict()
        d["id"] = f"{exp['id']}/{k}"
        certs.append(d)
    certs_path = out / f"{exp['id']}.certs.json"
    _write_json(certs_path, {"graph": graph_info["path"], "certificates": certs})
    return {"results": {"lower": bounds.lower, "upper": bounds.upper,
                        "beta": str(beta), "note": bounds.note},
            "graph": graph_info, "certificates": certs_path.name}


def _run_spheres(exp: dict, cfg: ExperimentConfig, out: Path) -> dict:
    gspec = dict(exp["graph"])
    if gspec["kind"] != "tessellation":
        raise InputError("spheres experiments need a tessellation graph")
    disk = tessellation_disk(TessellationSpec(gspec["p"], gspec["q"]),
                             gspec["radius"], cfg.node_limit)
    b = disk.root
    delta = exp.get("delta", cfg.delta)
    if delta is None:
        delta = delta_hat(b)
    beta = _parse_beta(exp.get("beta", cfg.beta))
    R_range = exp["R_range"]
    report = bounded_sphere_separation_test(b, delta, R_range, beta)
    rows = []
    for row in report.rows:
        alpha = khat = None
        if 3 * row.R <= b.radius:
            stats = sector_stats(shadow_index(b, row.R))
            alpha, khat = stats.alpha_hat, stats.K_hat_sector
        rows.append((row.R, row.sphere_size, row.thick_size,
                     row.bounds.lower, row.bounds.upper, alpha, khat))
    csv_path = out / f"{exp['id']}.csv"
    _write_csv(csv_path, SPHERES_COLUMNS, rows)
    return {"results": {"delta": delta, "max_upper": report.max_upper,
                        "upper_slope": report.upper_slope, "beta": str(beta)},
            "csv": csv_path.name}


def _run_amalgam(exp: dict, cfg: ExperimentConfig, out: Path) -> dict:
    p, q = exp["tiling"]
    spec = ComplexSpec(TessellationSpec(p, q), LineFamily(exp["lines"]))
    beta = _parse_beta(exp.get("beta", cfg.beta))
    R_range = sorted(set(exp["R_range"]))
    metas = [build_X(spec, R, budget=cfg.node_limit)[1] for R in R_range]
    vol = volume_report(metas)
    curve = cut_X_experiment(spec, R_range, beta, budget=cfg.node_limit,
                             seed=cfg.seed)
    by_R = {int(pt.source.split("=", 1)[1]): pt for pt in curve.points}
    rows = []
    for vr in vol.rows:
        pt = by_R[vr.R]
        rows.append((vr.R, vr.vol_base, vr.vol_attached, vr.line_count,
                     vr.vol_X, vr.ratio, pt.lower, pt.upper))
    csv_path = out / f"{exp['id']}.csv"
    _write_csv(csv_path, AMALGAM_COLUMNS, rows)
    svgs = [out / f"{exp['id']}.loglog.svg", out / f"{exp['id']}.semilog.svg"]
    _plot_curve(curve.points, svgs[0], svgs[1], exp["id"])
    return {"results": {"ratios": [vr.ratio for vr in vol.rows],
                        "volume_flags": vol.flags, "beta": str(beta),
                        "lower_over_R": [by_R[vr.R].lower / vr.R
                                         for vr in vol.rows]},
            "csv": csv_path.name, "svg": [p.name for p in svgs]}


_RUNNERS: dict[str, Callable] = {
    "profile": _run_profile, "cut": _run_cut,
    "spheres": _run_spheres, "amalgam": _run_amalgam,
}


# ---------------------------------------------------------------------------
# run / verify
# ---------------------------------------------------------------------------

def run(config: dict | ExperimentConfig, out_dir) -> dict:
    """Execute every experiment in the config; write the report bundle.

    Failures are isolated per experiment: a failing entry gets an error
    record in the summary and the rest still run.  Returns the summary.
    """
    cfg = (config if isinstance(config, ExperimentConfig)
           else ExperimentConfig.from_dict(config))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / "config.json", cfg.raw)

    def one(exp: dict) -> dict:
        entry = {"id": exp["id"], "kind": exp["kind"]}
        t0 = time.monotonic()
        try:
            entry.update(_RUNNERS[exp["kind"]](exp, cfg, out))
            entry["status"] = "ok"
        except Exception as e:           # isolate per experiment
            entry["status"] = "error"
            entry["error"] = f"{type(e).__name__}: {e}"
        elapsed = time.monotonic() - t0
        entry["elapsed_s"] = round(elapsed, 3)
        if cfg.time_limit is not None and elapsed > cfg.time_limit:
            entry["time_limit_exceeded"] = True
        return entry

    if cfg.workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            entries = list(pool.map(one, cfg.experiments))
    else:
        entries = [one(exp) for exp in cfg.experiments]

    summary = {
        "tool": {"name": "seplab", "version": __version__},
        "experiments": entries,
        "ok": sum(1 for e in entries if e["status"] == "ok"),
        "failed": sum(1 for e in entries if e["status"] != "ok"),
    }
    # elapsed times vary run to run; keep them out of the replay contract
    replay = json.loads(json.dumps(summary))
    for e in replay["experiments"]:
        e.pop("elapsed_s", None)
    _write_json(out / "summary.json", replay)
    return summary


def verify(bundle_dir) -> tuple[bool, list[str]]:
    """Re-verify every certificate in a bundle from its serialized graphs.

    Returns (ok, failures); each failure names the certificate id or the
    broken invariant.  A missing or hash-only graph fails the experiments
    that need it.
    """
    out = Path(bundle_dir)
    try:
        summary = json.loads((out / "summary.json").read_text())
    except FileNotFoundError:
        return False, ["bundle: summary.json missing"]
    failures: list[str] = []
    for entry in summary.get("experiments", []):
        eid = entry.get("id", "?")
        res = entry.get("results", {})
        if ("lower" in res and "upper" in res
                and res["lower"] > res["upper"]):
            failures.append(f"{eid}: interval invariant violated "
                            f"(lower {res['lower']} > upper {res['upper']})")
        cert_file = entry.get("certificates")
        if not cert_file:
            continue
        try:
            blob = json.loads((out / cert_file).read_text())
        except FileNotFoundError:
            failures.append(f"{eid}: certificate file {cert_file} missing")
            continue
        gname = blob.get("graph")
        gpath = out / gname if gname else None
        g = None
        if gpath is not None and gpath.exists():
            doc = json.loads(gpath.read_text())
            if "content_hash" in doc:
                failures.append(f"{eid}: graph stored by hash only; "
                                f"certificates not re-verifiable")
            else:
                g = load_graph(gpath)
        else:
            failures.append(f"{eid}: graph file {gname!r} missing")
        if g is None:
            continue
        for d in blob.get("certificates", []):
            cid = d.get("id", f"{eid}/?")
            try:
                cert = SeparatorCertificate.from_dict(d)
                if not verify_certificate(g, cert):
                    failures.append(f"{cid}: certificate does not verify "
                                    f"against the stored graph")
            except (SepLabError, KeyError, ValueError) as e:
                failures.append(f"{cid}: {e}")
    return (not failures), failures
