import hashlib
import json
from pathlib import Path

import pytest

from seplab import ConfigError, __version__, grid
from seplab.experiment import ExperimentConfig, run, verify
from seplab.io import save_graph


def cut_config(**over):
    cfg = {
        "seed": 0,
        "experiments": [
            {"id": "cut16", "kind": "cut", "exact_threshold": 16,
             "graph": {"kind": "grid", "rows": 4, "cols": 4}},
        ],
    }
    cfg.update(over)
    return cfg


def bundle_hashes(out: Path) -> dict:
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest()
            for p in sorted(out.iterdir())}


# ---------------------------------------------------------------------------
# config validation
# ---------------------------------------------------------------------------

def test_config_reports_every_problem_at_once():
    bad = {
        "seed": -1,
        "beta": "nonsense",
        "workers": 0,
        "experiments": [
            {"id": "x", "kind": "magic"},
            {"id": "x!", "kind": "cut", "graph": {"kind": "grid", "rows": 2}},
            {"id": "amal", "kind": "amalgam", "tiling": [4],
             "lines": "spirals", "R_range": [4]},
        ],
    }
    with pytest.raises(ConfigError) as e:
        ExperimentConfig.from_dict(bad)
    msg = str(e.value)
    for frag in ("seed:", "beta:", "workers:",
                 "expected one of ('profile', 'cut', 'spheres', 'amalgam'), "
                 "got 'magic'",
                 "id: must be a nonempty",
                 "graph.cols: required",
                 "tiling: must be [p, q]",
                 "lines: expected",
                 "multiples of 3"):
        assert frag in msg, frag


def test_config_rejects_duplicate_ids():
    cfg = cut_config()
    cfg["experiments"] = cfg["experiments"] * 2
    with pytest.raises(ConfigError, match="duplicate id"):
        ExperimentConfig.from_dict(cfg)


def test_config_defaults_are_filled_in():
    cfg = ExperimentConfig.from_dict(cut_config())
    assert (cfg.seed, str(cfg.beta), cfg.workers) == (0, "1/2", 1)
    assert cfg.node_limit == 2_000_000 and cfg.time_limit is None


# ---------------------------------------------------------------------------
# running bundles
# ---------------------------------------------------------------------------

def test_cut_run_writes_a_complete_bundle(tmp_path):
    summary = run(cut_config(), tmp_path)
    assert summary["tool"] == {"name": "seplab", "version": __version__}
    assert (summary["ok"], summary["failed"]) == (1, 0)
    entry = summary["experiments"][0]
    assert entry["status"] == "ok"
    assert entry["results"] == {"lower": 4, "upper": 4, "beta": "1/2",
                                "note": ""}
    assert entry["elapsed_s"] >= 0
    for name in ("config.json", "summary.json", "cut16.certs.json",
                 "cut16.graph.json"):
        assert (tmp_path / name).exists(), name
    stored = json.loads((tmp_path / "summary.json").read_text())
    assert "elapsed_s" not in stored["experiments"][0]
    certs = json.loads((tmp_path / "cut16.certs.json").read_text())
    assert certs["graph"] == "cut16.graph.json"
    assert certs["certificates"][0]["id"] == "cut16/0"
    assert certs["certificates"][0]["beta"] == "1/2"


def test_profile_run_emits_pinned_csv_and_plots(tmp_path):
    cfg = {"experiments": [
        {"id": "grids", "kind": "profile",
         "graph": {"kind": "grid", "rows": 6, "cols": 6},
         "family": {"kind": "square-subgrids", "rows": 6, "cols": 6}},
    ]}
    summary = run(cfg, tmp_path)
    entry = summary["experiments"][0]
    assert entry["status"] == "ok"
    assert entry["results"]["growth"]["tag"] in (
        "bounded", "log", "power", "superlog-subpoly", "indeterminate")
    lines = (tmp_path / "grids.csv").read_text().splitlines()
    assert lines[0] == "family,n,lower,upper,source"
    assert lines[1] == "square-subgrids,4,2,2,subgrid 2x2"
    for svg in entry["svg"]:
        head = (tmp_path / svg).read_text()[:200]
        assert head.startswith("<?xml")


def test_profile_classification_can_be_switched_off(tmp_path):
    cfg = {"experiments": [
        {"id": "grids", "kind": "profile", "classify": False,
         "graph": {"kind": "grid", "rows": 6, "cols": 6},
         "family": {"kind": "square-subgrids", "rows": 6, "cols": 6}},
    ]}
    entry = run(cfg, tmp_path)["experiments"][0]
    assert entry["status"] == "ok"
    assert "growth" not in entry["results"]


def test_spheres_run_reports_growth_columns(tmp_path):
    cfg = {"experiments": [
        {"id": "sq", "kind": "spheres", "R_range": [3, 4],
         "graph": {"kind": "tessellation", "p": 4, "q": 4, "radius": 9}},
    ]}
    entry = run(cfg, tmp_path)["experiments"][0]
    assert entry["status"] == "ok"
    assert entry["results"]["delta"] == 1       # measured, not configured
    assert entry["results"]["max_upper"] == 3
    lines = (tmp_path / "sq.csv").read_text().splitlines()
    assert lines[0] == "R,sphere_size,thick_size,cut_lower,cut_upper,alpha_hat,K_hat"
    r3, r4 = lines[1].split(","), lines[2].split(",")
    assert r3[0] == "3" and r3[5] != ""         # annulus fits at R=3
    assert r4[0] == "4" and r4[5] == ""         # 3R=12 overflows the ball


def test_amalgam_run_reports_ratios_and_bounds(tmp_path):
    cfg = {"experiments": [
        {"id": "ax", "kind": "amalgam", "tiling": [4, 4],
         "lines": "axis-orbit", "R_range": [6]},
    ]}
    entry = run(cfg, tmp_path)["experiments"][0]
    assert entry["status"] == "ok"
    assert entry["results"]["ratios"] == [pytest.approx(125 / 85)]
    assert entry["results"]["lower_over_R"] == [pytest.approx(7 / 6)]
    lines = (tmp_path / "ax.csv").read_text().splitlines()
    assert lines[0] == "R,vol_base,vol_attached,line_count,vol_X,ratio,lower,upper"
    assert lines[1].startswith("6,85,65,5,125,")


def test_file_graphs_can_be_loaded(tmp_path):
    gpath = tmp_path / "g.edges"
    save_graph(grid(4, 4), gpath, fmt="edgelist")
    cfg = {"experiments": [
        {"id": "fromfile", "kind": "cut", "exact_threshold": 16,
         "graph": {"kind": "file", "path": str(gpath)}},
    ]}
    entry = run(cfg, tmp_path / "out")["experiments"][0]
    assert entry["status"] == "ok"
    assert entry["results"]["lower"] == 4


# ---------------------------------------------------------------------------
# determinism
# ---------------------------------------------------------------------------

def test_replay_is_byte_identical_even_with_workers(tmp_path):
    cfg = {
        "seed": 3,
        "experiments": [
            {"id": "cut16", "kind": "cut",
             "graph": {"kind": "grid", "rows": 4, "cols": 4}},
            {"id": "grids", "kind": "profile",
             "graph": {"kind": "grid", "rows": 6, "cols": 6},
             "family": {"kind": "square-subgrids", "rows": 6, "cols": 6}},
            {"id": "rr", "kind": "cut",
             "graph": {"kind": "random-regular", "n": 40, "degree": 3}},
        ],
    }
    run(cfg, tmp_path / "a")
    run(cfg, tmp_path / "b")
    ha, hb = bundle_hashes(tmp_path / "a"), bundle_hashes(tmp_path / "b")
    assert ha == hb
    run(dict(cfg, workers=2), tmp_path / "c")
    hc = bundle_hashes(tmp_path / "c")
    assert {k: v for k, v in hc.items() if k != "config.json"} == \
        {k: v for k, v in ha.items() if k != "config.json"}


# ---------------------------------------------------------------------------
# verification and failure isolation
# ---------------------------------------------------------------------------

def test_verify_passes_on_an_untouched_bundle(tmp_path):
    run(cut_config(), tmp_path)
    ok, failures = verify(tmp_path)
    assert ok and failures == []


def test_verify_names_a_tampered_certificate(tmp_path):
    run(cut_config(), tmp_path)
    blob = json.loads((tmp_path / "cut16.certs.json").read_text())
    for cert in blob["certificates"]:
        if cert["kind"] == "exact":
            cert["cut_set"] = cert["cut_set"][:-1]
            cert["value"] -= 1
    (tmp_path / "cut16.certs.json").write_text(json.dumps(blob))
    ok, failures = verify(tmp_path)
    assert not ok
    assert any(f.startswith("cut16/0:") for f in failures)


def test_verify_catches_a_forged_interval(tmp_path):
    run(cut_config(), tmp_path)
    summary = json.loads((tmp_path / "summary.json").read_text())
    summary["experiments"][0]["results"]["lower"] = 99
    (tmp_path / "summary.json").write_text(json.dumps(summary))
    ok, failures = verify(tmp_path)
    assert not ok
    assert any("interval invariant violated" in f for f in failures)


def test_verify_requires_the_summary(tmp_path):
    run(cut_config(), tmp_path)
    (tmp_path / "summary.json").unlink()
    ok, failures = verify(tmp_path)
    assert not ok and failures == ["bundle: summary.json missing"]


def test_verify_flags_a_missing_graph_file(tmp_path):
    run(cut_config(), tmp_path)
    (tmp_path / "cut16.graph.json").unlink()
    ok, failures = verify(tmp_path)
    assert not ok
    assert any("graph file" in f and "missing" in f for f in failures)


def test_one_bad_experiment_does_not_sink_the_batch(tmp_path):
    cfg = {"experiments": [
        {"id": "bad", "kind": "spheres", "R_range": [3],
         "graph": {"kind": "grid", "rows": 3, "cols": 3}},
        {"id": "good", "kind": "cut",
         "graph": {"kind": "grid", "rows": 4, "cols": 4}},
    ]}
    summary = run(cfg, tmp_path)
    assert (summary["ok"], summary["failed"]) == (1, 1)
    by_id = {e["id"]: e for e in summary["experiments"]}
    assert by_id["bad"]["status"] == "error"
    assert by_id["bad"]["error"].startswith("InputError:")
    assert by_id["good"]["status"] == "ok"
    ok, _ = verify(tmp_path)
    assert ok  # error entries carry no certificates to check


def test_time_limit_is_flagged_post_hoc(tmp_path):
    cfg = cut_config(budgets={"time_limit": 0})
    summary = run(cfg, tmp_path)
    entry = summary["experiments"][0]
    assert entry["status"] == "ok"
    assert entry.get("time_limit_exceeded") is True
    stored = json.loads((tmp_path / "summary.json").read_text())
    assert stored["experiments"][0].get("time_limit_exceeded") is True
