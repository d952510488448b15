import json

import numpy as np
import pytest

from tsplex import build_complex, save_complex
from tsplex.cli import EXIT_CONFIG, EXIT_DATA, main
from tsplex.signals import SignalMatrix, save_signal_csv


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured


def test_gen_then_decompose_and_analyze(tmp_path, capsys):
    gen_dir = tmp_path / "gen"
    code, _ = run(capsys, "gen", "--seed", "7", "--nodes", "9", "--edge-prob", "0.6",
                  "--fill-prob", "0.5", "--samples", "40", "--mix", "1,1,0",
                  "--out-dir", str(gen_dir))
    assert code == 0
    manifest = json.loads((gen_dir / "manifest.json").read_text())
    assert manifest["provenance"]["seed"] == 7

    dec_dir = tmp_path / "dec"
    code, _ = run(capsys, "decompose", "--complex", str(gen_dir / "complex.json"),
                  "--signals", str(gen_dir / "signals.csv"), "--out-dir", str(dec_dir))
    assert code == 0
    summary = json.loads((dec_dir / "energy_summary.json").read_text())
    parts = (summary["irrotational_energy"] + summary["solenoidal_energy"]
             + summary["harmonic_energy"])
    assert parts == pytest.approx(summary["total_energy"], rel=1e-8)

    an_dir = tmp_path / "an"
    code, _ = run(capsys, "analyze", "--complex", str(gen_dir / "complex.json"),
                  "--signals", str(gen_dir / "signals.csv"), "--out-dir", str(an_dir))
    assert code == 0
    assert (an_dir / "mean_divergence.csv").exists()
    assert (an_dir / "report.json").exists()


def test_analyze_cyclic_flow_fixture(tmp_path, capsys):
    cx = build_complex(3, [(0, 1), (0, 2), (1, 2)], [(0, 1, 2)])
    save_complex(cx, tmp_path / "c.json")
    sig = SignalMatrix(np.tile([[1.0], [-1.0], [1.0]], (1, 4)), 1)
    save_signal_csv(sig, tmp_path / "s.csv")
    out = tmp_path / "out"
    code, _ = run(capsys, "analyze", "--complex", str(tmp_path / "c.json"),
                  "--signals", str(tmp_path / "s.csv"), "--out-dir", str(out))
    assert code == 0
    lines = (out / "mean_curl.csv").read_text().strip().splitlines()
    assert lines[0] == "i,j,k,mean_curl"
    assert lines[1].startswith("0,1,2,") and float(lines[1].split(",")[3]) == 3.0


def test_learn_stat_cli(tmp_path, capsys):
    rng = np.random.default_rng(0)
    in_dir = tmp_path / "subjects"
    in_dir.mkdir()
    for s in range(2):
        latent = rng.standard_normal(200)
        rows = np.vstack([latent + 0.3 * rng.standard_normal(200) for _ in range(3)]
                         + [rng.standard_normal((3, 200))])
        np.savetxt(in_dir / f"subj{s}.csv", rows, delimiter=",")
    out = tmp_path / "out"
    code, _ = run(capsys, "learn-stat", "--input-dir", str(in_dir),
                  "--edge-fraction", "0.3", "--triangle-count", "1",
                  "--out-dir", str(out))
    assert code == 0
    doc = json.loads((out / "complex.json").read_text())
    assert doc["triangles"] == [[0, 1, 2]]
    assert doc["provenance"]["pre_closure_edges"] == int(0.3 * 15)
    weights = (out / "triangle_weights.csv").read_text().strip().splitlines()
    assert len(weights) == 1 + 20  # header + C(6,3)


def test_learn_joint_cli(tmp_path, capsys):
    from tsplex.synthetic import gen_planted_instance

    inst = gen_planted_instance(seed=3)
    skeleton = build_complex(inst.complex.n_nodes, inst.complex.edges)
    save_complex(skeleton, tmp_path / "skel.json")
    save_signal_csv(SignalMatrix(inst.signals, 1), tmp_path / "y.csv")
    out = tmp_path / "out"
    code, _ = run(capsys, "learn-joint", "--complex", str(tmp_path / "skel.json"),
                  "--signals", str(tmp_path / "y.csv"),
                  "--alpha1", str(inst.alpha1), "--alpha2", str(inst.alpha2),
                  "--out-dir", str(out))
    assert code == 0
    doc = json.loads((out / "complex.json").read_text())
    assert sorted(tuple(t) for t in doc["triangles"]) == list(inst.planted_triangles)
    trace = (out / "trace.csv").read_text().splitlines()
    assert trace[0] == "q,g,wall_time"
    assert len(trace) > 2


def test_missing_input_exits_2(tmp_path, capsys):
    code, captured = run(capsys, "analyze", "--complex", str(tmp_path / "nope.json"),
                         "--signals", str(tmp_path / "nope.csv"),
                         "--out-dir", str(tmp_path / "o"))
    assert code == EXIT_DATA
    err = json.loads(captured.err)
    assert err["kind"] == "data"


def test_unknown_config_key_exits_1(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"bogus-key": 1}))
    code, captured = run(capsys, "gen", "--config", str(cfg), "--seed", "1",
                         "--out-dir", str(tmp_path / "o"))
    assert code == EXIT_CONFIG
    err = json.loads(captured.err)
    assert err["kind"] == "config"


def test_missing_seed_exits_1(tmp_path, capsys):
    code, captured = run(capsys, "gen", "--out-dir", str(tmp_path / "o"))
    assert code == EXIT_CONFIG


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"nodes": 7, "edge-prob": 0.7, "seed": 5,
                               "out-dir": str(tmp_path / "a"), "mix": [1, 0, 0]}))
    code, _ = run(capsys, "gen", "--config", str(cfg))
    assert code == 0
    code, _ = run(capsys, "gen", "--config", str(cfg), "--out-dir", str(tmp_path / "b"))
    assert code == 0
    a = json.loads((tmp_path / "a" / "complex.json").read_text())
    b = json.loads((tmp_path / "b" / "complex.json").read_text())
    assert a["edges"] == b["edges"]
