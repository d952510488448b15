"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion lines.
"""

import json
import time
from itertools import combinations

import numpy as np
import pytest
import sympy

from tsplex import (
    JointLearnConfig,
    build_complex,
    candidate_triangles,
    close_under_inclusion,
    curl,
    divergence,
    hodge_decompose,
    incidence,
    learn_joint,
    partition_subspaces,
    select_top_edges,
    sparse_fit,
    total_correlation,
)
from tsplex._backend import COV_REGULARIZATION
from tsplex.analytics import mean_curl, mean_divergence
from tsplex.cli import main as cli_main
from tsplex.complexes import triangle_faces
from tsplex.signals import SignalMatrix
from tsplex.synthetic import gen_complex, gen_planted_instance


def _report(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name}" + (f" ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


def test_criterion_1_combinatorial_reproduction():
    t0 = time.perf_counter()
    rng = np.random.default_rng(0)
    a = rng.random((116, 116))
    corr = (a + a.T) / 2
    edges = select_top_edges(corr, 0.05)
    n_candidates = len(candidate_triangles(
        build_complex(116, list(combinations(range(116), 2)))
    ))
    # synthetic stand-in: 333 edges, 200 triangles over them
    stand_in = build_complex(116, edges)
    tris = candidate_triangles(stand_in)[:200]
    closed = close_under_inclusion(edges, tris)
    eset = set(closed)
    inclusion_ok = all(f in eset for t in tris for f in triangle_faces(t))
    elapsed = time.perf_counter() - t0
    _report(
        "criterion 1: combinatorial reproduction",
        len(edges) == 333
        and n_candidates == 253460
        and len(closed) >= 333
        and inclusion_ok
        and elapsed < 1.0,
        f"edges={len(edges)}, candidates={n_candidates}, closed={len(closed)}, {elapsed:.2f}s",
    )


def test_criterion_2_algebraic_identity_suite():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    ok = True
    for trial in range(100):
        n = int(rng.integers(4, 31))
        cx = gen_complex(n, float(rng.uniform(0.15, 0.45)), float(rng.uniform(0.2, 1.0)),
                         int(rng.integers(2**32)))
        inc = incidence(cx)
        e = cx.n_edges
        if e == 0:
            continue
        ok &= np.abs(inc.b1 @ inc.b2).max(initial=0) == 0
        s = rng.standard_normal(e)
        parts = hodge_decompose(inc, s)
        scale = max(np.linalg.norm(s), 1e-30)
        ok &= np.linalg.norm(parts.total - s) < 1e-8 * scale
        ok &= abs(parts.irrotational @ parts.solenoidal) < 1e-8 * scale**2
        ok &= abs(parts.irrotational @ parts.harmonic) < 1e-8 * scale**2
        ok &= abs(parts.solenoidal @ parts.harmonic) < 1e-8 * scale**2
        ok &= np.abs(divergence(inc, parts.solenoidal)).max(initial=0) < 1e-10 * scale
        ok &= np.abs(curl(inc, parts.irrotational)).max(initial=0) < 1e-10 * scale
        ok &= sum(partition_subspaces(inc).dims) == e
        if not ok:
            break
    elapsed = time.perf_counter() - t0
    _report("criterion 2: algebraic identity suite (100 complexes)",
            ok and elapsed < 10.0, f"{elapsed:.2f}s")


def _betti1_oracle(cx):
    """Independent cycles (spanning forest count) minus exact rank of b2."""
    parent = list(range(cx.n_nodes))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i, j in cx.edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    components = len({find(v) for v in range(cx.n_nodes)})
    cycles = cx.n_edges - cx.n_nodes + components
    b2 = incidence(cx).b2
    rank_b2 = sympy.Matrix(b2.tolist()).rank() if cx.n_triangles else 0
    return cycles - rank_b2


def test_criterion_3_betti_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    ok = True
    for trial in range(50):
        n = int(rng.integers(3, 9))
        cx = gen_complex(n, float(rng.uniform(0.3, 0.9)), float(rng.uniform(0.0, 1.0)),
                         int(rng.integers(2**32)))
        if cx.n_edges == 0:
            continue
        n_h = partition_subspaces(incidence(cx)).dims[2]
        ok &= n_h == _betti1_oracle(cx)
        if not ok:
            break
    elapsed = time.perf_counter() - t0
    _report("criterion 3: Betti oracle (50 complexes)", ok and elapsed < 5.0,
            f"{elapsed:.2f}s")


def test_criterion_4_tc_oracle_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    ok = True
    worst = 0.0
    for _ in range(1000):
        while True:
            base = rng.standard_normal((3, 60))
            mixm = np.eye(3) + 0.5 * rng.standard_normal((3, 3))
            x = mixm @ base
            if np.linalg.det(np.corrcoef(x)) > 1e-3:  # non-degenerate triples only
                break
        tc = total_correlation(x[0], x[1], x[2])
        # independent route: correlation matrix of the (regularized) covariance
        cov = np.cov(x, ddof=1) + COV_REGULARIZATION * np.eye(3)
        sd = np.sqrt(np.diag(cov))
        oracle = -0.5 * np.log(np.linalg.det(cov / np.outer(sd, sd)))
        worst = max(worst, abs(tc - oracle))
        ok &= abs(tc - oracle) < 1e-9
    x = rng.standard_normal((3, 100000))
    tc_indep = total_correlation(x[0], x[1], x[2])
    ok &= abs(tc_indep) < 0.01
    elapsed = time.perf_counter() - t0
    _report("criterion 4: TC oracle equivalence (1000 triples)",
            ok and elapsed < 10.0,
            f"worst |diff|={worst:.2e}, indep TC={tc_indep:.4f}, {elapsed:.2f}s")


def test_criterion_5_joint_planted_recovery():
    t0 = time.perf_counter()
    f1s, hits = [], 0
    for seed in range(20):
        inst = gen_planted_instance(seed=seed)
        skeleton = build_complex(inst.complex.n_nodes, inst.complex.edges)
        cfg = JointLearnConfig(alpha1=inst.alpha1, alpha2=inst.alpha2)
        res = learn_joint(inst.signals, skeleton, cfg)
        got, true = set(res.selected_triangles), set(inst.planted_triangles)
        tp = len(got & true)
        f1s.append(2 * tp / (len(got) + len(true)) if got or true else 1.0)
        if abs(res.q_star - len(true)) <= 2:
            hits += 1
    elapsed = time.perf_counter() - t0
    mean_f1 = float(np.mean(f1s))
    _report("criterion 5: joint-learner planted recovery (20 seeds)",
            mean_f1 >= 0.9 and hits >= 16 and elapsed < 120.0,
            f"mean F1={mean_f1:.3f}, argmin within +/-2 in {hits}/20, {elapsed:.1f}s")


def test_criterion_6_solver_certification():
    rng = np.random.default_rng(4)
    ok = True
    for seed in range(10):
        e, kc, kh = 14, 5, 3
        q, _ = np.linalg.qr(rng.standard_normal((e, kc + kh)))
        u_c, u_h = q[:, :kc], q[:, kc:]
        y = rng.standard_normal((e, 9))
        a1, a2 = float(rng.uniform(0.2, 2.0)), float(rng.uniform(0.2, 2.0))
        res = sparse_fit(y, u_c, u_h, alpha1=a1, alpha2=a2)
        trace = res.objective_trace
        ok &= bool((np.diff(trace) <= 1e-12 * np.maximum(1.0, np.abs(trace[:-1]))).all())
        ok &= np.abs(res.coeffs_sol).sum(axis=0).max(initial=0.0) <= a1 * (1 + 1e-8)
        ok &= np.abs(res.coeffs_harm).sum(axis=0).max(initial=0.0) <= a2 * (1 + 1e-8)
        recomputed = float(
            np.linalg.norm(y - u_c @ res.coeffs_sol - u_h @ res.coeffs_harm) ** 2
        )
        ok &= abs(res.fit_error - recomputed) <= 1e-8 * max(1.0, recomputed)
    _report("criterion 6: solver certification", ok)


def _run_cli(*argv):
    assert cli_main(list(argv)) == 0


def _snapshot(paths):
    return {p.name: p.read_bytes() for p in paths}


def test_criterion_7_cli_determinism(tmp_path):
    from tsplex.complexes import save_complex
    from tsplex.signals import save_signal_csv

    # gen twice into the same directory, snapshotting between runs
    gen_dir = tmp_path / "gen"
    runs = []
    for _ in range(2):
        _run_cli("gen", "--seed", "11", "--nodes", "8", "--edge-prob", "0.6",
                 "--fill-prob", "0.4", "--samples", "30", "--mix", "1,1,0",
                 "--snr-db", "20", "--out-dir", str(gen_dir))
        runs.append(_snapshot([gen_dir / "complex.json", gen_dir / "signals.csv",
                               gen_dir / "manifest.json"]))
    gen_ok = runs[0] == runs[1]

    # learn-stat twice, across thread counts
    rng = np.random.default_rng(5)
    in_dir = tmp_path / "subjects"
    in_dir.mkdir()
    for s in range(2):
        np.savetxt(in_dir / f"s{s}.csv", rng.standard_normal((7, 80)), delimiter=",")
    runs = []
    d = tmp_path / "stat"
    for threads in ("1", "1", "4"):
        _run_cli("learn-stat", "--input-dir", str(in_dir), "--edge-fraction", "0.3",
                 "--triangle-count", "5", "--threads", threads, "--out-dir", str(d))
        snap = _snapshot([d / "complex.json", d / "triangle_weights.csv"])
        snap = {k: v.replace(f'"threads": {threads}'.encode(), b'"threads": X')
                for k, v in snap.items()}
        runs.append(snap)
    stat_ok = runs[0] == runs[1] == runs[2]

    # learn-joint twice, across thread counts
    inst = gen_planted_instance(seed=9)
    skeleton = build_complex(inst.complex.n_nodes, inst.complex.edges)
    save_complex(skeleton, tmp_path / "skel.json")
    save_signal_csv(SignalMatrix(inst.signals, 1), tmp_path / "y.csv")
    runs = []
    d = tmp_path / "joint"
    for threads in ("1", "1", "4"):
        _run_cli("learn-joint", "--complex", str(tmp_path / "skel.json"),
                 "--signals", str(tmp_path / "y.csv"),
                 "--alpha1", str(inst.alpha1), "--alpha2", str(inst.alpha2),
                 "--threads", threads, "--out-dir", str(d))
        data = (d / "complex.json").read_bytes()
        runs.append(data.replace(f'"threads": {threads}'.encode(), b'"threads": X'))
    joint_ok = runs[0] == runs[1] == runs[2]

    # decompose and analyze twice each, snapshotting between runs
    runs = []
    d = tmp_path / "dec"
    for _ in range(2):
        _run_cli("decompose", "--complex", str(gen_dir / "complex.json"),
                 "--signals", str(gen_dir / "signals.csv"), "--out-dir", str(d))
        runs.append(_snapshot([d / "irrotational.csv", d / "solenoidal.csv",
                               d / "harmonic.csv", d / "energy_summary.json"]))
    dec_ok = runs[0] == runs[1]
    runs = []
    d = tmp_path / "an"
    for _ in range(2):
        _run_cli("analyze", "--complex", str(gen_dir / "complex.json"),
                 "--signals", str(gen_dir / "signals.csv"), "--out-dir", str(d))
        runs.append(_snapshot(sorted(d.glob("*"))))
    an_ok = runs[0] == runs[1]

    _report("criterion 7: CLI determinism (incl. thread independence)",
            gen_ok and stat_ok and joint_ok and dec_ok and an_ok,
            f"gen={gen_ok} stat={stat_ok} joint={joint_ok} dec={dec_ok} an={an_ok}")


def test_criterion_8_mean_operator_linearity():
    rng = np.random.default_rng(6)
    ok = True
    for seed in range(10):
        cx = gen_complex(12, 0.5, 0.5, seed)
        inc = incidence(cx)
        vals = rng.standard_normal((cx.n_edges, 37))
        sig = SignalMatrix(vals, 1)
        per_sample_div = np.mean([inc.b1 @ vals[:, m] for m in range(37)], axis=0)
        ok &= np.abs(mean_divergence(inc, sig) - per_sample_div).max(initial=0) < 1e-12
        if cx.n_triangles:
            per_sample_curl = np.mean([inc.b2.T @ vals[:, m] for m in range(37)], axis=0)
            ok &= np.abs(mean_curl(inc, sig) - per_sample_curl).max(initial=0) < 1e-12
    _report("criterion 8: mean-operator linearity", ok)
