"""Command-line driver: gen, learn-stat, learn-joint, decompose, analyze.

Every command accepts --config <json file>; explicit flags override file
values, and unknown config keys are rejected. Outputs carry a provenance
block (schema version, config, input hashes, package version).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, analytics, complexes, joint, signals, spectral, statistical, synthetic
from .errors import (
    DegenerateCovariance,
    DimensionMismatch,
    EigenFailure,
    EmptyInput,
    InclusionViolation,
    IndexOutOfRange,
    SolverDivergence,
    TsplexError,
    ZeroSubspace,
    ZeroVariance,
)

SCHEMA_VERSION = 1

EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

_DATA_ERRORS = (
    FileNotFoundError,
    IsADirectoryError,
    json.JSONDecodeError,
    InclusionViolation,
    IndexOutOfRange,
    DimensionMismatch,
    ZeroVariance,
    ZeroSubspace,
    EmptyInput,
)
_NUMERICAL_ERRORS = (EigenFailure, DegenerateCovariance, SolverDivergence)


class ConfigError(Exception):
    pass


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


def _provenance(command: str, config: dict, inputs: list[Path], seed=None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "inputs": {str(p): _sha256(p) for p in sorted(inputs)},
        "tsplex_version": __version__,
        "seed": seed,
    }


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")


def _write_csv(path: Path, header: str, rows) -> None:
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(
                ",".join(
                    format(v, ".17g") if isinstance(v, float) else str(v) for v in row
                )
                + "\n"
            )


def _merge_config(args: argparse.Namespace, keys: dict[str, object], required=()) -> dict:
    """defaults <- config file <- explicit flags; unknown file keys rejected."""
    merged = dict(keys)
    if getattr(args, "config", None):
        try:
            file_cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        unknown = set(file_cfg) - set(keys)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        merged.update(file_cfg)
    for key in keys:
        flag = getattr(args, key.replace("-", "_"), None)
        if flag is not None:
            merged[key] = flag
    missing = [k for k in required if merged.get(k) is None]
    if missing:
        raise ConfigError(f"missing required settings: {sorted(missing)}")
    return merged


def _load_signals(path: Path, cx: complexes.OrientedComplex, level: int) -> signals.SignalMatrix:
    sig = signals.load_signal_csv(path, level=level)
    sig.check_against(cx)
    return sig


def cmd_gen(args) -> int:
    cfg = _merge_config(args, {
        "nodes": 10, "edge-prob": 0.5, "fill-prob": 0.5, "samples": 100,
        "mix": [1.0, 1.0, 0.0], "snr-db": None, "seed": None, "out-dir": None,
    }, required=("seed", "out-dir"))
    mix = cfg["mix"]
    if isinstance(mix, str):
        mix = [float(v) for v in mix.split(",")]
    if len(mix) != 3:
        raise ConfigError("mix must have three weights: grad,sol,harm")
    out = Path(cfg["out-dir"])
    out.mkdir(parents=True, exist_ok=True)
    cx = synthetic.gen_complex(int(cfg["nodes"]), float(cfg["edge-prob"]),
                               float(cfg["fill-prob"]), int(cfg["seed"]))
    y = synthetic.gen_edge_signals(
        cx, tuple(float(v) for v in mix), int(cfg["samples"]),
        None if cfg["snr-db"] is None else float(cfg["snr-db"]), int(cfg["seed"]),
    )
    prov = _provenance("gen", _jsonable(cfg), [], seed=int(cfg["seed"]))
    complexes.save_complex(cx, out / "complex.json", extra={"provenance": prov})
    signals.save_signal_csv(signals.SignalMatrix(y, level=1), out / "signals.csv")
    _write_json(out / "manifest.json", {"provenance": prov,
                                        "n_nodes": cx.n_nodes,
                                        "n_edges": cx.n_edges,
                                        "n_triangles": cx.n_triangles})
    return 0


def cmd_learn_stat(args) -> int:
    cfg = _merge_config(args, {
        "input-dir": None, "edge-fraction": 0.05, "triangle-count": 200,
        "estimator": "gaussian", "bins": 8, "threads": 1, "out-dir": None,
    }, required=("input-dir", "out-dir"))
    in_dir = Path(cfg["input-dir"])
    paths = sorted(in_dir.glob("*.csv"))
    if not paths:
        raise FileNotFoundError(f"no subject CSV files in {in_dir}")
    subjects = [
        statistical.NodeSeriesSet(np.loadtxt(p, delimiter=",", ndmin=2), subject_id=p.stem)
        for p in paths
    ]
    res = statistical.learn_statistical_detailed(
        subjects,
        edge_fraction=float(cfg["edge-fraction"]),
        triangle_count=int(cfg["triangle-count"]),
        estimator=str(cfg["estimator"]),
        n_bins=int(cfg["bins"]),
        threads=int(cfg["threads"]),
    )
    out = Path(cfg["out-dir"])
    out.mkdir(parents=True, exist_ok=True)
    prov = _provenance("learn-stat", _jsonable(cfg), paths)
    prov["pre_closure_edges"] = len(res.skeleton_edges)
    complexes.save_complex(res.complex, out / "complex.json", extra={"provenance": prov})
    _write_csv(
        out / "triangle_weights.csv", "i,j,k,weight",
        ((int(t[0]), int(t[1]), int(t[2]), float(w))
         for t, w in zip(res.mean_weights.triples, res.mean_weights.weights)),
    )
    return 0


def cmd_learn_joint(args) -> int:
    cfg = _merge_config(args, {
        "complex": None, "signals": None, "alpha1": None, "alpha2": None,
        "beta": 0.0, "presence-threshold": 0.05, "q-grid": "", "zero-tol": None,
        "solver-tol": 1e-8, "max-iter": 5000, "threads": 1, "out-dir": None,
    }, required=("complex", "signals", "alpha1", "alpha2", "out-dir"))
    skeleton = complexes.load_complex(Path(cfg["complex"]))
    sig = _load_signals(Path(cfg["signals"]), skeleton, level=1)
    q_grid = None
    if cfg["q-grid"]:
        q_grid = sorted({int(v) for v in str(cfg["q-grid"]).split(",")})
    jcfg = joint.JointLearnConfig(
        alpha1=float(cfg["alpha1"]),
        alpha2=float(cfg["alpha2"]),
        beta=float(cfg["beta"]),
        presence_threshold=float(cfg["presence-threshold"]),
        q_grid=q_grid,
        zero_tol=cfg.get("zero-tol"),
        solver_tol=float(cfg["solver-tol"]),
        max_iter=int(cfg["max-iter"]),
    )
    res = joint.learn_joint(sig.values, skeleton, jcfg, threads=int(cfg["threads"]))
    out = Path(cfg["out-dir"])
    out.mkdir(parents=True, exist_ok=True)
    prov = _provenance("learn-joint", _jsonable(cfg), [Path(cfg["complex"]), Path(cfg["signals"])])
    prov["q_star"] = res.q_star
    prov["solenoidal_present"] = res.solenoidal_present
    learned = complexes.build_complex(
        skeleton.n_nodes, skeleton.edges, res.selected_triangles
    )
    complexes.save_complex(learned, out / "complex.json", extra={"provenance": prov})
    _write_csv(
        out / "trace.csv", "q,g,wall_time",
        ((q, float(res.fit_trace[q]), float(res.wall_times.get(q, 0.0)))
         for q in sorted(res.fit_trace)),
    )
    return 0


def cmd_decompose(args) -> int:
    cfg = _merge_config(
        args, {"complex": None, "signals": None, "out-dir": None},
        required=("complex", "signals", "out-dir"),
    )
    cx = complexes.load_complex(Path(cfg["complex"]))
    sig = _load_signals(Path(cfg["signals"]), cx, level=1)
    inc = complexes.incidence(cx)
    parts = spectral.hodge_decompose(inc, sig.values)
    out = Path(cfg["out-dir"])
    out.mkdir(parents=True, exist_ok=True)
    for name, vals in (
        ("irrotational", parts.irrotational),
        ("solenoidal", parts.solenoidal),
        ("harmonic", parts.harmonic),
    ):
        signals.save_signal_csv(signals.SignalMatrix(vals, level=1), out / f"{name}.csv")
    total = float(np.linalg.norm(sig.values) ** 2)
    prov = _provenance("decompose", _jsonable(cfg), [Path(cfg["complex"]), Path(cfg["signals"])])
    _write_json(out / "energy_summary.json", {
        "provenance": prov,
        "total_energy": total,
        "irrotational_energy": float(np.linalg.norm(parts.irrotational) ** 2),
        "solenoidal_energy": float(np.linalg.norm(parts.solenoidal) ** 2),
        "harmonic_energy": float(np.linalg.norm(parts.harmonic) ** 2),
    })
    return 0


def cmd_analyze(args) -> int:
    cfg = _merge_config(args, {
        "complex": None, "signals": None, "bins": 50, "top-nodes": 10,
        "conservative-k": 20, "out-dir": None,
    }, required=("complex", "signals", "out-dir"))
    cx = complexes.load_complex(Path(cfg["complex"]))
    sig = _load_signals(Path(cfg["signals"]), cx, level=1)
    inc = complexes.incidence(cx)
    report = analytics.analyze(
        cx, inc, sig,
        n_bins=int(cfg["bins"]),
        top_nodes=int(cfg["top-nodes"]),
        conservative_k=int(cfg["conservative-k"]),
    )
    out = Path(cfg["out-dir"])
    out.mkdir(parents=True, exist_ok=True)
    prov = _provenance("analyze", _jsonable(cfg), [Path(cfg["complex"]), Path(cfg["signals"])])
    _write_json(out / "report.json", {
        "provenance": prov,
        "top_sources": report.top_sources,
        "top_sinks": report.top_sinks,
        "conservative_triangles": [
            {"triangle": list(t), "circulation": c} for t, c in report.conservative_triangles
        ],
        "node_triangle_participation": report.node_triangle_participation.tolist(),
    })
    _write_csv(out / "mean_divergence.csv", "node,mean_divergence",
               ((i, float(v)) for i, v in enumerate(report.mean_divergence)))
    _write_csv(out / "mean_curl.csv", "i,j,k,mean_curl",
               ((t[0], t[1], t[2], float(v))
                for t, v in zip(cx.triangles, report.mean_curl)))
    for name, (edges, counts) in report.histograms.items():
        _write_csv(out / f"histogram_{name}.csv", "bin_left,bin_right,count",
                   ((float(edges[b]), float(edges[b + 1]), int(counts[b]))
                    for b in range(len(counts))))
    return 0


def _jsonable(cfg: dict) -> dict:
    return {k: (v if not isinstance(v, Path) else str(v)) for k, v in cfg.items()}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tsplex")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, flags):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None)
        for flag, kw in flags:
            p.add_argument(flag, **kw)
        p.set_defaults(func=func)
        return p

    add("gen", cmd_gen, [
        ("--seed", dict(type=int, default=None)),
        ("--nodes", dict(type=int, default=None)),
        ("--edge-prob", dict(type=float, default=None)),
        ("--fill-prob", dict(type=float, default=None)),
        ("--samples", dict(type=int, default=None)),
        ("--mix", dict(type=str, default=None)),
        ("--snr-db", dict(type=float, default=None)),
        ("--out-dir", dict(type=str, default=None)),
    ])
    add("learn-stat", cmd_learn_stat, [
        ("--input-dir", dict(type=str, default=None)),
        ("--edge-fraction", dict(type=float, default=None)),
        ("--triangle-count", dict(type=int, default=None)),
        ("--estimator", dict(type=str, default=None, choices=["gaussian", "histogram"])),
        ("--bins", dict(type=int, default=None)),
        ("--threads", dict(type=int, default=None)),
        ("--out-dir", dict(type=str, default=None)),
    ])
    add("learn-joint", cmd_learn_joint, [
        ("--complex", dict(type=str, default=None)),
        ("--signals", dict(type=str, default=None)),
        ("--alpha1", dict(type=float, default=None)),
        ("--alpha2", dict(type=float, default=None)),
        ("--beta", dict(type=float, default=None)),
        ("--presence-threshold", dict(type=float, default=None)),
        ("--q-grid", dict(type=str, default=None, help="comma-separated q values")),
        ("--zero-tol", dict(type=float, default=None)),
        ("--solver-tol", dict(type=float, default=None)),
        ("--max-iter", dict(type=int, default=None)),
        ("--threads", dict(type=int, default=None)),
        ("--out-dir", dict(type=str, default=None)),
    ])
    add("decompose", cmd_decompose, [
        ("--complex", dict(type=str, default=None)),
        ("--signals", dict(type=str, default=None)),
        ("--out-dir", dict(type=str, default=None)),
    ])
    add("analyze", cmd_analyze, [
        ("--complex", dict(type=str, default=None)),
        ("--signals", dict(type=str, default=None)),
        ("--bins", dict(type=int, default=None)),
        ("--top-nodes", dict(type=int, default=None)),
        ("--conservative-k", dict(type=int, default=None)),
        ("--out-dir", dict(type=str, default=None)),
    ])
    return parser


def _emit_error(kind: str, exc: Exception) -> None:
    sys.stderr.write(json.dumps({
        "error": type(exc).__name__, "kind": kind, "message": str(exc)
    }, sort_keys=True) + "\n")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        _emit_error("config", exc)
        return EXIT_CONFIG
    except _NUMERICAL_ERRORS as exc:
        _emit_error("numerical", exc)
        return EXIT_NUMERICAL
    except _DATA_ERRORS as exc:
        _emit_error("data", exc)
        return EXIT_DATA
    except TsplexError as exc:
        _emit_error("data", exc)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
