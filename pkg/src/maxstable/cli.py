"""Batch experiment runner.

Subcommands: ``simulate``, ``classify``, ``verify-fdd``, ``reduce``,
``br-test`` and ``gallery list``.  Structured settings live in a JSON config
file (``--config``); the flags below override matching config keys.  Every
report embeds the resolved config hash, the seed and the library version,
and artifacts are byte-reproducible across runs and worker counts.

Exit codes: 0 success, 1 validation error, 2 numeric failure.  Errors are
emitted as a JSON object on stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .classify import (ClassificationError, brown_resnick_dissipativity_test,
                       hopf_classify, minimal_discrete_reduce,
                       positive_null_classify)
from .gallery import GALLERY, build_gallery_rep
from .representations import (AtomicRep, fdd_exponent, load_rep,
                              rep_to_json_dict)
from .simulate import (GaussianIncrementModel, NumericError, SeriesTruncation,
                       simulate_atomic, simulate_brown_resnick,
                       simulate_extremal_process, simulate_series)

DEFAULTS = {
    "n_paths": 1000,
    "seed": 0,
    "workers": 1,
    "tolerances": {"abs": 1e-9, "rel": 1e-6},
    "out": "artifacts",
}


def _resolve_config(args):
    cfg = dict(DEFAULTS)
    if args.config:
        with open(args.config) as fh:
            cfg.update(json.load(fh))
    # command line wins over the config file
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.paths is not None:
        cfg["n_paths"] = args.paths
    if args.out is not None:
        cfg["out"] = args.out
    if args.workers is not None:
        cfg["workers"] = args.workers
    if args.tol_abs is not None:
        cfg.setdefault("tolerances", {})["abs"] = args.tol_abs
    if args.tol_rel is not None:
        cfg.setdefault("tolerances", {})["rel"] = args.tol_rel
    if getattr(args, "rep", None):
        cfg["representation"] = {"gallery": args.rep,
                                 "params": cfg.get("representation", {}).get("params", {})}
    return cfg


def _config_hash(cfg):
    # workers and output paths are execution parameters, not experiment
    # identity: artifacts must be byte-identical across worker counts
    ident = {k: v for k, v in cfg.items() if k not in ("workers", "out")}
    blob = json.dumps(ident, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def _envelope(cfg, action):
    return {"library": {"name": "maxstable", "version": __version__},
            "action": action,
            "seed": int(cfg["seed"]),
            "config_sha256": _config_hash(cfg)}


def _write_json(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _grid_from_config(cfg):
    spec = cfg.get("grid")
    if spec is None:
        raise ValueError("config must declare a 'grid' (list or {start, stop, num})")
    if isinstance(spec, dict):
        return np.linspace(float(spec["start"]), float(spec["stop"]), int(spec["num"]))
    return np.asarray([float(t) for t in spec])


def _rep_spec(cfg):
    spec = cfg.get("representation")
    if not spec:
        raise ValueError("config must declare a 'representation' (gallery name or file)")
    return spec


def _build_rep(cfg):
    spec = _rep_spec(cfg)
    if "file" in spec:
        return load_rep(spec["file"]), {"file": spec["file"]}
    name = spec.get("gallery")
    params = spec.get("params", {})
    return build_gallery_rep(name, params), {"gallery": name, "params": params}


def _simulate_from_config(cfg):
    """Dispatch to the exact generator matching the configured representation."""
    spec = _rep_spec(cfg)
    grid = _grid_from_config(cfg)
    n_paths = int(cfg["n_paths"])
    seed = int(cfg["seed"])
    workers = int(cfg["workers"])
    name = spec.get("gallery")
    params = spec.get("params", {})
    if name == "extremal_process":
        return simulate_extremal_process(params.get("alpha", 1.0), grid, n_paths, seed,
                                         workers=workers)
    if name == "brown_resnick":
        model = GaussianIncrementModel.fbm(params.get("hurst", 0.5), params.get("sigma", 1.0))
        trunc = SeriesTruncation(mode="epsilon",
                                 epsilon=float(cfg.get("epsilon", 1e-6)),
                                 max_terms=int(cfg.get("max_terms", 10_000)))
        return simulate_brown_resnick(model, grid, n_paths, seed, trunc, workers=workers)
    rep, _ = _build_rep(cfg)
    if isinstance(rep, AtomicRep):
        return simulate_atomic(rep, grid, n_paths, seed, workers=workers)
    mode = cfg.get("truncation", "exact")
    trunc = SeriesTruncation(mode=mode, epsilon=cfg.get("epsilon"),
                             max_terms=int(cfg.get("max_terms", 100_000)))
    return simulate_series(rep, grid, n_paths, seed, trunc, workers=workers)


def _cmd_simulate(cfg):
    out_dir = cfg["out"]
    os.makedirs(out_dir, exist_ok=True)
    ensemble = _simulate_from_config(cfg)
    csv_path = os.path.join(out_dir, "paths.csv")
    ensemble.to_csv(csv_path)
    doc = _envelope(cfg, "simulate")
    doc.update(ensemble.to_json_dict())
    _write_json(os.path.join(out_dir, "ensemble.json"), doc)
    print(f"simulate: wrote {ensemble.n_paths} paths on {ensemble.times.size} times "
          f"to {csv_path}")
    return 0


def _cmd_verify_fdd(cfg):
    out_dir = cfg["out"]
    os.makedirs(out_dir, exist_ok=True)
    probes = cfg.get("probes")
    if not probes:
        raise ValueError("verify-fdd needs 'probes': a list of [[t, x], ...] constraint sets")
    probe_times = sorted({float(t) for probe in probes for t, _ in probe})
    grid = cfg.get("grid")
    if grid is not None:
        grid = sorted(set(_grid_from_config(cfg).tolist()) | set(probe_times))
        cfg = {**cfg, "grid": grid}
    else:
        cfg = {**cfg, "grid": probe_times}
    ensemble = _simulate_from_config(cfg)
    rep, _ = _build_rep(cfg)
    z = float(cfg.get("band_z", 3.0))
    n = ensemble.n_paths
    time_index = {float(t): k for k, t in enumerate(ensemble.times)}
    rng = np.random.default_rng(int(cfg["seed"]) + 1)
    results = []
    all_pass = True
    for probe in probes:
        constraints = [(float(t), float(x)) for t, x in probe]
        est = fdd_exponent(rep, constraints, rng=rng,
                           n_samples=int(cfg.get("exponent_samples", 100_000)))
        p_model = math.exp(-est.value)
        idx = [time_index[t] for t, _ in constraints]
        levels = np.array([x for _, x in constraints])
        hits = np.all(ensemble.paths[:, idx] <= levels[None, :], axis=1)
        p_hat = float(np.mean(hits))
        band = z * math.sqrt(max(p_model * (1.0 - p_model), 1e-300) / n)
        band = math.hypot(band, z * p_model * est.stderr)
        ok = abs(p_hat - p_model) <= band
        all_pass = all_pass and ok
        results.append({"constraints": constraints, "p_model": p_model,
                        "model_exponent_se": est.stderr, "p_empirical": p_hat,
                        "band": band, "pass": ok})
    doc = _envelope(cfg, "verify-fdd")
    doc.update({"n_paths": n, "band_z": z, "probes": results, "all_pass": all_pass})
    _write_json(os.path.join(out_dir, "report.json"), doc)
    for r in results:
        status = "pass" if r["pass"] else "FAIL"
        print(f"verify-fdd: {r['constraints']} p_model={r['p_model']:.6f} "
              f"p_hat={r['p_empirical']:.6f} band={r['band']:.6f} {status}")
    return 0 if all_pass else 2


def _cmd_classify(cfg):
    out_dir = cfg["out"]
    os.makedirs(out_dir, exist_ok=True)
    rep, rep_info = _build_rep(cfg)
    windows = tuple(cfg.get("windows", (10.0, 100.0, 1000.0, 10000.0)))
    report = hopf_classify(rep, windows)
    doc = _envelope(cfg, "classify")
    doc["representation"] = rep_info
    doc["hopf"] = report.to_json_dict()
    if cfg.get("positive_null", False):
        doc["positive_null"] = positive_null_classify(rep, windows=windows).to_json_dict()
    _write_json(os.path.join(out_dir, "report.json"), doc)
    print(f"classify: aggregate verdict '{report.aggregate}' "
          f"(masses {report.masses})")
    return 0


def _cmd_reduce(cfg):
    out_dir = cfg["out"]
    os.makedirs(out_dir, exist_ok=True)
    rep, rep_info = _build_rep(cfg)
    result = minimal_discrete_reduce(rep)
    _write_json(os.path.join(out_dir, "reduced_rep.json"),
                rep_to_json_dict(result.reduced))
    doc = _envelope(cfg, "reduce")
    doc["representation"] = rep_info
    doc["certificate"] = result.to_json_dict()
    doc["n_atoms"] = {"before": rep.n_atoms, "after": result.reduced.n_atoms}
    _write_json(os.path.join(out_dir, "report.json"), doc)
    print(f"reduce: {rep.n_atoms} -> {result.reduced.n_atoms} atoms "
          f"(minimal={result.minimal})")
    return 0


def _cmd_br_test(cfg):
    out_dir = cfg["out"]
    os.makedirs(out_dir, exist_ok=True)
    model_cfg = cfg.get("model", {})
    model = GaussianIncrementModel.fbm(model_cfg.get("hurst", 0.5),
                                       model_cfg.get("sigma", 1.0))
    windows = tuple(cfg.get("windows", (10.0, 100.0, 1000.0)))
    result = brown_resnick_dissipativity_test(model, windows,
                                              n_paths=int(cfg["n_paths"]),
                                              seed=int(cfg["seed"]))
    doc = _envelope(cfg, "br-test")
    doc.update(result.to_json_dict())
    _write_json(os.path.join(out_dir, "report.json"), doc)
    print(f"br-test: verdict '{result.verdict}' for {model.describe()}")
    return 0


def _cmd_gallery(cfg, args):
    if args.gallery_action != "list":
        raise ValueError("supported: gallery list")
    for name in sorted(GALLERY):
        entry = GALLERY[name]
        print(f"{name}: {entry['doc']}")
        print(f"    params: {entry['params']}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="maxstable",
                                     description="max-stable process experiments")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--seed", type=int)
        p.add_argument("--paths", type=int, dest="paths")
        p.add_argument("--out")
        p.add_argument("--tol-abs", type=float, dest="tol_abs")
        p.add_argument("--tol-rel", type=float, dest="tol_rel")
        p.add_argument("--workers", type=int)
        p.add_argument("--rep", help="gallery process name (overrides config)")

    for name in ("simulate", "classify", "verify-fdd", "reduce", "br-test"):
        add_common(sub.add_parser(name))
    gal = sub.add_parser("gallery")
    add_common(gal)
    gal.add_argument("gallery_action", choices=["list"])

    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        if args.command == "simulate":
            return _cmd_simulate(cfg)
        if args.command == "classify":
            return _cmd_classify(cfg)
        if args.command == "verify-fdd":
            return _cmd_verify_fdd(cfg)
        if args.command == "reduce":
            return _cmd_reduce(cfg)
        if args.command == "br-test":
            return _cmd_br_test(cfg)
        if args.command == "gallery":
            return _cmd_gallery(cfg, args)
        raise ValueError(f"unknown command {args.command!r}")
    except NumericError as exc:
        json.dump({"error": {"type": "numeric", "message": str(exc)}}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except (ValueError, KeyError, OSError, ClassificationError) as exc:
        json.dump({"error": {"type": type(exc).__name__, "message": str(exc)}}, sys.stderr)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
