"""Command line entry point: ``run`` a config grid or write a ``synth`` dataset.

    python -m wavevae run --config grid.cfg [--out DIR] [--workers N] [--seed U64]
    python -m wavevae synth --kind separable_gaussians --n 2000 --f 8 --seed 0 --out data.csv

The output directory defaults to ``$WAVEVAE_OUT`` when set, else the config's
``output`` value.
"""
import argparse
import csv
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, replace
from pathlib import Path

from .attacks import AttackReport, run_attack
from .config import parse_config
from .data import make_synthetic
from .errors import ConfigError, StageError

log = logging.getLogger("wavevae")

OUT_ENV = "WAVEVAE_OUT"

SUMMARY_COLUMNS = [
    "dataset", "attack", "victim", "generator", "wavelet", "activation", "latent_dim",
    "epochs", "lr", "momentum", "optimizer", "batch_size", "seed", "chaos_seed",
    "auc_before", "auc_after", "delta", "roc_auc_before", "roc_auc_after", "status",
    "wall_time_ms",
]


def _run_one(cfg):
    try:
        return run_attack(cfg).to_dict()
    except Exception as exc:
        stage = exc.stage if isinstance(exc, StageError) else "run"
        return {"status": "error", "stage": stage, "error": str(exc), "config": asdict(cfg)}


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _summary_row(record):
    cfg = record.get("config", {})
    row = {k: cfg.get(k, "") for k in SUMMARY_COLUMNS}
    row["dataset"] = record.get("dataset", cfg.get("dataset_path", ""))
    for key in ("auc_before", "auc_after", "delta", "roc_auc_before", "roc_auc_after",
                "wall_time_ms"):
        value = record.get(key, "")
        row[key] = "" if value is None else value
    status = record.get("status", "ok")
    row["status"] = status if status == "ok" else f"error:{record.get('stage', 'run')}"
    for key, value in row.items():
        if value is None:
            row[key] = ""
    return row


def run_experiments(configs, out_dir, workers=1):
    """Execute every config and write ``summary.csv`` plus ``run_<index>.json``.

    Rows follow config order whatever the completion order. Returns the list of
    per-run records; any record whose ``status`` is not ``ok`` marks a failure.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_one, configs))
    else:
        records = [_run_one(cfg) for cfg in configs]
    with open(out_dir / "summary.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for i, record in enumerate(records):
            writer.writerow(_summary_row(record))
            with open(out_dir / f"run_{i}.json", "w", encoding="utf-8") as jf:
                json.dump(_clean(record), jf, indent=2, sort_keys=True)
            if record.get("status") != "ok":
                log.error("experiment %d failed: %s", i, record.get("error"))
            else:
                log.info("experiment %d: %s/%s/%s auc %.4f -> %.4f", i, record["attack"],
                         record["victim"], record["generator"], record["auc_before"],
                         record["auc_after"])
    return records


def build_parser():
    parser = argparse.ArgumentParser(prog="wavevae", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run every experiment described by a config file")
    run.add_argument("--config", required=True)
    run.add_argument("--out", default=None)
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--seed", type=int, default=None, help="override every experiment's seed")

    synth = sub.add_parser("synth", help="write a synthetic two-class Gaussian CSV")
    synth.add_argument("--kind", required=True,
                       choices=["separable_gaussians", "imbalanced_gaussians"])
    synth.add_argument("--n", type=int, required=True)
    synth.add_argument("--f", type=int, required=True)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out", required=True)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    if args.command == "synth":
        try:
            make_synthetic(args.kind, args.n, args.f, args.seed, args.out)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        return 0
    try:
        configs = parse_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        configs = [replace(c, seed=args.seed) for c in configs]
    out = args.out or os.environ.get(OUT_ENV) or configs[0].output
    records = run_experiments(configs, out, args.workers)
    return 0 if all(r.get("status") == "ok" for r in records) else 1


__all__ = ["main", "run_experiments", "SUMMARY_COLUMNS", "AttackReport"]
