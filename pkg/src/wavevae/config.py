"""Experiment config files: flat ``key = value`` lines plus an optional ``[grid]`` section.

Grammar::

    # comment
    key = value              # scalar: int, float, true/false, none, bare or quoted string
    key = [v1, v2, ...]      # list (may nest: [[16, 8], [8]])

    [grid]
    key = [v1, v2, ...]      # every grid key must hold a list; the run set is
                             # the Cartesian product of all grid lists

Keys under ``[grid]`` override the base section for each expanded experiment.
"""
import itertools
from dataclasses import fields
from pathlib import Path

from .chaos import DEGENERATE_SEEDS
from .errors import ConfigError
from .attacks import ExperimentConfig
from .nn import Activation, OptimizerKind
from .vae import Variant
from .wavelets import WaveletKind

KEYS = {f.name for f in fields(ExperimentConfig)}


def _split_items(body):
    items, depth, cur = [], 0, ""
    for ch in body:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            items.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        items.append(cur)
    return items


def parse_value(text):
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ValueError(f"unterminated list: {text!r}")
        return [parse_value(item) for item in _split_items(text[1:-1])]
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        return text[1:-1]
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    if low in ("none", "null"):
        return None
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def parse_text(text):
    """Return ``(base, grid)`` dictionaries from config text."""
    base, grid = {}, {}
    target = base
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]") and "=" not in line:
            name = line[1:-1].strip().lower()
            if name != "grid":
                raise ConfigError(f"line {lineno}: unknown section [{name}]", key=name)
            target = grid
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}", key=key)
        try:
            target[key] = parse_value(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {exc}", key=key) from None
    for key, value in grid.items():
        if not isinstance(value, list) or not value:
            raise ConfigError(f"grid key {key!r} must be a non-empty list", key=key)
    return base, grid


def expand(base, grid):
    keys = list(grid)
    combos = itertools.product(*(grid[k] for k in keys)) if keys else [()]
    return [{**base, **dict(zip(keys, combo))} for combo in combos]


def _fail(key, msg):
    raise ConfigError(f"{key}: {msg}", key=key)


def validate(values):
    """Build an ExperimentConfig from a flat dict, enforcing value ranges and field compatibility."""
    for key in values:
        if key not in KEYS:
            _fail(key, "unknown key")
    v = dict(values)
    if v.get("attack", "evasion") not in ("evasion", "poison"):
        _fail("attack", f"must be evasion or poison, got {v['attack']!r}")
    if v.get("victim", "lr") not in ("lr", "dt"):
        _fail("victim", f"must be lr or dt, got {v['victim']!r}")
    try:
        variant = Variant.parse(v.get("generator", "vae_wnn"))
    except ValueError as exc:
        _fail("generator", str(exc))
    v["generator"] = variant.value
    if v.get("wavelet") is not None:
        if not variant.wavelet:
            _fail("wavelet", f"only valid for wavelet generators, not {variant.value}")
        try:
            v["wavelet"] = WaveletKind.parse(v["wavelet"]).value
        except ValueError as exc:
            _fail("wavelet", str(exc))
    if v.get("activation") is not None:
        if variant.wavelet:
            _fail("activation", f"only valid for MLP generators, not {variant.value}")
        try:
            v["activation"] = Activation.parse(v["activation"]).value
        except ValueError as exc:
            _fail("activation", str(exc))
    if v.get("chaos_seed") is not None or v.get("gen_chaos_seed") is not None:
        key = "chaos_seed" if v.get("chaos_seed") is not None else "gen_chaos_seed"
        if not variant.chaotic:
            _fail(key, f"only valid for chaotic generators, not {variant.value}")
        for k in ("chaos_seed", "gen_chaos_seed"):
            s = v.get(k)
            if s is not None and (not isinstance(s, (int, float)) or not 0 < s < 1
                                  or s in DEGENERATE_SEEDS):
                _fail(k, f"must be in (0, 1) and not in {DEGENERATE_SEEDS}, got {s!r}")
    if "optimizer" in v:
        try:
            v["optimizer"] = OptimizerKind.parse(v["optimizer"]).value
        except ValueError as exc:
            _fail("optimizer", str(exc))
    for key in ("epochs", "latent_dim", "batch_size", "lr_epochs", "dt_max_depth",
                "dt_min_samples_split", "smote_k"):
        if key in v and (not isinstance(v[key], int) or isinstance(v[key], bool) or v[key] < 1):
            _fail(key, f"must be a positive integer, got {v[key]!r}")
    for key in ("lr", "lr_rate"):
        if key in v and (not isinstance(v[key], (int, float)) or not v[key] > 0):
            _fail(key, f"must be a positive number, got {v[key]!r}")
    if "momentum" in v and (not isinstance(v["momentum"], (int, float)) or not 0 <= v["momentum"] < 1):
        _fail("momentum", f"must be in [0, 1), got {v['momentum']!r}")
    if "threshold" in v and not 0 < v["threshold"] < 1:
        _fail("threshold", "must be in (0, 1)")
    if "train_fraction" in v and not 0 < v["train_fraction"] < 1:
        _fail("train_fraction", "must be in (0, 1)")
    if "seed" in v and (not isinstance(v["seed"], int) or not 0 <= v["seed"] < 2 ** 64):
        _fail("seed", f"must be an unsigned 64-bit integer, got {v['seed']!r}")
    if "smote" in v:
        v["smote"] = str(v["smote"]).lower()
        if v["smote"] not in ("on", "off", "auto"):
            _fail("smote", f"must be on, off or auto, got {v['smote']!r}")
    if "hidden_layers" in v:
        h = v["hidden_layers"]
        if isinstance(h, int):
            h = [h]
        if (not isinstance(h, list) or not h
                or not all(isinstance(x, int) and not isinstance(x, bool) and x >= 1 for x in h)):
            _fail("hidden_layers", f"must be a non-empty list of positive integers, got {h!r}")
        v["hidden_layers"] = h
    return ExperimentConfig(**v).resolved()


def parse_config(path):
    """Read a config file and return the list of ExperimentConfigs it describes."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    base, grid = parse_text(text)
    if "dataset_path" not in base and "dataset_path" not in grid:
        raise ConfigError("missing required key 'dataset_path'", key="dataset_path")
    configs = [validate(values) for values in expand(base, grid)]
    for cfg in configs:
        if cfg.dataset_path and not Path(cfg.dataset_path).is_absolute():
            cfg.dataset_path = str((path.parent / cfg.dataset_path))
    return configs


