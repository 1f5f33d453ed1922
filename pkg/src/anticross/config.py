"""
JSON model configurations.

    {"type": "custom-table" | "perturbation" | "rabi" | "three-level",
     "params": {...}, "domain": [lo, hi]}

custom-table params: arrays "lambda", "omega0", "delta", "gamma" (equal length >= 3)
perturbation params: omega, delta, epsilon, phi
rabi params:         omega0, omega, delta_convention ("paper" | "matrix")
three-level params:  base (a nested model config), g, eps_gap
"""
from __future__ import annotations

import json
import math
from pathlib import Path

from .errors import ConfigError
from .hamiltonian import TwoLevelModel, table_model
from .zoo import PerturbationParams, RabiParams, ThreeLevelParams, perturbation_model, rabi_model, three_level_model

MODEL_TYPES = ("custom-table", "perturbation", "rabi", "three-level")


def _number(params: dict, key: str, where: str, default=None) -> float:
    if key not in params:
        if default is None:
            raise ConfigError(f"{where}.params: missing field {key!r}")
        return default
    v = params[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{where}.params.{key}: expected a finite number, got {v!r}")
    return float(v)


def _domain(cfg: dict, where: str, default):
    if "domain" not in cfg:
        return default
    dom = cfg["domain"]
    if not (isinstance(dom, list) and len(dom) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in dom)):
        raise ConfigError(f"{where}.domain: expected [lo, hi], got {dom!r}")
    if not dom[0] < dom[1]:
        raise ConfigError(f"{where}.domain: need lo < hi, got {dom!r}")
    return (float(dom[0]), float(dom[1]))


def model_from_config(cfg, where: str = "model") -> TwoLevelModel:
    """Build a model from a parsed config; every problem raises ConfigError naming the field."""
    if not isinstance(cfg, dict):
        raise ConfigError(f"{where}: expected a JSON object")
    kind = cfg.get("type")
    if kind not in MODEL_TYPES:
        raise ConfigError(f"{where}.type: expected one of {', '.join(MODEL_TYPES)}, got {kind!r}")
    params = cfg.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError(f"{where}.params: expected an object")
    unknown = set(cfg) - {"type", "params", "domain", "name"}
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {sorted(unknown)}")

    try:
        if kind == "custom-table":
            cols = {}
            for key in ("lambda", "omega0", "delta", "gamma"):
                col = params.get(key)
                if not isinstance(col, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in col):
                    raise ConfigError(f"{where}.params.{key}: expected an array of numbers")
                cols[key] = col
            if len({len(v) for v in cols.values()}) != 1:
                raise ConfigError(f"{where}.params: table columns have different lengths")
            if len(cols["lambda"]) < 3:
                raise ConfigError(f"{where}.params.lambda: need at least 3 nodes")
            domain = _domain(cfg, where, (float(cols["lambda"][0]), float(cols["lambda"][-1])))
            resolved = {"type": kind, "params": cols, "domain": list(domain)}
            return table_model(cols["lambda"], cols["omega0"], cols["delta"], cols["gamma"], domain, name=cfg.get("name", kind), config=resolved)

        if kind == "perturbation":
            p = PerturbationParams(
                _number(params, "omega", where, 0.0),
                _number(params, "delta", where),
                _number(params, "epsilon", where),
                _number(params, "phi", where),
            )
            return perturbation_model(p, _domain(cfg, where, (-5.0, 5.0)))

        if kind == "rabi":
            conv = params.get("delta_convention", "paper")
            p = RabiParams(_number(params, "omega0", where), _number(params, "omega", where), conv)
            return rabi_model(p, _domain(cfg, where, (0.0, 4 * p.omega0)))

        base_cfg = params.get("base")
        base = model_from_config(base_cfg, f"{where}.params.base")
        p = ThreeLevelParams(base, _number(params, "g", where), _number(params, "eps_gap", where), base_config=base.config)
        return three_level_model(p, _domain(cfg, where, base.domain))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def load_model(path) -> TwoLevelModel:
    """Read and build a model config file; JSON syntax errors report line and column."""
    path = Path(path)
    text = path.read_text()
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return model_from_config(cfg, where=str(path))


def delta_convention(model: TwoLevelModel) -> str:
    """The Rabi delta convention in force anywhere in the model, else 'n/a'."""
    cfg = model.config or {}
    while cfg:
        if cfg.get("type") == "rabi":
            return cfg["params"].get("delta_convention", "paper")
        cfg = cfg.get("params", {}).get("base") if cfg.get("type") == "three-level" else None
    return "n/a"
