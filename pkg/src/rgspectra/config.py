"""Experiment configuration: a strict, JSON-backed dataclass.

The config document is plain JSON (objects / arrays / strings / numbers).
Unknown keys are errors at every level -- a typo must fail loudly, never
silently change an experiment.  The parsed object is immutable and is echoed
verbatim into every summary for provenance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping


class ConfigError(ValueError):
    """Invalid experiment configuration."""


GRAPH_CRITERIA = ("adjacency", "laplacian", "m1", "degree", "decomposition", "eigen_products")
SYNTHETIC_CRITERIA = ("adjacency",)

_TOP_KEYS = {"model", "trials", "master_seed", "tau", "epsilon", "criteria", "output"}
_REQUIRED_TOP = {"model", "trials", "master_seed"}

_MODEL_KEYS: dict[str, dict[str, set[str]]] = {
    "erdos_renyi": {"required": {"n", "prob"}, "optional": set()},
    "chung_lu": {"required": set(), "optional": {"weights", "weights_file"}},
    "percolation": {"required": {"host", "prob"}, "optional": set()},
    "explicit_matrix": {"required": set(), "optional": {"matrix", "path"}},
    "synthetic_variance": {"required": {"n", "scale_seed"}, "optional": set()},
}

_HOST_KEYS: dict[str, set[str]] = {
    "complete": {"n"},
    "hypercube": {"dim"},
    "random_regular": {"n", "degree", "seed"},
    "edge_list": {"path"},
}

_OUTPUT_KEYS = {"trials_csv", "summary_json", "edge_list", "spectrum", "decompose_csv"}

_DEFAULT_OUTPUT = {
    "trials_csv": "trials.csv",
    "summary_json": "summary.json",
    "edge_list": "sample_edges.txt",
    "spectrum": "spectrum",
    "decompose_csv": "decompose.csv",
}


@dataclass(frozen=True)
class ExperimentConfig:
    model: Mapping[str, Any]
    trials: int
    master_seed: int
    tau: float | None
    epsilon: float
    criteria: tuple[str, ...] | None
    output: Mapping[str, str]
    raw: Mapping[str, Any]


def _reject_unknown(d: Mapping, allowed: set[str], where: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(unknown)}")


def _require(d: Mapping, required: set[str], where: str) -> None:
    missing = required - set(d)
    if missing:
        raise ConfigError(f"missing key(s) in {where}: {sorted(missing)}")


def _check_int(value, where: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{where} must be >= {minimum}")
    return value


def _check_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number")
    return float(value)


def validate_model_spec(spec: Any) -> Mapping[str, Any]:
    if not isinstance(spec, Mapping):
        raise ConfigError("model must be an object")
    kind = spec.get("kind")
    if kind not in _MODEL_KEYS:
        raise ConfigError(
            f"model.kind must be one of {sorted(_MODEL_KEYS)}, got {kind!r}"
        )
    keys = _MODEL_KEYS[kind]
    _reject_unknown(spec, keys["required"] | keys["optional"] | {"kind"}, f"model[{kind}]")
    _require(spec, keys["required"], f"model[{kind}]")

    if kind == "erdos_renyi":
        _check_int(spec["n"], "model.n", 1)
        _check_number(spec["prob"], "model.prob")
    elif kind == "chung_lu":
        has_w = "weights" in spec
        has_f = "weights_file" in spec
        if has_w == has_f:
            raise ConfigError("chung_lu needs exactly one of weights / weights_file")
        if has_w and not isinstance(spec["weights"], (list, tuple)):
            raise ConfigError("model.weights must be an array of numbers")
    elif kind == "percolation":
        _check_number(spec["prob"], "model.prob")
        host = spec["host"]
        if not isinstance(host, Mapping):
            raise ConfigError("model.host must be an object")
        hkind = host.get("kind")
        if hkind not in _HOST_KEYS:
            raise ConfigError(
                f"host.kind must be one of {sorted(_HOST_KEYS)}, got {hkind!r}"
            )
        _reject_unknown(host, _HOST_KEYS[hkind] | {"kind"}, f"host[{hkind}]")
        _require(host, _HOST_KEYS[hkind], f"host[{hkind}]")
    elif kind == "explicit_matrix":
        has_m = "matrix" in spec
        has_p = "path" in spec
        if has_m == has_p:
            raise ConfigError("explicit_matrix needs exactly one of matrix / path")
    elif kind == "synthetic_variance":
        _check_int(spec["n"], "model.n", 2)
        _check_int(spec["scale_seed"], "model.scale_seed", 0)
    return spec


def parse_config(data: Any) -> ExperimentConfig:
    if not isinstance(data, Mapping):
        raise ConfigError("config must be a JSON object")
    _reject_unknown(data, _TOP_KEYS, "config")
    _require(data, _REQUIRED_TOP, "config")

    model = validate_model_spec(data["model"])
    trials = _check_int(data["trials"], "trials", 1)
    master_seed = _check_int(data["master_seed"], "master_seed", 0)

    tau = None
    if "tau" in data:
        tau = _check_number(data["tau"], "tau")
        if not 0.0 < tau:
            raise ConfigError("tau must be positive")

    epsilon = 0.3
    if "epsilon" in data:
        epsilon = _check_number(data["epsilon"], "epsilon")
        if epsilon < 0:
            raise ConfigError("epsilon must be nonnegative")

    criteria = None
    if "criteria" in data:
        crit = data["criteria"]
        if not isinstance(crit, (list, tuple)) or not crit:
            raise ConfigError("criteria must be a nonempty array of names")
        valid = set(GRAPH_CRITERIA)
        for name in crit:
            if name not in valid:
                raise ConfigError(f"unknown criterion {name!r}; valid: {sorted(valid)}")
        criteria = tuple(crit)

    output = dict(_DEFAULT_OUTPUT)
    if "output" in data:
        out = data["output"]
        if not isinstance(out, Mapping):
            raise ConfigError("output must be an object")
        _reject_unknown(out, _OUTPUT_KEYS, "output")
        for key, val in out.items():
            if not isinstance(val, str) or not val:
                raise ConfigError(f"output.{key} must be a nonempty string")
            output[key] = val

    return ExperimentConfig(
        model=model,
        trials=trials,
        master_seed=master_seed,
        tau=tau,
        epsilon=epsilon,
        criteria=criteria,
        output=output,
        raw=data,
    )


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    return parse_config(data)
