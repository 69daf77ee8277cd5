"""JSON configuration shared by the CLI commands.

Every key is optional; command-line flags override file values which
override the defaults below.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .confidence import ConfidenceParams
from .evaluate import ExperimentConfig, Hard, Hardness, Medium, Regular
from .norms import (
    ConfidentThresholdPolicy,
    ContextualThresholdPolicy,
    HardThresholdPolicy,
    HardThresholds,
    ThresholdPolicy,
)
from .similarity import SimilarityParams

DEFAULTS: dict[str, Any] = {
    "separation": "cumulative",
    "epsilon": 0.0,
    "nu": 5,
    "min_common": 5,
    "fallback": "skip",
    "rho": 0.5,
    "mu": 0.5,
    "policy": "hard",
    "eps_prh": -0.25,
    "eps_per": 0.25,
    "context_table": None,
    "test_user_fraction": 0.20,
    "test_answer_fraction": 0.20,
    "similarity_answer_fraction": 0.40,
    "min_sd": 1.0,
    "top_k": 100,
    "scale": None,
    "histogram_bin_width": 0.25,
}


def parse_scale(value: Any) -> tuple[float, float] | None:
    """Accept "lo:hi" strings or [lo, hi] pairs; None means native [-1, 1]."""
    if value is None:
        return None
    if isinstance(value, str):
        lo, sep, hi = value.partition(":")
        if not sep:
            raise ValueError(f"scale must look like 'lo:hi', got {value!r}")
        value = (lo, hi)
    if len(value) != 2:
        raise ValueError(f"scale needs exactly two bounds, got {value!r}")
    lo, hi = float(value[0]), float(value[1])
    if not lo < hi:
        raise ValueError(f"scale bounds must satisfy lo < hi, got ({lo}, {hi})")
    return (lo, hi)


def load_config(path: str | Path | None) -> dict[str, Any]:
    """Merge a JSON config file over the defaults; unknown keys are errors."""
    merged = dict(DEFAULTS)
    if path is None:
        return merged
    with open(path, encoding="utf-8") as handle:
        overrides = json.load(handle)
    if not isinstance(overrides, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    unknown = sorted(set(overrides) - set(DEFAULTS))
    if unknown:
        raise ValueError(f"{path}: unknown config keys: {', '.join(unknown)}")
    merged.update(overrides)
    return merged


def similarity_params(cfg: dict[str, Any]) -> SimilarityParams:
    return SimilarityParams(
        epsilon=float(cfg["epsilon"]),
        nu=int(cfg["nu"]),
        min_common=int(cfg["min_common"]),
    )


def confidence_params(cfg: dict[str, Any]) -> ConfidenceParams:
    return ConfidenceParams(rho=float(cfg["rho"]), mu=float(cfg["mu"]))


def hardness_from_name(name: str, cfg: dict[str, Any]) -> Hardness:
    if name == "regular":
        return Regular()
    if name == "medium":
        return Medium(min_sd=float(cfg["min_sd"]))
    if name == "hard":
        return Hard(top_k=int(cfg["top_k"]))
    raise ValueError(f"unknown hardness {name!r} (regular, medium or hard)")


def experiment_config(cfg: dict[str, Any], hardness: str, seed: int) -> ExperimentConfig:
    scale = parse_scale(cfg["scale"])
    return ExperimentConfig(
        test_user_fraction=float(cfg["test_user_fraction"]),
        test_answer_fraction=float(cfg["test_answer_fraction"]),
        similarity_answer_fraction=float(cfg["similarity_answer_fraction"]),
        hardness=hardness_from_name(hardness, cfg),
        similarity=similarity_params(cfg),
        confidence=confidence_params(cfg),
        separation=str(cfg["separation"]),
        seed=seed,
        scale=scale if scale is not None else (-1.0, 1.0),
        histogram_bin_width=float(cfg["histogram_bin_width"]),
    )


def threshold_policy(cfg: dict[str, Any]) -> ThresholdPolicy:
    name = cfg["policy"]
    if name == "hard":
        return HardThresholdPolicy(
            HardThresholds(float(cfg["eps_prh"]), float(cfg["eps_per"]))
        )
    if name == "confident":
        return ConfidentThresholdPolicy()
    if name == "contextual":
        table_path = cfg["context_table"]
        if table_path is None:
            raise ValueError("contextual policy needs a context_table file")
        with open(table_path, encoding="utf-8") as handle:
            raw = json.load(handle)
        default = tuple(raw.get("default", (-1.0, 1.0)))
        table = {
            var: {value: tuple(pair) for value, pair in cases.items()}
            for var, cases in raw.get("rules", {}).items()
        }
        return ContextualThresholdPolicy(table, default=default)
    raise ValueError(f"unknown policy {name!r} (hard, confident or contextual)")
