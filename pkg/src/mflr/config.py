"""Experiment configuration: defaults, strict JSON loading, hashing.

Unknown keys are rejected at every nesting level so typos fail loudly
instead of silently falling back to defaults.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace

from .benchmark import METHODS, GeneratorSpec, RepetitionPlan
from .errors import DataError
from .surrogates import ADDITIVE, SINGLE_FIDELITY
from .weighting import WeightScheme

DEFAULT_EPSILON = 0.995
DEFAULT_COST_RATIO = 1.0 / 127.0
DEFAULT_CV_INIT = 0.1

_MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class CvSettings:
    enabled: bool = True
    init: float = DEFAULT_CV_INIT

    def __post_init__(self):
        if not 0.0 < self.init < 1.0:
            raise DataError(f"cv init must lie strictly inside (0, 1), got {self.init}", code="bad-config")


@dataclass(frozen=True)
class DatasetPaths:
    hf: str
    lf: str | None = None
    test: str | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a CLI run needs beyond the input files themselves."""

    method: str = "direct_aug"
    methods: tuple = METHODS
    degree: int | None = None
    lf_degree: int = 1
    delta_degree: int = 1
    map_lf_degree: int | None = None
    epsilon: float = DEFAULT_EPSILON
    weighting: WeightScheme = field(default_factory=WeightScheme)
    cv: CvSettings = field(default_factory=CvSettings)
    plan: RepetitionPlan = field(default_factory=RepetitionPlan)
    generator: GeneratorSpec | None = field(default_factory=GeneratorSpec)
    datasets: DatasetPaths | None = None
    seed: int = 0
    cost_ratio: float = DEFAULT_COST_RATIO
    threads: int = 1

    def __post_init__(self):
        if self.method not in METHODS:
            raise DataError(f"unknown method {self.method!r}", code="bad-config")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise DataError(f"unknown methods: {bad}", code="bad-config")
        if self.degree is not None and self.degree < 0:
            raise DataError("degree must be non-negative", code="bad-config")
        if self.lf_degree < 0 or self.delta_degree < 0:
            raise DataError("component degrees must be non-negative", code="bad-config")
        if self.map_lf_degree is not None and self.map_lf_degree < 0:
            raise DataError("map_lf_degree must be non-negative", code="bad-config")
        if not 0.0 < self.epsilon <= 1.0:
            raise DataError(f"epsilon must lie in (0, 1], got {self.epsilon}", code="bad-config")
        if not 0 <= self.seed <= _MAX_SEED:
            raise DataError("seed must be a 64-bit unsigned integer", code="bad-config")
        if self.cost_ratio <= 0:
            raise DataError("cost_ratio must be positive", code="bad-config")
        if self.threads < 1:
            raise DataError("threads must be at least 1", code="bad-config")
        if self.generator is not None and self.datasets is not None:
            raise DataError("config cannot name both a generator and datasets", code="bad-config")

    def method_degree(self, method):
        """Polynomial degree for ``method``: explicit override or the default
        (1 for the single-fidelity and additive models, 2 for augmentation)."""
        if self.degree is not None:
            return self.degree
        return 1 if method in (SINGLE_FIDELITY, ADDITIVE) else 2

    def map_degree(self):
        """Degree of the LF surrogate inside the explicit-map generator.

        Defaults to the augmentation model's degree so the synthetic data is
        at least as expressive as the model trained on it; a less expressive
        internal surrogate makes the explicit map needlessly weight-sensitive.
        """
        if self.map_lf_degree is not None:
            return self.map_lf_degree
        return self.method_degree("explicit_aug")

    def sha256(self):
        """Stable hash of the configuration for provenance stamps."""
        return hashlib.sha256(json.dumps(to_dict(self), sort_keys=True).encode()).hexdigest()


def _take(mapping, allowed, context):
    if not isinstance(mapping, dict):
        raise DataError(f"{context} must be a JSON object", code="bad-config")
    unknown = sorted(set(mapping) - set(allowed))
    if unknown:
        raise DataError(f"unknown config key(s) in {context}: {unknown}", code="bad-config")


def _weighting_from(data):
    _take(data, ("kind", "w_syn", "tau_percentile"), "weighting")
    return WeightScheme(**data)


def _cv_from(data):
    _take(data, ("enabled", "init"), "cv")
    return CvSettings(**data)


def _plan_from(data, seed):
    _take(
        data,
        ("n_reps", "n_hf_grid", "n_lf", "n_test", "seed", "redraw_lf", "hf_pool_extra"),
        "plan",
    )
    data = dict(data)
    data.setdefault("seed", seed)
    if "n_hf_grid" in data:
        data["n_hf_grid"] = tuple(int(n) for n in data["n_hf_grid"])
    return RepetitionPlan(**data)


def _generator_from(data, seed):
    _take(
        data,
        (
            "d",
            "m",
            "k_true",
            "degree",
            "bounds",
            "signal_scale",
            "component_decay",
            "curvature_boost",
            "lf_scale",
            "lf_shift",
            "lf_bias",
            "lf_noise",
            "seed",
        ),
        "generator",
    )
    data = dict(data)
    data.setdefault("seed", seed)
    if "bounds" in data:
        data["bounds"] = tuple(tuple(float(v) for v in pair) for pair in data["bounds"])
    return GeneratorSpec(**data)


def _datasets_from(data):
    _take(data, ("hf", "lf", "test"), "datasets")
    if "hf" not in data:
        raise DataError("datasets config requires an 'hf' manifest path", code="bad-config")
    return DatasetPaths(**data)


def from_dict(data):
    """Build an :class:`ExperimentConfig` from a parsed JSON object."""
    allowed = (
        "method",
        "methods",
        "degree",
        "lf_degree",
        "delta_degree",
        "map_lf_degree",
        "epsilon",
        "weighting",
        "cv",
        "plan",
        "generator",
        "datasets",
        "seed",
        "cost_ratio",
        "threads",
    )
    _take(data, allowed, "config")
    seed = int(data.get("seed", 0))
    kwargs = {
        key: data[key]
        for key in ("method", "degree", "lf_degree", "delta_degree", "map_lf_degree", "epsilon", "cost_ratio", "threads")
        if key in data
    }
    kwargs["seed"] = seed
    if "methods" in data:
        kwargs["methods"] = tuple(data["methods"])
    if "weighting" in data:
        kwargs["weighting"] = _weighting_from(data["weighting"])
    if "cv" in data:
        kwargs["cv"] = _cv_from(data["cv"])
    kwargs["plan"] = _plan_from(data.get("plan", {}), seed)
    if "datasets" in data:
        kwargs["datasets"] = _datasets_from(data["datasets"])
        kwargs["generator"] = _generator_from(data["generator"], seed) if "generator" in data else None
    else:
        kwargs["generator"] = _generator_from(data.get("generator", {}), seed)
    return ExperimentConfig(**kwargs)


def load(path):
    """Load and validate a JSON configuration file."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read config {path}: {exc}", code="missing-file") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"config {path} is not valid JSON: {exc}", code="bad-json") from exc
    return from_dict(data)


def with_seed(config: ExperimentConfig, seed):
    """Copy of ``config`` with every seed field replaced by ``seed``."""
    seed = int(seed)
    plan = replace(config.plan, seed=seed)
    generator = replace(config.generator, seed=seed) if config.generator is not None else None
    return replace(config, seed=seed, plan=plan, generator=generator)


def to_dict(config: ExperimentConfig):
    """JSON-ready representation of the experiment parameters.

    ``threads`` is deliberately omitted: it is an execution knob that does
    not affect results, so reports and config hashes stay identical across
    machines with different parallelism.
    """
    out = {
        "method": config.method,
        "methods": list(config.methods),
        "degree": config.degree,
        "lf_degree": config.lf_degree,
        "delta_degree": config.delta_degree,
        "map_lf_degree": config.map_lf_degree,
        "epsilon": config.epsilon,
        "weighting": {
            "kind": config.weighting.kind,
            "w_syn": config.weighting.w_syn,
            "tau_percentile": config.weighting.tau_percentile,
        },
        "cv": {"enabled": config.cv.enabled, "init": config.cv.init},
        "plan": {
            "n_reps": config.plan.n_reps,
            "n_hf_grid": list(config.plan.n_hf_grid),
            "n_lf": config.plan.n_lf,
            "n_test": config.plan.n_test,
            "seed": config.plan.seed,
            "redraw_lf": config.plan.redraw_lf,
            "hf_pool_extra": config.plan.hf_pool_extra,
        },
        "seed": config.seed,
        "cost_ratio": config.cost_ratio,
    }
    if config.generator is not None:
        out["generator"] = {
            "d": config.generator.d,
            "m": config.generator.m,
            "k_true": config.generator.k_true,
            "degree": config.generator.degree,
            "bounds": [list(pair) for pair in config.generator.bounds],
            "signal_scale": config.generator.signal_scale,
            "component_decay": config.generator.component_decay,
            "curvature_boost": config.generator.curvature_boost,
            "lf_scale": config.generator.lf_scale,
            "lf_shift": config.generator.lf_shift,
            "lf_bias": config.generator.lf_bias,
            "lf_noise": config.generator.lf_noise,
            "seed": config.generator.seed,
        }
    if config.datasets is not None:
        out["datasets"] = {
            "hf": config.datasets.hf,
            "lf": config.datasets.lf,
            "test": config.datasets.test,
        }
    return out
