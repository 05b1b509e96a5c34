"""Synthetic bifidelity problems and the bootstrapped repetition protocol.

A fixed test set is carved out of an HF pool by stratified subsampling; each
repetition then draws a fresh HF training subset (and by default a fresh LF
set), fits every requested method, and scores it on the test set. All
randomness flows from one 64-bit seed through spawn-key splitting, so reports
are bit-identical across runs and thread counts.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import pca
from .cv import optimize_w_syn
from .errors import DataError
from .features import FeatureMap
from .linalg import as_matrix
from .metrics import AccuracyReport, aggregate, normalized_l2_accuracy
from .sampling import lhs_sample, subsample_conditioned
from .surrogates import (
    ADDITIVE,
    DIRECT_AUG,
    EXPLICIT_AUG,
    HF,
    LF,
    SINGLE_FIDELITY,
    Dataset,
    fit_additive,
    fit_mf_data_aug,
    fit_single_fidelity,
    synth_direct,
    synth_explicit_map,
)

METHODS = (SINGLE_FIDELITY, ADDITIVE, DIRECT_AUG, EXPLICIT_AUG)

_POOL_KEY = 1
_TEST_KEY = 2
_LF_KEY = 3
_TRAIN_KEY = 4
_HIDDEN_KEY = 10
_NOISE_KEY = 11


def _split_seed(seed, *key):
    """Independent child seed derived from ``seed`` and an integer path."""
    return np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of the hidden bifidelity test problem.

    The HF response is a degree-``degree`` polynomial in a hidden
    ``k_true``-dimensional reduced space lifted through a random orthonormal
    basis on top of a random baseline; component amplitudes decay
    geometrically (``signal_scale * component_decay**j``) so a few principal
    directions dominate. The LF response is ``lf_scale * HF + lf_shift``
    plus a smooth higher-degree bias of amplitude ``lf_bias`` and optional
    per-point noise, so with ``lf_bias = lf_noise = 0`` the two fidelities
    are related exactly affinely.
    """

    d: int = 3
    m: int = 2000
    k_true: int = 5
    degree: int = 2
    bounds: tuple = ((5.0, 7.0), (0.0, 8.0), (0.0, 8.0))
    signal_scale: float = 4.0
    component_decay: float = 0.5
    curvature_boost: float = 3.0
    lf_scale: float = 0.9
    lf_shift: float = 0.2
    lf_bias: float = 0.15
    lf_noise: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.d < 1 or self.m < 1:
            raise DataError("generator dimensions must be positive", code="bad-config")
        if not 0 <= self.k_true <= self.m:
            raise DataError("k_true must lie in [0, m]", code="bad-config")
        if self.degree < 0:
            raise DataError("generator degree must be non-negative", code="bad-config")
        b = np.asarray(self.bounds, dtype=float)
        if b.shape != (self.d, 2) or np.any(b[:, 1] <= b[:, 0]):
            raise DataError("generator bounds must be d rows of increasing pairs", code="bad-bounds")
        if self.signal_scale < 0 or not 0 < self.component_decay <= 1:
            raise DataError("signal_scale must be non-negative and component_decay in (0, 1]", code="bad-config")
        if self.curvature_boost < 0:
            raise DataError("curvature_boost must be non-negative", code="bad-config")
        if self.lf_noise < 0 or self.lf_bias < 0:
            raise DataError("lf_bias and lf_noise must be non-negative", code="bad-config")


class SyntheticProblem:
    """Deterministic bifidelity problem drawn from a :class:`GeneratorSpec`."""

    def __init__(self, spec: GeneratorSpec):
        self.spec = spec
        self.bounds = np.asarray(spec.bounds, dtype=float)
        rng = np.random.default_rng(_split_seed(spec.seed, _HIDDEN_KEY))
        amplitudes = spec.signal_scale * spec.component_decay ** np.arange(spec.k_true)
        basis, _ = np.linalg.qr(rng.standard_normal((spec.m, max(spec.k_true, 1))))
        self._basis = basis[:, : spec.k_true]
        self._features = FeatureMap(spec.d, spec.degree)
        coeffs = rng.standard_normal((self._features.p, spec.k_true)) * amplitudes
        # Emphasize the top-degree terms so lower-degree fits keep a visible
        # model-class error, mirroring data that a linear response misses.
        top = np.array([sum(e) == spec.degree for e in self._features.exponents()])
        coeffs[top] *= spec.curvature_boost
        self._coeffs = coeffs
        self._baseline = 1.0 + 0.3 * rng.standard_normal(spec.m)
        self._bias_features = FeatureMap(spec.d, spec.degree + 1)
        bias_dirs, _ = np.linalg.qr(rng.standard_normal((spec.m, max(spec.k_true, 1))))
        self._bias_dirs = bias_dirs[:, : spec.k_true]
        self._bias_coeffs = rng.standard_normal((self._bias_features.p, spec.k_true)) * amplitudes

    def _unit(self, x):
        lo = self.bounds[:, 0][:, None]
        hi = self.bounds[:, 1][:, None]
        return (x - lo) / (hi - lo)

    def hf(self, x):
        """HF outputs (m, J) at inputs ``x`` of shape (d, J)."""
        u = self._unit(as_matrix(x, "generator inputs"))
        states = (self._features.evaluate(u) @ self._coeffs).T
        return self._baseline[:, None] + self._basis @ states

    def lf(self, x):
        """LF outputs: affine corruption of HF plus smooth bias and noise."""
        x = as_matrix(x, "generator inputs")
        y = self.spec.lf_scale * self.hf(x) + self.spec.lf_shift
        if self.spec.lf_bias > 0:
            u = self._unit(x)
            bias_states = (self._bias_features.evaluate(u) @ self._bias_coeffs).T
            y = y + self.spec.lf_bias * (self._bias_dirs @ bias_states)
        if self.spec.lf_noise > 0:
            y = y + self.spec.lf_noise * self._pointwise_noise(x)
        return y

    def _pointwise_noise(self, x):
        # Noise must be a deterministic function of the input so repeated
        # evaluations agree; key each column's generator off a hash of it.
        out = np.empty((self.spec.m, x.shape[1]))
        for j in range(x.shape[1]):
            digest = hashlib.blake2b(
                np.ascontiguousarray(x[:, j]).tobytes(), digest_size=8
            ).digest()
            key = int.from_bytes(digest, "little")
            rng = np.random.default_rng(_split_seed(self.spec.seed, _NOISE_KEY, key))
            out[:, j] = rng.standard_normal(self.spec.m)
        return out


@dataclass(frozen=True)
class LoadedProblem:
    """File-backed alternative to the synthetic generator."""

    hf_pool: Dataset
    lf_pool: Dataset
    test: Dataset | None = None

    def __post_init__(self):
        if self.hf_pool.fidelity != HF or self.lf_pool.fidelity != LF:
            raise DataError("loaded problem needs an HF pool and an LF pool", code="bad-config")
        if self.hf_pool.input_dim != self.lf_pool.input_dim:
            raise DataError("HF and LF pools disagree on input dimension", code="bad-shape")
        if self.test is not None and self.test.input_dim != self.hf_pool.input_dim:
            raise DataError("test set disagrees on input dimension", code="bad-shape")


@dataclass(frozen=True)
class RepetitionPlan:
    """Bootstrapped-repetition protocol parameters."""

    n_reps: int = 50
    n_hf_grid: tuple = (3, 4, 5, 6, 7, 8, 9, 10)
    n_lf: int = 80
    n_test: int = 50
    seed: int = 0
    redraw_lf: bool = True
    hf_pool_extra: int = 50

    def __post_init__(self):
        counts = (self.n_reps, self.n_lf, self.n_test, self.hf_pool_extra, *self.n_hf_grid)
        if not self.n_hf_grid or any(c < 1 for c in counts):
            raise DataError("plan counts must be positive", code="bad-config")
        if max(self.n_hf_grid) > self.hf_pool_extra:
            raise DataError("training pool too small for the largest n_hf", code="bad-config")


@dataclass(frozen=True)
class BenchmarkRow:
    method: str
    n_hf: int
    report: AccuracyReport
    w_syn: tuple | None = None


@dataclass(frozen=True)
class BenchmarkReport:
    rows: tuple
    plan: RepetitionPlan
    methods: tuple

    def row(self, method, n_hf):
        for r in self.rows:
            if r.method == method and r.n_hf == n_hf:
                return r
        raise KeyError((method, n_hf))

    def to_dict(self):
        """JSON-ready representation with a stable schema."""
        rows = []
        for r in self.rows:
            entry = {
                "method": r.method,
                "n_hf": r.report.n_hf,
                "n_lf": r.report.n_lf,
                "median": r.report.median,
                "p25": r.report.p25,
                "p75": r.report.p75,
                "equivalent_cost": r.report.equivalent_cost,
                "per_repetition": list(r.report.per_repetition),
            }
            if r.w_syn is not None:
                entry["w_syn_per_repetition"] = list(r.w_syn)
            rows.append(entry)
        return {
            "format": "mflr-benchmark",
            "version": 1,
            "seed": self.plan.seed,
            "n_reps": self.plan.n_reps,
            "n_test": self.plan.n_test,
            "methods": list(self.methods),
            "results": rows,
        }


@dataclass(frozen=True)
class _Split:
    """Fixed pools shared by all repetitions of one protocol run."""

    train_inputs: np.ndarray
    train_outputs: np.ndarray
    test_inputs: np.ndarray
    test_outputs: np.ndarray
    lf_cost: float
    problem: object = None
    lf_fixed: Dataset | None = None
    lf_source: Dataset | None = None


def _prepare_split(problem, plan, cost_ratio):
    if isinstance(problem, SyntheticProblem):
        pool_x = lhs_sample(problem.bounds, plan.n_test + plan.hf_pool_extra, _split_seed(plan.seed, _POOL_KEY))
        pool_y = problem.hf(pool_x)
        test_idx = subsample_conditioned(pool_x, plan.n_test, _split_seed(plan.seed, _TEST_KEY))
        mask = np.ones(pool_x.shape[1], dtype=bool)
        mask[test_idx] = False
        return _Split(
            train_inputs=pool_x[:, mask],
            train_outputs=pool_y[:, mask],
            test_inputs=pool_x[:, test_idx],
            test_outputs=pool_y[:, test_idx],
            lf_cost=cost_ratio,
            problem=problem,
        )
    if isinstance(problem, LoadedProblem):
        pool = problem.hf_pool
        if problem.test is not None:
            test_x, test_y = problem.test.inputs, problem.test.outputs
            train_x, train_y = pool.inputs, pool.outputs
        else:
            if plan.n_test >= pool.n_samples:
                raise DataError("HF pool too small to carve out the test set", code="bad-config")
            test_idx = subsample_conditioned(pool.inputs, plan.n_test, _split_seed(plan.seed, _TEST_KEY))
            mask = np.ones(pool.n_samples, dtype=bool)
            mask[test_idx] = False
            test_x, test_y = pool.inputs[:, test_idx], pool.outputs[:, test_idx]
            train_x, train_y = pool.inputs[:, mask], pool.outputs[:, mask]
        if train_x.shape[1] < max(plan.n_hf_grid):
            raise DataError("training pool too small for the largest n_hf", code="bad-config")
        return _Split(
            train_inputs=train_x,
            train_outputs=train_y,
            test_inputs=test_x,
            test_outputs=test_y,
            lf_cost=problem.lf_pool.cost_per_sample,
            lf_source=problem.lf_pool,
        )
    raise DataError(f"unsupported problem type {type(problem).__name__}", code="bad-config")


def _lf_for_repetition(split, plan, rep):
    key = rep if plan.redraw_lf else 0
    if split.problem is not None:
        x = lhs_sample(split.problem.bounds, plan.n_lf, _split_seed(plan.seed, _LF_KEY, key))
        return Dataset(x, split.problem.lf(x), LF, split.lf_cost)
    source = split.lf_source
    if plan.n_lf > source.n_samples:
        raise DataError("LF pool smaller than the requested n_lf", code="bad-config")
    if plan.n_lf == source.n_samples:
        return source
    idx = subsample_conditioned(source.inputs, plan.n_lf, _split_seed(plan.seed, _LF_KEY, key))
    return source.select(idx)


def fit_method(method, hf, lf, config):
    """Fit one method; returns (surrogate, selected w_syn or None)."""
    if method == SINGLE_FIDELITY:
        return fit_single_fidelity(hf, config.method_degree(method), config.epsilon), None
    if method == ADDITIVE:
        return fit_additive(hf, lf, config.lf_degree, config.delta_degree, config.epsilon), None
    if method == DIRECT_AUG:
        synth = synth_direct(lf)
    elif method == EXPLICIT_AUG:
        hf_basis = pca.fit_basis(hf.outputs, config.epsilon)
        lf_basis = pca.fit_basis(lf.outputs, config.epsilon)
        synth, _ = synth_explicit_map(hf, lf, config.map_degree(), hf_basis, lf_basis)
    else:
        raise DataError(f"unknown method {method!r}", code="bad-config")
    degree = config.method_degree(method)
    scheme = config.weighting
    selected = None
    if config.cv.enabled:
        result = optimize_w_syn(hf, synth, scheme, degree, config.epsilon, init=config.cv.init)
        scheme = scheme.with_w_syn(result.w_syn_star)
        selected = result.w_syn_star
    return fit_mf_data_aug(hf, synth, scheme, degree, config.epsilon), selected


def _run_repetition(split, plan, methods, config, rep):
    lf = _lf_for_repetition(split, plan, rep)
    out = {}
    for n_hf in plan.n_hf_grid:
        idx = subsample_conditioned(split.train_inputs, n_hf, _split_seed(plan.seed, _TRAIN_KEY, rep, n_hf))
        hf = Dataset(split.train_inputs[:, idx], split.train_outputs[:, idx], HF, 1.0)
        for method in methods:
            surrogate, w_star = fit_method(method, hf, lf, config)
            accuracy = normalized_l2_accuracy(split.test_outputs, surrogate.predict(split.test_inputs))
            out[(method, n_hf)] = (accuracy, w_star)
    return out


def run_protocol(problem, plan: RepetitionPlan, methods, config, threads=1):
    """Run the full repetition protocol and aggregate per (method, n_hf).

    ``problem`` is a :class:`SyntheticProblem` or :class:`LoadedProblem`;
    ``config`` supplies degrees, tolerance, weighting, CV settings, and the
    cost ratio. Repetitions are independent and may run on ``threads``
    workers without changing the result.
    """
    methods = tuple(methods)
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise DataError(f"unknown methods: {unknown}", code="bad-config")
    split = _prepare_split(problem, plan, config.cost_ratio)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_run_repetition, split, plan, methods, config, rep)
                for rep in range(plan.n_reps)
            ]
            per_rep = [f.result() for f in futures]
    else:
        per_rep = [_run_repetition(split, plan, methods, config, rep) for rep in range(plan.n_reps)]

    rows = []
    for method in methods:
        for n_hf in plan.n_hf_grid:
            accs = [per_rep[r][(method, n_hf)][0] for r in range(plan.n_reps)]
            stars = [per_rep[r][(method, n_hf)][1] for r in range(plan.n_reps)]
            n_lf = 0 if method == SINGLE_FIDELITY else plan.n_lf
            cost_ratio = 0.0 if method == SINGLE_FIDELITY else split.lf_cost
            report = aggregate(accs, n_hf, n_lf, cost_ratio)
            w_syn = tuple(stars) if all(s is not None for s in stars) else None
            rows.append(BenchmarkRow(method=method, n_hf=n_hf, report=report, w_syn=w_syn))
    return BenchmarkReport(rows=tuple(rows), plan=plan, methods=methods)
