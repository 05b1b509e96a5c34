import json
from dataclasses import replace

import numpy as np
import pytest

from mflr.benchmark import (
    GeneratorSpec,
    LoadedProblem,
    RepetitionPlan,
    SyntheticProblem,
    run_protocol,
)
from mflr.config import CvSettings, ExperimentConfig
from mflr.errors import DataError
from mflr.sampling import lhs_sample
from mflr.surrogates import HF, LF, Dataset


def _small_config(**overrides):
    cfg = ExperimentConfig(cv=CvSettings(enabled=False))
    return replace(cfg, **overrides) if overrides else cfg


class TestSyntheticProblem:
    def test_deterministic_given_seed(self):
        spec = GeneratorSpec(m=50, seed=3)
        a, b = SyntheticProblem(spec), SyntheticProblem(spec)
        x = lhs_sample(a.bounds, 5, seed=0)
        assert np.array_equal(a.hf(x), b.hf(x))
        assert np.array_equal(a.lf(x), b.lf(x))

    def test_lf_exactly_affine_without_bias_and_noise(self):
        spec = GeneratorSpec(m=50, seed=4, lf_bias=0.0, lf_noise=0.0, lf_scale=0.8, lf_shift=0.3)
        problem = SyntheticProblem(spec)
        x = lhs_sample(problem.bounds, 6, seed=1)
        np.testing.assert_allclose(problem.lf(x), 0.8 * problem.hf(x) + 0.3, atol=1e-12)

    def test_noise_is_deterministic_in_the_input(self):
        spec = GeneratorSpec(m=30, seed=5, lf_noise=0.5)
        problem = SyntheticProblem(spec)
        x = lhs_sample(problem.bounds, 4, seed=2)
        assert np.array_equal(problem.lf(x), problem.lf(x))
        shifted = x.copy()
        shifted[0, 0] += 1e-6
        assert not np.array_equal(problem.lf(x), problem.lf(shifted))

    def test_bad_spec_rejected(self):
        with pytest.raises(DataError):
            GeneratorSpec(d=0)
        with pytest.raises(DataError):
            GeneratorSpec(bounds=((1.0, 0.0), (0.0, 1.0), (0.0, 1.0)))


class TestRunProtocol:
    def test_single_fidelity_exact_on_linear_generator(self):
        # Degree-1 generator, no corruption relevant, epsilon 1 keeps every
        # direction: the degree-1 single-fidelity fit is exact in its class.
        spec = GeneratorSpec(m=80, degree=1, seed=6, lf_bias=0.0)
        problem = SyntheticProblem(spec)
        plan = RepetitionPlan(n_reps=2, n_hf_grid=(6,), n_lf=10, n_test=20, seed=6)
        cfg = _small_config(epsilon=1.0)
        report = run_protocol(problem, plan, ("single_fidelity",), cfg)
        assert report.row("single_fidelity", 6).report.median >= 1.0 - 1e-6

    def test_single_repetition_percentiles_collapse(self):
        spec = GeneratorSpec(m=40, seed=7)
        problem = SyntheticProblem(spec)
        plan = RepetitionPlan(n_reps=1, n_hf_grid=(4,), n_lf=12, n_test=10, seed=7)
        report = run_protocol(problem, plan, ("single_fidelity", "additive"), _small_config())
        for row in report.rows:
            assert row.report.median == row.report.p25 == row.report.p75

    def test_bit_identical_reports_across_runs_and_threads(self):
        spec = GeneratorSpec(m=40, seed=8)
        problem = SyntheticProblem(spec)
        plan = RepetitionPlan(n_reps=3, n_hf_grid=(3, 5), n_lf=15, n_test=10, seed=8)
        cfg = _small_config()
        methods = ("single_fidelity", "direct_aug")
        first = run_protocol(problem, plan, methods, cfg, threads=1)
        second = run_protocol(problem, plan, methods, cfg, threads=1)
        threaded = run_protocol(problem, plan, methods, cfg, threads=3)
        a, b, c = (json.dumps(r.to_dict(), sort_keys=True) for r in (first, second, threaded))
        assert a == b == c

    def test_test_set_fixed_across_repetition_counts(self):
        spec = GeneratorSpec(m=40, seed=9)
        problem = SyntheticProblem(spec)
        cfg = _small_config()
        short = run_protocol(problem, RepetitionPlan(n_reps=1, n_hf_grid=(4,), n_lf=12, n_test=10, seed=9), ("single_fidelity",), cfg)
        long = run_protocol(problem, RepetitionPlan(n_reps=3, n_hf_grid=(4,), n_lf=12, n_test=10, seed=9), ("single_fidelity",), cfg)
        assert short.rows[0].report.per_repetition[0] == long.rows[0].report.per_repetition[0]

    def test_equivalent_cost_accounting(self):
        spec = GeneratorSpec(m=40, seed=10)
        problem = SyntheticProblem(spec)
        plan = RepetitionPlan(n_reps=1, n_hf_grid=(4,), n_lf=16, n_test=8, seed=10)
        cfg = _small_config(cost_ratio=1.0 / 127.0)
        report = run_protocol(problem, plan, ("single_fidelity", "direct_aug"), cfg)
        assert report.row("single_fidelity", 4).report.equivalent_cost == pytest.approx(4.0)
        assert report.row("direct_aug", 4).report.equivalent_cost == pytest.approx(4.0 + 16.0 / 127.0)

    def test_loaded_problem_matches_dataset_path(self):
        spec = GeneratorSpec(m=40, seed=11)
        problem = SyntheticProblem(spec)
        pool_x = lhs_sample(problem.bounds, 30, seed=11)
        lf_x = lhs_sample(problem.bounds, 16, seed=12)
        loaded = LoadedProblem(
            hf_pool=Dataset(pool_x, problem.hf(pool_x), HF),
            lf_pool=Dataset(lf_x, problem.lf(lf_x), LF, cost_per_sample=0.25),
        )
        plan = RepetitionPlan(n_reps=2, n_hf_grid=(4,), n_lf=16, n_test=8, seed=13, hf_pool_extra=22)
        report = run_protocol(loaded, plan, ("direct_aug",), _small_config())
        row = report.row("direct_aug", 4)
        assert 0.0 <= row.report.median <= 1.0
        assert row.report.equivalent_cost == pytest.approx(4.0 + 16.0 * 0.25)

    def test_cv_records_selected_weights(self):
        spec = GeneratorSpec(m=40, seed=14)
        problem = SyntheticProblem(spec)
        plan = RepetitionPlan(n_reps=2, n_hf_grid=(4,), n_lf=12, n_test=8, seed=14)
        cfg = ExperimentConfig()
        report = run_protocol(problem, plan, ("direct_aug",), cfg)
        row = report.row("direct_aug", 4)
        assert row.w_syn is not None and len(row.w_syn) == 2
        assert all(0.0 < w < 1.0 for w in row.w_syn)

    def test_report_dict_schema(self):
        spec = GeneratorSpec(m=40, seed=15)
        problem = SyntheticProblem(spec)
        plan = RepetitionPlan(n_reps=2, n_hf_grid=(3,), n_lf=10, n_test=8, seed=15)
        report = run_protocol(problem, plan, ("single_fidelity",), _small_config())
        payload = report.to_dict()
        assert payload["format"] == "mflr-benchmark"
        entry = payload["results"][0]
        for key in ("method", "n_hf", "n_lf", "median", "p25", "p75", "equivalent_cost", "per_repetition"):
            assert key in entry

    def test_unknown_method_rejected(self):
        spec = GeneratorSpec(m=30, seed=16)
        problem = SyntheticProblem(spec)
        plan = RepetitionPlan(n_reps=1, n_hf_grid=(3,), n_lf=8, n_test=5, seed=16)
        with pytest.raises(DataError):
            run_protocol(problem, plan, ("kriging",), _small_config())

    def test_plan_validation(self):
        with pytest.raises(DataError):
            RepetitionPlan(n_reps=0)
        with pytest.raises(DataError):
            RepetitionPlan(n_hf_grid=(60,), hf_pool_extra=50)
