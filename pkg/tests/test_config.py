import json

import pytest

from mflr.config import (
    DEFAULT_COST_RATIO,
    DEFAULT_CV_INIT,
    DEFAULT_EPSILON,
    ExperimentConfig,
    from_dict,
    load,
    to_dict,
    with_seed,
)
from mflr.errors import DataError


class TestDefaults:
    def test_protocol_constants(self):
        cfg = ExperimentConfig()
        assert cfg.epsilon == DEFAULT_EPSILON == 0.995
        assert cfg.cv.init == DEFAULT_CV_INIT == 0.1
        assert cfg.weighting.kind == "proximity"
        assert cfg.weighting.tau_percentile == 10.0
        assert cfg.cost_ratio == DEFAULT_COST_RATIO == pytest.approx(1.0 / 127.0)
        assert cfg.plan.n_reps == 50
        assert cfg.plan.n_hf_grid == (3, 4, 5, 6, 7, 8, 9, 10)
        assert cfg.plan.n_lf == 80
        assert cfg.plan.n_test == 50

    def test_method_degrees(self):
        cfg = ExperimentConfig()
        assert cfg.method_degree("single_fidelity") == 1
        assert cfg.method_degree("additive") == 1
        assert cfg.method_degree("direct_aug") == 2
        assert cfg.method_degree("explicit_aug") == 2
        assert cfg.map_degree() == 2
        override = ExperimentConfig(degree=3)
        assert override.method_degree("single_fidelity") == 3
        assert override.map_degree() == 3
        mapped = ExperimentConfig(map_lf_degree=1)
        assert mapped.map_degree() == 1


class TestFromDict:
    def test_unknown_top_level_key(self):
        with pytest.raises(DataError, match="unknown config key"):
            from_dict({"budget": 10})

    def test_unknown_nested_key(self):
        with pytest.raises(DataError, match="weighting"):
            from_dict({"weighting": {"w_sin": 0.1}})
        with pytest.raises(DataError, match="plan"):
            from_dict({"plan": {"reps": 3}})
        with pytest.raises(DataError, match="generator"):
            from_dict({"generator": {"dim": 3}})

    def test_range_validation(self):
        with pytest.raises(DataError):
            from_dict({"epsilon": 0.0})
        with pytest.raises(DataError):
            from_dict({"epsilon": 1.5})
        with pytest.raises(DataError):
            from_dict({"weighting": {"w_syn": 1.0}})
        with pytest.raises(DataError):
            from_dict({"cv": {"init": 0.0}})
        with pytest.raises(DataError):
            from_dict({"cost_ratio": -0.1})
        with pytest.raises(DataError):
            from_dict({"threads": 0})
        with pytest.raises(DataError):
            from_dict({"seed": -1})
        with pytest.raises(DataError):
            from_dict({"method": "kriging"})

    def test_seed_propagates_to_plan_and_generator(self):
        cfg = from_dict({"seed": 77})
        assert cfg.plan.seed == 77
        assert cfg.generator.seed == 77

    def test_explicit_nested_seed_wins(self):
        cfg = from_dict({"seed": 77, "plan": {"seed": 5}})
        assert cfg.plan.seed == 5
        assert cfg.generator.seed == 77

    def test_datasets_replace_generator(self):
        cfg = from_dict({"datasets": {"hf": "hf.json", "lf": "lf.json"}})
        assert cfg.generator is None
        assert cfg.datasets.hf == "hf.json"
        assert cfg.datasets.test is None

    def test_round_trip_stability(self):
        cfg = from_dict({"seed": 9, "method": "explicit_aug", "plan": {"n_reps": 7}})
        again = from_dict(to_dict(cfg))
        assert to_dict(again) == to_dict(cfg)

    def test_sha256_ignores_threads(self):
        a = from_dict({"seed": 1, "threads": 1})
        b = from_dict({"seed": 1, "threads": 8})
        assert a.sha256() == b.sha256()
        c = from_dict({"seed": 2})
        assert a.sha256() != c.sha256()


class TestWithSeed:
    def test_overrides_every_seed(self):
        cfg = from_dict({"seed": 3})
        replaced = with_seed(cfg, 11)
        assert replaced.seed == 11
        assert replaced.plan.seed == 11
        assert replaced.generator.seed == 11


class TestLoad:
    def test_reads_json_file(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"seed": 4, "epsilon": 0.99}))
        cfg = load(path)
        assert cfg.seed == 4
        assert cfg.epsilon == 0.99

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load(tmp_path / "none.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text("{not json")
        with pytest.raises(DataError, match="not valid JSON"):
            load(path)
