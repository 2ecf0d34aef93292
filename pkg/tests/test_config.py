"""
Unit tests for configuration models and process settings.
"""

import os
import unittest
from unittest.mock import patch

from src.models import CompareConfig, PredictorConfig, RunConfig, SyntheticConfig, TraceSource
from src.utils.config import SimulatorConfig
from src.utils.errors import ConfigError, InvalidArgumentError, TraceParseError, exit_code_for

SYNTHETIC = {"synthetic": {"catalogue_size": 100}}


class TestSimulatorConfig(unittest.TestCase):
    """Test cases for environment-driven settings."""

    @patch.dict(os.environ, {}, clear=True)
    def test_defaults(self):
        cfg = SimulatorConfig()
        self.assertEqual(cfg.log_level, "INFO")
        self.assertIsNone(cfg.log_file)
        self.assertEqual(cfg.workers, 1)
        self.assertFalse(cfg.progress)

    @patch.dict(
        os.environ,
        {"POPCACHE_OUTPUT_DIR": "out", "POPCACHE_WORKERS": "4", "POPCACHE_PROGRESS": "TRUE"},
        clear=True,
    )
    def test_environment(self):
        cfg = SimulatorConfig()
        self.assertEqual(cfg.workers, 4)
        self.assertTrue(cfg.progress)
        self.assertEqual(cfg.output_path("runs", "x"), os.path.join("out", "runs", "x"))

    def test_reload_picks_up_changes(self):
        cfg = SimulatorConfig()
        with patch.dict(os.environ, {"POPCACHE_LOG_LEVEL": "DEBUG"}):
            cfg.reload()
            self.assertEqual(cfg.log_level, "DEBUG")

    def test_unknown_output_kind(self):
        with self.assertRaises(KeyError):
            SimulatorConfig().output_path("plots", "x")


class TestExitCodes(unittest.TestCase):
    """Test cases for exit_code_for."""

    def test_mapping(self):
        self.assertEqual(exit_code_for(ConfigError("bad")), 1)
        self.assertEqual(exit_code_for(TraceParseError("bad", 3)), 1)
        self.assertEqual(exit_code_for(FileNotFoundError("x")), 1)
        self.assertEqual(exit_code_for(RuntimeError("x")), 3)

    def test_trace_error_names_line(self):
        self.assertIn("line 3", str(TraceParseError("bad", 3)))

    def test_invalid_argument_is_value_error(self):
        self.assertIsInstance(InvalidArgumentError("x"), ValueError)


class TestSyntheticConfig(unittest.TestCase):
    """Test cases for SyntheticConfig."""

    def test_overrides_win(self):
        cfg = SyntheticConfig.from_dict({"seed": 1, "catalogue_size": 20}, {"seed": 9, "duration": None})
        self.assertEqual((cfg.seed, cfg.catalogue_size, cfg.duration), (9, 20, 2000.0))

    def test_class_sizes(self):
        cfg = SyntheticConfig(catalogue_size=11, class_split=0.5)
        self.assertEqual(cfg.class1_size + cfg.class2_size, 11)
        self.assertGreaterEqual(cfg.class2_size, 1)

    def test_invalid(self):
        for data in ({"catalogue_size": 1}, {"class_split": 1.0}, {"arrival_rate": 0}, {"zipf": 1.0},
                     {"catalogue_size": "many"}):
            with self.subTest(data=data):
                with self.assertRaises(ConfigError):
                    SyntheticConfig.from_dict(data)


class TestPredictorConfig(unittest.TestCase):
    """Test cases for PredictorConfig."""

    def test_defaults(self):
        cfg = PredictorConfig.from_dict({})
        self.assertEqual((cfg.K, cfg.H, cfg.batch_size, cfg.T), (4, 9, 8, 200.0))
        self.assertEqual(cfg.hidden_layers, [128, 128])
        self.assertEqual(cfg.gamma, 0.5)

    def test_invalid(self):
        for data in ({"K": 0}, {"gamma": 0.0}, {"gamma": 1.5}, {"hidden_layers": [0]}, {"T": -1}, {"eta_": 1}):
            with self.subTest(data=data):
                with self.assertRaises(ConfigError):
                    PredictorConfig.from_dict(data)


class TestRunConfig(unittest.TestCase):
    """Test cases for RunConfig and CompareConfig."""

    def test_from_dict_with_overrides(self):
        cfg = RunConfig.from_dict({"trace": SYNTHETIC, "policy": "LRU"}, {"capacity": 7, "seed": None})
        self.assertEqual((cfg.policy, cfg.capacity, cfg.seed), ("lru", 7, 0))
        self.assertFalse(cfg.uses_predictor)
        self.assertEqual(RunConfig.from_dict(cfg.to_dict()), cfg)

    def test_trace_source(self):
        self.assertEqual(TraceSource.from_dict({"file": "t.csv"}).describe(), "file:t.csv")
        for data in ({}, {"file": "a", "synthetic": {}}, {"url": "x"}, "t.csv"):
            with self.subTest(data=data):
                with self.assertRaises(ConfigError):
                    TraceSource.from_dict(data)

    def test_invalid_run(self):
        for data in ({}, {"trace": SYNTHETIC, "policy": "lfu"}, {"trace": SYNTHETIC, "capacity": -1},
                     {"trace": SYNTHETIC, "capacity": "ten"}):
            with self.subTest(data=data):
                with self.assertRaises(ConfigError):
                    RunConfig.from_dict(data)

    def test_workload_epoch_must_match_predictor_epoch(self):
        data = {"trace": {"synthetic": {"catalogue_size": 100, "epoch_duration": 100.0}}, "predictor": {"T": 200.0}}
        with self.assertRaises(ConfigError):
            RunConfig.from_dict(data)
        with self.assertRaises(ConfigError):
            CompareConfig.from_dict(data)
        aligned = RunConfig.from_dict({**data, "predictor": {"T": 100.0}})
        self.assertEqual(aligned.predictor.T, aligned.trace.synthetic.epoch_duration)
        source = TraceSource(synthetic=SyntheticConfig(epoch_duration=100.0))
        with self.assertRaises(ConfigError):
            RunConfig(trace=source).validate()
        TraceSource(file="t.csv").check_epochs(50.0)

    def test_compare_expands_runs(self):
        cfg = CompareConfig.from_dict({"trace": SYNTHETIC, "capacity": 5, "policies": ["lru", "fnn"], "seed": 3})
        runs = cfg.run_configs()
        self.assertEqual([(r.policy, r.capacity, r.seed) for r in runs], [("lru", 5, 3), ("fnn", 5, 3)])
        self.assertTrue(all(r.trace == cfg.trace for r in runs))

    def test_compare_invalid(self):
        with self.assertRaises(ConfigError):
            CompareConfig.from_dict({"trace": SYNTHETIC, "policies": []})
        with self.assertRaises(ConfigError):
            CompareConfig.from_dict({"trace": SYNTHETIC, "policies": ["mru"]})


if __name__ == "__main__":
    unittest.main()
