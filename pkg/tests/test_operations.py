"""
Unit tests for the operation wrappers.
"""

import json
import os
import tempfile
import unittest
from unittest.mock import Mock, patch

from src.models.predictor import PredictorConfig
from src.models.run import CompareConfig, RunConfig, TraceSource
from src.models.synthetic import SyntheticConfig
from src.operations import compare_policies, evaluate_predictors, generate_trace, simulate
from src.operations.simulate import output_stem
from src.utils.errors import ConfigError


class TestOperations(unittest.TestCase):
    """Test cases for the wrapper functions behind the subcommands."""

    def setUp(self):
        """Set up a small workload and run configuration."""
        self.synthetic = SyntheticConfig(catalogue_size=50, arrival_rate=5.0, duration=200.0, epoch_duration=100.0)
        self.source = TraceSource(synthetic=self.synthetic)
        self.predictor = PredictorConfig(T=100.0)
        self.run_cfg = RunConfig(trace=self.source, policy="lru", capacity=5, predictor=self.predictor)

    def test_generate_trace(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "nested", "trace.csv")
            count = generate_trace(self.synthetic, path)
            with open(path, encoding="utf-8") as handle:
                self.assertEqual(len(handle.read().splitlines()), count)
        self.assertGreater(count, 0)

    @patch("src.engine.write_metrics")
    @patch("src.engine.run")
    def test_simulate_writes_to_default_stem(self, mock_run, mock_write):
        metrics = Mock()
        mock_run.return_value = metrics

        result = simulate(self.run_cfg)

        self.assertIs(result, metrics)
        mock_run.assert_called_once_with(self.run_cfg, progress=None)
        mock_write.assert_called_once_with(metrics, output_stem(self.run_cfg))

    def test_output_stem(self):
        self.assertTrue(output_stem(self.run_cfg).endswith(os.path.join("runs", "lru-c5-s0")))
        self.assertEqual(output_stem(self.run_cfg.with_overrides(output="here")), "here")

    @patch("src.operations.compare.engine.write_comparison")
    @patch("src.operations.compare.engine.compare")
    def test_compare_policies(self, mock_compare, mock_write):
        cfg = CompareConfig(
            trace=self.source, policies=["lru", "arc"], capacities=[2, 4], predictor=self.predictor, output="cmp"
        )
        mock_compare.return_value = ["row"]

        rows = compare_policies(cfg, workers=3)

        self.assertEqual(rows, ["row"])
        runs = mock_compare.call_args[0][0]
        self.assertEqual([(r.policy, r.capacity) for r in runs], [("lru", 2), ("arc", 2), ("lru", 4), ("arc", 4)])
        self.assertEqual(mock_compare.call_args[1], {"workers": 3})
        mock_write.assert_called_once_with(["row"], "cmp")

    @patch("src.operations.compare.engine.write_comparison")
    @patch("src.operations.compare.engine.compare", return_value=[])
    @patch("src.operations.compare.config")
    def test_compare_policies_default_workers(self, mock_config, mock_compare, mock_write):
        mock_config.workers = 4
        mock_config.output_path.return_value = "default-stem"
        compare_policies(CompareConfig(trace=self.source, policies=["lru"], predictor=self.predictor))
        self.assertEqual(mock_compare.call_args[1], {"workers": 4})
        mock_write.assert_called_once_with([], "default-stem")

    def test_evaluate_predictors_writes_json(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "eval.json")
            cfg = PredictorConfig(T=100.0, hidden_layers=[4], H=1)
            results = evaluate_predictors(self.source, cfg, seed=1, output=path)
            with open(path, encoding="utf-8") as handle:
                payload = json.load(handle)
        self.assertIn("popularity_samples", payload["results"][0])
        self.assertEqual([r.predictor for r in results], ["fnn", "lr", "avg"])

    def test_evaluate_predictors_rejects_misaligned_epochs(self):
        with self.assertRaises(ConfigError):
            evaluate_predictors(self.source, PredictorConfig(T=50.0))


if __name__ == "__main__":
    unittest.main()
