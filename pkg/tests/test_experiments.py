"""
Reduced-scale reproductions of the headline caching results.

These runs take minutes; deselect them with ``pytest -m "not slow"``.
"""

import unittest

import numpy as np
import pytest

from src.engine import Simulator, compare, eval_predictors, run
from src.models.predictor import PredictorConfig
from src.models.run import RunConfig, TraceSource
from src.models.synthetic import SyntheticConfig
from src.predictors import StaticPredictor
from src.trace import gen_synthetic, stationary_probabilities

DESK_WORKLOAD = SyntheticConfig(catalogue_size=2000, arrival_rate=200.0, duration=2000.0, epoch_duration=200.0)


@pytest.mark.slow
class TestStaticOptimum(unittest.TestCase):
    """The heap policy with true popularities keeps the top-C contents."""

    def test_converges_to_top_c_mass(self):
        workload = SyntheticConfig(
            catalogue_size=1000, arrival_rate=500.0, duration=200.0, epoch_duration=20.0, permute=False
        )
        pcfg = PredictorConfig(T=20.0)
        probabilities = stationary_probabilities(workload)
        capacity = 50
        cfg = RunConfig(trace=TraceSource(synthetic=workload), policy="avg", capacity=capacity, predictor=pcfg)
        oracle = StaticPredictor(pcfg, dict(enumerate(probabilities)))

        metrics = Simulator(cfg, predictor=oracle).run(gen_synthetic(workload))

        optimum = float(np.sort(probabilities)[::-1][:capacity].sum())
        self.assertGreaterEqual(metrics.requests, 90000)
        self.assertAlmostEqual(metrics.post_warmup_hit_rate, optimum, delta=0.01)


@pytest.mark.slow
class TestLearningCurve(unittest.TestCase):
    """FNN training on a stationary workload flattens out."""

    def test_plateau(self):
        workload = SyntheticConfig(
            catalogue_size=2000, arrival_rate=200.0, duration=200.0, epoch_duration=200.0, permute=False
        )
        cfg = RunConfig(trace=TraceSource(synthetic=workload), policy="fnn", capacity=20)
        curve = {point.iteration: point for point in run(cfg).loss_curve}

        self.assertLess(curve[400].train_loss, curve[50].train_loss)
        self.assertLess(curve[400].validation_loss, 0.5 * curve[50].validation_loss)
        self.assertAlmostEqual(curve[400].validation_loss, curve[800].validation_loss,
                               delta=0.1 * curve[800].validation_loss)


@pytest.mark.slow
class TestPredictorOrdering(unittest.TestCase):
    """Online prediction error ranks the network above regression above averaging."""

    def test_fnn_lr_avg(self):
        pcfg = PredictorConfig()
        for seed in (0, 1, 2):
            with self.subTest(seed=seed):
                workload = SyntheticConfig(**{**DESK_WORKLOAD.to_dict(), "seed": seed})
                results = {r.predictor: r.mean_eval_mse for r in eval_predictors(gen_synthetic(workload), pcfg, seed)}
                self.assertLess(results["fnn"], results["lr"])
                self.assertLess(results["lr"], results["avg"])


@pytest.mark.slow
class TestPolicyOrdering(unittest.TestCase):
    """Prediction-driven caching beats the recency baselines."""

    def test_hit_rates(self):
        workload = SyntheticConfig(**{**DESK_WORKLOAD.to_dict(), "duration": 1000.0})
        source = TraceSource(synthetic=workload)
        for share in (0.01, 0.05, 0.10):
            capacity = int(workload.catalogue_size * share)
            with self.subTest(capacity=capacity):
                policies = ("fnn", "lr", "avg", "arc", "lru")
                cfgs = [RunConfig(trace=source, policy=p, capacity=capacity) for p in policies]
                rates = {row.policy: row.post_warmup_hit_rate for row in compare(cfgs, workers=5)}
                self.assertGreater(rates["fnn"], rates["arc"])
                self.assertGreaterEqual(rates["arc"], rates["lru"])
                self.assertGreaterEqual(rates["avg"], rates["fnn"] - 0.01)
                low, high = sorted((rates["avg"], rates["fnn"]))
                self.assertGreaterEqual(rates["lr"], low - 0.005)
                self.assertLessEqual(rates["lr"], high + 0.005)


if __name__ == "__main__":
    unittest.main()
