"""
Unit tests for the trace module.
"""

import io
import os
import tempfile
import unittest
from collections import Counter

import numpy as np
from scipy.stats import chi2_contingency, chisquare

from src.trace import (
    CLASS_MASS,
    RequestEvent,
    SyntheticConfig,
    class_permutation,
    epoch_of,
    gen_synthetic,
    open_trace,
    read_trace,
    stationary_probabilities,
    write_trace,
    write_trace_file,
    zipf_weights,
)
from src.utils.errors import InvalidArgumentError, TraceOrderError, TraceParseError


class TestZipfWeights(unittest.TestCase):
    """Test cases for zipf_weights."""

    def test_single_rank(self):
        np.testing.assert_array_equal(zipf_weights(1, 0.8), [1.0])

    def test_exponent_zero_is_uniform(self):
        np.testing.assert_allclose(zipf_weights(3, 0.0), [1 / 3, 1 / 3, 1 / 3])

    def test_weights_sum_to_one_and_decrease(self):
        weights = zipf_weights(1000, 0.8)
        self.assertAlmostEqual(float(weights.sum()), 1.0, places=12)
        self.assertTrue(np.all(np.diff(weights) < 0))
        self.assertAlmostEqual(weights[0] / weights[1], 2 ** 0.8, places=12)

    def test_invalid_arguments(self):
        with self.assertRaises(InvalidArgumentError):
            zipf_weights(0, 0.8)
        with self.assertRaises(InvalidArgumentError):
            zipf_weights(10, -0.1)


class TestEpochOf(unittest.TestCase):
    """Test cases for epoch_of."""

    def test_boundaries(self):
        self.assertEqual(epoch_of(0.0, 200.0), 0)
        self.assertEqual(epoch_of(199.999, 200.0), 0)
        self.assertEqual(epoch_of(200.0, 200.0), 1)
        self.assertEqual(epoch_of(1000.5, 200.0), 5)

    def test_invalid_arguments(self):
        with self.assertRaises(InvalidArgumentError):
            epoch_of(10.0, 0.0)
        with self.assertRaises(InvalidArgumentError):
            epoch_of(-1.0, 200.0)


class TestGenSynthetic(unittest.TestCase):
    """Test cases for the synthetic workload generator."""

    def setUp(self):
        """Set up a small workload."""
        self.cfg = SyntheticConfig(
            catalogue_size=100, zipf_exponent=0.8, arrival_rate=500.0, duration=40.0, epoch_duration=10.0, seed=7
        )
        self.events = list(gen_synthetic(self.cfg))

    def test_events_are_ordered_and_in_range(self):
        times = [e.time for e in self.events]
        self.assertTrue(all(a <= b for a, b in zip(times, times[1:])))
        self.assertGreaterEqual(times[0], 0.0)
        self.assertLess(times[-1], self.cfg.duration)
        self.assertTrue(all(0 <= e.content_id < self.cfg.catalogue_size for e in self.events))

    def test_event_count_matches_rate(self):
        expected = self.cfg.arrival_rate * self.cfg.duration
        self.assertLess(abs(len(self.events) - expected), 5 * np.sqrt(expected))

    def test_mean_count_over_many_traces(self):
        cfg = SyntheticConfig(catalogue_size=50, arrival_rate=100.0, duration=10.0, epoch_duration=5.0)
        counts = [
            sum(1 for _ in gen_synthetic(SyntheticConfig(**{**cfg.to_dict(), "seed": seed}))) for seed in range(30)
        ]
        expected = cfg.arrival_rate * cfg.duration
        self.assertLess(abs(np.mean(counts) - expected), 3 * np.sqrt(expected / len(counts)))

    def test_deterministic_for_a_seed(self):
        self.assertEqual(self.events, list(gen_synthetic(self.cfg)))

    def test_different_seed_gives_different_trace(self):
        other = SyntheticConfig(**{**self.cfg.to_dict(), "seed": 8})
        self.assertNotEqual(self.events[:50], list(gen_synthetic(other))[:50])

    def test_class_mass(self):
        class1 = sum(1 for e in self.events if e.content_id < self.cfg.class1_size)
        self.assertAlmostEqual(class1 / len(self.events), CLASS_MASS, delta=0.02)

    def test_class1_follows_zipf(self):
        n1 = self.cfg.class1_size
        counts = np.bincount([e.content_id for e in self.events if e.content_id < n1], minlength=n1)
        expected = zipf_weights(n1, self.cfg.zipf_exponent) * counts.sum()
        _, p_value = chisquare(counts, expected)
        self.assertGreater(p_value, 0.001)

    def test_class1_frequencies_are_stationary(self):
        n1 = self.cfg.class1_size
        epochs = int(self.cfg.duration / self.cfg.epoch_duration)
        table = np.zeros((epochs, n1), dtype=np.int64)
        for e in self.events:
            if e.content_id < n1:
                table[epoch_of(e.time, self.cfg.epoch_duration), e.content_id] += 1
        _, p_value, _, _ = chi2_contingency(table)
        self.assertGreater(p_value, 0.001)
        self.assertTrue(all(int(np.argmax(row)) == 0 for row in table))

    def test_class2_permutation_changes_per_epoch(self):
        n1 = self.cfg.class1_size
        for epoch in range(2):
            top_rank_id = n1 + int(class_permutation(self.cfg, epoch)[0])
            class2 = Counter(
                e.content_id
                for e in self.events
                if e.content_id >= n1 and epoch_of(e.time, self.cfg.epoch_duration) == epoch
            )
            self.assertEqual(class2.most_common(1)[0][0], top_rank_id)

    def test_class_permutation(self):
        first = class_permutation(self.cfg, 0)
        self.assertEqual(sorted(first.tolist()), list(range(self.cfg.class2_size)))
        np.testing.assert_array_equal(first, class_permutation(self.cfg, 0))
        self.assertFalse(np.array_equal(first, class_permutation(self.cfg, 1)))

    def test_permutation_disabled(self):
        cfg = SyntheticConfig(**{**self.cfg.to_dict(), "permute": False})
        np.testing.assert_array_equal(class_permutation(cfg, 3), np.arange(cfg.class2_size))

    def test_stationary_probabilities(self):
        probs = stationary_probabilities(self.cfg)
        self.assertEqual(len(probs), self.cfg.catalogue_size)
        self.assertAlmostEqual(float(probs.sum()), 1.0, places=12)
        self.assertAlmostEqual(float(probs[: self.cfg.class1_size].sum()), CLASS_MASS, places=12)

    def test_zero_duration_is_empty(self):
        cfg = SyntheticConfig(**{**self.cfg.to_dict(), "duration": 0.0})
        self.assertEqual(list(gen_synthetic(cfg)), [])


class TestTraceFiles(unittest.TestCase):
    """Test cases for reading and writing trace files."""

    def test_read_trace(self):
        events = list(read_trace(io.StringIO("0.5,3\n\n1.0,4\n1.0,3\n")))
        self.assertEqual(events, [RequestEvent(0.5, 3), RequestEvent(1.0, 4), RequestEvent(1.0, 3)])

    def test_read_binary_stream(self):
        events = list(read_trace(io.BytesIO(b"0,1\n2.5,2\n")))
        self.assertEqual(events, [RequestEvent(0.0, 1), RequestEvent(2.5, 2)])

    def test_malformed_line_names_line_number(self):
        with self.assertRaises(TraceParseError) as context:
            list(read_trace(io.StringIO("0.5,3\nabc,4\n")))
        self.assertEqual(context.exception.line, 2)
        self.assertIn("line 2", str(context.exception))

    def test_invalid_utf8_names_line_number(self):
        with self.assertRaises(TraceParseError) as context:
            list(read_trace(io.BytesIO(b"0.0,5\n\xff\xfe,7\n")))
        self.assertEqual(context.exception.line, 2)

    def test_invalid_utf8_in_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "bad.trace")
            with open(path, "wb") as handle:
                handle.write(b"0.0,1\n1.0,2\n2.0,\xc3\n")
            with self.assertRaises(TraceParseError) as context:
                list(open_trace(path))
        self.assertEqual(context.exception.line, 3)

    def test_wrong_field_count(self):
        with self.assertRaises(TraceParseError):
            list(read_trace(io.StringIO("0.5,3,9\n")))

    def test_negative_values_rejected(self):
        with self.assertRaises(TraceParseError):
            list(read_trace(io.StringIO("-1.0,3\n")))
        with self.assertRaises(TraceParseError):
            list(read_trace(io.StringIO("1.0,-3\n")))

    def test_decreasing_time(self):
        with self.assertRaises(TraceOrderError) as context:
            list(read_trace(io.StringIO("2.0,1\n1.0,1\n")))
        self.assertEqual(context.exception.line, 2)

    def test_written_times_read_back_exactly(self):
        cfg = SyntheticConfig(catalogue_size=20, arrival_rate=50.0, duration=5.0, epoch_duration=1.0, seed=3)
        events = list(gen_synthetic(cfg))
        sink = io.StringIO()
        self.assertEqual(write_trace(events, sink), len(events))
        self.assertEqual(list(read_trace(io.StringIO(sink.getvalue()))), events)

    def test_write_trace_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "sub", "trace.csv")
            count = write_trace_file([RequestEvent(0.25, 1), RequestEvent(1.5, 2)], path)
            self.assertEqual(count, 2)
            with open(path, encoding="utf-8") as handle:
                self.assertEqual(handle.read(), "0.25,1\n1.5,2\n")
            self.assertEqual(os.listdir(os.path.dirname(path)), ["trace.csv"])


if __name__ == "__main__":
    unittest.main()
