"""
Unit tests for training networks.
"""

import numpy as np
import pytest

from pump_monitor.core.exceptions import StructuralError, UsageError
from pump_monitor.core.prng import Prng
from pump_monitor.models.network import ModelConfig, TrainHyper
from pump_monitor.nn.layers import mse_loss
from pump_monitor.nn.network import DECISION_THRESHOLD, Mode
from pump_monitor.nn.training import (
    INITIALISATION_STREAM,
    SHUFFLE_STREAM,
    TRAINING_FACTOR_STREAM,
    _batches,
    task_seed,
    train,
)

CONFIG = ModelConfig(depth=2, kernel=3, channels=2, enhanced=False, length=16)


def make_offset_inputs(count: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """
    Create inputs whose x axis is offset by 1 for the abnormal half and by 0 for the normal half.
    """
    prng = Prng(21)
    inputs = 0.05 * prng.normal((count, 3, 16))
    labels = np.array([index % 2 for index in range(count)], dtype=np.float64)
    inputs[:, 0, :] += labels[:, np.newaxis]
    return inputs, labels


class TestBatches:
    """Tests for the `_batches` function."""

    def test_trailing_single_sample_joins_previous_batch(self):
        """Test a last batch of one sample is merged into the one before."""

        batches = _batches(np.arange(9), 4)

        assert [len(batch) for batch in batches] == [4, 5]

    def test_even_split(self):
        """Test samples that split evenly keep the batch size."""

        assert [len(batch) for batch in _batches(np.arange(8), 4)] == [4, 4]


class TestTrain:
    """Tests for the `train` function."""

    def test_same_seed_is_deterministic(self):
        """Test training twice with the same seed gives identical parameters."""

        inputs, labels = make_offset_inputs()
        hyper = TrainHyper(epochs=3, batch_size=5, seed=4)

        first = train(inputs, labels, CONFIG, hyper)
        second = train(inputs, labels, CONFIG, hyper)

        for name, value in first.parameters.items():
            np.testing.assert_array_equal(value, second.parameters[name])
        for name, value in first.buffers.items():
            np.testing.assert_array_equal(value, second.buffers[name])

    def test_different_seeds_differ(self):
        """Test training with another seed gives different parameters."""

        inputs, labels = make_offset_inputs()

        first = train(inputs, labels, CONFIG, TrainHyper(epochs=1, batch_size=8, seed=1))
        second = train(inputs, labels, CONFIG, TrainHyper(epochs=1, batch_size=8, seed=2))

        assert not np.array_equal(first.parameters["conv0.weight"], second.parameters["conv0.weight"])

    def test_returns_network_in_inference_mode(self):
        """Test the trained network is switched to inference mode."""

        inputs, labels = make_offset_inputs()

        network = train(inputs, labels, CONFIG, TrainHyper(epochs=1, batch_size=8))

        assert network.mode == Mode.INFERENCE

    def test_learns_separable_data(self):
        """Test training separates inputs that differ by an offset of the x axis."""

        inputs, labels = make_offset_inputs()

        network = train(inputs, labels, CONFIG, TrainHyper(epochs=150, batch_size=8, learning_rate=0.01, seed=0))

        outputs = network.forward_batch(inputs)
        accuracy = np.mean((outputs >= DECISION_THRESHOLD) == (labels == 1.0))
        loss, _ = mse_loss(outputs, labels)
        assert accuracy >= 0.9
        assert loss < 0.25

    def test_with_no_samples(self):
        """Test training on an empty set of inputs."""

        with pytest.raises(UsageError):
            train(np.zeros((0, 3, 16)), np.zeros(0), CONFIG, TrainHyper())

    def test_with_single_sample(self):
        """Test training on a single input."""

        with pytest.raises(UsageError):
            train(np.zeros((1, 3, 16)), np.zeros(1), CONFIG, TrainHyper())

    def test_with_batch_size_of_one(self):
        """Test training with batches too small for batch normalization."""

        inputs, labels = make_offset_inputs()

        with pytest.raises(UsageError):
            train(inputs, labels, CONFIG, TrainHyper(batch_size=1))

    def test_with_mismatching_labels(self):
        """Test training with fewer labels than inputs."""

        inputs, labels = make_offset_inputs()

        with pytest.raises(StructuralError):
            train(inputs, labels[:-1], CONFIG, TrainHyper(epochs=1))

    def test_with_wrong_input_channels(self):
        """Test training a 3 channel network on 6 channel inputs."""

        with pytest.raises(StructuralError):
            train(np.zeros((4, 6, 16)), np.zeros(4), CONFIG, TrainHyper(epochs=1, batch_size=2))


class TestTaskSeed:
    """Tests for the `task_seed` function and the streams of a training seed."""

    def test_is_deterministic(self):
        """Test the same global seed and task give the same training seed."""

        assert task_seed(5, 3) == task_seed(5, 3)

    def test_tasks_get_different_seeds(self):
        """Test every fold or grid point trains with its own seed."""

        seeds = [task_seed(5, index) for index in range(20)]

        assert len(set(seeds)) == 20

    def test_training_streams_are_distinct(self):
        """Test the weights, the shuffling and the training factors draw from different words."""

        streams = [INITIALISATION_STREAM, SHUFFLE_STREAM, TRAINING_FACTOR_STREAM]
        words = [tuple(Prng(5).spawn(stream).words(4)) for stream in streams]

        assert len(set(streams)) == 3
        assert len(set(words)) == 3
