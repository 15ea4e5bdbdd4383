"""
Unit tests for the layer forward and backward passes.

Gradients are checked against central finite differences of `sum(output * weights)` for a fixed random `weights`.
"""

import numpy as np
import pytest

from pump_monitor.core.exceptions import NumericError, StructuralError, UsageError
from pump_monitor.core.prng import Prng
from pump_monitor.nn.layers import (
    MacCounter,
    batchnorm_backward,
    batchnorm_forward,
    conv1d_backward,
    conv1d_forward,
    global_avg_pool_backward,
    global_avg_pool_forward,
    mse_loss,
    relu_backward,
    relu_forward,
)

STEP = 1e-6
TOLERANCE = 1e-5


def relative_error(analytic: float, numeric: float) -> float:
    """
    Relative difference of two derivatives that tolerates values close to zero.
    """
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-4)


def numeric_gradient(function, array: np.ndarray, index: tuple, step: float = STEP) -> float:
    """
    Central difference of a scalar function with respect to one entry of an array (restored afterwards).
    """
    original = array[index]
    array[index] = original + step
    upper = function()
    array[index] = original - step
    lower = function()
    array[index] = original
    return (upper - lower) / (2 * step)


def random_indices(prng: Prng, shape: tuple, count: int) -> list[tuple]:
    """
    Draw entry indices of an array of the given shape.
    """
    flat = (prng.random(count) * np.prod(shape)).astype(np.int64)
    return [np.unravel_index(value, shape) for value in flat]


class TestConv1dForward:
    """Tests for the `conv1d_forward` function."""

    def test_known_values(self):
        """Test a single channel convolution against values computed by hand."""

        tensor = np.array([[1.0, 2.0, 3.0]])
        weights = np.array([[[1.0, 0.0, -1.0]]])

        output = conv1d_forward(tensor, weights, np.array([0.5]))

        # Padded input 0 1 2 3 0
        np.testing.assert_allclose(output, [[0.5 - 2.0, 0.5 + 1.0 - 3.0, 0.5 + 2.0]])

    def test_matches_direct_summation(self):
        """Test a random convolution against an explicit sum over channels and kernel taps."""

        prng = Prng(30)
        tensor = prng.normal((2, 8))
        weights = prng.normal((1, 2, 3))
        bias = prng.normal(1)

        expected = np.zeros((1, 8))
        for position in range(8):
            total = bias[0]
            for channel in range(2):
                for tap in range(3):
                    source = position + tap - 1
                    if 0 <= source < 8:
                        total += weights[0, channel, tap] * tensor[channel, source]
            expected[0, position] = total

        np.testing.assert_allclose(conv1d_forward(tensor, weights, bias), expected, rtol=0.0, atol=1e-12)

    def test_preserves_length_and_batch(self):
        """Test the output keeps the length and the batch dimension."""

        prng = Prng(1)
        output = conv1d_forward(prng.normal((4, 3, 20)), prng.normal((5, 3, 7)), np.zeros(5))

        assert output.shape == (4, 5, 20)

    def test_counter(self):
        """Test the counter receives `batch * length * K * in_ch * out_ch` operations."""

        prng = Prng(1)
        counter = MacCounter()

        conv1d_forward(prng.normal((2, 3, 10)), prng.normal((4, 3, 5)), np.zeros(4), counter)

        assert counter.macs == 2 * 10 * 5 * 3 * 4

    def test_is_linear_in_the_input(self):
        """Test the convolution without bias is linear in its input."""

        prng = Prng(2)
        first, second = prng.normal((2, 12)), prng.normal((2, 12))
        weights, bias = prng.normal((3, 2, 3)), np.zeros(3)

        np.testing.assert_allclose(
            conv1d_forward(2.0 * first + second, weights, bias),
            2.0 * conv1d_forward(first, weights, bias) + conv1d_forward(second, weights, bias),
            atol=1e-12,
        )

    @pytest.mark.parametrize(
        "tensor_shape,weight_shape,bias_shape",
        [
            pytest.param((3, 10), (2, 4, 3), (2,), id="channel_mismatch"),
            pytest.param((3, 10), (2, 3, 4), (2,), id="even_kernel"),
            pytest.param((3, 10), (2, 3, 3), (3,), id="bias_mismatch"),
            pytest.param((1, 1, 3, 10), (2, 3, 3), (2,), id="too_many_dimensions"),
        ],
    )
    def test_with_invalid_shapes(self, tensor_shape, weight_shape, bias_shape):
        """Test applying a convolution with inconsistent shapes."""

        with pytest.raises(StructuralError):
            conv1d_forward(np.zeros(tensor_shape), np.zeros(weight_shape), np.zeros(bias_shape))

    def test_with_non_finite_input(self):
        """Test applying a convolution to an input containing infinity."""

        tensor = np.zeros((3, 10))
        tensor[0, 0] = np.inf

        with pytest.raises(NumericError):
            conv1d_forward(tensor, np.zeros((2, 3, 3)), np.zeros(2))


class TestConv1dBackward:
    """Tests for the `conv1d_backward` function."""

    def test_gradients_match_finite_differences(self):
        """Test the input, weight and bias gradients against finite differences."""

        prng = Prng(3)
        tensor = prng.normal((2, 3, 9))
        weights = prng.normal((4, 3, 5))
        bias = prng.normal(4)
        upstream = prng.normal((2, 4, 9))

        def loss():
            return float(np.sum(conv1d_forward(tensor, weights, bias) * upstream))

        grad_input, grad_weights, grad_bias = conv1d_backward(upstream, tensor, weights)

        for array, grad in ((tensor, grad_input), (weights, grad_weights), (bias, grad_bias)):
            for index in random_indices(prng, array.shape, 30):
                assert relative_error(grad[index], numeric_gradient(loss, array, index)) < TOLERANCE

    def test_without_cached_input(self):
        """Test calling the backward pass without a forward input."""

        with pytest.raises(UsageError):
            conv1d_backward(np.zeros((2, 10)), None, np.zeros((2, 3, 3)))

    def test_with_mismatching_gradient(self):
        """Test calling the backward pass with a gradient of the wrong shape."""

        with pytest.raises(StructuralError):
            conv1d_backward(np.zeros((3, 10)), np.zeros((3, 10)), np.zeros((2, 3, 3)))


class TestBatchnorm:
    """Tests for the `batchnorm_forward` and `batchnorm_backward` functions."""

    def test_training_normalizes_and_updates_running_statistics(self):
        """Test training mode normalizes each channel and moves the running statistics by the momentum."""

        prng = Prng(4)
        batch = 3.0 + 2.0 * prng.normal((8, 2, 50))
        running_mean, running_var = np.zeros(2), np.ones(2)

        output, cache = batchnorm_forward(batch, np.ones(2), np.zeros(2), running_mean, running_var, training=True)

        assert cache is not None
        np.testing.assert_allclose(output.mean(axis=(0, 2)), 0.0, atol=1e-10)
        np.testing.assert_allclose(output.var(axis=(0, 2)), 1.0, atol=1e-4)
        np.testing.assert_allclose(running_mean, 0.1 * batch.mean(axis=(0, 2)))
        np.testing.assert_allclose(running_var, 0.9 + 0.1 * batch.var(axis=(0, 2)))

    def test_inference_uses_running_statistics(self):
        """Test inference mode applies the running statistics and leaves them unchanged."""

        batch = np.full((1, 1, 4), 3.0)
        running_mean, running_var = np.array([1.0]), np.array([4.0])

        output, cache = batchnorm_forward(
            batch, np.array([2.0]), np.array([0.5]), running_mean, running_var, training=False
        )

        assert cache is None
        np.testing.assert_allclose(output, 2.0 * (3.0 - 1.0) / np.sqrt(4.0 + 1e-5) + 0.5)
        assert running_mean[0] == 1.0
        assert running_var[0] == 4.0

    def test_training_with_single_tensor(self):
        """Test training mode with a batch of one."""

        with pytest.raises(UsageError):
            batchnorm_forward(np.zeros((1, 2, 5)), np.ones(2), np.zeros(2), np.zeros(2), np.ones(2), training=True)

    def test_gradients_match_finite_differences(self):
        """Test the input, scale and shift gradients against finite differences."""

        prng = Prng(5)
        batch = prng.normal((3, 2, 7))
        gamma = 1.0 + 0.5 * prng.normal(2)
        beta = prng.normal(2)
        upstream = prng.normal((3, 2, 7))

        def loss():
            output, _ = batchnorm_forward(batch, gamma, beta, np.zeros(2), np.ones(2), training=True)
            return float(np.sum(output * upstream))

        _, cache = batchnorm_forward(batch, gamma, beta, np.zeros(2), np.ones(2), training=True)
        grad_input, grad_gamma, grad_beta = batchnorm_backward(upstream, cache)

        for array, grad in ((batch, grad_input), (gamma, grad_gamma), (beta, grad_beta)):
            for index in random_indices(prng, array.shape, 20):
                assert relative_error(grad[index], numeric_gradient(loss, array, index)) < TOLERANCE

    def test_backward_without_cache(self):
        """Test calling the backward pass after an inference mode forward pass."""

        with pytest.raises(UsageError):
            batchnorm_backward(np.zeros((2, 2, 5)), None)


class TestRelu:
    """Tests for the `relu_forward` and `relu_backward` functions."""

    def test_forward(self):
        """Test negative values are replaced by zero."""

        np.testing.assert_array_equal(relu_forward(np.array([-1.0, 0.0, 2.0])), [0.0, 0.0, 2.0])

    def test_gradient_matches_finite_differences(self):
        """Test the gradient away from the kink against finite differences."""

        prng = Prng(6)
        tensor = prng.normal((3, 11))
        tensor[np.abs(tensor) < 0.1] = 0.5
        upstream = prng.normal((3, 11))

        def loss():
            return float(np.sum(relu_forward(tensor) * upstream))

        grad = relu_backward(upstream, tensor)

        for index in random_indices(prng, tensor.shape, 20):
            assert relative_error(grad[index], numeric_gradient(loss, tensor, index)) < TOLERANCE


class TestGlobalAvgPool:
    """Tests for the `global_avg_pool_forward` and `global_avg_pool_backward` functions."""

    def test_forward_single_and_batch(self):
        """Test pooling a single tensor returns a float and a batch returns one mean per tensor."""

        assert global_avg_pool_forward(np.array([[1.0, 2.0, 6.0]])) == 3.0
        np.testing.assert_allclose(global_avg_pool_forward(np.array([[[1.0, 3.0]], [[0.0, 4.0]]])), [2.0, 2.0])

    def test_forward_with_multiple_channels(self):
        """Test pooling a tensor with more than one channel."""

        with pytest.raises(StructuralError):
            global_avg_pool_forward(np.zeros((2, 5)))

    def test_backward(self):
        """Test the gradient is spread uniformly over the length."""

        np.testing.assert_allclose(global_avg_pool_backward(2.0, 4), np.full((1, 4), 0.5))
        np.testing.assert_allclose(
            global_avg_pool_backward(np.array([4.0, 8.0]), 4), [[[1.0] * 4], [[2.0] * 4]]
        )


class TestMseLoss:
    """Tests for the `mse_loss` function."""

    def test_scalar(self):
        """Test the loss and gradient of a single prediction."""

        loss, grad = mse_loss(0.75, 1.0)

        assert loss == pytest.approx(0.0625)
        assert grad == pytest.approx(-0.5)

    def test_batch(self):
        """Test the loss of a batch is the mean and the gradient is that of the mean."""

        loss, grad = mse_loss(np.array([0.0, 1.0, 0.5, 1.0]), np.array([0.0, 0.0, 1.0, 1.0]))

        assert loss == pytest.approx((1.0 + 0.25) / 4)
        np.testing.assert_allclose(grad, [0.0, 0.5, -0.25, 0.0])
