"""
Module for the forward and backward passes of the layer types the convolutional networks are built from.

Feature maps are arrays of shape `(channels, length)` for a single tensor or `(batch, channels, length)` for a batch.
Convolutions use stride 1 and zero same-padding of `(K - 1) / 2` on both ends so the length never changes.
"""

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from numpy.typing import NDArray

from pump_monitor.core.exceptions import NumericError, StructuralError, UsageError

Tensor = NDArray[np.float64]

BN_EPSILON = 1e-5
BN_MOMENTUM = 0.1


@dataclass
class MacCounter:
    """
    Accumulates the multiply-accumulate operations executed by `conv1d_forward`.
    """

    macs: int = 0


@dataclass
class BatchNormCache:
    """
    Values of a training mode batchnorm forward pass needed by its backward pass.
    """

    normalized: Tensor
    inverse_std: NDArray[np.float64]
    gamma: NDArray[np.float64]


def _as_batch(tensor: Tensor) -> tuple[Tensor, bool]:
    if tensor.ndim == 2:
        return tensor[np.newaxis], True
    if tensor.ndim == 3:
        return tensor, False
    raise StructuralError(f"Expected a tensor of 2 or 3 dimensions, got shape {tensor.shape}")


def _check_kernel(weights: Tensor) -> int:
    if weights.ndim != 3:
        raise StructuralError(f"Expected weights of shape (out, in, kernel), got shape {weights.shape}")
    kernel = weights.shape[2]
    if kernel % 2 == 0:
        raise StructuralError(f"Kernel size must be odd for same padding, got {kernel}")
    return kernel


def _windows(batch: Tensor, kernel: int) -> Tensor:
    pad = (kernel - 1) // 2
    padded = np.pad(batch, ((0, 0), (0, 0), (pad, pad)))
    # (batch, channels, length, kernel)
    return sliding_window_view(padded, kernel, axis=2)


def conv1d_forward(
    tensor: Tensor, weights: Tensor, bias: NDArray[np.float64], counter: MacCounter | None = None
) -> Tensor:
    """
    Apply a one dimensional convolution with stride 1 and zero same-padding.

    `output[o][t] = bias[o] + sum_{c,k} weights[o][c][k] * padded_input[c][t + k]`

    :param tensor: Input of shape `(in_ch, length)` or `(batch, in_ch, length)`.
    :param weights: Weights of shape `(out_ch, in_ch, K)` with odd `K`.
    :param bias: Bias of shape `(out_ch,)`.
    :param counter: Optional counter the executed multiply-accumulates are added to.
    :return: Output of shape `(out_ch, length)` or `(batch, out_ch, length)`.
    :raises StructuralError: If the channel counts or shapes do not match.
    :raises NumericError: If the input contains non-finite values.
    """
    batch, squeeze = _as_batch(tensor)
    kernel = _check_kernel(weights)
    if batch.shape[1] != weights.shape[1]:
        raise StructuralError(f"Input has {batch.shape[1]} channels but the weights expect {weights.shape[1]}")
    if bias.shape != (weights.shape[0],):
        raise StructuralError(f"Bias of shape {bias.shape} does not match {weights.shape[0]} output channels")
    if not np.all(np.isfinite(batch)):
        raise NumericError("Convolution input contains non-finite values")

    output = np.einsum("bclk,ock->bol", _windows(batch, kernel), weights, optimize=True)
    output += bias[np.newaxis, :, np.newaxis]
    if counter is not None:
        counter.macs += batch.shape[0] * batch.shape[2] * weights.size
    return output[0] if squeeze else output


def conv1d_backward(grad_out: Tensor, cached_input: Tensor | None, weights: Tensor) -> tuple[Tensor, Tensor, Tensor]:
    """
    Compute the gradients of a convolution performed by `conv1d_forward`.

    :param grad_out: Gradient of the loss with respect to the convolution output.
    :param cached_input: Input of the forward pass.
    :param weights: Weights of the forward pass.
    :return: Tuple with the gradients with respect to the input, the weights and the bias.
    :raises UsageError: If there is no cached input.
    :raises StructuralError: If the shapes are inconsistent with the forward pass.
    """
    if cached_input is None:
        raise UsageError("Convolution backward pass called without a cached forward input")
    batch, squeeze = _as_batch(cached_input)
    grad, _ = _as_batch(grad_out)
    kernel = _check_kernel(weights)
    expected = (batch.shape[0], weights.shape[0], batch.shape[2])
    if grad.shape != expected or batch.shape[1] != weights.shape[1]:
        raise StructuralError(f"Gradient of shape {grad.shape} does not match the forward output shape {expected}")

    grad_weights = np.einsum("bclk,bol->ock", _windows(batch, kernel), grad, optimize=True)
    grad_bias = grad.sum(axis=(0, 2))
    # Correlating the padded gradient with the flipped kernel gives the input gradient
    grad_input = np.einsum("bolk,ock->bcl", _windows(grad, kernel), weights[:, :, ::-1], optimize=True)
    return (grad_input[0] if squeeze else grad_input), grad_weights, grad_bias


def batchnorm_forward(
    batch: Tensor,
    gamma: NDArray[np.float64],
    beta: NDArray[np.float64],
    running_mean: NDArray[np.float64],
    running_var: NDArray[np.float64],
    training: bool,
    eps: float = BN_EPSILON,
    momentum: float = BN_MOMENTUM,
) -> tuple[Tensor, BatchNormCache | None]:
    """
    Apply batch normalization over the batch and length axes of each channel.

    In training mode the batch statistics are used and the running statistics are updated in place with
    `running = (1 - momentum) * running + momentum * batch_statistic`. In inference mode the running statistics are
    used.

    :param batch: Input of shape `(batch, channels, length)`.
    :param gamma: Per channel scale.
    :param beta: Per channel shift.
    :param running_mean: Per channel running mean (updated in training mode).
    :param running_var: Per channel running variance (updated in training mode).
    :param training: Whether to normalize with the batch statistics.
    :param eps: Constant added to the variance.
    :param momentum: Weight of the batch statistics in the running statistics update.
    :return: Tuple with the normalized output and the cache for the backward pass (`None` in inference mode).
    :raises UsageError: If fewer than two tensors are given in training mode.
    """
    if batch.ndim != 3:
        raise StructuralError(f"Batchnorm expects a batch of shape (batch, channels, length), got {batch.shape}")
    if batch.shape[1] != gamma.shape[0]:
        raise StructuralError(f"Input has {batch.shape[1]} channels but batchnorm has {gamma.shape[0]}")

    if not training:
        inverse_std = 1.0 / np.sqrt(running_var + eps)
        normalized = (batch - running_mean[np.newaxis, :, np.newaxis]) * inverse_std[np.newaxis, :, np.newaxis]
        return gamma[np.newaxis, :, np.newaxis] * normalized + beta[np.newaxis, :, np.newaxis], None

    if batch.shape[0] < 2:
        raise UsageError(f"Batchnorm in training mode requires a batch of at least 2, got {batch.shape[0]}")

    mean = batch.mean(axis=(0, 2))
    var = batch.var(axis=(0, 2))
    inverse_std = 1.0 / np.sqrt(var + eps)
    normalized = (batch - mean[np.newaxis, :, np.newaxis]) * inverse_std[np.newaxis, :, np.newaxis]

    running_mean *= 1.0 - momentum
    running_mean += momentum * mean
    running_var *= 1.0 - momentum
    running_var += momentum * var

    output = gamma[np.newaxis, :, np.newaxis] * normalized + beta[np.newaxis, :, np.newaxis]
    return output, BatchNormCache(normalized=normalized, inverse_std=inverse_std, gamma=gamma.copy())


def batchnorm_backward(grad_out: Tensor, cache: BatchNormCache | None) -> tuple[Tensor, Tensor, Tensor]:
    """
    Compute the gradients of a training mode batchnorm forward pass.

    :param grad_out: Gradient of the loss with respect to the batchnorm output.
    :param cache: Cache returned by `batchnorm_forward`.
    :return: Tuple with the gradients with respect to the input, `gamma` and `beta`.
    :raises UsageError: If there is no cache.
    """
    if cache is None:
        raise UsageError("Batchnorm backward pass called without a cached training mode forward pass")
    count = grad_out.shape[0] * grad_out.shape[2]
    grad_beta = grad_out.sum(axis=(0, 2))
    grad_gamma = (grad_out * cache.normalized).sum(axis=(0, 2))
    scale = (cache.gamma * cache.inverse_std / count)[np.newaxis, :, np.newaxis]
    grad_input = scale * (
        count * grad_out
        - grad_beta[np.newaxis, :, np.newaxis]
        - cache.normalized * grad_gamma[np.newaxis, :, np.newaxis]
    )
    return grad_input, grad_gamma, grad_beta


def relu_forward(tensor: Tensor) -> Tensor:
    """
    Apply `max(0, x)` elementwise.

    :param tensor: Input of any shape.
    :return: Rectified output.
    """
    return np.maximum(tensor, 0.0)


def relu_backward(grad_out: Tensor, cached_input: Tensor) -> Tensor:
    """
    Pass the gradient where the forward input was positive.

    :param grad_out: Gradient of the loss with respect to the output.
    :param cached_input: Input of the forward pass.
    :return: Gradient with respect to the input.
    """
    return np.where(cached_input > 0.0, grad_out, 0.0)


def global_avg_pool_forward(tensor: Tensor) -> NDArray[np.float64] | float:
    """
    Average a single channel feature map over its length.

    :param tensor: Input of shape `(1, length)` or `(batch, 1, length)`.
    :return: The mean (a float for a single tensor, an array of shape `(batch,)` for a batch).
    :raises StructuralError: If the input has more than one channel.
    """
    batch, squeeze = _as_batch(tensor)
    if batch.shape[1] != 1:
        raise StructuralError(f"Global average pooling expects exactly 1 channel, got {batch.shape[1]}")
    means = batch[:, 0, :].mean(axis=1)
    return float(means[0]) if squeeze else means


def global_avg_pool_backward(grad_out: NDArray[np.float64] | float, length: int) -> Tensor:
    """
    Distribute the gradient of the pooled value uniformly over the length.

    :param grad_out: Gradient with respect to the pooled value(s).
    :param length: Length of the pooled feature map.
    :return: Gradient of shape `(1, length)` for a scalar or `(batch, 1, length)` for an array.
    """
    grads = np.asarray(grad_out, dtype=np.float64)
    if grads.ndim == 0:
        return np.full((1, length), float(grads) / length)
    return np.repeat((grads / length)[:, np.newaxis, np.newaxis], length, axis=2)


def mse_loss(
    prediction: NDArray[np.float64] | float, target: NDArray[np.float64] | float
) -> tuple[float, NDArray[np.float64] | float]:
    """
    Squared error between predictions and `0`/`1` targets.

    For scalars the loss is `(prediction - target)^2` with gradient `2 (prediction - target)`. For arrays the loss is
    the mean over the batch and the gradient is that of the mean, `2 (prediction - target) / batch`.

    :param prediction: Predicted value(s).
    :param target: Target label(s).
    :return: Tuple with the loss and its gradient with respect to the prediction(s).
    """
    difference = np.asarray(prediction, dtype=np.float64) - np.asarray(target, dtype=np.float64)
    if difference.ndim == 0:
        return float(difference**2), float(2.0 * difference)
    return float(np.mean(difference**2)), 2.0 * difference / difference.size
