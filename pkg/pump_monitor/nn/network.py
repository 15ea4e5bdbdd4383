"""
Module for the convolutional network built from the CNN template and its complexity accounting.

The network is `depth` convolutional layers with identical kernel size. Every layer but the last is followed by
batch normalization and ReLU. The last layer outputs a single channel that is averaged over the length to produce the
raw output, which is classified as normal when `< 0.5`.
"""

import logging
from enum import StrEnum
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from pump_monitor.core.exceptions import StructuralError, UsageError
from pump_monitor.core.prng import Prng
from pump_monitor.models.network import ModelConfig
from pump_monitor.nn.layers import (
    BatchNormCache,
    MacCounter,
    Tensor,
    batchnorm_backward,
    batchnorm_forward,
    conv1d_backward,
    conv1d_forward,
    global_avg_pool_backward,
    global_avg_pool_forward,
    relu_backward,
    relu_forward,
)

logger = logging.getLogger()

DECISION_THRESHOLD = 0.5


class Mode(StrEnum):
    """
    Mode of a network.
    """

    TRAINING = "training"
    INFERENCE = "inference"


def count_macs(config: ModelConfig) -> int:
    """
    Count the multiply-accumulate operations needed to process one sample.

    Only convolution multiplies are counted (`length * K * in_ch * out_ch` per layer); bias additions, batchnorm,
    ReLU and pooling are excluded.

    :param config: Network topology.
    :return: Number of MAC operations.
    """
    return sum(
        config.length * config.kernel * in_channels * out_channels
        for in_channels, out_channels in config.layer_channels()
    )


def classify(output: float) -> int:
    """
    Turn a raw network output into a label.

    :param output: Raw output.
    :return: `0` (normal) if the output is below 0.5, else `1` (abnormal).
    """
    return 0 if output < DECISION_THRESHOLD else 1


class ConvNet:
    """
    Convolutional network with trainable parameters and batchnorm running statistics.
    """

    def __init__(self, config: ModelConfig, parameters: Optional[dict[str, NDArray[np.float64]]] = None) -> None:
        """
        Initialise the network with zero parameters or with the given ones.

        :param config: Network topology.
        :param parameters: Optional parameters and running statistics by name (see `parameter_shapes`).
        :raises StructuralError: If a given parameter is missing or has the wrong shape.
        """
        self.config = config
        self.mode = Mode.INFERENCE
        self.parameters: dict[str, NDArray[np.float64]] = {}
        self.buffers: dict[str, NDArray[np.float64]] = {}
        self._cache: Optional[dict] = None

        for name, shape in self.parameter_shapes().items():
            self.parameters[name] = np.ones(shape) if name.endswith(".gamma") else np.zeros(shape)
        for name, shape in self.buffer_shapes().items():
            self.buffers[name] = np.ones(shape) if name.endswith(".running_var") else np.zeros(shape)

        if parameters is not None:
            for name, target in [*self.parameters.items(), *self.buffers.items()]:
                if name not in parameters:
                    raise StructuralError(f"Parameter '{name}' is missing")
                value = np.asarray(parameters[name], dtype=np.float64)
                if value.shape != target.shape:
                    raise StructuralError(f"Parameter '{name}' has shape {value.shape}, expected {target.shape}")
                target[...] = value

    @classmethod
    def initialise(cls, config: ModelConfig, prng: Prng) -> "ConvNet":
        """
        Create a network with randomly initialised convolution weights.

        Weights are drawn uniformly from `[-b, b]` with `b = sqrt(6 / fan_in)` and `fan_in = in_ch * K`; biases and
        batchnorm shifts start at 0 and batchnorm scales at 1.

        :param config: Network topology.
        :param prng: Generator the weights are drawn from.
        :return: Initialised network.
        """
        network = cls(config)
        for index, (in_channels, out_channels) in enumerate(config.layer_channels()):
            bound = np.sqrt(6.0 / (in_channels * config.kernel))
            network.parameters[f"conv{index}.weight"][...] = prng.uniform(
                -bound, bound, (out_channels, in_channels, config.kernel)
            )
        return network

    def parameter_shapes(self) -> dict[str, tuple[int, ...]]:
        """
        Return the names and shapes of the trainable parameters.

        :return: Shapes by name in layer order.
        """
        shapes = {}
        layers = self.config.layer_channels()
        for index, (in_channels, out_channels) in enumerate(layers):
            shapes[f"conv{index}.weight"] = (out_channels, in_channels, self.config.kernel)
            shapes[f"conv{index}.bias"] = (out_channels,)
            if index < len(layers) - 1:
                shapes[f"bn{index}.gamma"] = (out_channels,)
                shapes[f"bn{index}.beta"] = (out_channels,)
        return shapes

    def buffer_shapes(self) -> dict[str, tuple[int, ...]]:
        """
        Return the names and shapes of the batchnorm running statistics.

        :return: Shapes by name in layer order.
        """
        shapes = {}
        for index, (_, out_channels) in enumerate(self.config.layer_channels()[:-1]):
            shapes[f"bn{index}.running_mean"] = (out_channels,)
            shapes[f"bn{index}.running_var"] = (out_channels,)
        return shapes

    def train(self) -> None:
        """Switch to training mode (batch statistics, caching for the backward pass)."""
        self.mode = Mode.TRAINING

    def eval(self) -> None:
        """Switch to inference mode (frozen running statistics)."""
        self.mode = Mode.INFERENCE
        self._cache = None

    def _check_input(self, batch: Tensor) -> None:
        expected = (self.config.input_channels, self.config.length)
        if batch.ndim != 3 or batch.shape[1:] != expected:
            raise StructuralError(f"Network expects inputs of shape {expected}, got {batch.shape[1:]}")

    def forward_batch(self, batch: Tensor, counter: Optional[MacCounter] = None) -> NDArray[np.float64]:
        """
        Compute the raw outputs for a batch of inputs.

        In training mode the intermediate values are cached for `backward` and the running statistics are updated.

        :param batch: Inputs of shape `(batch, in_ch, length)`.
        :param counter: Optional counter for the executed convolution MACs.
        :return: Raw outputs of shape `(batch,)`.
        :raises StructuralError: If the inputs do not match the topology.
        """
        self._check_input(batch)
        training = self.mode == Mode.TRAINING
        last = self.config.depth - 1
        layer_caches = []

        activation = batch
        for index in range(self.config.depth):
            weight = self.parameters[f"conv{index}.weight"]
            conv_out = conv1d_forward(activation, weight, self.parameters[f"conv{index}.bias"], counter)
            if index == last:
                layer_caches.append({"conv_in": activation})
                activation = conv_out
                break

            normalized, bn_cache = batchnorm_forward(
                conv_out,
                self.parameters[f"bn{index}.gamma"],
                self.parameters[f"bn{index}.beta"],
                self.buffers[f"bn{index}.running_mean"],
                self.buffers[f"bn{index}.running_var"],
                training=training,
            )
            layer_caches.append({"conv_in": activation, "bn": bn_cache, "relu_in": normalized})
            activation = relu_forward(normalized)

        outputs = global_avg_pool_forward(activation)
        self._cache = {"layers": layer_caches} if training else None
        return outputs

    def forward(self, tensor: Tensor) -> float:
        """
        Compute the raw output `O_ic` for a single input using the frozen running statistics.

        :param tensor: Input of shape `(in_ch, length)`.
        :return: Raw output.
        :raises StructuralError: If the input does not match the topology.
        """
        mode = self.mode
        self.mode = Mode.INFERENCE
        try:
            return float(self.forward_batch(np.asarray(tensor, dtype=np.float64)[np.newaxis])[0])
        finally:
            self.mode = mode

    def backward(self, grad_outputs: NDArray[np.float64]) -> dict[str, NDArray[np.float64]]:
        """
        Compute the parameter gradients of the last training mode `forward_batch`.

        :param grad_outputs: Gradient of the loss with respect to each raw output, shape `(batch,)`.
        :return: Gradients by parameter name.
        :raises UsageError: If no training mode forward pass has been cached.
        """
        if self._cache is None:
            raise UsageError("Backward pass called without a cached training mode forward pass")

        grads: dict[str, NDArray[np.float64]] = {}
        grad = global_avg_pool_backward(grad_outputs, self.config.length)
        for index in reversed(range(self.config.depth)):
            layer_cache = self._cache["layers"][index]
            if index < self.config.depth - 1:
                grad = relu_backward(grad, layer_cache["relu_in"])
                bn_cache: BatchNormCache = layer_cache["bn"]
                grad, grads[f"bn{index}.gamma"], grads[f"bn{index}.beta"] = batchnorm_backward(grad, bn_cache)
            grad, grads[f"conv{index}.weight"], grads[f"conv{index}.bias"] = conv1d_backward(
                grad, layer_cache["conv_in"], self.parameters[f"conv{index}.weight"]
            )
        return grads

    def relu_gates(self) -> list[NDArray[np.bool_]]:
        """
        Return which ReLU inputs of the last training mode forward pass were positive.

        :return: One boolean mask per ReLU layer.
        :raises UsageError: If no training mode forward pass has been cached.
        """
        if self._cache is None:
            raise UsageError("No cached training mode forward pass")
        return [layer["relu_in"] > 0.0 for layer in self._cache["layers"][:-1]]
