"""
Module for defining the schema models for representing model files.

A model file is a single JSON document with the fields (in this order):

- `format`: format identifier, always `pump-monitor-model/1`
- `config`: topology (`depth`, `kernel`, `channels`, `enhanced`, `length`)
- `layers`: one entry per convolutional layer with `index`, `in_channels`, `out_channels`, `weight` (nested
  `[out_channels][in_channels][kernel]`), `bias` (`[out_channels]`) and `batchnorm` (`gamma`, `beta`,
  `running_mean`, `running_var`, each `[out_channels]`), which is `null` for the last layer

All numbers are the shortest decimal form of 32-bit floats.
"""

from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, Field

from pump_monitor.models.network import ModelConfig
from pump_monitor.nn.network import ConvNet

MODEL_FORMAT = "pump-monitor-model/1"


def to_float32_list(values: np.ndarray) -> list:
    """
    Round values to 32-bit floats and convert them to nested lists of their shortest decimal form.

    :param values: Values to convert.
    :return: Nested lists with the shape of the values.
    """
    rounded = np.asarray(values, dtype=np.float32)
    # `str` of a 32-bit float is its shortest round-trip decimal form
    decimals = np.array([float(str(value)) for value in rounded.ravel()], dtype=np.float64)
    return decimals.reshape(rounded.shape).tolist()


class BatchNormSchema(BaseModel):
    """
    Schema model for the batchnorm parameters and running statistics of a layer.
    """

    gamma: list[float]
    beta: list[float]
    running_mean: list[float]
    running_var: list[float]


class LayerSchema(BaseModel):
    """
    Schema model for a convolutional layer and its batchnorm.
    """

    index: int = Field(description="Position of the layer, starting at 0")
    in_channels: int
    out_channels: int
    weight: list[list[list[float]]] = Field(description="Kernel weights indexed by output, input channel and tap")
    bias: list[float]
    batchnorm: Optional[BatchNormSchema] = Field(description="Batchnorm following the layer (`null` for the last one)")


class ModelDocumentSchema(BaseModel):
    """
    Schema model for a model file.
    """

    format: Literal["pump-monitor-model/1"] = MODEL_FORMAT
    config: ModelConfig
    layers: list[LayerSchema]

    @classmethod
    def from_network(cls, network: ConvNet) -> "ModelDocumentSchema":
        """
        Create the document of a network.

        :param network: Network to create the document for.
        :return: Created document.
        """
        layers = []
        channels = network.config.layer_channels()
        for index, (in_channels, out_channels) in enumerate(channels):
            batchnorm = None
            if index < len(channels) - 1:
                batchnorm = BatchNormSchema(
                    gamma=to_float32_list(network.parameters[f"bn{index}.gamma"]),
                    beta=to_float32_list(network.parameters[f"bn{index}.beta"]),
                    running_mean=to_float32_list(network.buffers[f"bn{index}.running_mean"]),
                    running_var=to_float32_list(network.buffers[f"bn{index}.running_var"]),
                )
            layers.append(
                LayerSchema(
                    index=index,
                    in_channels=in_channels,
                    out_channels=out_channels,
                    weight=to_float32_list(network.parameters[f"conv{index}.weight"]),
                    bias=to_float32_list(network.parameters[f"conv{index}.bias"]),
                    batchnorm=batchnorm,
                )
            )
        return cls(config=network.config, layers=layers)

    def to_network(self) -> ConvNet:
        """
        Build the network described by the document.

        :return: Network in inference mode.
        :raises StructuralError: If the layers do not match the topology.
        """
        parameters = {}
        for layer in self.layers:
            parameters[f"conv{layer.index}.weight"] = np.array(layer.weight, dtype=np.float64)
            parameters[f"conv{layer.index}.bias"] = np.array(layer.bias, dtype=np.float64)
            if layer.batchnorm is not None:
                parameters[f"bn{layer.index}.gamma"] = np.array(layer.batchnorm.gamma, dtype=np.float64)
                parameters[f"bn{layer.index}.beta"] = np.array(layer.batchnorm.beta, dtype=np.float64)
                parameters[f"bn{layer.index}.running_mean"] = np.array(layer.batchnorm.running_mean, dtype=np.float64)
                parameters[f"bn{layer.index}.running_var"] = np.array(layer.batchnorm.running_var, dtype=np.float64)
        return ConvNet(self.config, parameters)
