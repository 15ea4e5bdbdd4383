"""
Module for defining the models for representing network topologies and training hyperparameters.
"""

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, field_validator

RAW_INPUT_CHANNELS = 3
ENHANCED_INPUT_CHANNELS = 6


class ModelConfig(BaseModel):
    """
    Model for the topology of a convolutional network built from the CNN template.
    """

    # Number of convolutional layers
    depth: int = Field(default=4, ge=2)
    # Kernel size shared by all convolutional layers (odd so that same padding is symmetric)
    kernel: PositiveInt = 11
    # Channels of every activation between the first and the last convolutional layer
    channels: PositiveInt = 5
    # Whether the network receives the three additional deviation channels
    enhanced: bool = True
    length: PositiveInt = 800

    model_config = ConfigDict(frozen=True)

    @field_validator("kernel")
    @classmethod
    def validate_kernel(cls, kernel: int) -> int:
        """
        Validator that ensures the kernel size is odd.

        :param kernel: Kernel size to validate.
        :return: The kernel size.
        :raises ValueError: If the kernel size is even.
        """
        if kernel % 2 == 0:
            raise ValueError(f"Kernel size must be odd, got {kernel}")
        return kernel

    @property
    def input_channels(self) -> int:
        """Number of input channels (3 for the default CNN, 6 for the ECNN)."""
        return ENHANCED_INPUT_CHANNELS if self.enhanced else RAW_INPUT_CHANNELS

    @property
    def algorithm(self) -> str:
        """Name of the detector family this topology is used for."""
        return "ecnn" if self.enhanced else "cnn"

    def layer_channels(self) -> list[tuple[int, int]]:
        """
        Return the input and output channels of every convolutional layer.

        :return: List of `(in_channels, out_channels)` tuples, one per layer.
        """
        widths = [self.input_channels] + [self.channels] * (self.depth - 1) + [1]
        return list(zip(widths[:-1], widths[1:]))


class TrainHyper(BaseModel):
    """
    Model for the hyperparameters of a training run.
    """

    epochs: PositiveInt = 100
    learning_rate: float = Field(default=0.001, gt=0.0)
    batch_size: PositiveInt = 64
    beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    epsilon: float = Field(default=1e-8, gt=0.0)
    seed: int = 0
