"""
Module for training convolutional networks with mini-batch Adam on the mean squared error.
"""

import logging

import numpy as np
from numpy.typing import NDArray

from pump_monitor.core.exceptions import NumericError, StructuralError, UsageError
from pump_monitor.core.prng import Prng
from pump_monitor.models.network import ModelConfig, TrainHyper
from pump_monitor.nn.layers import mse_loss
from pump_monitor.nn.network import ConvNet
from pump_monitor.nn.optimizer import AdamState, adam_step

logger = logging.getLogger()

# Epoch interval of the INFO level training progress messages
LOG_INTERVAL = 10

# Streams of the training seed's generator
INITIALISATION_STREAM = 1
SHUFFLE_STREAM = 2
TRAINING_FACTOR_STREAM = 3


def _batches(order: NDArray[np.int64], batch_size: int) -> list[NDArray[np.int64]]:
    batches = [order[start : start + batch_size] for start in range(0, len(order), batch_size)]
    # Training mode batchnorm needs at least two samples, so a trailing single sample joins the previous batch
    if len(batches) > 1 and len(batches[-1]) == 1:
        batches[-2] = np.concatenate([batches[-2], batches.pop()])
    return batches


def task_seed(seed: int, task_index: int) -> int:
    """
    Derive the training seed of one independent task (a fold or a grid point) from the global seed.

    :param seed: Global seed.
    :param task_index: Index of the task, selects its stream of the global seed.
    :return: Seed for `TrainHyper.seed` and the task's training factors.
    """
    return int(Prng(seed).spawn(task_index).words(1)[0])


def train(inputs: NDArray[np.float64], labels: NDArray[np.float64], config: ModelConfig, hyper: TrainHyper) -> ConvNet:
    """
    Train a network on prebuilt inputs.

    Each epoch shuffles the samples, splits them into mini-batches and performs one Adam step per batch on the mean
    squared error between the raw outputs and the labels. All randomness (initialisation and shuffling) is drawn from
    a generator seeded with `hyper.seed`.

    :param inputs: Inputs of shape `(samples, in_ch, length)` (6 channel ECNN inputs must already be built).
    :param labels: Labels of shape `(samples,)`.
    :param config: Network topology.
    :param hyper: Training hyperparameters.
    :return: The trained network in inference mode.
    :raises UsageError: If there are no samples, or only one.
    :raises StructuralError: If the inputs and labels do not match each other or the topology.
    :raises NumericError: If the loss becomes non-finite.
    """
    if len(inputs) == 0:
        raise UsageError("Cannot train on an empty dataset")
    if len(inputs) < 2:
        raise UsageError("Training requires at least two samples for batch normalization")
    if hyper.batch_size < 2:
        raise UsageError("Training requires a batch size of at least two for batch normalization")
    if len(labels) != len(inputs):
        raise StructuralError(f"Got {len(inputs)} inputs but {len(labels)} labels")

    prng = Prng(hyper.seed)
    network = ConvNet.initialise(config, prng.spawn(INITIALISATION_STREAM))
    shuffle_prng = prng.spawn(SHUFFLE_STREAM)
    state = AdamState()
    labels = np.asarray(labels, dtype=np.float64)

    logger.info(
        "Training %s (depth %d, kernel %d, channels %d) on %d samples for %d epochs",
        config.algorithm,
        config.depth,
        config.kernel,
        config.channels,
        len(inputs),
        hyper.epochs,
    )
    network.train()
    for epoch in range(1, hyper.epochs + 1):
        epoch_loss = 0.0
        for batch_indices in _batches(shuffle_prng.permutation(len(inputs)), hyper.batch_size):
            outputs = network.forward_batch(inputs[batch_indices])
            loss, grad = mse_loss(outputs, labels[batch_indices])
            if not np.isfinite(loss):
                raise NumericError(f"Training diverged with a non-finite loss in epoch {epoch}")
            adam_step(network.parameters, network.backward(grad), state, hyper)
            epoch_loss += loss * len(batch_indices)

        epoch_loss /= len(inputs)
        logger.debug("Epoch %d loss: %s", epoch, epoch_loss)
        if epoch % LOG_INTERVAL == 0 or epoch == hyper.epochs:
            logger.info("Epoch %d/%d mean loss %.6f", epoch, hyper.epochs, epoch_loss)

    network.eval()
    return network
