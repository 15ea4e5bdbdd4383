"""
Module for the Adam optimizer.
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from pump_monitor.core.exceptions import NumericError, StructuralError
from pump_monitor.models.network import TrainHyper


@dataclass
class AdamState:
    """
    First and second moment estimates of every parameter together with the step counter.
    """

    m: dict[str, NDArray[np.float64]] = field(default_factory=dict)
    v: dict[str, NDArray[np.float64]] = field(default_factory=dict)
    t: int = 0


def adam_step(
    params: dict[str, NDArray[np.float64]],
    grads: dict[str, NDArray[np.float64]],
    state: AdamState,
    hyper: TrainHyper,
) -> None:
    """
    Update the parameters in place with one bias corrected Adam step.

    `m <- b1 m + (1 - b1) g`, `v <- b2 v + (1 - b2) g^2`, `p <- p - lr m_hat / (sqrt(v_hat) + eps)`

    :param params: Parameters by name (updated in place).
    :param grads: Gradients by name, same shapes as the parameters.
    :param state: Optimizer state (updated in place).
    :param hyper: Hyperparameters providing the learning rate, betas and epsilon.
    :raises StructuralError: If a gradient is missing or its shape differs from the parameter.
    :raises NumericError: If a gradient contains non-finite values.
    """
    for name, param in params.items():
        if name not in grads or grads[name].shape != param.shape:
            raise StructuralError(f"Gradient of parameter '{name}' is missing or has the wrong shape")
        if not np.all(np.isfinite(grads[name])):
            raise NumericError(f"Gradient of parameter '{name}' contains non-finite values")

    state.t += 1
    correction1 = 1.0 - hyper.beta1**state.t
    correction2 = 1.0 - hyper.beta2**state.t

    for name, param in params.items():
        grad = grads[name]
        if name not in state.m:
            state.m[name] = np.zeros_like(param)
            state.v[name] = np.zeros_like(param)

        state.m[name] *= hyper.beta1
        state.m[name] += (1.0 - hyper.beta1) * grad
        state.v[name] *= hyper.beta2
        state.v[name] += (1.0 - hyper.beta2) * (grad * grad)

        m_hat = state.m[name] / correction1
        v_hat = state.v[name] / correction2
        param -= hyper.learning_rate * m_hat / (np.sqrt(v_hat) + hyper.epsilon)
