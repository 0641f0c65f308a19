"""Analytic gradients of every block objective used by the trainers.

All formulas are plain gradients of unweighted sums of squared residuals;
loss weights and step sizes are applied by the callers. Batched variants
take auxiliary blocks as r x n matrices (columns are samples) and return
gradients summed over samples in ascending index order.
"""

from __future__ import annotations

import numpy as np

from .activations import ActivationSpec, apply_and_derivative


def grad_output_weights(w_l: np.ndarray, v: np.ndarray, y: np.ndarray) -> np.ndarray:
    """d/dW_L of sum_i (W_L v_i - y_i)^2; returns a 1 x r row."""
    resid = w_l @ v - y.reshape(1, -1)
    return 2.0 * (resid @ v.T)


def grad_output_aux(w_l: np.ndarray, v: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Per-sample d/dv_i of (W_L v_i - y_i)^2, stacked as r x n."""
    resid = w_l @ v - y.reshape(1, -1)
    return 2.0 * (w_l.T @ resid)


def grad_hidden_weights(w: np.ndarray, v_prev: np.ndarray, v_tgt: np.ndarray,
                        act: ActivationSpec) -> np.ndarray:
    """d/dW of sum_i ||sigma(W v_prev_i) - v_tgt_i||^2."""
    s, d = act_forward(act, w @ v_prev)
    return 2.0 * ((d * (s - v_tgt)) @ v_prev.T)


def grad_hidden_aux(w: np.ndarray, v: np.ndarray, v_tgt: np.ndarray,
                    act: ActivationSpec) -> np.ndarray:
    """Per-sample d/dv_i of ||sigma(W v_i) - v_tgt_i||^2, stacked as r x n."""
    s, d = act_forward(act, w @ v)
    return 2.0 * (w.T @ (d * (s - v_tgt)))


def grad_hidden_weights_skip(w: np.ndarray, v_prev: np.ndarray, v_tgt: np.ndarray,
                             act: ActivationSpec) -> np.ndarray:
    """d/dW of sum_i ||sigma(W v_prev_i) + v_prev_i - v_tgt_i||^2.

    The skip path adds v_prev to the residual but carries no W dependence,
    so only the activation branch contributes to the gradient.
    """
    s, d = act_forward(act, w @ v_prev)
    return 2.0 * ((d * (s + v_prev - v_tgt)) @ v_prev.T)


def grad_hidden_aux_skip(w: np.ndarray, v: np.ndarray, v_tgt: np.ndarray,
                         act: ActivationSpec) -> np.ndarray:
    """Per-sample d/dv_i of ||sigma(W v_i) + v_i - v_tgt_i||^2."""
    s, d = act_forward(act, w @ v)
    resid = s + v - v_tgt
    return 2.0 * (w.T @ (d * resid) + resid)


def grad_first_weights(w1: np.ndarray, xt: np.ndarray, v1: np.ndarray,
                       act: ActivationSpec) -> np.ndarray:
    """d/dW_1 of sum_i ||sigma(W_1 x_i) - v1_i||^2; xt is d_in x n."""
    s, d = act_forward(act, w1 @ xt)
    return 2.0 * ((d * (s - v1)) @ xt.T)


def grad_first_weights_linear(w1: np.ndarray, xt: np.ndarray, v1: np.ndarray) -> np.ndarray:
    """d/dW_1 of sum_i ||W_1 x_i - v1_i||^2 (activation-free form)."""
    return 2.0 * ((w1 @ xt - v1) @ xt.T)


def act_forward(act: ActivationSpec, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return apply_and_derivative(act, z)
