"""Shared numerics for the trainable models: activations, losses, parameter
flattening, and optimizer steps.

Losses are computed from logits with the numerically stable formulations so
that analytic gradients stay exact for finite-difference checks.
"""

from __future__ import annotations

import numpy as np


def relu(x):
    return np.maximum(x, 0.0)


def relu_grad(x):
    return (x > 0.0).astype(x.dtype)


def sigmoid(x):
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def hard_sigmoid(x):
    return np.clip(0.2 * x + 0.5, 0.0, 1.0)


def hard_sigmoid_grad(x):
    return np.where((x > -2.5) & (x < 2.5), 0.2, 0.0)


def softmax(z):
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def softmax_ce(logits, labels):
    """Mean cross-entropy against integer labels; returns (loss, dL/dlogits)."""
    n = logits.shape[0]
    p = softmax(logits)
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1))
    loss = float(np.mean(log_z - shifted[np.arange(n), labels]))
    grad = p.copy()
    grad[np.arange(n), labels] -= 1.0
    return loss, grad / n


def bce_from_logits(z, y):
    """Mean binary cross-entropy from logits; returns (loss, dL/dz).

    Uses log(1+exp(z)) - y*z, stable for both signs of z.
    """
    z = np.asarray(z, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    softplus = np.where(z > 0, z + np.log1p(np.exp(-z)), np.log1p(np.exp(z)))
    loss = float(np.mean(softplus - y * z))
    grad = (sigmoid(z) - y) / z.size
    return loss, grad


def uniform_init(rng, shape):
    """Uniform weights scaled by fan-in."""
    fan_in = shape[0] if len(shape) > 1 else shape[0]
    bound = 1.0 / np.sqrt(max(fan_in, 1))
    return rng.uniform(-bound, bound, size=shape)


def flatten_params(arrays) -> np.ndarray:
    return np.concatenate([a.ravel() for a in arrays])


def unflatten_params(flat, templates):
    out = []
    offset = 0
    for t in templates:
        size = t.size
        out.append(flat[offset : offset + size].reshape(t.shape))
        offset += size
    if offset != flat.size:
        raise ValueError("flat vector size does not match templates")
    return out


class NesterovSgd:
    """Classical Nesterov momentum: evaluate the gradient at the look-ahead
    point theta + mu*v, then v <- mu*v - lr*g and theta <- theta + v.

    The caller supplies `grad_fn(params)`; `step` mutates the parameter list
    in place.
    """

    def __init__(self, params, learning_rate: float, momentum: float):
        self.params = params
        self.lr = float(learning_rate)
        self.mu = float(momentum)
        self.velocity = [np.zeros_like(p) for p in params]

    def step(self, grad_fn):
        lookahead = [p + self.mu * v for p, v in zip(self.params, self.velocity)]
        grads = grad_fn(lookahead)
        for p, v, g in zip(self.params, self.velocity, grads):
            v *= self.mu
            v -= self.lr * g
            p += v


class RmsProp:
    def __init__(self, params, learning_rate: float, rho: float = 0.9,
                 eps: float = 1e-8):
        self.params = params
        self.lr = float(learning_rate)
        self.rho = float(rho)
        self.eps = float(eps)
        self.cache = [np.zeros_like(p) for p in params]

    def step(self, grads):
        for p, c, g in zip(self.params, self.cache, grads):
            c *= self.rho
            c += (1.0 - self.rho) * g * g
            p -= self.lr * g / (np.sqrt(c) + self.eps)
