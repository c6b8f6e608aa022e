"""Feed-forward ranker: rectifier hidden layers, softmax output, mini-batch
SGD with Nesterov momentum.  The positive-class probability is the ranking
score."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .common import (
    NesterovSgd,
    flatten_params,
    relu,
    relu_grad,
    softmax,
    softmax_ce,
    unflatten_params,
    uniform_init,
)

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class FfnnConfig:
    hidden: tuple[int, ...] = (200, 50)
    epochs: int = 300
    batch_size: int = 550
    learning_rate: float = 0.04
    l2: float = 0.0001
    momentum: float = 0.9
    seed: int = 0

    def __post_init__(self):
        if any(h <= 0 for h in self.hidden):
            raise ValueError("hidden sizes must be positive")
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")


class FfnnModel:
    def __init__(self, config: FfnnConfig, input_dim: int, params=None, rng=None):
        self.config = config
        self.input_dim = int(input_dim)
        sizes = [self.input_dim, *config.hidden, 2]
        if params is not None:
            self.params = params
        else:
            rng = rng or np.random.default_rng(config.seed)
            self.params = []
            for fan_in, fan_out in zip(sizes, sizes[1:]):
                self.params.append(uniform_init(rng, (fan_in, fan_out)))
                self.params.append(np.zeros(fan_out))
        self._sizes = sizes

    # params alternate [W0, b0, W1, b1, ...]
    def _layers(self, params):
        return list(zip(params[0::2], params[1::2]))

    def _forward(self, x, params):
        """Returns (logits, pre-activations, activations per layer)."""
        pre = []
        act = [x]
        h = x
        layers = self._layers(params)
        for w, b in layers[:-1]:
            z = h @ w + b
            pre.append(z)
            h = relu(z)
            act.append(h)
        w, b = layers[-1]
        logits = h @ w + b
        return logits, pre, act

    def loss_and_grads(self, x, y, params=None):
        """Mean cross-entropy + L2 on weights; returns (loss, grads) with
        grads matching the parameter list layout."""
        params = self.params if params is None else params
        logits, pre, act = self._forward(x, params)
        loss, dlogits = softmax_ce(logits, y)
        l2 = self.config.l2
        weights = params[0::2]
        loss += 0.5 * l2 * sum(float((w * w).sum()) for w in weights)

        grads = [None] * len(params)
        layers = self._layers(params)
        delta = dlogits
        for li in range(len(layers) - 1, -1, -1):
            w, _ = layers[li]
            grads[2 * li] = act[li].T @ delta + l2 * w
            grads[2 * li + 1] = delta.sum(axis=0)
            if li > 0:
                delta = (delta @ w.T) * relu_grad(pre[li - 1])
        return loss, grads

    def predict_proba(self, x) -> np.ndarray:
        logits, _, _ = self._forward(np.asarray(x, dtype=np.float64), self.params)
        return softmax(logits)

    def score(self, x) -> np.ndarray:
        """Positive-class probability used for ranking."""
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        return self.predict_proba(x)[:, 1]

    def predict(self, x) -> np.ndarray:
        return (self.score(x) >= 0.5).astype(int)

    def save(self, path) -> None:
        meta = {
            "version": MODEL_FORMAT_VERSION,
            "input_dim": self.input_dim,
            "config": {
                "hidden": list(self.config.hidden),
                "epochs": self.config.epochs,
                "batch_size": self.config.batch_size,
                "learning_rate": self.config.learning_rate,
                "l2": self.config.l2,
                "momentum": self.config.momentum,
                "seed": self.config.seed,
            },
        }
        arrays = {f"p{i}": p for i, p in enumerate(self.params)}
        np.savez(
            Path(path),
            meta=np.frombuffer(json.dumps(meta).encode("utf-8"), dtype=np.uint8),
            **arrays,
        )

    @classmethod
    def load(cls, path) -> "FfnnModel":
        with np.load(Path(path)) as data:
            meta = json.loads(bytes(data["meta"]).decode("utf-8"))
            if meta.get("version") != MODEL_FORMAT_VERSION:
                raise ValueError(f"unsupported model version {meta.get('version')}")
            cfg = dict(meta["config"])
            cfg["hidden"] = tuple(cfg["hidden"])
            config = FfnnConfig(**cfg)
            params = []
            i = 0
            while f"p{i}" in data:
                params.append(data[f"p{i}"])
                i += 1
        return cls(config, meta["input_dim"], params=params)


def train_ffnn(features, labels, config: FfnnConfig) -> FfnnModel:
    """Mini-batch Nesterov SGD; deterministic for a fixed seed."""
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if x.ndim != 2:
        raise ValueError("features must be a 2-D array")
    if set(np.unique(y)) - {0, 1}:
        raise ValueError("labels must be binary")
    if len(x) != len(y):
        raise ValueError("features and labels must align")

    rng = np.random.default_rng(config.seed)
    model = FfnnModel(config, x.shape[1], rng=rng)
    optimizer = NesterovSgd(model.params, config.learning_rate, config.momentum)
    n = len(x)
    batch = min(config.batch_size, n)

    for epoch in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch):
            idx = order[start : start + batch]
            bx, by = x[idx], y[idx]

            def grad_fn(params):
                loss, grads = model.loss_and_grads(bx, by, params)
                if not np.isfinite(loss):
                    raise RuntimeError(
                        f"non-finite loss {loss} at epoch {epoch}, "
                        f"batch offset {start}; reduce the learning rate"
                    )
                return grads

            optimizer.step(grad_fn)
    return model
