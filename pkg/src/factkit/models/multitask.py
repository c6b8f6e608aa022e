"""Hard parameter sharing multi-task network: one shared rectifier layer
feeding per-task rectifier layers, each ending in a single sigmoid head.

Every batch updates the shared weights with gradients accumulated from all
task losses (binary cross-entropy per head).  A head's score in [0, 1] ranks
sentences for its task.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .common import (
    NesterovSgd,
    bce_from_logits,
    relu,
    relu_grad,
    sigmoid,
    uniform_init,
)

MODEL_FORMAT_VERSION = 1

DEBATE_SOURCES = ("CT", "ABC", "CNN", "WP", "NPR", "PF", "TG", "NYT", "FC")

VARIANT_KINDS = ("singleton", "multi", "multi+any", "any", "singleton+any")


@dataclass(frozen=True)
class MultiTaskConfig:
    tasks: tuple[str, ...]
    shared_size: int = 300
    task_size: int = 300
    epochs: int = 100
    batch_size: int = 500
    learning_rate: float = 0.08
    momentum: float = 0.7
    l2: float = 0.0
    seed: int = 0
    score_task: str | None = None
    task_loss_weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if not self.tasks:
            raise ValueError("at least one task required")
        if self.task_loss_weights is not None and len(self.task_loss_weights) != len(self.tasks):
            raise ValueError("task_loss_weights must align with tasks")

    def weight_for(self, task_index: int) -> float:
        if self.task_loss_weights is None:
            return 1.0
        return float(self.task_loss_weights[task_index])


def variant(kind: str, target_source: str | None = None,
            sources=DEBATE_SOURCES, **overrides) -> MultiTaskConfig:
    """Build the task layout for one experimental variant.

    singleton       one head for the target source
    multi           nine heads, one per source; the target head scores
    multi+any       the nine sources plus the ANY head; target head scores
    any             a single ANY-trained head whose score ranks for the target
    singleton+any   the target head plus the ANY head; target head scores
    """
    if kind not in VARIANT_KINDS:
        raise ValueError(f"unknown variant kind {kind!r}")
    needs_target = kind in ("singleton", "multi", "multi+any", "singleton+any")
    if needs_target and target_source not in sources:
        raise ValueError(f"target source {target_source!r} not in {sources}")
    if kind == "singleton":
        tasks, score = (target_source,), target_source
    elif kind == "multi":
        tasks, score = tuple(sources), target_source
    elif kind == "multi+any":
        tasks, score = (*sources, "ANY"), target_source
    elif kind == "any":
        tasks, score = ("ANY",), "ANY"
    else:  # singleton+any
        tasks, score = (target_source, "ANY"), target_source
    return MultiTaskConfig(tasks=tasks, score_task=score, **overrides)


class MultiTaskModel:
    """Parameter layout: [W_shared, b_shared] then per task
    [W_task, b_task, w_head, b_head]."""

    def __init__(self, config: MultiTaskConfig, input_dim: int, params=None, rng=None):
        self.config = config
        self.input_dim = int(input_dim)
        if params is not None:
            self.params = params
        else:
            rng = rng or np.random.default_rng(config.seed)
            s, t = config.shared_size, config.task_size
            self.params = [
                uniform_init(rng, (self.input_dim, s)),
                np.zeros(s),
            ]
            for _ in config.tasks:
                self.params.extend([
                    uniform_init(rng, (s, t)),
                    np.zeros(t),
                    uniform_init(rng, (t,)),
                    np.zeros(1),
                ])

    @property
    def n_tasks(self) -> int:
        return len(self.config.tasks)

    def task_params(self, task_index: int, params=None):
        params = self.params if params is None else params
        base = 2 + 4 * task_index
        return params[base : base + 4]

    def _forward(self, x, params):
        ws, bs = params[0], params[1]
        z_shared = x @ ws + bs
        h_shared = relu(z_shared)
        logits = []
        task_cache = []
        for ti in range(self.n_tasks):
            wt, bt, wh, bh = self.task_params(ti, params)
            z_t = h_shared @ wt + bt
            h_t = relu(z_t)
            z_head = h_t @ wh + bh[0]
            logits.append(z_head)
            task_cache.append((z_t, h_t))
        return z_shared, h_shared, task_cache, logits

    def loss_and_grads(self, x, labels, params=None):
        """Sum of per-task mean BCE (weighted) plus L2 on weight matrices."""
        params = self.params if params is None else params
        z_shared, h_shared, task_cache, logits = self._forward(x, params)
        grads = [np.zeros_like(p) for p in params]
        total = 0.0
        d_h_shared = np.zeros_like(h_shared)
        for ti in range(self.n_tasks):
            weight = self.config.weight_for(ti)
            loss_t, dz_head = bce_from_logits(logits[ti], labels[:, ti])
            total += weight * loss_t
            dz_head = dz_head * weight
            wt, bt, wh, bh = self.task_params(ti, params)
            z_t, h_t = task_cache[ti]
            base = 2 + 4 * ti
            grads[base + 2] = h_t.T @ dz_head
            grads[base + 3] = np.array([dz_head.sum()])
            d_ht = np.outer(dz_head, wh) * relu_grad(z_t)
            grads[base + 0] = h_shared.T @ d_ht
            grads[base + 1] = d_ht.sum(axis=0)
            d_h_shared += d_ht @ wt.T
        d_z_shared = d_h_shared * relu_grad(z_shared)
        grads[0] = x.T @ d_z_shared
        grads[1] = d_z_shared.sum(axis=0)

        l2 = self.config.l2
        if l2 > 0:
            for i, p in enumerate(params):
                if p.ndim == 2:
                    total += 0.5 * l2 * float((p * p).sum())
                    grads[i] += l2 * p
        return total, grads

    def scores(self, x) -> np.ndarray:
        """(n, n_tasks) sigmoid outputs."""
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        _, _, _, logits = self._forward(x, self.params)
        return sigmoid(np.stack(logits, axis=1))

    def score(self, x, task: str | None = None) -> np.ndarray:
        task = task or self.config.score_task or self.config.tasks[0]
        if task not in self.config.tasks:
            raise ValueError(f"task {task!r} not in model tasks {self.config.tasks}")
        return self.scores(x)[:, self.config.tasks.index(task)]

    def save(self, path) -> None:
        meta = {
            "version": MODEL_FORMAT_VERSION,
            "input_dim": self.input_dim,
            "config": {
                "tasks": list(self.config.tasks),
                "shared_size": self.config.shared_size,
                "task_size": self.config.task_size,
                "epochs": self.config.epochs,
                "batch_size": self.config.batch_size,
                "learning_rate": self.config.learning_rate,
                "momentum": self.config.momentum,
                "l2": self.config.l2,
                "seed": self.config.seed,
                "score_task": self.config.score_task,
                "task_loss_weights": (
                    list(self.config.task_loss_weights)
                    if self.config.task_loss_weights is not None else None
                ),
            },
        }
        arrays = {f"p{i}": p for i, p in enumerate(self.params)}
        np.savez(
            Path(path),
            meta=np.frombuffer(json.dumps(meta).encode("utf-8"), dtype=np.uint8),
            **arrays,
        )

    @classmethod
    def load(cls, path) -> "MultiTaskModel":
        with np.load(Path(path)) as data:
            meta = json.loads(bytes(data["meta"]).decode("utf-8"))
            if meta.get("version") != MODEL_FORMAT_VERSION:
                raise ValueError(f"unsupported model version {meta.get('version')}")
            cfg = dict(meta["config"])
            cfg["tasks"] = tuple(cfg["tasks"])
            if cfg["task_loss_weights"] is not None:
                cfg["task_loss_weights"] = tuple(cfg["task_loss_weights"])
            config = MultiTaskConfig(**cfg)
            params = []
            i = 0
            while f"p{i}" in data:
                params.append(data[f"p{i}"])
                i += 1
        return cls(config, meta["input_dim"], params=params)


def train_multitask(features, label_matrix, config: MultiTaskConfig) -> MultiTaskModel:
    x = np.asarray(features, dtype=np.float64)
    labels = np.asarray(label_matrix, dtype=np.float64)
    if labels.ndim != 2 or labels.shape[1] != len(config.tasks):
        raise ValueError(
            f"label matrix has {labels.shape[1] if labels.ndim == 2 else '?'} "
            f"columns, config has {len(config.tasks)} tasks"
        )
    if len(x) != len(labels):
        raise ValueError("features and labels must align")

    rng = np.random.default_rng(config.seed)
    model = MultiTaskModel(config, x.shape[1], rng=rng)
    optimizer = NesterovSgd(model.params, config.learning_rate, config.momentum)
    n = len(x)
    batch = min(config.batch_size, n)

    for epoch in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch):
            idx = order[start : start + batch]
            bx, by = x[idx], labels[idx]

            def grad_fn(params):
                loss, grads = model.loss_and_grads(bx, by, params)
                if not np.isfinite(loss):
                    raise RuntimeError(
                        f"non-finite loss at epoch {epoch}, offset {start}"
                    )
                return grads

            optimizer.step(grad_fn)
    return model
