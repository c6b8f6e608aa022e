"""Bi-LSTM evidence encoder stack.

Five bidirectional LSTM branches (claim, one snippet and one page-triplet
branch per search engine) encode token sequences; their final states are
concatenated with the similarity features, pass through a tanh joint layer
(the task-specific embedding), and end in a softmax over true/false.

Gates use the hard-sigmoid activation, the cell path tanh.  Dropout (inverted
scaling) is applied to branch outputs and to the joint layer at train time
only.  The optimizer is RMSprop.  Word embeddings are inputs, not trained
parameters.

`extract_layers` returns the last three layers (concatenation, joint
embedding, output score); `embedding_block` slices them into the fixed
claim + both snippets + best page + joint block (4*2H + joint dims; 260 for
the default 25-unit, 60-joint setup).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .common import RmsProp, hard_sigmoid, hard_sigmoid_grad, softmax, softmax_ce, uniform_init

MODEL_FORMAT_VERSION = 1

BRANCH_NAMES = ("claim", "snippet_a", "snippet_b", "page_a", "page_b")
N_BRANCHES = 5
PARAMS_PER_BRANCH = 6  # Wx, Wh, b, per direction


@dataclass(frozen=True)
class BilstmStackConfig:
    embed_dim: int
    sim_dim: int
    units: int = 25
    joint_size: int = 60
    epochs: int = 400
    batch_size: int = 32
    learning_rate: float = 0.001
    l2_recurrent: float = 0.1
    dropout_recurrent: float = 0.5
    l2_joint: float = 0.01
    dropout_joint: float = 0.3
    max_len: int = 100
    seed: int = 0

    @property
    def branch_out(self) -> int:
        return 2 * self.units

    @property
    def concat_dim(self) -> int:
        return N_BRANCHES * self.branch_out + self.sim_dim


@dataclass
class BilstmExample:
    """Five embedded sequences (arrays of shape (T, embed_dim); T may be 0),
    the similarity feature vector, the binary label, and which page branch
    (0 or 1) won the input-selection similarity."""

    sequences: list
    similarities: np.ndarray
    label: int = 0
    best_page: int = 0


def embed_sequence(tokens, store, max_len: int = 100) -> np.ndarray:
    """Token list -> embedding rows (OOV tokens skipped, length capped)."""
    rows = []
    for tok in tokens:
        word = tok if isinstance(tok, str) else tok.surface
        vec = store.get(word)
        if vec is not None:
            rows.append(vec)
        if len(rows) >= max_len:
            break
    if not rows:
        return np.zeros((0, store.dimension))
    return np.asarray(rows, dtype=np.float64)


def _lstm_forward(x, wx, wh, b, units):
    """Run one direction; returns (h_T, cache for backprop)."""
    t_len = len(x)
    h = np.zeros(units)
    c = np.zeros(units)
    cache = []
    for t in range(t_len):
        z = x[t] @ wx + h @ wh + b
        zi, zf, zg, zo = (z[:units], z[units:2 * units],
                          z[2 * units:3 * units], z[3 * units:])
        gi = hard_sigmoid(zi)
        gf = hard_sigmoid(zf)
        gg = np.tanh(zg)
        go = hard_sigmoid(zo)
        c_prev = c
        c = gf * c_prev + gi * gg
        hc = np.tanh(c)
        h_prev = h
        h = go * hc
        cache.append((x[t], h_prev, c_prev, zi, zf, zg, zo, gi, gf, gg, go, c, hc))
    return h, cache


def _lstm_backward(dh_last, cache, wx, wh, units):
    """BPTT from the gradient at the final hidden state."""
    d_wx = np.zeros_like(wx)
    d_wh = np.zeros_like(wh)
    d_b = np.zeros(4 * units)
    dh = dh_last.copy()
    dc = np.zeros(units)
    for frame in reversed(cache):
        xt, h_prev, c_prev, zi, zf, zg, zo, gi, gf, gg, go, c, hc = frame
        do = dh * hc
        dc = dc + dh * go * (1.0 - hc * hc)
        df = dc * c_prev
        di = dc * gg
        dg = dc * gi
        dz = np.concatenate([
            di * hard_sigmoid_grad(zi),
            df * hard_sigmoid_grad(zf),
            dg * (1.0 - gg * gg),
            do * hard_sigmoid_grad(zo),
        ])
        d_wx += np.outer(xt, dz)
        d_wh += np.outer(h_prev, dz)
        d_b += dz
        dh = dz @ wh.T
        dc = dc * gf
    return d_wx, d_wh, d_b


class BilstmStackModel:
    """Parameter layout: per branch [Wx_f, Wh_f, b_f, Wx_r, Wh_r, b_r]
    (forward then reversed direction), then [W_joint, b_joint, W_out, b_out].
    """

    def __init__(self, config: BilstmStackConfig, params=None, rng=None):
        self.config = config
        u = config.units
        if params is not None:
            self.params = params
        else:
            rng = rng or np.random.default_rng(config.seed)
            self.params = []
            for _ in range(N_BRANCHES):
                for _direction in range(2):
                    self.params.append(uniform_init(rng, (config.embed_dim, 4 * u)))
                    self.params.append(uniform_init(rng, (u, 4 * u)))
                    self.params.append(np.zeros(4 * u))
            self.params.append(uniform_init(rng, (config.concat_dim, config.joint_size)))
            self.params.append(np.zeros(config.joint_size))
            self.params.append(uniform_init(rng, (config.joint_size, 2)))
            self.params.append(np.zeros(2))

    def _branch_params(self, branch, params):
        base = branch * PARAMS_PER_BRANCH
        return params[base : base + PARAMS_PER_BRANCH]

    def _head_params(self, params):
        base = N_BRANCHES * PARAMS_PER_BRANCH
        return params[base : base + 4]

    def _encode_branch(self, seq, branch, params):
        u = self.config.units
        wx_f, wh_f, b_f, wx_r, wh_r, b_r = self._branch_params(branch, params)
        if len(seq) == 0:
            return np.zeros(2 * u), None
        h_f, cache_f = _lstm_forward(seq, wx_f, wh_f, b_f, u)
        h_r, cache_r = _lstm_forward(seq[::-1], wx_r, wh_r, b_r, u)
        return np.concatenate([h_f, h_r]), (cache_f, cache_r)

    def _forward_example(self, example, params, drop_branch=None, drop_joint=None):
        """Returns (logits, caches needed for backprop)."""
        u2 = self.config.branch_out
        outs = []
        caches = []
        for b in range(N_BRANCHES):
            out, cache = self._encode_branch(np.asarray(example.sequences[b], dtype=np.float64), b, params)
            if drop_branch is not None:
                out = out * drop_branch[b]
            outs.append(out)
            caches.append(cache)
        concat = np.concatenate(outs + [np.asarray(example.similarities, dtype=np.float64)])
        wj, bj, wo, bo = self._head_params(params)
        j_pre = concat @ wj + bj
        joint = np.tanh(j_pre)
        joint_dropped = joint * drop_joint if drop_joint is not None else joint
        logits = joint_dropped @ wo + bo
        return logits, (outs, caches, concat, j_pre, joint, joint_dropped)

    def loss_and_grads(self, examples, params=None, rng=None):
        """Mean cross-entropy over examples plus L2 penalties.

        `rng` enables dropout (training); without it the pass is
        deterministic (inference / gradient checks).
        """
        params = self.params if params is None else params
        cfg = self.config
        grads = [np.zeros_like(p) for p in params]
        total = 0.0
        n = len(examples)
        for example in examples:
            drop_branch = drop_joint = None
            if rng is not None and cfg.dropout_recurrent > 0:
                keep = 1.0 - cfg.dropout_recurrent
                drop_branch = [
                    (rng.random(cfg.branch_out) < keep) / keep
                    for _ in range(N_BRANCHES)
                ]
            if rng is not None and cfg.dropout_joint > 0:
                keep_j = 1.0 - cfg.dropout_joint
                drop_joint = (rng.random(cfg.joint_size) < keep_j) / keep_j

            logits, cache = self._forward_example(
                example, params, drop_branch, drop_joint
            )
            outs, caches, concat, j_pre, joint, joint_dropped = cache
            loss, dlogits = softmax_ce(logits[None, :], np.array([example.label]))
            total += loss / n
            dlogits = dlogits[0] / n

            wj, bj, wo, bo = self._head_params(params)
            head_base = N_BRANCHES * PARAMS_PER_BRANCH
            grads[head_base + 2] += np.outer(joint_dropped, dlogits)
            grads[head_base + 3] += dlogits
            d_joint = wo @ dlogits
            if drop_joint is not None:
                d_joint = d_joint * drop_joint
            d_jpre = d_joint * (1.0 - joint * joint)
            grads[head_base + 0] += np.outer(concat, d_jpre)
            grads[head_base + 1] += d_jpre
            d_concat = wj @ d_jpre

            u2 = cfg.branch_out
            for b in range(N_BRANCHES):
                if caches[b] is None:
                    continue
                d_out = d_concat[b * u2 : (b + 1) * u2]
                if drop_branch is not None:
                    d_out = d_out * drop_branch[b]
                cache_f, cache_r = caches[b]
                wx_f, wh_f, b_f, wx_r, wh_r, b_r = self._branch_params(b, params)
                u = cfg.units
                dwx_f, dwh_f, db_f = _lstm_backward(d_out[:u], cache_f, wx_f, wh_f, u)
                dwx_r, dwh_r, db_r = _lstm_backward(d_out[u:], cache_r, wx_r, wh_r, u)
                base = b * PARAMS_PER_BRANCH
                grads[base + 0] += dwx_f
                grads[base + 1] += dwh_f
                grads[base + 2] += db_f
                grads[base + 3] += dwx_r
                grads[base + 4] += dwh_r
                grads[base + 5] += db_r

        # L2: recurrent weights at l2_recurrent, joint/output weights at l2_joint
        for b in range(N_BRANCHES):
            base = b * PARAMS_PER_BRANCH
            for i in (0, 1, 3, 4):
                w = params[base + i]
                total += 0.5 * cfg.l2_recurrent * float((w * w).sum())
                grads[base + i] += cfg.l2_recurrent * w
        head_base = N_BRANCHES * PARAMS_PER_BRANCH
        for i in (0, 2):
            w = params[head_base + i]
            total += 0.5 * cfg.l2_joint * float((w * w).sum())
            grads[head_base + i] += cfg.l2_joint * w
        return total, grads

    def predict_proba(self, example) -> np.ndarray:
        logits, _ = self._forward_example(example, self.params)
        return softmax(logits[None, :])[0]

    def score(self, example) -> float:
        return float(self.predict_proba(example)[1])

    def extract_layers(self, example):
        """(concatenation vector, joint hidden vector, positive score)."""
        logits, cache = self._forward_example(example, self.params)
        _, _, concat, _, joint, _ = cache
        score = softmax(logits[None, :])[0, 1]
        return concat, joint, float(score)

    def embedding_block(self, example) -> np.ndarray:
        """claim + both snippet encodings + the winning page encoding + the
        joint embedding, as one fixed-layout block."""
        concat, joint, _ = self.extract_layers(example)
        u2 = self.config.branch_out
        page_branch = 3 + (1 if example.best_page else 0)
        pieces = [
            concat[0:u2],                       # claim
            concat[u2:2 * u2],                  # snippet engine A
            concat[2 * u2:3 * u2],              # snippet engine B
            concat[page_branch * u2:(page_branch + 1) * u2],
            joint,
        ]
        return np.concatenate(pieces)

    def save(self, path) -> None:
        cfg = self.config
        meta = {
            "version": MODEL_FORMAT_VERSION,
            "config": {
                "embed_dim": cfg.embed_dim, "sim_dim": cfg.sim_dim,
                "units": cfg.units, "joint_size": cfg.joint_size,
                "epochs": cfg.epochs, "batch_size": cfg.batch_size,
                "learning_rate": cfg.learning_rate,
                "l2_recurrent": cfg.l2_recurrent,
                "dropout_recurrent": cfg.dropout_recurrent,
                "l2_joint": cfg.l2_joint, "dropout_joint": cfg.dropout_joint,
                "max_len": cfg.max_len, "seed": cfg.seed,
            },
        }
        arrays = {f"p{i}": p for i, p in enumerate(self.params)}
        np.savez(
            Path(path),
            meta=np.frombuffer(json.dumps(meta).encode("utf-8"), dtype=np.uint8),
            **arrays,
        )

    @classmethod
    def load(cls, path) -> "BilstmStackModel":
        with np.load(Path(path)) as data:
            meta = json.loads(bytes(data["meta"]).decode("utf-8"))
            if meta.get("version") != MODEL_FORMAT_VERSION:
                raise ValueError(f"unsupported model version {meta.get('version')}")
            config = BilstmStackConfig(**meta["config"])
            params = []
            i = 0
            while f"p{i}" in data:
                params.append(data[f"p{i}"])
                i += 1
        return cls(config, params=params)


def train_bilstm_stack(examples, config: BilstmStackConfig) -> BilstmStackModel:
    """RMSprop over shuffled mini-batches; deterministic per seed."""
    examples = list(examples)
    for e in examples:
        if len(e.sequences) != N_BRANCHES:
            raise ValueError(f"each example needs {N_BRANCHES} sequences")
    rng = np.random.default_rng(config.seed)
    model = BilstmStackModel(config, rng=rng)
    optimizer = RmsProp(model.params, config.learning_rate)
    n = len(examples)
    batch = min(config.batch_size, n)
    for epoch in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch):
            chunk = [examples[i] for i in order[start : start + batch]]
            loss, grads = model.loss_and_grads(chunk, rng=rng)
            if not np.isfinite(loss):
                raise RuntimeError(f"non-finite loss at epoch {epoch}")
            optimizer.step(grads)
    return model
