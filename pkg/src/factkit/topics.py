"""LDA topic model trained by collapsed Gibbs sampling.

Training iterates single-token resampling over the whole corpus; the
conditional for token w in document d is proportional to
``(n_dk + alpha) * (n_kw + beta) / (n_k + V*beta)``.  Inference folds a new
document in against frozen word-topic counts.  Both are deterministic for a
fixed seed.

Defaults: alpha = 50/K, beta = 0.01, 1000 sweeps.  Documents are expected to
be preprocessed (lowercased, stop words removed); :func:`preprocess` applies
the built-in defaults.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

MODEL_FORMAT_VERSION = 1


def default_stopwords() -> frozenset[str]:
    text = (resources.files("factkit") / "resources" / "stopwords.txt").read_text(
        encoding="utf-8"
    )
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def preprocess(tokens, stopwords: frozenset[str] | None = None) -> list[str]:
    """Lowercase, drop punctuation-only tokens and stop words."""
    if stopwords is None:
        stopwords = default_stopwords()
    out = []
    for tok in tokens:
        word = (tok if isinstance(tok, str) else tok.surface).lower()
        if not any(c.isalnum() for c in word):
            continue
        if word in stopwords:
            continue
        out.append(word)
    return out


class TopicModel:
    """Trained LDA state: count tables plus priors and vocabulary."""

    def __init__(self, k, alpha, beta, vocabulary, word_topic_counts,
                 topic_counts, doc_topic_counts, doc_lengths, seed,
                 infer_iterations=50):
        self.k = int(k)
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.vocabulary = tuple(vocabulary)
        self.word_index = {w: i for i, w in enumerate(self.vocabulary)}
        self.word_topic_counts = word_topic_counts  # K x V
        self.topic_counts = topic_counts            # K
        self.doc_topic_counts = doc_topic_counts    # D x K
        self.doc_lengths = doc_lengths              # D
        self.seed = int(seed)
        self.infer_iterations = int(infer_iterations)

    def consistency_ok(self) -> bool:
        total = int(self.topic_counts.sum())
        return (
            total == int(self.word_topic_counts.sum())
            and total == int(self.doc_topic_counts.sum())
            and total == int(self.doc_lengths.sum())
        )

    def doc_distribution(self, doc_index: int) -> np.ndarray:
        counts = self.doc_topic_counts[doc_index]
        return (counts + self.alpha) / (counts.sum() + self.k * self.alpha)

    def save(self, path) -> None:
        meta = {
            "version": MODEL_FORMAT_VERSION,
            "k": self.k,
            "alpha": self.alpha,
            "beta": self.beta,
            "seed": self.seed,
            "infer_iterations": self.infer_iterations,
            "vocabulary": list(self.vocabulary),
        }
        np.savez(
            Path(path),
            meta=np.frombuffer(json.dumps(meta).encode("utf-8"), dtype=np.uint8),
            word_topic_counts=self.word_topic_counts,
            topic_counts=self.topic_counts,
            doc_topic_counts=self.doc_topic_counts,
            doc_lengths=self.doc_lengths,
        )

    @classmethod
    def load(cls, path) -> "TopicModel":
        with np.load(Path(path)) as data:
            meta = json.loads(bytes(data["meta"]).decode("utf-8"))
            if meta.get("version") != MODEL_FORMAT_VERSION:
                raise ValueError(f"unsupported topic model version {meta.get('version')}")
            return cls(
                k=meta["k"], alpha=meta["alpha"], beta=meta["beta"],
                vocabulary=meta["vocabulary"],
                word_topic_counts=data["word_topic_counts"],
                topic_counts=data["topic_counts"],
                doc_topic_counts=data["doc_topic_counts"],
                doc_lengths=data["doc_lengths"],
                seed=meta["seed"],
                infer_iterations=meta["infer_iterations"],
            )


def _sample(rng, probs) -> int:
    cumulative = np.cumsum(probs)
    return int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))


def train_lda(documents, k, iterations=1000, seed=0, alpha=None, beta=0.01,
              infer_iterations=50) -> TopicModel:
    """Collapsed Gibbs training over tokenized documents.

    `documents` must already be preprocessed; an empty vocabulary is an
    error.  alpha defaults to 50/K.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if alpha is None:
        alpha = 50.0 / k
    docs = [list(doc) for doc in documents]
    vocabulary = sorted({w for doc in docs for w in doc})
    if not vocabulary:
        raise ValueError("empty vocabulary after preprocessing")
    word_index = {w: i for i, w in enumerate(vocabulary)}
    v = len(vocabulary)
    d = len(docs)

    rng = np.random.default_rng(seed)
    doc_words = [np.array([word_index[w] for w in doc], dtype=np.int64) for doc in docs]
    assignments = [rng.integers(0, k, size=len(words)) for words in doc_words]

    n_kw = np.zeros((k, v), dtype=np.int64)
    n_k = np.zeros(k, dtype=np.int64)
    n_dk = np.zeros((d, k), dtype=np.int64)
    for di, (words, topics) in enumerate(zip(doc_words, assignments)):
        for w, t in zip(words, topics):
            n_kw[t, w] += 1
            n_k[t] += 1
            n_dk[di, t] += 1

    vbeta = v * beta
    for _ in range(iterations):
        for di, (words, topics) in enumerate(zip(doc_words, assignments)):
            row = n_dk[di]
            for i in range(len(words)):
                w = words[i]
                t = topics[i]
                n_kw[t, w] -= 1
                n_k[t] -= 1
                row[t] -= 1
                probs = (row + alpha) * (n_kw[:, w] + beta) / (n_k + vbeta)
                t = _sample(rng, probs)
                topics[i] = t
                n_kw[t, w] += 1
                n_k[t] += 1
                row[t] += 1

    lengths = np.array([len(words) for words in doc_words], dtype=np.int64)
    return TopicModel(
        k=k, alpha=alpha, beta=beta, vocabulary=vocabulary,
        word_topic_counts=n_kw, topic_counts=n_k, doc_topic_counts=n_dk,
        doc_lengths=lengths, seed=seed, infer_iterations=infer_iterations,
    )


def infer_distribution(model: TopicModel, tokens) -> np.ndarray:
    """Fold a document in against frozen topic-word counts.

    All-OOV (or empty) input yields the uniform distribution.  A fresh RNG
    seeded from the model seed keeps repeated calls bit-identical.
    """
    words = np.array(
        [model.word_index[w] for w in (
            t if isinstance(t, str) else t.surface for t in tokens
        ) if w in model.word_index],
        dtype=np.int64,
    )
    k = model.k
    if len(words) == 0:
        return np.full(k, 1.0 / k)
    rng = np.random.default_rng(model.seed + 1)
    topics = rng.integers(0, k, size=len(words))
    counts = np.bincount(topics, minlength=k).astype(np.int64)
    vbeta = len(model.vocabulary) * model.beta
    n_kw = model.word_topic_counts
    n_k = model.topic_counts
    for _ in range(model.infer_iterations):
        for i in range(len(words)):
            w = words[i]
            counts[topics[i]] -= 1
            probs = (counts + model.alpha) * (n_kw[:, w] + model.beta) / (n_k + vbeta)
            t = _sample(rng, probs)
            topics[i] = t
            counts[t] += 1
    return (counts + model.alpha) / (len(words) + k * model.alpha)
