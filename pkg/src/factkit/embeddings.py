"""Pre-trained word vector store, sentence averaging, cosine similarity."""

from __future__ import annotations

import numpy as np


class VectorStore:
    """Immutable word -> vector table with a fixed dimension."""

    def __init__(self, dimension: int, table: dict[str, np.ndarray]):
        self.dimension = int(dimension)
        self.table = table

    def __len__(self):
        return len(self.table)

    def __contains__(self, word: str) -> bool:
        return word in self.table or word.lower() in self.table

    def get(self, word: str) -> np.ndarray | None:
        """Exact lookup first, then lowercase."""
        vec = self.table.get(word)
        if vec is None:
            vec = self.table.get(word.lower())
        return vec


def load_vectors(path, expected_dim: int | None = None) -> VectorStore:
    """Read a whitespace-separated text vector file.

    An optional first line `<count> <dim>` is treated as a header.  Every row
    must have the same arity; violations are reported with their line number.
    """
    table: dict[str, np.ndarray] = {}
    dimension = expected_dim
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split()
            if not parts:
                continue
            if lineno == 1 and len(parts) == 2 and parts[0].isdigit() and parts[1].isdigit():
                header_dim = int(parts[1])
                if expected_dim is not None and header_dim != expected_dim:
                    raise ValueError(
                        f"{path}:{lineno}: header dimension {header_dim} != expected {expected_dim}"
                    )
                dimension = header_dim
                continue
            word, values = parts[0], parts[1:]
            if dimension is None:
                dimension = len(values)
            if len(values) != dimension:
                raise ValueError(
                    f"{path}:{lineno}: row has {len(values)} values, expected {dimension}"
                )
            if word in table:
                raise ValueError(f"{path}:{lineno}: duplicate word {word!r}")
            table[word] = np.asarray([float(v) for v in values], dtype=np.float64)
    if dimension is None:
        raise ValueError(f"{path}: no vector rows found")
    return VectorStore(dimension, table)


def sentence_vector(tokens, store: VectorStore) -> np.ndarray:
    """Mean vector of the in-vocabulary tokens; zero vector when all are OOV."""
    vectors = []
    for tok in tokens:
        word = tok if isinstance(tok, str) else tok.surface
        vec = store.get(word)
        if vec is not None:
            vectors.append(vec)
    if not vectors:
        return np.zeros(store.dimension, dtype=np.float64)
    return np.mean(vectors, axis=0)


def cosine(u, v) -> float:
    """Standard cosine; 0.0 when either vector has zero norm."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))
