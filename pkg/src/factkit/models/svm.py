"""Kernel SVM trained by sequential minimal optimization, with grid search
over (c, gamma) by cross-validated accuracy and a one-vs-rest wrapper for the
multi-class pilot.

The solver is Platt's SMO with the usual second-choice heuristic; candidate
scans start at a fixed offset instead of a random one so training is
deterministic.  Models keep their training set (the datasets here are small),
which also makes the post-hoc KKT audit possible.
"""

from __future__ import annotations

import numpy as np


def rbf_kernel(a, b, gamma: float) -> np.ndarray:
    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    sq = (
        (a * a).sum(axis=1)[:, None]
        + (b * b).sum(axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    return np.exp(-gamma * np.maximum(sq, 0.0))


def linear_kernel(a, b) -> np.ndarray:
    return np.atleast_2d(a) @ np.atleast_2d(b).T


class SvmModel:
    def __init__(self, x, y_signed, alphas, bias, c, gamma, kernel, classes):
        self.x = x
        self.y_signed = y_signed
        self.alphas = alphas
        self.bias = float(bias)
        self.c = float(c)
        self.gamma = float(gamma)
        self.kernel = kernel
        self.classes = classes  # (negative_label, positive_label)

    def _kernel(self, a, b) -> np.ndarray:
        if self.kernel == "rbf":
            return rbf_kernel(a, b, self.gamma)
        return linear_kernel(a, b)

    @property
    def support_indices(self) -> np.ndarray:
        return np.flatnonzero(self.alphas > 1e-12)

    def decision_function(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        sv = self.support_indices
        if len(sv) == 0:
            return np.full(len(x), self.bias)
        k = self._kernel(self.x[sv], x)
        return (self.alphas[sv] * self.y_signed[sv]) @ k + self.bias

    def predict(self, x):
        d = self.decision_function(x)
        return np.where(d >= 0, self.classes[1], self.classes[0])

    def kkt_max_violation(self, tol_alpha: float = 1e-8) -> float:
        """Largest violation of the optimality conditions on the training set:
        free vectors must sit on the margin, zero-alpha vectors outside it,
        bound vectors inside it."""
        margins = self.y_signed * self.decision_function(self.x)
        worst = 0.0
        for a, m in zip(self.alphas, margins):
            if a <= tol_alpha:
                worst = max(worst, 1.0 - m)
            elif a >= self.c - tol_alpha:
                worst = max(worst, m - 1.0)
            else:
                worst = max(worst, abs(m - 1.0))
        return float(worst)


def train_svm_rbf(features, labels, c: float = 1.0, gamma: float = 1.0,
                  kernel: str = "rbf", tol: float = 1e-3,
                  max_iterations: int = 10_000) -> SvmModel:
    """SMO training.  `labels` may use any two values; the greater one (by
    sort order) is treated as the positive class."""
    x = np.asarray(features, dtype=np.float64)
    raw = list(labels)
    classes = tuple(sorted(set(raw), key=str))
    if len(classes) < 2:
        raise ValueError("training data contains a single class")
    if len(classes) > 2:
        raise ValueError("binary SVM got more than two classes")
    y = np.where(np.array([r == classes[1] for r in raw]), 1.0, -1.0)
    n = len(x)

    if kernel == "rbf":
        k = rbf_kernel(x, x, gamma)
    elif kernel == "linear":
        k = linear_kernel(x, x)
    else:
        raise ValueError(f"unknown kernel {kernel!r}")

    alphas = np.zeros(n)
    bias = 0.0

    def f(i):
        return float((alphas * y) @ k[:, i] + bias)

    def error(i):
        return f(i) - y[i]

    eps = 1e-12

    def take_step(i1, i2):
        nonlocal bias
        if i1 == i2:
            return False
        a1, a2 = alphas[i1], alphas[i2]
        y1, y2 = y[i1], y[i2]
        e1, e2 = error(i1), error(i2)
        s = y1 * y2
        if s > 0:
            lo, hi = max(0.0, a1 + a2 - c), min(c, a1 + a2)
        else:
            lo, hi = max(0.0, a2 - a1), min(c, c + a2 - a1)
        if hi - lo < eps:
            return False
        k11, k12, k22 = k[i1, i1], k[i1, i2], k[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > eps:
            a2_new = a2 + y2 * (e1 - e2) / eta
            a2_new = min(max(a2_new, lo), hi)
        else:
            # degenerate curvature: evaluate the objective at both clip ends
            f1 = y1 * (e1 + bias) - a1 * k11 - s * a2 * k12
            f2 = y2 * (e2 + bias) - s * a1 * k12 - a2 * k22
            l1 = a1 + s * (a2 - lo)
            h1 = a1 + s * (a2 - hi)
            obj_lo = (
                l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11
                + 0.5 * lo * lo * k22 + s * lo * l1 * k12
            )
            obj_hi = (
                h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11
                + 0.5 * hi * hi * k22 + s * hi * h1 * k12
            )
            if obj_lo < obj_hi - eps:
                a2_new = lo
            elif obj_lo > obj_hi + eps:
                a2_new = hi
            else:
                return False
        if abs(a2_new - a2) < eps * (a2_new + a2 + eps):
            return False
        a1_new = a1 + s * (a2 - a2_new)
        b1 = bias - e1 - y1 * (a1_new - a1) * k11 - y2 * (a2_new - a2) * k12
        b2 = bias - e2 - y1 * (a1_new - a1) * k12 - y2 * (a2_new - a2) * k22
        if eps < a1_new < c - eps:
            bias = b1
        elif eps < a2_new < c - eps:
            bias = b2
        else:
            bias = 0.5 * (b1 + b2)
        alphas[i1] = a1_new
        alphas[i2] = a2_new
        return True

    def examine(i2):
        y2, a2 = y[i2], alphas[i2]
        e2 = error(i2)
        r2 = e2 * y2
        if not ((r2 < -tol and a2 < c) or (r2 > tol and a2 > 0)):
            return 0
        non_bound = np.flatnonzero((alphas > eps) & (alphas < c - eps))
        if len(non_bound) > 1:
            errors = np.array([error(i) for i in non_bound])
            i1 = int(non_bound[np.argmax(np.abs(errors - e2))])
            if take_step(i1, i2):
                return 1
        # deterministic rotation instead of Platt's random start
        for offset in range(len(non_bound)):
            i1 = int(non_bound[(offset + i2) % len(non_bound)])
            if take_step(i1, i2):
                return 1
        for offset in range(n):
            i1 = (offset + i2) % n
            if take_step(i1, i2):
                return 1
        return 0

    iterations = 0
    examine_all = True
    changed = 0
    while (changed > 0 or examine_all) and iterations < max_iterations:
        changed = 0
        targets = (
            range(n)
            if examine_all
            else [int(i) for i in np.flatnonzero((alphas > eps) & (alphas < c - eps))]
        )
        for i2 in targets:
            changed += examine(i2)
            iterations += 1
        if examine_all:
            examine_all = False
        elif changed == 0:
            examine_all = True

    return SvmModel(x, y, alphas, bias, c, gamma, kernel, classes)


def _deterministic_folds(n: int, folds: int, seed: int):
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    return [order[i::folds] for i in range(folds)]


def grid_search_svm(features, labels, c_grid, gamma_grid, folds: int = 3,
                    seed: int = 0, kernel: str = "rbf"):
    """Pick (c, gamma) by cross-validated accuracy; ties go to the earlier
    grid point (c-major order).  Returns (model, best, table) where `table`
    maps (c, gamma) -> CV accuracy and the final model is retrained on all
    data at `best`."""
    x = np.asarray(features, dtype=np.float64)
    raw = np.asarray(labels, dtype=object)
    n = len(x)
    folds = min(folds, n)
    split = _deterministic_folds(n, folds, seed)
    table: dict[tuple[float, float], float] = {}
    for c in c_grid:
        for gamma in gamma_grid:
            correct = 0
            total = 0
            for held in split:
                mask = np.ones(n, dtype=bool)
                mask[held] = False
                if len(set(raw[mask])) < 2 or len(held) == 0:
                    continue
                model = train_svm_rbf(x[mask], raw[mask], c=c, gamma=gamma,
                                      kernel=kernel)
                pred = model.predict(x[held])
                correct += int((pred == raw[held]).sum())
                total += len(held)
            table[(c, gamma)] = correct / total if total else 0.0
    best = max(table, key=lambda key: (table[key], -list(table).index(key)))
    model = train_svm_rbf(x, raw, c=best[0], gamma=best[1], kernel=kernel)
    return model, best, table


class OneVsRestSvm:
    """Multi-class wrapper: one binary machine per class, argmax decision."""

    def __init__(self, c: float = 1.0, gamma: float = 1.0, kernel: str = "rbf"):
        self.c = c
        self.gamma = gamma
        self.kernel = kernel
        self.machines: dict = {}

    def fit(self, features, labels) -> "OneVsRestSvm":
        classes = sorted(set(labels), key=str)
        if len(classes) < 2:
            raise ValueError("need at least two classes")
        for cls in classes:
            binary = ["pos" if lab == cls else "neg" for lab in labels]
            self.machines[cls] = train_svm_rbf(
                features, binary, c=self.c, gamma=self.gamma, kernel=self.kernel
            )
        return self

    def predict(self, features) -> list:
        features = np.atleast_2d(np.asarray(features, dtype=np.float64))
        names = list(self.machines)
        scores = np.stack(
            [self.machines[cls].decision_function(features) for cls in names]
        )
        return [names[i] for i in np.argmax(scores, axis=0)]
