"""Ranking and classification metrics, cross-validation drivers, baselines.

Ranking metrics follow the standard IR definitions: AP is the mean of
precision-at-r over the ranks r of relevant items, P@k counts relevant items
in the top k, and R-Precision is precision at rank R where R is the number of
relevant items in the list.  Ties in scores are broken by item id so that
rankings (and therefore reports) are bit-reproducible.
"""

from __future__ import annotations

import json
import statistics
import warnings
from dataclasses import dataclass, field

PRECISION_KS = (5, 10, 20, 50)


@dataclass(frozen=True)
class RankedItem:
    item_id: object
    score: float
    label: int


class RankedList:
    """Items sorted by score descending; equal scores ordered by item id."""

    def __init__(self, items):
        items = [RankedItem(i, float(s), int(l)) for i, s, l in items]
        self.items = sorted(items, key=lambda it: (-it.score, str(it.item_id)))

    def labels(self) -> list[int]:
        return [it.label for it in self.items]

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


def _as_labels(ranked) -> list[int]:
    if isinstance(ranked, RankedList):
        return ranked.labels()
    return [int(x) for x in ranked]


def average_precision(ranked) -> float:
    """Mean over the relevant items' ranks r of precision@r; 0.0 when the
    list has no relevant item."""
    labels = _as_labels(ranked)
    relevant = sum(labels)
    if relevant == 0:
        return 0.0
    hits = 0
    total = 0.0
    for rank, label in enumerate(labels, start=1):
        if label:
            hits += 1
            total += hits / rank
    return total / relevant


def precision_at_k(ranked, k: int) -> float:
    """Fraction of relevant items in the top k.

    A k beyond the list length is computed over the available prefix (with a
    warning) rather than failing.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    labels = _as_labels(ranked)
    if k > len(labels):
        warnings.warn(
            f"precision_at_k: k={k} exceeds list length {len(labels)}; "
            "computing over the available prefix",
            stacklevel=2,
        )
        k = len(labels)
    if k == 0:
        return 0.0
    return sum(labels[:k]) / k


def r_precision(ranked) -> float:
    """Precision at rank R, R = number of relevant items in the list."""
    labels = _as_labels(ranked)
    r = sum(labels)
    if r == 0:
        return 0.0
    return sum(labels[:r]) / r


def classification_metrics(predictions, gold, positive="Positive"):
    """(accuracy, precision, recall, f1) with `positive` as the target class.

    Zero-denominator precision/recall/F1 are defined as 0.
    """
    if len(predictions) != len(gold):
        raise ValueError("predictions and gold must be aligned")
    if not gold:
        raise ValueError("empty evaluation set")
    tp = fp = fn = tn = 0
    for p, g in zip(predictions, gold):
        if p == positive and g == positive:
            tp += 1
        elif p == positive:
            fp += 1
        elif g == positive:
            fn += 1
        else:
            tn += 1
    acc = (tp + tn) / len(gold)
    prec = tp / (tp + fp) if tp + fp else 0.0
    rec = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
    return acc, prec, rec, f1


def ranking_metrics(ranked) -> dict[str, float]:
    out = {"MAP": average_precision(ranked), "R-Pr": r_precision(ranked)}
    labels = _as_labels(ranked)
    for k in PRECISION_KS:
        kk = min(k, len(labels)) or 1
        out[f"P@{k}"] = sum(labels[:kk]) / kk if labels else 0.0
    return out


@dataclass
class EvalReport:
    """Cross-validated metrics: per-seed per-fold values plus aggregates.

    `metrics` holds the mean over seeds of the per-seed values (which are
    themselves fold averages for ranking metrics and pooled-prediction values
    for classification metrics); `per_seed` and `per_fold` keep the
    breakdown, `std` the across-seed standard deviation.
    """

    task: str
    scheme: str
    seeds: list[int]
    metrics: dict[str, float] = field(default_factory=dict)
    std: dict[str, float] = field(default_factory=dict)
    per_seed: dict[str, dict[str, float]] = field(default_factory=dict)
    per_fold: dict[str, dict[str, dict[str, float]]] = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "task": self.task,
            "scheme": self.scheme,
            "seeds": list(self.seeds),
            "metrics": self.metrics,
            "std": self.std,
            "per_seed": self.per_seed,
            "per_fold": self.per_fold,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "EvalReport":
        d = json.loads(text)
        return cls(
            task=d["task"], scheme=d["scheme"], seeds=d["seeds"],
            metrics=d["metrics"], std=d["std"], per_seed=d["per_seed"],
            per_fold=d["per_fold"],
        )

    def table(self) -> str:
        names = sorted(self.metrics)
        width = max((len(n) for n in names), default=6) + 2
        lines = [f"task={self.task} scheme={self.scheme} seeds={self.seeds}"]
        for n in names:
            std = f" (std {self.std[n]:.4f})" if n in self.std else ""
            lines.append(f"  {n:<{width}} {self.metrics[n]:.4f}{std}")
        return "\n".join(lines)


def cross_validate(scheme: str, pipeline, groups: dict, seeds) -> EvalReport:
    """Grouped cross-validation: each group (debate / thread) is the test
    fold once, everything else trains.

    `pipeline.run_fold(train_groups, test_group, seed)` returns either a
    RankedList (ranking task) or a `(predictions, gold)` pair
    (classification).  Ranking metrics are averaged over folds; classification
    predictions are pooled over folds before computing metrics (per-fold
    metrics are ill-defined for single-thread folds).  Everything is then
    averaged over seeds.
    """
    if scheme not in ("leave_one_debate_out", "leave_one_thread_out"):
        raise ValueError(f"unknown scheme: {scheme}")
    if len(groups) < 2:
        raise ValueError("cross-validation needs at least 2 groups")
    seeds = list(seeds)
    report = EvalReport(task=getattr(pipeline, "task", "unknown"), scheme=scheme, seeds=seeds)

    for seed in seeds:
        fold_metrics: dict[str, dict[str, float]] = {}
        pooled_pred: list = []
        pooled_gold: list = []
        classification = False
        for fold_id in groups:
            train = {g: d for g, d in groups.items() if g != fold_id}
            result = pipeline.run_fold(train, groups[fold_id], seed)
            if isinstance(result, RankedList):
                fold_metrics[str(fold_id)] = ranking_metrics(result)
            else:
                predictions, gold = result
                pooled_pred.extend(predictions)
                pooled_gold.extend(gold)
                classification = True
        if classification:
            acc, prec, rec, f1 = classification_metrics(pooled_pred, pooled_gold)
            seed_values = {"Accuracy": acc, "Precision": prec, "Recall": rec, "F1": f1}
        else:
            names = next(iter(fold_metrics.values())).keys()
            seed_values = {
                n: sum(m[n] for m in fold_metrics.values()) / len(fold_metrics)
                for n in names
            }
        report.per_seed[str(seed)] = seed_values
        report.per_fold[str(seed)] = fold_metrics

    names = next(iter(report.per_seed.values())).keys()
    for n in names:
        values = [report.per_seed[str(s)][n] for s in seeds]
        report.metrics[n] = sum(values) / len(values)
        report.std[n] = statistics.pstdev(values) if len(values) > 1 else 0.0
    return report
