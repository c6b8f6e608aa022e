"""Metric tests against brute-force oracles plus cross-validation driver
behavior."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from factkit.evaluation import (
    EvalReport,
    RankedList,
    average_precision,
    classification_metrics,
    cross_validate,
    precision_at_k,
    r_precision,
    ranking_metrics,
)


def brute_force_ap(labels):
    """Oracle: enumerate every prefix, sum precision at relevant ranks."""
    relevant = sum(labels)
    if relevant == 0:
        return 0.0
    total = 0.0
    for r in range(1, len(labels) + 1):
        if labels[r - 1]:
            total += sum(labels[:r]) / r
    return total / relevant


def brute_force_p_at_k(labels, k):
    prefix = labels[: min(k, len(labels))]
    return sum(prefix) / len(prefix) if prefix else 0.0


class TestAveragePrecision:
    def test_all_relevant_at_top(self):
        assert average_precision([1, 1, 1, 0, 0]) == 1.0

    def test_interleaved(self):
        # (1/1 + 2/3) / 2, frozen from the prefix-enumeration oracle
        assert average_precision([1, 0, 1, 0]) == pytest.approx(5 / 6)

    def test_no_relevant(self):
        assert average_precision([0, 0, 0]) == 0.0

    def test_exhaustive_vs_oracle_short(self):
        for n in range(1, 11):
            for labels in itertools.product((0, 1), repeat=n):
                assert average_precision(labels) == pytest.approx(
                    brute_force_ap(labels), abs=1e-12
                )


class TestPrecisionAtK:
    def test_hand_counted(self):
        assert precision_at_k([1, 0, 1, 0], 2) == 0.5

    def test_perfect_prefix(self):
        for k in (1, 2, 3):
            assert precision_at_k([1, 1, 1, 0], k) == 1.0

    def test_k_beyond_length_warns(self):
        with pytest.warns(UserWarning):
            value = precision_at_k([1, 0], 5)
        assert value == 0.5

    def test_bad_k(self):
        with pytest.raises(ValueError):
            precision_at_k([1], 0)

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=30))
    def test_hits_monotone_in_k(self, labels):
        # P@k * k counts hits in the prefix, so it never decreases with k
        hits = [precision_at_k(labels, k) * k for k in range(1, len(labels) + 1)]
        assert all(b >= a - 1e-12 for a, b in zip(hits, hits[1:]))


class TestRPrecision:
    def test_hand_counted(self):
        # R = 2, top-2 holds one relevant item
        assert r_precision([1, 0, 1, 0]) == 0.5

    def test_perfect(self):
        assert r_precision([1, 1, 0, 0]) == 1.0

    def test_exhaustive_vs_oracle(self):
        for n in range(1, 9):
            for labels in itertools.product((0, 1), repeat=n):
                r = sum(labels)
                expected = brute_force_p_at_k(labels, r) if r else 0.0
                assert r_precision(labels) == pytest.approx(expected)


class TestClassificationMetrics:
    def test_majority_on_cqa_distribution(self):
        gold = ["Positive"] * 128 + ["Negative"] * 121
        pred = ["Positive"] * 249
        acc, prec, rec, f1 = classification_metrics(pred, gold)
        assert acc == pytest.approx(0.514, abs=1e-3)
        assert rec == 1.0
        assert f1 == pytest.approx(0.679, abs=1e-3)

    def test_perfect(self):
        gold = ["Positive", "Negative", "Positive"]
        assert classification_metrics(gold, gold) == (1.0, 1.0, 1.0, 1.0)

    def test_zero_true_positives(self):
        gold = ["Positive", "Positive"]
        pred = ["Negative", "Negative"]
        acc, prec, rec, f1 = classification_metrics(pred, gold)
        assert (acc, prec, rec, f1) == (0.0, 0.0, 0.0, 0.0)

    def test_empty_errors(self):
        with pytest.raises(ValueError):
            classification_metrics([], [])
        with pytest.raises(ValueError):
            classification_metrics(["Positive"], [])


class TestRankedList:
    def test_sorting_and_tie_break(self):
        rl = RankedList([("b", 1.0, 0), ("a", 1.0, 1), ("c", 2.0, 0)])
        assert [it.item_id for it in rl] == ["c", "a", "b"]

    @given(
        st.lists(
            st.tuples(st.floats(-10, 10), st.integers(0, 1)),
            min_size=1,
            max_size=25,
        )
    )
    @settings(max_examples=50)
    def test_score_transform_invariance(self, scored):
        # a strictly increasing transform keeps the ranking, hence the AP;
        # power-of-two scaling is exact in floats so no ties are introduced
        items = [(i, s, l) for i, (s, l) in enumerate(scored)]
        transformed = [(i, 4.0 * s, l) for i, s, l in items]
        ap1 = average_precision(RankedList(items))
        ap2 = average_precision(RankedList(transformed))
        assert ap1 == pytest.approx(ap2)


class _ConstantPipeline:
    """Scores items by their position value; groups hold (id, score, label)."""

    task = "toy"

    def run_fold(self, train, test, seed):
        return RankedList(test)


class _EchoClassifier:
    task = "toy-clf"

    def run_fold(self, train, test, seed):
        preds, gold = zip(*test)
        return list(preds), list(gold)


class TestCrossValidate:
    GROUPS = {
        f"g{i}": [(f"g{i}s{j}", float(j), j % 2) for j in range(6)]
        for i in range(4)
    }

    def test_four_groups_four_folds(self):
        report = cross_validate(
            "leave_one_debate_out", _ConstantPipeline(), self.GROUPS, [1]
        )
        assert len(report.per_fold["1"]) == 4
        assert set(report.metrics) == {"MAP", "R-Pr", "P@5", "P@10", "P@20", "P@50"}

    def test_multi_seed_mean_and_std(self):
        report = cross_validate(
            "leave_one_debate_out", _ConstantPipeline(), self.GROUPS, [1, 2, 3]
        )
        assert set(report.per_seed) == {"1", "2", "3"}
        # deterministic pipeline: identical across seeds, zero deviation
        assert report.std["MAP"] == 0.0

    def test_too_few_groups(self):
        with pytest.raises(ValueError):
            cross_validate(
                "leave_one_debate_out", _ConstantPipeline(), {"only": []}, [1]
            )

    def test_unknown_scheme(self):
        with pytest.raises(ValueError):
            cross_validate("bootstrap", _ConstantPipeline(), self.GROUPS, [1])

    def test_classification_pools_predictions(self):
        groups = {
            "t1": [("Positive", "Positive"), ("Negative", "Positive")],
            "t2": [("Positive", "Negative")],
            "t3": [("Negative", "Negative")],
        }
        report = cross_validate("leave_one_thread_out", _EchoClassifier(), groups, [7])
        assert report.metrics["Accuracy"] == pytest.approx(0.5)

    def test_report_round_trip(self):
        report = cross_validate(
            "leave_one_debate_out", _ConstantPipeline(), self.GROUPS, [1, 2]
        )
        text = report.to_json()
        again = EvalReport.from_json(text)
        assert again.to_json() == text
        assert "MAP" in report.table()


def test_ranking_metrics_bundle():
    labels = [1, 0, 1, 0]
    m = ranking_metrics(labels)
    assert m["MAP"] == pytest.approx(5 / 6)
    assert m["R-Pr"] == 0.5
    assert m["P@5"] == pytest.approx(0.5)  # prefix-limited
