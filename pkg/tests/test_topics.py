import numpy as np
import pytest

from factkit.topics import (
    TopicModel,
    default_stopwords,
    infer_distribution,
    preprocess,
    train_lda,
)


def two_cluster_corpus():
    rng = np.random.default_rng(42)
    vocab_a = ["visa", "permit", "sponsor", "embassy"]
    vocab_b = ["football", "league", "stadium", "match"]
    docs = []
    for _ in range(4):
        docs.append([vocab_a[j % 4] for j in rng.integers(0, 4, 25)])
    for _ in range(4):
        docs.append([vocab_b[j % 4] for j in rng.integers(0, 4, 25)])
    return docs


@pytest.fixture(scope="module")
def toy_model():
    return train_lda(two_cluster_corpus(), k=2, iterations=200, seed=0,
                     alpha=0.1, beta=0.01)


class TestTrainLda:
    def test_two_clusters_separate(self, toy_model):
        dominant = []
        for d in range(8):
            dist = toy_model.doc_distribution(d)
            assert dist.max() > 0.8
            dominant.append(int(np.argmax(dist)))
        assert set(dominant[:4]) != set(dominant[4:])
        assert len(set(dominant[:4])) == 1 and len(set(dominant[4:])) == 1

    def test_k1_degenerate(self):
        m = train_lda([["a", "b"], ["b", "c"]], k=1, iterations=5, seed=3)
        np.testing.assert_allclose(m.doc_distribution(0), [1.0])
        np.testing.assert_allclose(infer_distribution(m, ["a"]), [1.0])

    def test_empty_vocabulary_errors(self):
        with pytest.raises(ValueError, match="empty vocabulary"):
            train_lda([[], []], k=2)

    def test_seed_reproducibility_bit_exact(self):
        docs = two_cluster_corpus()
        m1 = train_lda(docs, k=2, iterations=50, seed=9, alpha=0.1)
        m2 = train_lda(docs, k=2, iterations=50, seed=9, alpha=0.1)
        assert np.array_equal(m1.word_topic_counts, m2.word_topic_counts)
        assert np.array_equal(m1.doc_topic_counts, m2.doc_topic_counts)
        assert np.array_equal(m1.topic_counts, m2.topic_counts)

    def test_count_tables_consistent(self, toy_model):
        assert toy_model.consistency_ok()
        total_tokens = sum(len(d) for d in two_cluster_corpus())
        assert int(toy_model.topic_counts.sum()) == total_tokens

    def test_distribution_dimension_matches_k(self):
        docs = [["w%d" % i for i in range(30)]] * 3
        m = train_lda(docs, k=7, iterations=5, seed=1)
        assert infer_distribution(m, ["w1", "w2"]).shape == (7,)

    def test_default_alpha_is_50_over_k(self):
        m = train_lda([["a", "b"], ["c"]], k=10, iterations=2, seed=0)
        assert m.alpha == pytest.approx(5.0)


class TestInferDistribution:
    def test_all_oov_uniform(self, toy_model):
        np.testing.assert_allclose(infer_distribution(toy_model, ["zzz"]), [0.5, 0.5])
        np.testing.assert_allclose(infer_distribution(toy_model, []), [0.5, 0.5])

    def test_sums_to_one(self, toy_model):
        for tokens in (["visa"], ["football", "match"], ["visa", "zzz"]):
            dist = infer_distribution(toy_model, tokens)
            assert dist.sum() == pytest.approx(1.0, abs=1e-6)
            assert (dist >= 0).all()

    def test_training_doc_reinference_matches_majority(self, toy_model):
        docs = two_cluster_corpus()
        for d in (0, 5):
            trained_dominant = int(np.argmax(toy_model.doc_distribution(d)))
            inferred = infer_distribution(toy_model, docs[d])
            assert int(np.argmax(inferred)) == trained_dominant

    def test_deterministic_and_nonmutating(self, toy_model):
        before = toy_model.word_topic_counts.copy()
        d1 = infer_distribution(toy_model, ["visa", "permit"])
        d2 = infer_distribution(toy_model, ["visa", "permit"])
        assert np.array_equal(d1, d2)
        assert np.array_equal(before, toy_model.word_topic_counts)


class TestPreprocess:
    def test_strips_stopwords_and_punct(self):
        tokens = ["The", "Visa", ",", "is", "valid", "!"]
        assert preprocess(tokens) == ["visa", "valid"]

    def test_custom_stopwords(self):
        assert preprocess(["keep", "drop"], frozenset({"drop"})) == ["keep"]

    def test_default_stopwords(self):
        sw = default_stopwords()
        assert "the" in sw and "visa" not in sw


def test_save_load_round_trip(toy_model, tmp_path):
    path = tmp_path / "model.npz"
    toy_model.save(path)
    again = TopicModel.load(path)
    assert again.k == toy_model.k
    assert again.vocabulary == toy_model.vocabulary
    assert np.array_equal(again.word_topic_counts, toy_model.word_topic_counts)
    d1 = infer_distribution(toy_model, ["visa"])
    d2 = infer_distribution(again, ["visa"])
    assert np.array_equal(d1, d2)
