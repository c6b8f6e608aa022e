import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from factkit.embeddings import VectorStore, cosine, load_vectors, sentence_vector


@pytest.fixture
def store():
    return VectorStore(
        2,
        {
            "a": np.array([1.0, 0.0]),
            "b": np.array([0.0, 1.0]),
            "Qatar": np.array([0.5, 0.5]),
        },
    )


class TestLoadVectors:
    def test_plain_rows(self, tmp_path):
        p = tmp_path / "vec.txt"
        p.write_text("w1 1 0 0 0\nw2 0 1 0 0\nw3 0 0 1 0\n")
        store = load_vectors(p)
        assert store.dimension == 4
        assert len(store) == 3

    def test_header_line(self, tmp_path):
        p = tmp_path / "vec.txt"
        p.write_text("2 3\nw1 1 0 0\nw2 0 1 0\n")
        store = load_vectors(p)
        assert store.dimension == 3
        assert len(store) == 2

    def test_duplicate_word(self, tmp_path):
        p = tmp_path / "vec.txt"
        p.write_text("w1 1 0\nw1 0 1\n")
        with pytest.raises(ValueError, match="duplicate word"):
            load_vectors(p)

    def test_arity_mismatch_positioned(self, tmp_path):
        p = tmp_path / "vec.txt"
        p.write_text("3 4\nw1 1 0 0 0\nw2 1 0 0\n")
        with pytest.raises(ValueError, match=":3:"):
            load_vectors(p)

    def test_expected_dim_mismatch(self, tmp_path):
        p = tmp_path / "vec.txt"
        p.write_text("w1 1 0 0\n")
        with pytest.raises(ValueError):
            load_vectors(p, expected_dim=5)

    def test_empty_file(self, tmp_path):
        p = tmp_path / "vec.txt"
        p.write_text("")
        with pytest.raises(ValueError, match="no vector rows"):
            load_vectors(p)


class TestSentenceVector:
    def test_repeated_token_idempotent(self, store):
        np.testing.assert_allclose(
            sentence_vector(["a", "a"], store), np.array([1.0, 0.0])
        )

    def test_all_oov_zero(self, store):
        np.testing.assert_array_equal(
            sentence_vector(["zzz", "yyy"], store), np.zeros(2)
        )

    def test_hand_average(self, store):
        np.testing.assert_allclose(
            sentence_vector(["a", "b"], store), np.array([0.5, 0.5])
        )

    def test_lowercase_fallback(self, store):
        # "QATAR" misses exactly, falls back to lowercase miss, then "Qatar"
        # is only reachable via exact match
        np.testing.assert_allclose(
            sentence_vector(["Qatar"], store), np.array([0.5, 0.5])
        )
        np.testing.assert_array_equal(sentence_vector(["QATAR"], store), np.zeros(2))

    @given(st.permutations(["a", "b", "zzz", "a"]))
    def test_permutation_invariant(self, tokens):
        s = VectorStore(2, {"a": np.array([1.0, 0.0]), "b": np.array([0.0, 1.0])})
        np.testing.assert_allclose(
            sentence_vector(tokens, s), sentence_vector(["a", "b", "zzz", "a"], s)
        )


class TestCosine:
    def test_self_similarity(self):
        v = np.array([1.0, 2.0, 3.0])
        assert cosine(v, v) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_zero_norm(self):
        assert cosine([0.0, 0.0], [1.0, 1.0]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            cosine([1.0], [1.0, 2.0])

    @given(
        st.lists(st.floats(-100, 100), min_size=2, max_size=8),
        st.lists(st.floats(-100, 100), min_size=2, max_size=8),
    )
    def test_bounded_and_symmetric(self, u, v):
        n = min(len(u), len(v))
        u, v = u[:n], v[:n]
        c = cosine(u, v)
        assert abs(c) <= 1 + 1e-9
        assert c == pytest.approx(cosine(v, u))

    @given(st.floats(0.1, 50))
    def test_scale_invariant(self, alpha):
        u = np.array([1.0, 2.0, -3.0])
        v = np.array([0.5, -1.0, 2.0])
        assert cosine(alpha * u, v) == pytest.approx(cosine(u, v))
