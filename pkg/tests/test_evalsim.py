"""Tests for embedding loading, neighbour ranking, and correlation."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spellvar.corpus import VariantPair
from spellvar.evalsim import (
    EmbeddingFormatError,
    MissingWordError,
    evaluate_pairs,
    load_embeddings,
    load_vocab,
    make_table,
    pearson,
    rank_of_formal,
)


def write_embeddings(tmp_path, text, name="vectors.txt"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadEmbeddings:
    def test_with_header(self, tmp_path):
        path = write_embeddings(tmp_path, "3 4\na 1 0 0 0\nb 0 1 0 0\nc 0 0 1 0\n")
        table = load_embeddings(path)
        assert len(table) == 3
        assert table.dimension == 4
        assert table.words == ("a", "b", "c")

    def test_headerless_dimension_inferred(self, tmp_path):
        path = write_embeddings(tmp_path, "a 1 0\nb 0 1\n")
        table = load_embeddings(path)
        assert table.dimension == 2
        np.testing.assert_array_equal(table.vector("b"), [0.0, 1.0])

    def test_dimension_mismatch_reports_line(self, tmp_path):
        path = write_embeddings(tmp_path, "a 1 0 0 0\nb 0 1 0\n")
        with pytest.raises(EmbeddingFormatError, match="line 2"):
            load_embeddings(path)

    def test_non_numeric_component(self, tmp_path):
        path = write_embeddings(tmp_path, "a 1 oops\n")
        with pytest.raises(EmbeddingFormatError, match="non-numeric"):
            load_embeddings(path)

    def test_duplicate_words_keep_first(self, tmp_path):
        path = write_embeddings(tmp_path, "a 1 0\na 0 1\n")
        table = load_embeddings(path)
        assert len(table) == 1
        np.testing.assert_array_equal(table.vector("a"), [1.0, 0.0])

    def test_empty_file_rejected(self, tmp_path):
        path = write_embeddings(tmp_path, "")
        with pytest.raises(EmbeddingFormatError, match="no vectors"):
            load_embeddings(path)

    def test_zero_vector_names_word(self, tmp_path):
        path = write_embeddings(tmp_path, "a 1 0\nnull 0 0\n")
        with pytest.raises(EmbeddingFormatError, match="null"):
            load_embeddings(path)

    def test_word_only_row_rejected(self, tmp_path):
        path = write_embeddings(tmp_path, "lonely\n")
        with pytest.raises(EmbeddingFormatError, match="line 1"):
            load_embeddings(path)


def rank_oracle(table, informal, formal):
    """Full sort with optimistic tie handling."""
    query = table.vector(informal)
    cosines = {
        word: float(
            np.dot(table.vector(word), query)
            / (np.linalg.norm(table.vector(word)) * np.linalg.norm(query))
        )
        for word in table.words
        if word != informal
    }
    target = cosines[formal]
    return 1 + sum(1 for value in cosines.values() if value > target)


def random_table(rng, n_words=20, dimension=5):
    words = [f"w{i}" for i in range(n_words)]
    vectors = rng.normal(size=(n_words, dimension))
    return make_table(words, vectors)


class TestRankOfFormal:
    def test_identical_vector_ranks_first(self):
        table = make_table(["inf", "frm", "x", "y"],
                           [[1, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])
        assert rank_of_formal(table, "inf", "frm") == 1

    def test_missing_informal(self):
        table = make_table(["a"], [[1.0]])
        with pytest.raises(MissingWordError) as exc_info:
            rank_of_formal(table, "ghost", "a")
        assert exc_info.value.role == "informal"

    def test_missing_formal(self):
        table = make_table(["a"], [[1.0]])
        with pytest.raises(MissingWordError) as exc_info:
            rank_of_formal(table, "a", "ghost")
        assert exc_info.value.role == "formal"

    def test_matches_full_sort_oracle(self):
        rng = np.random.default_rng(41)
        table = random_table(rng)
        for _ in range(50):
            informal, formal = rng.choice(table.words, size=2, replace=False)
            assert rank_of_formal(table, informal, formal) == rank_oracle(table, informal, formal)

    def test_scale_invariant(self):
        rng = np.random.default_rng(43)
        table = random_table(rng)
        scaled = make_table(table.words, table.vectors * 7.5)
        for _ in range(20):
            informal, formal = rng.choice(table.words, size=2, replace=False)
            assert rank_of_formal(table, informal, formal) == rank_of_formal(
                scaled, informal, formal
            )

    def test_ties_do_not_worsen_rank(self):
        table = make_table(["inf", "frm", "tie"], [[1, 0], [0, 1], [0, 2]])
        assert rank_of_formal(table, "inf", "frm") == 1
        assert rank_of_formal(table, "inf", "tie") == 1


def planted_pairs(n=20):
    return [
        VariantPair(informal=f"inf{i}", formal=f"frm{i}", score=1.0, method="baseline")
        for i in range(n)
    ]


def planted_table(n=20, n_background=60):
    """Each informal vector equals its formal vector; the rest point elsewhere."""
    rng = np.random.default_rng(47)
    words, rows = [], []
    for i in range(n):
        direction = rng.normal(size=8)
        words.extend([f"inf{i}", f"frm{i}"])
        rows.extend([direction, direction.copy()])
    for i in range(n_background):
        words.append(f"bg{i}")
        rows.append(rng.normal(size=8))
    return make_table(words, np.array(rows))


class TestEvaluatePairs:
    def test_mutual_nearest_neighbours_hit_at_one(self):
        table = planted_table()
        vocab = frozenset(f"frm{i}" for i in range(20))
        report = evaluate_pairs(table, planted_pairs(), vocab, ks=(1, 20))
        assert report.matched_pairs == 20
        assert report.accuracy[1] == 1.0

    def test_huge_k_always_hits(self):
        table = planted_table(n=5, n_background=10)
        vocab = frozenset(f"frm{i}" for i in range(5))
        report = evaluate_pairs(table, planted_pairs(5), vocab, ks=(len(table) - 1,))
        assert report.accuracy[len(table) - 1] == 1.0

    def test_accuracy_monotone_in_k(self):
        rng = np.random.default_rng(53)
        table = random_table(rng, n_words=40)
        pairs = [
            VariantPair(informal=f"w{2 * i}", formal=f"w{2 * i + 1}",
                        score=1.0, method="baseline")
            for i in range(20)
        ]
        vocab = frozenset(table.words)
        report = evaluate_pairs(table, pairs, vocab, ks=(1, 5, 10, 39))
        values = [report.accuracy[k] for k in (1, 5, 10, 39)]
        assert values == sorted(values)
        assert report.accuracy[39] == 1.0

    def test_vocab_filter_records_miss(self):
        table = planted_table(n=2, n_background=4)
        pairs = planted_pairs(2)
        vocab = frozenset({"frm0"})
        report = evaluate_pairs(table, pairs, vocab, ks=(1,))
        assert report.matched_pairs == 1
        missed = [o for o in report.per_pair if o.miss]
        assert [o.miss for o in missed] == ["formal-not-in-vocab"]

    def test_words_absent_from_table_record_roles(self):
        table = make_table(["inf0", "frm0"], [[1, 0], [1, 0]])
        pairs = [
            VariantPair(informal="inf0", formal="frm0", score=1.0, method="baseline"),
            VariantPair(informal="ghost", formal="frm0", score=1.0, method="baseline"),
            VariantPair(informal="inf0", formal="phantom", score=1.0, method="baseline"),
        ]
        vocab = frozenset({"frm0", "phantom"})
        report = evaluate_pairs(table, pairs, vocab, ks=(1,))
        assert report.matched_pairs == 1
        assert [o.miss for o in report.per_pair] == [
            None, "informal-not-in-table", "formal-not-in-table",
        ]

    def test_no_evaluable_pairs_rejected(self):
        table = planted_table(n=2, n_background=2)
        with pytest.raises(ValueError, match="no evaluable pairs"):
            evaluate_pairs(table, planted_pairs(2), frozenset(), ks=(1,))

    def test_lookup_is_case_folded(self):
        table = make_table(["inf0", "frm0", "bg"], [[1, 0], [1, 0], [0, 1]])
        pairs = [VariantPair(informal="Inf0", formal="FRM0", score=1.0, method="baseline")]
        report = evaluate_pairs(table, pairs, frozenset({"frm0"}), ks=(1,))
        assert report.accuracy[1] == 1.0

    def test_bad_cutoff_rejected(self):
        table = planted_table(n=2, n_background=2)
        with pytest.raises(ValueError, match="cutoffs"):
            evaluate_pairs(table, planted_pairs(2), frozenset({"frm0"}), ks=(0,))

    def test_hits_match_ranks(self):
        rng = np.random.default_rng(59)
        table = random_table(rng, n_words=30)
        pairs = [
            VariantPair(informal=f"w{i}", formal=f"w{i + 15}", score=1.0, method="baseline")
            for i in range(15)
        ]
        report = evaluate_pairs(table, pairs, frozenset(table.words), ks=(5,))
        expected = sum(1 for o in report.per_pair if o.rank is not None and o.rank <= 5)
        assert report.hits[5] == expected


class TestLoadVocab:
    def test_basic(self, tmp_path):
        path = tmp_path / "vocab.txt"
        path.write_text("Mate\nyes\n\nmate\n", encoding="utf-8")
        assert load_vocab(path) == frozenset({"mate", "yes"})


class TestPearson:
    def test_hand_computed_example(self):
        assert pearson([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8, abs=1e-12)

    def test_perfect_positive(self):
        xs = [1.0, 2.0, 5.0, 9.0]
        assert pearson(xs, [2 * x + 1 for x in xs]) == pytest.approx(1.0, abs=1e-12)

    def test_perfect_negative(self):
        xs = [1.0, 2.0, 5.0, 9.0]
        assert pearson(xs, [-x for x in xs]) == pytest.approx(-1.0, abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length mismatch"):
            pearson([1, 2], [1, 2, 3])

    def test_too_short(self):
        with pytest.raises(ValueError, match="two points"):
            pearson([1], [2])

    def test_constant_input(self):
        with pytest.raises(ValueError, match="variance"):
            pearson([3, 3, 3], [1, 2, 3])

    @given(
        st.lists(
            st.floats(min_value=-100, max_value=100, allow_nan=False),
            min_size=3,
            max_size=12,
        ),
        st.lists(
            st.floats(min_value=-100, max_value=100, allow_nan=False),
            min_size=3,
            max_size=12,
        ),
    )
    def test_symmetric_and_bounded(self, xs, ys):
        n = min(len(xs), len(ys))
        xs, ys = xs[:n], ys[:n]
        try:
            r = pearson(xs, ys)
        except ValueError:
            return
        assert -1.0 - 1e-9 <= r <= 1.0 + 1e-9
        assert pearson(ys, xs) == pytest.approx(r, abs=1e-12)

    def test_affine_invariance(self):
        xs = [1.0, 4.0, 2.0, 8.0]
        ys = [3.0, 1.0, 7.0, 2.0]
        base = pearson(xs, ys)
        assert pearson([2.5 * x + 3 for x in xs], ys) == pytest.approx(base, abs=1e-12)
