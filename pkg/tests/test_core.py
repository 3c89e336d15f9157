import pytest
from hypothesis import given
from hypothesis import strategies as st

from core import (
    Document,
    Explanation,
    LabelSet,
    Prediction,
    detokenize,
    is_content_word,
    stable_hash,
    strip_edges,
    tokenize,
)


class TestText:
    def test_tokenize_splits_on_any_whitespace(self):
        assert tokenize("  good\tfilm\n ok ") == ["good", "film", "ok"]
        assert detokenize(["good", "film"]) == "good film"

    @given(st.text())
    def test_tokenize_is_idempotent_on_its_own_output(self, text):
        assert tokenize(detokenize(tokenize(text))) == tokenize(text)

    @given(st.lists(st.text(min_size=1).filter(lambda w: not any(c.isspace() for c in w))))
    def test_single_space_text_survives_a_round_trip(self, words):
        text = " ".join(words)
        assert detokenize(tokenize(text)) == text

    def test_strip_edges_lowercases_and_drops_punctuation(self):
        assert strip_edges("Great!") == "great"
        assert strip_edges("\"(film),") == "film"
        assert strip_edges("don't") == "don't"

    def test_content_words(self):
        assert is_content_word("Film.")
        assert not is_content_word("The")
        assert not is_content_word("...")


class TestStableHash:
    def test_is_deterministic_and_order_sensitive(self):
        assert stable_hash(0, "doc1", "char_swap", 0.05) == stable_hash(0, "doc1", "char_swap", 0.05)
        assert stable_hash(0, "doc1") != stable_hash("doc1", 0)

    def test_severity_formatting_is_canonical(self):
        assert stable_hash(1, 0.1) == stable_hash(1, 0.1000001)


class TestPrediction:
    def test_argmax_ties_break_to_lowest_index(self, labels):
        prediction = Prediction(labels, (0.5, 0.5))
        assert prediction.predicted_label == "positive"
        assert prediction.confidence == 0.5

    def test_rejects_invalid_distributions(self, labels):
        with pytest.raises(ValueError):
            Prediction(labels, (0.7, 0.7))
        with pytest.raises(ValueError):
            Prediction(labels, (1.2, -0.2))
        with pytest.raises(ValueError):
            Prediction(labels, (1.0,))

    def test_label_set_validation(self):
        with pytest.raises(ValueError):
            LabelSet(("only",))
        with pytest.raises(ValueError):
            LabelSet(("a", "a"))
        with pytest.raises(KeyError):
            LabelSet(("a", "b")).index("c")


class TestExplanation:
    def test_ranking_is_descending_with_leftmost_ties(self):
        explanation = Explanation(("A", "b", "c", "d"), (0.1, 0.3, 0.3, -0.2))
        assert explanation.ranking == (1, 2, 0, 3)
        assert explanation.top1_token == "b"
        assert explanation.ranked_tokens(2) == ["b", "c"]

    def test_topk_tokens_are_lowercased_sets(self):
        explanation = Explanation(("Good", "good", "film"), (0.5, 0.4, 0.1))
        assert explanation.topk_tokens(2) == frozenset({"good"})
        assert explanation.topk_tokens(10) == frozenset({"good", "film"})

    def test_rejects_mismatched_scores(self):
        with pytest.raises(ValueError):
            Explanation(("a", "b"), (0.1,))

    def test_document_words(self):
        assert Document("x", "good  film").words == ("good", "film")
