import math

import pytest

from chronus.model import (NEG_INF, SegmentedSentence, UnknownLabelError,
                           UnknownWordError, apply_synonym_smoothing,
                           make_sentence, model_from_text, model_to_text,
                           sequence_log_prob, train_mle, _round12)

from helpers import assert_rows_normalized


def _mk(corpus_specs, dictionary, vocab, k):
    corpus = [make_sentence(words, labels) for words, labels in corpus_specs]
    return train_mle(corpus, dictionary, vocab, k)


# ---------------------------------------------------------------------------
# Segmented sentences

def test_sentence_render_parse_round_trip():
    text = "SHOW:question\tME:question\t((city)BOSTON):origin"
    sent = SegmentedSentence.parse(text)
    assert sent.render() == text
    assert sent.words[2].value == "BOSTON"


def test_sentence_length_mismatch_rejected():
    with pytest.raises(Exception):
        make_sentence(["A", "B"], ["question"])


def test_segments_group_adjacent_equal_labels():
    sent = make_sentence(["A", "B", "C", "D", "E"],
                         ["question", "question", "subject", "origin", "origin"])
    assert sent.segments() == [("question", 0, 2), ("subject", 2, 3),
                               ("origin", 3, 5)]


def test_segments_split_repeated_concept_only_at_label_change():
    sent = make_sentence(["A", "B", "A"], ["origin", "destin", "origin"])
    assert sent.segments() == [("origin", 0, 1), ("destin", 1, 2),
                               ("origin", 2, 3)]


# ---------------------------------------------------------------------------
# Maximum-likelihood estimation

def test_unsmoothed_counts_give_exact_ratios(artifacts):
    model = _mk([ (["SHOW", "ME"], ["question", "question"]) ],
                artifacts.dictionary, ["SHOW", "ME"], k=0.0)
    assert model.initial == {"question": 1.0}
    # label-per-word: one question->question event, one question->final
    assert model.transition["question"] == {"question": 0.5, "</s>": 0.5}
    assert model.bigram["question"]["<s>"] == {"SHOW": 1.0}
    assert model.bigram["question"]["SHOW"] == {"ME": 1.0}
    sent = make_sentence(["SHOW", "ME"], ["question", "question"])
    assert sequence_log_prob(model, sent) == pytest.approx(math.log(0.25))


def test_unsmoothed_initial_splits_between_first_concepts(artifacts):
    model = _mk([ (["SHOW"], ["question"]), (["FLIGHT(S)"], ["subject"]) ],
                artifacts.dictionary, ["SHOW", "FLIGHT(S)"], k=0.0)
    assert model.initial == {"question": 0.5, "subject": 0.5}


def test_unsmoothed_absent_rows_are_impossible(artifacts):
    model = _mk([ (["SHOW", "ME"], ["question", "question"]) ],
                artifacts.dictionary, ["SHOW", "ME"], k=0.0)
    # no counts under context ME: the row is absent, not uniform
    assert "ME" not in model.bigram["question"]
    assert model.log_emit("question", "ME", "SHOW") == NEG_INF
    assert model.log_initial("subject") == NEG_INF
    bad = make_sentence(["ME", "SHOW"], ["question", "question"])
    assert sequence_log_prob(model, bad) == NEG_INF


def test_add_k_smoothing_values(artifacts):
    k = 0.001
    model = _mk([ (["SHOW", "ME"], ["question", "question"]) ],
                artifacts.dictionary, ["SHOW", "ME"], k=k)
    n_cols = len(artifacts.dictionary) + 1  # concepts plus the final column
    assert model.initial["question"] == pytest.approx(
        _round12((1 + k) / (1 + k * n_cols)), rel=1e-11)
    assert model.initial["subject"] == pytest.approx(
        _round12(k / (1 + k * n_cols)), rel=1e-11)
    assert model.bigram["question"]["SHOW"]["ME"] == pytest.approx(
        _round12((1 + k) / (1 + 2 * k)), rel=1e-11)
    assert model.bigram["question"]["SHOW"]["SHOW"] == pytest.approx(
        _round12(k / (1 + 2 * k)), rel=1e-11)
    assert_rows_normalized(model)


def test_smoothed_zero_count_context_row_is_uniform(artifacts):
    model = _mk([ (["SHOW", "ME"], ["question", "question"]) ],
                artifacts.dictionary, ["SHOW", "ME"], k=0.001)
    row = model.bigram["question"]["ME"]  # never observed as a context
    assert row == {"SHOW": 0.5, "ME": 0.5}


def test_train_rejects_unknown_label(artifacts):
    with pytest.raises(UnknownLabelError):
        _mk([ (["SHOW"], ["bogus"]) ], artifacts.dictionary, ["SHOW"], 0.001)


def test_train_rejects_word_outside_vocabulary(artifacts):
    with pytest.raises(UnknownWordError):
        _mk([ (["SHOW"], ["question"]) ], artifacts.dictionary, ["ME"], 0.001)


def test_train_rejects_empty_corpus(artifacts):
    with pytest.raises(Exception):
        train_mle([], artifacts.dictionary, ["SHOW"], 0.001)


def test_all_rows_normalized_on_real_model(demo_model):
    assert_rows_normalized(demo_model)


def test_sequence_log_prob_matches_hand_product(artifacts):
    model = _mk([ (["SHOW", "FLIGHT(S)"], ["question", "subject"]),
                  (["SHOW", "ME"], ["question", "question"]) ],
                artifacts.dictionary, ["SHOW", "ME", "FLIGHT(S)"], k=0.0)
    sent = make_sentence(["SHOW", "FLIGHT(S)"], ["question", "subject"])
    # initial(question)=1, emit SHOW|<s>=1, trans question->subject=1/3
    # (the question row saw ->subject, ->question and ->final once each),
    # emit FLIGHT(S)|<s> under subject=1 (segment change resets context),
    # final(subject)=1
    assert sequence_log_prob(model, sent) == pytest.approx(math.log(1 / 3))


# ---------------------------------------------------------------------------
# Serialization

def test_model_text_round_trip(demo_model):
    text = model_to_text(demo_model)
    again = model_from_text(text)
    assert model_to_text(again) == text
    assert again.k == demo_model.k
    assert again.vocab == demo_model.vocab
    sent = SegmentedSentence.parse(
        "SHOW:question\tME:question\tFLIGHT(S):subject")
    assert sequence_log_prob(again, sent) == sequence_log_prob(demo_model, sent)


def test_model_text_header_required():
    with pytest.raises(Exception):
        model_from_text("not a model\n")


def test_canonical_probabilities_are_12_digit_stable(demo_model):
    # every stored probability survives the decimal rendering unchanged
    for _, row in demo_model.rows():
        for p in row.values():
            assert float(f"{p:.11e}") == p


# ---------------------------------------------------------------------------
# Synonym smoothing

def _synonym_model(artifacts, k=0.001):
    vocab = ["DEPART(S)", "LEAVE(S)", "FROM", "((city))"]
    corpus = [
        make_sentence(["DEPART(S)", "FROM", "((city))"],
                      ["origin", "origin", "origin"]),
        make_sentence(["LEAVE(S)", "((city))"], ["origin", "origin"]),
    ]
    return train_mle(corpus, artifacts.dictionary, vocab, k)


def test_synonym_rows_become_identical(artifacts):
    model = _synonym_model(artifacts)
    groups = {"origin": [["DEPART(S)", "LEAVE(S)"]]}
    before = model.bigram["origin"]
    assert before["DEPART(S)"] != before["LEAVE(S)"]
    smoothed = apply_synonym_smoothing(model, groups)
    table = smoothed.bigram["origin"]
    assert table["DEPART(S)"] == table["LEAVE(S)"]
    # member columns share their mass in every row of the concept table
    for row in table.values():
        assert row.get("DEPART(S)", 0.0) == row.get("LEAVE(S)", 0.0)
    assert_rows_normalized(smoothed)


def test_synonym_smoothing_is_idempotent(artifacts):
    model = _synonym_model(artifacts)
    groups = {"origin": [["DEPART(S)", "LEAVE(S)"]]}
    once = apply_synonym_smoothing(model, groups)
    twice = apply_synonym_smoothing(once, groups)
    assert model_to_text(twice) == model_to_text(once)


def test_synonym_smoothing_leaves_other_tables_alone(artifacts):
    model = _synonym_model(artifacts)
    smoothed = apply_synonym_smoothing(
        model, {"origin": [["DEPART(S)", "LEAVE(S)"]]})
    assert smoothed.transition == model.transition
    assert smoothed.initial == model.initial
    assert smoothed.bigram["destin"] == model.bigram["destin"]


def test_empty_and_singleton_groups_are_identity(artifacts):
    model = _synonym_model(artifacts)
    assert apply_synonym_smoothing(model, {}) is model
    same = apply_synonym_smoothing(model, {"origin": [["DEPART(S)"]]})
    assert model_to_text(same) == model_to_text(model)


def test_synonym_smoothing_input_validation(artifacts):
    model = _synonym_model(artifacts)
    with pytest.raises(UnknownLabelError):
        apply_synonym_smoothing(model, {"bogus": [["FROM", "((city))"]]})
    with pytest.raises(UnknownWordError):
        apply_synonym_smoothing(model, {"origin": [["FROM", "NOPE"]]})
    with pytest.raises(Exception):
        apply_synonym_smoothing(
            model, {"origin": [["FROM", "((city))"], ["FROM", "DEPART(S)"]]})
