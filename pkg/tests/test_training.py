import random

import pytest

from chronus.errors import ChronusError
from chronus.gen import alignment_corpus, make_recovery_model, random_trained_model
from chronus.lexicon import parse_superword
from chronus.model import SegmentedSentence, sequence_log_prob, train_mle
from chronus.query import Answer
from chronus.training import (AlignmentInfeasibleError, FeedbackCorpus,
                              FeedbackEntry, align_win, brute_force_align,
                              required_concepts, run_training_loop)

from helpers import train_full


# ---------------------------------------------------------------------------
# Feedback corpus format

def test_corpus_round_trip(semi_corpus):
    text = semi_corpus.to_text()
    again = FeedbackCorpus.from_lines(text.splitlines())
    assert again.to_text() == text
    assert [e.ident for e in again.entries] == \
        [e.ident for e in semi_corpus.entries]


def test_entry_needs_gold_or_references():
    with pytest.raises(ChronusError):
        FeedbackCorpus([FeedbackEntry(ident="x", text="SHOW ME")])


def test_entry_with_references_only_is_valid():
    refs = Answer(kind="rows", rows=[("AA", "101")])
    corpus = FeedbackCorpus([FeedbackEntry(ident="x", text="SHOW ME",
                                           refmin=refs, refmax=refs)])
    assert corpus.feedback_entries() == corpus.entries
    assert corpus.seed_segmentations() == []


def test_from_lines_rejects_unknown_keys():
    with pytest.raises(ChronusError):
        FeedbackCorpus.from_lines(["[sentence x]", "text\tSHOW", "bogus\tv"])
    with pytest.raises(ChronusError):
        FeedbackCorpus.from_lines(["text\tno header first"])
    with pytest.raises(ChronusError):
        FeedbackCorpus.from_lines(["[sentence x]", "text\tSHOW",
                                   "refs\tpictures"])


def test_boolean_references_parse():
    corpus = FeedbackCorpus.from_lines([
        "[sentence x]", "text\tIS BREAKFAST SERVED", "refs\tboolean",
        "refvalue\tYES"])
    entry = corpus.entries[0]
    assert entry.refmin.kind == "boolean" and entry.refmin.value is True


def test_bundled_semi_corpus_split(semi_corpus):
    assert len(semi_corpus.seed_segmentations()) == 7
    assert len(semi_corpus.feedback_entries()) == 6


# ---------------------------------------------------------------------------
# Training loop

def test_loop_reaches_fixed_point_when_feedback_mirrors_seed(artifacts,
                                                             semi_corpus):
    # feedback sentences identical to seed golds: the kept segmentations
    # merely double every count, so with unsmoothed estimation the model
    # is unchanged and the loop converges at the second iteration
    from chronus.query import execute, plan_query
    from chronus.template import generate_template

    entries = []
    for e in semi_corpus.entries[:3]:
        template = generate_template(e.gold, artifacts.tables,
                                     artifacts.dictionary)
        answer = execute(plan_query(template, artifacts.db), artifacts.db)
        entries.append(FeedbackEntry(ident=e.ident, text=e.text, gold=e.gold,
                                     refmin=answer, refmax=answer))
    corpus = FeedbackCorpus(entries)
    seed_model = train_full(corpus.seed_segmentations(), artifacts, k=0.0)
    model, report = run_training_loop(corpus, seed_model, artifacts,
                                      max_iters=10)
    assert report.termination == "converged"
    assert [r.correct for r in report.rows] == [3, 3]
    # doubling every count leaves the unsmoothed ratios untouched
    assert report.rows[0].snapshot == report.rows[1].snapshot


def test_loop_improves_and_converges_on_bundled_corpus(artifacts, semi_corpus):
    seed_model = train_full(semi_corpus.seed_segmentations(), artifacts)
    model, report = run_training_loop(semi_corpus, seed_model, artifacts,
                                      max_iters=20)
    assert report.termination == "converged"
    assert report.rows[-1].correct >= report.rows[0].correct
    assert report.rows[-1].correct >= 5
    # retraining folded the feedback segmentations into the counts
    assert seed_model.counts.bigram["depart-time"].get("IN", {}) \
        .get("MORNING", 0) == 0
    assert model.counts.bigram["depart-time"]["IN"]["MORNING"] > 0
    # the seed knowledge is not forgotten
    for gold in semi_corpus.seed_segmentations():
        assert sequence_log_prob(model, gold) > float("-inf")


def test_loop_report_rendering(artifacts, semi_corpus):
    seed_model = train_full(semi_corpus.seed_segmentations(), artifacts)
    _, report = run_training_loop(semi_corpus, seed_model, artifacts,
                                  max_iters=1)
    lines = report.to_text().splitlines()
    assert lines[0] == "iteration\tcorrect\tproblem\tsnapshot"
    first = lines[1].split("\t")
    assert first[0] == "1" and len(first[3]) == 12
    assert lines[-1] == "# terminated: max_iters"


def test_loop_input_validation(artifacts, semi_corpus):
    seed_model = train_full(semi_corpus.seed_segmentations(), artifacts)
    with pytest.raises(ChronusError):
        run_training_loop(semi_corpus, seed_model, artifacts, max_iters=0)
    refs = Answer(kind="rows", rows=[])
    no_seed = FeedbackCorpus([FeedbackEntry(ident="x", text="SHOW ME",
                                            refmin=refs, refmax=refs)])
    with pytest.raises(ChronusError):
        run_training_loop(no_seed, seed_model, artifacts, max_iters=5)


# ---------------------------------------------------------------------------
# Required concepts

def test_required_concepts_accepts_keywords(artifacts):
    req = required_concepts(["origin", "destin", "origin"],
                            artifacts.dictionary)
    assert req == {"origin": 2, "destin": 1}


def test_required_concepts_rejects_unknown_keyword(artifacts):
    with pytest.raises(ChronusError):
        required_concepts(["frobnicate"], artifacts.dictionary)


def test_required_concepts_ignores_order(artifacts):
    a = required_concepts(["origin", "subject"], artifacts.dictionary)
    b = required_concepts(["subject", "origin"], artifacts.dictionary)
    assert a == b


# ---------------------------------------------------------------------------
# Constrained alignment

def test_alignment_recovers_annotated_example(demo_model, seed_corpus):
    entry = next(e for e in seed_corpus.entries if e.win is not None)
    win = ["operator", "depart-time", "subject", "origin", "destin",
           "airline", "question"]
    aligned = align_win(entry.gold.words, win, demo_model)
    segs = {(label, start, end) for label, start, end in aligned.segments()
            if not demo_model.dictionary.is_special(label)}
    gold = {(label, start, end) for label, start, end in entry.gold.segments()
            if not demo_model.dictionary.is_special(label)}
    assert segs == gold


def test_alignment_matches_unconstrained_decode_when_compatible():
    model = make_recovery_model()
    rng = random.Random(31)
    for words, win, _gold in alignment_corpus(model, rng, 20, max_len=6):
        from chronus.decoder import viterbi_decode
        free = viterbi_decode(model, words)
        folded = [model.dictionary.fold(c) for c, _, _ in
                  free.segmentation().segments()
                  if not model.dictionary.is_special(c)]
        if sorted(folded) != sorted(win):
            continue  # the free optimum violates the constraint here
        aligned = align_win(words, win, model)
        assert aligned.labels == free.labels


def test_alignment_satisfies_constraint_even_when_decode_does_not():
    model = make_recovery_model()
    rng = random.Random(7)
    count = 0
    for words, win, _gold in alignment_corpus(model, rng, 50, max_len=8):
        aligned = align_win(words, win, model)
        folded = [model.dictionary.fold(c) for c, _, _ in aligned.segments()
                  if not model.dictionary.is_special(c)]
        assert sorted(folded) == sorted(win)
        count += 1
    assert count == 50


def test_alignment_score_optimal_against_brute_force():
    rng = random.Random(12345)
    checked = 0
    while checked < 40:
        model = random_trained_model(rng, k=0.001)
        for words, win, _gold in alignment_corpus(model, rng, 2, max_len=6):
            fast = align_win(words, win, model)
            slow = brute_force_align(words, win, model)
            assert sequence_log_prob(model, fast) == pytest.approx(
                sequence_log_prob(model, slow), abs=1e-9)
            checked += 1


def test_infeasible_constraint_raises():
    model = make_recovery_model()
    words = tuple(parse_superword(w) for w in ["w00", "w01"])
    # more required concepts than words
    with pytest.raises(AlignmentInfeasibleError):
        align_win(words, ["c0", "c1", "c2"], model)


def test_infeasible_under_sparse_model(artifacts):
    corpus = [SegmentedSentence.parse("SHOW:question\tME:question")]
    model = train_mle(corpus, artifacts.dictionary, ["SHOW", "ME"], k=0.0)
    words = corpus[0].words
    # origin was never seen: no finite-probability labeling emits it
    with pytest.raises(AlignmentInfeasibleError):
        align_win(words, ["origin"], model)


def test_alignment_rejects_empty_sentence():
    model = make_recovery_model()
    with pytest.raises(ChronusError):
        align_win((), ["c0"], model)


def test_brute_force_align_guards():
    rng = random.Random(1)
    model = make_recovery_model()  # 7 concept names: over the oracle bound
    words = tuple(parse_superword(w) for w in ["w00", "w01"])
    with pytest.raises(ChronusError):
        brute_force_align(words, ["c0"], model)
    small = random_trained_model(rng)
    long_words = tuple(parse_superword("w0") for _ in range(9))
    with pytest.raises(ChronusError):
        brute_force_align(long_words, ["c0"], small)
