import random

import pytest

from chronus.concepts import Concept, ConceptDictionary
from chronus.decoder import (DecodeSizeError, brute_force_decode, path_score,
                             viterbi_decode, viterbi_decode_lattice)
from chronus.errors import ChronusError
from chronus.gen import random_lattice, random_trained_model
from chronus.lexicon import Arc, Lattice, Superword, lex_parse
from chronus.model import (NEG_INF, make_sentence, sequence_log_prob,
                           train_mle)


# ---------------------------------------------------------------------------
# Chain decoding

def test_recovers_training_labels_exactly(artifacts):
    corpus = [make_sentence(["SHOW", "ME", "FLIGHT(S)", "TO", "((city))"],
                            ["question", "question", "subject",
                             "destin", "destin"])]
    vocab = ["SHOW", "ME", "FLIGHT(S)", "TO", "((city))"]
    model = train_mle(corpus, artifacts.dictionary, vocab, k=0.0)
    result = viterbi_decode(model, ["SHOW", "ME", "FLIGHT(S)", "TO", "((city))"])
    assert result.labels == ("question", "question", "subject",
                             "destin", "destin")
    assert not result.degenerate
    assert result.log_prob == pytest.approx(
        sequence_log_prob(model, result.segmentation()), abs=1e-12)


def test_chain_decode_equals_single_path_lattice():
    model = random_trained_model(random.Random(5))
    words = [Superword("w0"), Superword("w1"), Superword("w2")]
    chain = Lattice(3, [Arc(i, i + 1, w.sym) for i, w in enumerate(words)])
    a = viterbi_decode(model, words)
    b = viterbi_decode_lattice(model, chain)
    assert a.labels == b.labels and a.log_prob == b.log_prob


def test_empty_sequence_rejected():
    model = random_trained_model(random.Random(0))
    with pytest.raises(ChronusError):
        viterbi_decode(model, [])


def test_log_prob_is_path_score_of_returned_labeling():
    rng = random.Random(99)
    for _ in range(20):
        model = random_trained_model(rng)
        lattice = random_lattice(rng, model)
        result = viterbi_decode_lattice(model, lattice)
        arcs = [a for a in sorted(lattice.arcs, key=Arc.key)]
        # reconstruct the chosen path by matching the returned superwords
        path = []
        pos = 0
        for w in result.words:
            nxt = next(a for a in arcs
                       if a.start == pos and a.superword == w)
            path.append(nxt)
            pos = nxt.end
        assert pos == lattice.n_positions
        assert result.log_prob == pytest.approx(
            path_score(model, path, result.labels), abs=1e-12)


# ---------------------------------------------------------------------------
# Oracle agreement

def test_viterbi_matches_brute_force_on_random_instances():
    rng = random.Random(4242)
    for _ in range(100):
        model = random_trained_model(rng)
        lattice = random_lattice(rng, model)
        fast = viterbi_decode_lattice(model, lattice)
        slow = brute_force_decode(model, lattice)
        assert fast.labels == slow.labels
        assert fast.words == slow.words
        assert fast.log_prob == pytest.approx(slow.log_prob, abs=1e-9)
        assert fast.degenerate == slow.degenerate


def test_degenerate_flag_when_nothing_has_probability(artifacts):
    corpus = [make_sentence(["SHOW", "ME"], ["question", "question"])]
    model = train_mle(corpus, artifacts.dictionary, ["SHOW", "ME"], k=0.0)
    # reversed word order was never observed; every labeling scores -inf
    result = viterbi_decode(model, ["ME", "SHOW"])
    assert result.degenerate
    assert result.log_prob == NEG_INF


def test_lattice_prefers_trained_fused_arc(demo_model, artifacts):
    lattice = lex_parse("SHOW ME THE FLIGHTS FROM SAN FRANCISCO",
                        artifacts.lexicon)
    result = viterbi_decode_lattice(demo_model, lattice)
    rendered = [w.render() for w in result.words]
    assert rendered == ["SHOW", "ME", "FLIGHT(S)", "FROM", "((city)SANFRANCISCO)"]
    assert result.labels == ("question", "question", "subject",
                             "origin", "origin")


def test_lattice_avoids_zero_probability_path():
    names = ["c0"]
    dictionary = ConceptDictionary(
        [Concept("c0", "restriction", rank=2),
         Concept("dummy", "special"), Concept("and", "special")])
    corpus = [make_sentence(["a", "b"], ["c0", "c0"])]
    model = train_mle(corpus, dictionary, ["a", "b", "x"], k=0.0)
    # two paths: the trained bigram a b, and a single arc x with no counts
    lattice = Lattice(2, [Arc(0, 1, "a"), Arc(1, 2, "b"), Arc(0, 2, "x")])
    result = viterbi_decode_lattice(model, lattice)
    assert [w.sym for w in result.words] == ["a", "b"]
    assert not result.degenerate


# ---------------------------------------------------------------------------
# Complexity contract

def test_chain_relaxation_count_is_quadratic_in_concepts():
    rng = random.Random(11)
    model = random_trained_model(rng, k=0.001)
    n_concepts = len(model.dictionary.names)
    for n in (1, 3, 6):
        words = [Superword(f"w{i % 3}") for i in range(n)]
        result = viterbi_decode(model, words)
        # first position relaxes once per concept, every later position
        # once per concept pair, plus the final transition sweep
        expected = n_concepts + (n - 1) * n_concepts ** 2 + n_concepts
        assert result.relaxations == expected


# ---------------------------------------------------------------------------
# Oracle guards

def test_brute_force_guard_on_concept_count():
    names = [Concept(f"c{i}", "restriction", rank=2) for i in range(7)]
    dictionary = ConceptDictionary(
        names + [Concept("dummy", "special"), Concept("and", "special")])
    corpus = [make_sentence(["a"], ["c0"])]
    model = train_mle(corpus, dictionary, ["a"], k=0.001)
    with pytest.raises(DecodeSizeError):
        brute_force_decode(model, Lattice(1, [Arc(0, 1, "a")]))


def test_brute_force_guard_on_path_length():
    model = random_trained_model(random.Random(3))
    arcs = [Arc(i, i + 1, "w0") for i in range(9)]
    with pytest.raises(DecodeSizeError):
        brute_force_decode(model, Lattice(9, arcs))
