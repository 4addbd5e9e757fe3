"""Synthetic corpus and model generators for property tests.

Everything here is seed-deterministic: the same random.Random seed yields
byte-identical corpora, so generated fixtures behave like golden files.
"""

from __future__ import annotations

import random
from collections import Counter

from .concepts import Concept, ConceptDictionary
from .errors import ChronusError
from .lexicon import Arc, Lattice, Superword
from .model import ConceptHmm, SegmentedSentence, _round12, train_mle


# ---------------------------------------------------------------------------
# Sampling from a model

def sample_from(row, rng: random.Random):
    """Draw a key from a {key: prob} row (renormalized cumulative draw)."""
    items = sorted(row.items())
    total = sum(p for _, p in items)
    x = rng.random() * total
    acc = 0.0
    for key, p in items:
        acc += p
        if x < acc:
            return key
    return items[-1][0]


def sample_sentence(model: ConceptHmm, rng: random.Random,
                    max_len: int = 24) -> SegmentedSentence:
    """Sample one labeled sentence from the generative model."""
    from .model import BEGIN, FINAL

    start_row = {c: p for c, p in model.initial.items() if c != FINAL}
    if not start_row:
        raise ChronusError("model cannot start any sentence")
    words, labels = [], []
    concept = sample_from(start_row, rng)
    ctx = BEGIN
    while True:
        word = sample_from(model.bigram[concept][ctx], rng)
        words.append(Superword(word))
        labels.append(concept)
        if len(words) >= max_len:
            break
        nxt = sample_from(model.transition[concept], rng)
        if nxt == FINAL:
            break
        ctx = word if nxt == concept else BEGIN
        concept = nxt
    return SegmentedSentence(tuple(words), tuple(labels))


def sample_corpus(model, n, rng, max_len=24):
    return [sample_sentence(model, rng, max_len) for _ in range(n)]


# ---------------------------------------------------------------------------
# Random instances for decoder oracle checks

def _synthetic_dictionary(names, role="restriction"):
    concepts = [Concept(n, role, rank=2) for n in names]
    concepts.append(Concept("dummy", "special"))
    concepts.append(Concept("and", "special"))
    return ConceptDictionary(concepts)


def random_trained_model(rng: random.Random, n_concepts=3, n_words=6,
                         k=0.001, n_sentences=5) -> ConceptHmm:
    """Train a model from a small random corpus (sparse when k=0)."""
    names = [f"c{i}" for i in range(n_concepts)]
    dictionary = _synthetic_dictionary(names)
    vocab = [f"w{i}" for i in range(n_words)]
    corpus = []
    for _ in range(n_sentences):
        length = rng.randint(1, 6)
        words = tuple(Superword(rng.choice(vocab)) for _ in range(length))
        labels = tuple(rng.choice(dictionary.names) for _ in range(length))
        corpus.append(SegmentedSentence(words, labels))
    return train_mle(corpus, dictionary, vocab, k)


def random_lattice(rng: random.Random, model: ConceptHmm,
                   max_positions=5) -> Lattice:
    """A small random lattice over the model's vocabulary.

    A spine of unit arcs guarantees completeness; extra longer arcs add
    path ambiguity.
    """
    n = rng.randint(1, max_positions)
    vocab = list(model.vocab)
    arcs = []
    seen = set()

    def add(start, end, sym):
        key = (start, end, sym)
        if key not in seen:
            seen.add(key)
            arcs.append(Arc(start, end, sym))

    for i in range(n):
        add(i, i + 1, rng.choice(vocab))
    for _ in range(rng.randint(0, 4)):
        start = rng.randrange(n)
        end = rng.randint(start + 1, n)
        add(start, end, rng.choice(vocab))
    return Lattice(n, arcs)


# ---------------------------------------------------------------------------
# Known-model recovery (held-out labeling accuracy)

RECOVERY_CONCEPTS = 5
RECOVERY_WORDS = 30


def make_recovery_model(k: float = 0.001) -> ConceptHmm:
    """A 5-concept, 30-word reference model with overlapping vocabularies.

    All concepts share the full vocabulary; they differ in which start
    words they prefer and in a concept-specific successor permutation, so
    word order carries most of the label information.
    """
    names = [f"c{i}" for i in range(RECOVERY_CONCEPTS)]
    dictionary = _synthetic_dictionary(names)
    vocab = [f"w{i:02d}" for i in range(RECOVERY_WORDS)]

    initial = {c: _round12(1.0 / RECOVERY_CONCEPTS) for c in names}
    transition = {}
    for c in names:
        row = {d: _round12(0.15 / (RECOVERY_CONCEPTS - 1))
               for d in names if d != c}
        row[c] = _round12(0.80)
        row["</s>"] = _round12(0.05)
        transition[c] = row

    per = RECOVERY_WORDS // RECOVERY_CONCEPTS
    bigram = {}
    for i, c in enumerate(names):
        preferred = set(range(i * per, (i + 1) * per))
        begin = {}
        for j, w in enumerate(vocab):
            p = 0.8 / per if j in preferred else 0.2 / (RECOVERY_WORDS - per)
            begin[w] = _round12(p)
        table = {"<s>": begin}
        for j, w in enumerate(vocab):
            succ = (j + 7 * i + 1) % RECOVERY_WORDS
            row = {}
            for m, w2 in enumerate(vocab):
                p = 0.95 if m == succ else 0.05 / (RECOVERY_WORDS - 1)
                row[w2] = _round12(p)
            table[w] = row
        bigram[c] = table
    return ConceptHmm(dictionary, vocab, k, initial, transition, bigram)


def unigram_baseline(corpus, dictionary, vocabulary, k: float) -> ConceptHmm:
    """Context-free emission baseline: the same trained transition
    structure, but every bigram context row is the concept's unigram
    word distribution."""
    from .model import _smooth_row

    model = train_mle(corpus, dictionary, vocabulary, k)
    vocab = list(model.vocab)
    unigram_counts = {}
    for sent in corpus:
        for word, label in zip(sent.words, sent.labels):
            row = unigram_counts.setdefault(label, Counter())
            row[word.sym] += 1
    bigram = {}
    for c in dictionary.names:
        row = _smooth_row(unigram_counts.get(c, Counter()), vocab, k)
        if row is None:
            bigram[c] = {}
        else:
            bigram[c] = {ctx: dict(row) for ctx in ["<s>"] + vocab}
    return ConceptHmm(dictionary, model.vocab, k, model.initial,
                      model.transition, bigram)


def segment_accuracy(gold: SegmentedSentence, hypothesis_labels) -> tuple:
    """(matched, total) exact span+label segment matches against gold."""
    hyp = SegmentedSentence(gold.words, tuple(hypothesis_labels))
    gold_segs = set(gold.segments())
    return sum(1 for s in hyp.segments() if s in gold_segs), len(gold_segs)


# ---------------------------------------------------------------------------
# Superword effect corpus

_GEN_CITIES = {
    ("BOSTON",): "BBOS", ("DALLAS",): "DDFW", ("DENVER",): "DDEN",
    ("ATLANTA",): "MATL", ("OAKLAND",): "OOAK", ("PHILADELPHIA",): "PPHL",
    ("PITTSBURGH",): "PPIT", ("SAN", "FRANCISCO"): "SSFO",
    ("NEW", "YORK"): "NNYC", ("WASHINGTON", "D", "C"): "WWAS",
}

_GEN_NUMBERS = [("TWENTY", "ONE"), ("THIRTY", "SEVEN"), ("ONE", "HUNDRED"),
                ("FORTY",), ("NINETEEN",), ("SIXTY", "FIVE")]


def superword_effect_corpus(rng: random.Random, n: int, cities=None):
    """Labeled sentences with multiword city and numeral spans.

    Returns (raw_corpus, fused_corpus, span_maps): the same sentences with
    phrase spans either left as plain words or fused into one superword,
    plus, per sentence, the fused-index -> raw-span-length map needed to
    project fused labels back onto raw words.  ``cities`` restricts the
    city inventory (a list of word tuples), e.g. to hold some names out
    of a training split.
    """
    raw_corpus, fused_corpus, span_maps = [], [], []
    cities = sorted(_GEN_CITIES) if cities is None else sorted(cities)
    for _ in range(n):
        raw, fused, spans = [], [], []

        def plain(word, concept):
            raw.append((word, concept))
            fused.append((Superword(word), concept))
            spans.append(1)

        def phrase(words, sym, value, concept):
            for w in words:
                raw.append((w, concept))
            fused.append((Superword(sym, value), concept))
            spans.append(len(words))

        for w in ("SHOW", "ME"):
            plain(w, "dummy")
        if rng.random() < 0.5:
            plain("FLIGHTS", "subject")
        plain("FROM", "origin")
        c1 = rng.choice(cities)
        phrase(c1, "((city))", "".join(c1), "origin")
        plain("TO", "destin")
        c2 = rng.choice(cities)
        phrase(c2, "((city))", "".join(c2), "destin")
        if rng.random() < 0.6:
            plain("FLIGHT", "fltnum")
            plain("NUMBER", "fltnum")
            num = rng.choice(_GEN_NUMBERS)
            phrase(num, "((number))", "".join(num), "fltnum")
        raw_corpus.append(SegmentedSentence(
            tuple(Superword(w) for w, _ in raw), tuple(c for _, c in raw)))
        fused_corpus.append(SegmentedSentence(
            tuple(w for w, _ in fused), tuple(c for _, c in fused)))
        span_maps.append(tuple(spans))
    return raw_corpus, fused_corpus, span_maps


def superword_dictionary() -> ConceptDictionary:
    return ConceptDictionary([
        Concept("subject", "subject", rank=1),
        Concept("origin", "restriction", rank=0),
        Concept("destin", "restriction", rank=0),
        Concept("fltnum", "restriction", rank=2),
        Concept("dummy", "special"),
        Concept("and", "special"),
    ])


def expand_labels(fused_labels, span_map):
    """Project fused-token labels back onto the raw word positions."""
    out = []
    for label, width in zip(fused_labels, span_map):
        out.extend([label] * width)
    return tuple(out)


# ---------------------------------------------------------------------------
# Alignment corpus

def alignment_corpus(model: ConceptHmm, rng: random.Random, n: int,
                     max_len: int = 8):
    """(sentence, shuffled win keywords, gold segmentation) triples.

    Win keywords are the folded non-special segment concepts of the gold
    labeling, in randomized order.  Sentences where a concept occurs in
    more than one segment are skipped: with duplicate keywords the split
    between the repeats is not recoverable from the keyword multiset, so
    such instances have no unique gold alignment.
    """
    dictionary = model.dictionary
    out = []
    while len(out) < n:
        sent = sample_sentence(model, rng, max_len=max_len)
        win = [dictionary.fold(c) for c, _, _ in sent.segments()
               if not dictionary.is_special(c)]
        if not win or len(set(win)) != len(win):
            continue
        rng.shuffle(win)
        out.append((sent.words, win, sent))
    return out
