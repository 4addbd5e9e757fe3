"""Concept HMM: transition probabilities over concepts plus per-concept
word bigrams, with maximum-likelihood estimation, add-k smoothing and
supervised synonym smoothing.

Segmentations are encoded one label per word, so a segment boundary is
simply a label change and self-transitions are real, estimated events.
Segment-initial words are conditioned on a per-concept begin marker.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .concepts import ConceptDictionary
from .errors import ChronusError, DataFormatError
from .lexicon import Superword, parse_superword

BEGIN = "<s>"    # begin-of-segment marker / initial-state row
FINAL = "</s>"   # final-state column
NEG_INF = float("-inf")


class TrainingError(ChronusError):
    pass


class UnknownLabelError(TrainingError):
    def __init__(self, label):
        super().__init__(f"segmentation label not in concept dictionary: {label!r}")
        self.label = label


class UnknownWordError(TrainingError):
    def __init__(self, word):
        super().__init__(f"word not in vocabulary: {word!r}")
        self.word = word


def _round12(p: float) -> float:
    """Canonical 12-significant-digit value; keeps serialization lossless."""
    return float(f"{p:.11e}")


@dataclass(frozen=True)
class SegmentedSentence:
    """A superword sequence with one concept label per word."""

    words: tuple
    labels: tuple

    def __post_init__(self):
        if len(self.words) != len(self.labels):
            raise ChronusError("words and labels must have equal length")
        if not self.words:
            raise ChronusError("segmented sentence must be non-empty")

    def segments(self):
        """Maximal equal-label runs as (label, start, end) triples."""
        runs = []
        start = 0
        for i in range(1, len(self.labels) + 1):
            if i == len(self.labels) or self.labels[i] != self.labels[i - 1]:
                runs.append((self.labels[start], start, i))
                start = i
        return runs

    def render(self) -> str:
        return "\t".join(f"{w.render()}:{c}" for w, c in zip(self.words, self.labels))

    @classmethod
    def parse(cls, text: str) -> "SegmentedSentence":
        words, labels = [], []
        for pair in text.split("\t"):
            token, _, label = pair.rpartition(":")
            if not token or not label:
                raise ChronusError(f"bad word:concept pair {pair!r}")
            words.append(parse_superword(token))
            labels.append(label)
        return cls(tuple(words), tuple(labels))


@dataclass
class TrainingCounts:
    """Raw event counts kept alongside a trained model (not serialized)."""

    transition: dict = field(default_factory=dict)   # row -> col -> count
    bigram: dict = field(default_factory=dict)       # concept -> prev -> word -> count

    def bigram_row_total(self, concept, prev):
        return sum(self.bigram.get(concept, {}).get(prev, {}).values())

    def nonzero_bigrams(self):
        return sum(len(row)
                   for table in self.bigram.values()
                   for row in table.values())


class ConceptHmm:
    """First-order concept HMM with concept-conditional word bigrams.

    Probabilities are held in linear space rounded to 12 significant digits
    (the on-disk canonical form); log caches with a minus-infinity sentinel
    for impossible events are built at construction.
    """

    def __init__(self, dictionary: ConceptDictionary, vocab, k: float,
                 initial, transition, bigram, counts: TrainingCounts | None = None):
        self.dictionary = dictionary
        self.vocab = tuple(sorted(vocab))
        self._vocab_set = frozenset(self.vocab)
        self.k = k
        self.initial = initial        # col (concept or FINAL) -> prob
        self.transition = transition  # row concept -> col (concept or FINAL) -> prob
        self.bigram = bigram          # concept -> prev (word or BEGIN) -> word -> prob
        self.counts = counts
        self._log_initial = {c: _safe_log(p) for c, p in initial.items()}
        self._log_trans = {r: {c: _safe_log(p) for c, p in row.items()}
                           for r, row in transition.items()}
        self._log_bigram = {g: {r: {w: _safe_log(p) for w, p in row.items()}
                                for r, row in table.items()}
                            for g, table in bigram.items()}

    # log accessors; absent entries are impossible events
    def log_initial(self, concept) -> float:
        return self._log_initial.get(concept, NEG_INF)

    def log_transition(self, prev, nxt) -> float:
        return self._log_trans.get(prev, {}).get(nxt, NEG_INF)

    def log_final(self, concept) -> float:
        return self.log_transition(concept, FINAL)

    def log_emit(self, concept, prev_sym, sym) -> float:
        return self._log_bigram.get(concept, {}).get(prev_sym, {}).get(sym, NEG_INF)

    def in_vocab(self, sym) -> bool:
        return sym in self._vocab_set

    def rows(self):
        """All (name, row-dict) probability rows, for normalization checks."""
        yield ("initial", self.initial)
        for r, row in self.transition.items():
            yield (f"transition[{r}]", row)
        for g, table in self.bigram.items():
            for r, row in table.items():
                yield (f"bigram[{g}][{r}]", row)

    def parameter_counts(self):
        """(probability rows, count-backed bigram entries)."""
        nrows = sum(1 for _ in self.rows())
        nonzero = self.counts.nonzero_bigrams() if self.counts else sum(
            len(row) for _, _, row in
            ((g, r, row) for g, t in self.bigram.items() for r, row in t.items()))
        return nrows, nonzero


def _safe_log(p):
    return math.log(p) if p > 0.0 else NEG_INF


def _smooth_row(counts_row, columns, k):
    """Add-k relative frequencies over the full column space, 12-digit canonical.

    Returns None when the row has no support and k == 0 (no distribution is
    estimable; downstream lookups see the minus-infinity sentinel).
    """
    total = sum(counts_row.values()) + k * len(columns)
    if total <= 0.0:
        return None
    row = {}
    for col in columns:
        p = (counts_row.get(col, 0) + k) / total
        if p > 0.0:
            row[col] = _round12(p)
    return row


def train_mle(corpus, dictionary: ConceptDictionary, vocabulary, k: float) -> ConceptHmm:
    """Relative-frequency estimation with add-k smoothing.

    Transitions are estimated over (concepts + initial) x (concepts + final);
    bigrams per concept over (vocabulary + begin marker) x vocabulary.
    """
    corpus = list(corpus)
    if not corpus:
        raise TrainingError("training corpus is empty")
    vocab = sorted(set(vocabulary))
    vocab_set = set(vocab)
    names = dictionary.names

    trans_counts = {r: {} for r in [BEGIN] + names}
    bigram_counts = {}
    for sent in corpus:
        prev_label = BEGIN
        prev_sym = BEGIN
        for word, label in zip(sent.words, sent.labels):
            if label not in dictionary:
                raise UnknownLabelError(label)
            if word.sym not in vocab_set:
                raise UnknownWordError(word.sym)
            row = trans_counts[prev_label]
            row[label] = row.get(label, 0) + 1
            ctx = BEGIN if label != prev_label else prev_sym
            brow = bigram_counts.setdefault(label, {}).setdefault(ctx, {})
            brow[word.sym] = brow.get(word.sym, 0) + 1
            prev_label, prev_sym = label, word.sym
        row = trans_counts[prev_label]
        row[FINAL] = row.get(FINAL, 0) + 1

    trans_cols = names + [FINAL]
    initial = _smooth_row(trans_counts[BEGIN], trans_cols, k) or {}
    transition = {}
    for c in names:
        row = _smooth_row(trans_counts[c], trans_cols, k)
        if row is not None:
            transition[c] = row
    bigram = {}
    for c in names:
        table = {}
        ctx_rows = bigram_counts.get(c, {})
        for ctx in [BEGIN] + vocab:
            row = _smooth_row(ctx_rows.get(ctx, {}), vocab, k)
            if row is not None:
                table[ctx] = row
        bigram[c] = table

    counts = TrainingCounts(transition=trans_counts, bigram=bigram_counts)
    return ConceptHmm(dictionary, vocab, k, initial, transition, bigram, counts)


def apply_synonym_smoothing(model: ConceptHmm, groups) -> ConceptHmm:
    """Tie bigram statistics of synonym groups.

    ``groups`` maps a concept name to word groups.  For each group the
    context rows of the member words are replaced by their count-weighted
    average, and in every row of that concept's table the member columns
    share their summed mass uniformly.
    """
    if not groups:
        return model
    bigram = {g: {r: dict(row) for r, row in table.items()}
              for g, table in model.bigram.items()}
    for concept, concept_groups in groups.items():
        if concept not in model.dictionary:
            raise UnknownLabelError(concept)
        seen = set()
        for group in concept_groups:
            for w in group:
                if not model.in_vocab(w):
                    raise UnknownWordError(w)
                if w in seen:
                    raise TrainingError(
                        f"word {w!r} in two synonym groups under {concept}")
                seen.add(w)
        table = bigram.setdefault(concept, {})
        for group in concept_groups:
            if len(group) < 2:
                continue
            members = list(group)
            _average_rows(table, members, model, concept)
            _share_columns(table, members)
    return ConceptHmm(model.dictionary, model.vocab, model.k,
                      model.initial, model.transition, bigram, model.counts)


def _average_rows(table, members, model, concept):
    rows = [table.get(w, {}) for w in members]
    if all(r == rows[0] for r in rows):
        return  # already tied; keep exact values (idempotence)
    if model.counts is not None:
        weights = [model.counts.bigram_row_total(concept, w) for w in members]
    else:
        weights = [1] * len(members)
    if sum(weights) == 0:
        weights = [1] * len(members)
    total_w = sum(weights)
    cols = set()
    for r in rows:
        cols.update(r)
    avg = {}
    for col in sorted(cols):
        p = sum(w * r.get(col, 0.0) for w, r in zip(weights, rows)) / total_w
        if p > 0.0:
            avg[col] = _round12(p)
    for w in members:
        if avg:
            table[w] = dict(avg)
        else:
            table.pop(w, None)


def _share_columns(table, members):
    for row in table.values():
        vals = [row.get(w, 0.0) for w in members]
        if all(v == vals[0] for v in vals):
            continue
        share = sum(vals) / len(members)
        for w in members:
            if share > 0.0:
                row[w] = _round12(share)
            else:
                row.pop(w, None)


def sequence_log_prob(model: ConceptHmm, sentence: SegmentedSentence) -> float:
    """log P(W, C) under the first-order model; -inf for impossible events."""
    logp = 0.0
    prev_label = None
    prev_sym = BEGIN
    for word, label in zip(sentence.words, sentence.labels):
        if label not in model.dictionary:
            raise UnknownLabelError(label)
        if prev_label is None:
            logp += model.log_initial(label)
            ctx = BEGIN
        else:
            logp += model.log_transition(prev_label, label)
            ctx = BEGIN if label != prev_label else prev_sym
        logp += model.log_emit(label, ctx, word.sym)
        prev_label, prev_sym = label, word.sym
    logp += model.log_final(prev_label)
    return logp


# ---------------------------------------------------------------------------
# Serialization: line-oriented `chronus-model v1` format

def model_to_text(model: ConceptHmm) -> str:
    out = ["chronus-model v1", f"k\t{model.k!r}", "floor\t0"]
    out.append("[concepts]")
    out.extend(model.dictionary.to_lines())
    out.append("[vocab]")
    out.extend(model.vocab)
    out.append("[initial]")
    for col in sorted(model.initial):
        out.append(f"{BEGIN}\t{col}\t{model.initial[col]:.11e}")
    out.append("[transition]")
    for row in model.dictionary.names:
        cols = model.transition.get(row, {})
        for col in sorted(cols):
            out.append(f"{row}\t{col}\t{cols[col]:.11e}")
    for concept in model.dictionary.names:
        out.append(f"[bigram {concept}]")
        table = model.bigram.get(concept, {})
        for row in sorted(table):
            for col in sorted(table[row]):
                out.append(f"{row}\t{col}\t{table[row][col]:.11e}")
    return "\n".join(out) + "\n"


def save_model(model: ConceptHmm, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(model_to_text(model))


def model_from_text(text: str, path=None) -> ConceptHmm:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "chronus-model v1":
        raise DataFormatError("missing chronus-model v1 header", path, 1)
    k = 0.0
    concept_lines = []
    vocab = []
    initial = {}
    transition = {}
    bigram = {}
    section = None
    bigram_concept = None
    for ln, line in enumerate(lines[1:], 2):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if line.startswith("["):
            header = line[1:-1].strip()
            if header == "concepts":
                section = "concepts"
            elif header == "vocab":
                section = "vocab"
            elif header == "initial":
                section = "initial"
            elif header == "transition":
                section = "transition"
            elif header.startswith("bigram "):
                section = "bigram"
                bigram_concept = header.split(None, 1)[1]
                bigram.setdefault(bigram_concept, {})
            else:
                raise DataFormatError(f"unknown section [{header}]", path, ln)
            continue
        if section is None:
            parts = line.split("\t")
            if parts[0] == "k" and len(parts) == 2:
                k = float(parts[1])
            elif parts[0] == "floor" and len(parts) == 2:
                pass  # floor is implicit: absent entries are impossible
            else:
                raise DataFormatError("unexpected header line", path, ln)
        elif section == "concepts":
            concept_lines.append(line)
        elif section == "vocab":
            vocab.append(line.strip())
        else:
            parts = line.split("\t")
            if len(parts) != 3:
                raise DataFormatError("expected ROW<TAB>COL<TAB>PROB", path, ln)
            row, col, prob = parts[0], parts[1], float(parts[2])
            if section == "initial":
                initial[col] = prob
            elif section == "transition":
                transition.setdefault(row, {})[col] = prob
            else:
                bigram[bigram_concept].setdefault(row, {})[col] = prob
    dictionary = ConceptDictionary.from_lines(concept_lines, path=path)
    return ConceptHmm(dictionary, vocab, k, initial, transition, bigram)


def load_model(path) -> ConceptHmm:
    with open(path, encoding="utf-8") as fh:
        return model_from_text(fh.read(), path=str(path))


def make_sentence(word_syms, labels) -> SegmentedSentence:
    """Convenience constructor from plain symbol strings."""
    return SegmentedSentence(tuple(Superword(s) for s in word_syms), tuple(labels))
