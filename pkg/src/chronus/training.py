"""Semi-supervised training from answer feedback, and constrained
alignment of unordered meaning annotations to sentences.

The training loop decodes every feedback sentence end to end, keeps the
segmentations of the sentences whose answers score correct against their
min/max references, retrains from the hand-labeled seed plus the kept
segmentations, and repeats until the correct set stops changing.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field

from .concepts import ConceptDictionary
from .errors import ChronusError, DataFormatError
from .model import (BEGIN, NEG_INF, ConceptHmm, SegmentedSentence,
                    model_to_text, train_mle)
from .pipeline import Artifacts, run_turn
from .query import Answer, score_answer
from .template import Template


class AlignmentInfeasibleError(ChronusError):
    """No labeling satisfies the required concept multiset."""


# ---------------------------------------------------------------------------
# Feedback corpus

@dataclass
class FeedbackEntry:
    ident: str
    text: str
    win: str | None = None
    gold: SegmentedSentence | None = None
    refmin: Answer | None = None
    refmax: Answer | None = None

    @property
    def has_references(self) -> bool:
        return self.refmin is not None and self.refmax is not None


@dataclass
class FeedbackCorpus:
    entries: list = field(default_factory=list)

    def __post_init__(self):
        for e in self.entries:
            if e.gold is None and not e.has_references:
                raise ChronusError(
                    f"sentence {e.ident}: needs references or a gold segmentation")

    def seed_segmentations(self):
        return [e.gold for e in self.entries if e.gold is not None]

    def feedback_entries(self):
        return [e for e in self.entries if e.has_references]

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_lines(fh, path=str(path))

    @classmethod
    def from_lines(cls, lines, path=None):
        entries = []
        current = None
        minrows, maxrows = [], []
        refkind = None          # set by a `refs` line; None = no references
        refvalue = None

        def flush():
            if current is None:
                return
            if refkind == "rows":
                current.refmin = Answer(kind="rows", rows=list(minrows))
                current.refmax = Answer(kind="rows", rows=list(maxrows))
            elif refkind in ("number", "boolean"):
                val = refvalue if refkind == "number" else refvalue == "YES"
                current.refmin = Answer(kind=refkind, value=val)
                current.refmax = Answer(kind=refkind, value=val)
            entries.append(current)

        for ln, raw in enumerate(lines, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if line.startswith("[sentence "):
                flush()
                current = FeedbackEntry(ident=line[10:-1].strip(), text="")
                minrows, maxrows = [], []
                refkind, refvalue = None, None
                continue
            if current is None:
                raise DataFormatError("line before any [sentence] header", path, ln)
            key, _, rest = line.partition("\t")
            if key == "text":
                current.text = rest
            elif key == "win":
                current.win = rest
            elif key == "gold":
                current.gold = SegmentedSentence.parse(rest)
            elif key == "refs":
                if rest not in ("rows", "number", "boolean"):
                    raise DataFormatError(f"unknown reference kind {rest!r}",
                                          path, ln)
                refkind = rest
            elif key == "refmin":
                minrows.append(tuple(rest.split("\t")))
            elif key == "refmax":
                maxrows.append(tuple(rest.split("\t")))
            elif key == "refvalue":
                refvalue = rest
            else:
                raise DataFormatError(f"unknown record key {key!r}", path, ln)
        flush()
        return cls(entries)

    def to_text(self) -> str:
        out = []
        for e in self.entries:
            out.append(f"[sentence {e.ident}]")
            out.append(f"text\t{e.text}")
            if e.win is not None:
                out.append(f"win\t{e.win}")
            if e.gold is not None:
                out.append(f"gold\t{e.gold.render()}")
            if e.has_references:
                out.append(f"refs\t{e.refmin.kind}")
                if e.refmin.kind == "rows":
                    for row in e.refmin.rows:
                        out.append("refmin\t" + "\t".join(str(v) for v in row))
                    for row in e.refmax.rows:
                        out.append("refmax\t" + "\t".join(str(v) for v in row))
                else:
                    value = e.refmin.value
                    if e.refmin.kind == "boolean":
                        value = "YES" if value else "NO"
                    out.append(f"refvalue\t{value}")
        return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Training loop

@dataclass
class IterationRow:
    iteration: int
    correct: int
    problem: int
    snapshot: str


@dataclass
class LoopReport:
    rows: list = field(default_factory=list)
    termination: str = ""

    def to_text(self) -> str:
        out = ["iteration\tcorrect\tproblem\tsnapshot"]
        out.extend(f"{r.iteration}\t{r.correct}\t{r.problem}\t{r.snapshot}"
                   for r in self.rows)
        out.append(f"# terminated: {self.termination}")
        return "\n".join(out) + "\n"


def _snapshot_id(model: ConceptHmm) -> str:
    return hashlib.sha256(model_to_text(model).encode()).hexdigest()[:12]


def run_training_loop(corpus: FeedbackCorpus, seed_model: ConceptHmm,
                      artifacts: Artifacts, max_iters: int,
                      threshold: float | None = None):
    """Answer-feedback self-training; returns (final model, LoopReport)."""
    if max_iters < 1:
        raise ChronusError("max_iters must be >= 1")
    seed = corpus.seed_segmentations()
    if not seed:
        raise ChronusError("corpus has no seed segmentations")
    feedback = corpus.feedback_entries()

    model = seed_model
    report = LoopReport()
    prev_correct_ids = None
    for iteration in range(1, max_iters + 1):
        correct_ids = set()
        kept = {}
        for entry in feedback:
            try:
                turn = run_turn(entry.text, model, artifacts, threshold=threshold)
            except ChronusError:
                continue  # unparseable sentence: problem sentence
            if turn.rejected or turn.answer is None:
                continue
            verdict = score_answer(turn.answer, entry.refmin, entry.refmax)
            if verdict == "correct":
                correct_ids.add(entry.ident)
                kept[entry.ident] = turn.decode.segmentation()
        report.rows.append(IterationRow(
            iteration=iteration, correct=len(correct_ids),
            problem=len(feedback) - len(correct_ids),
            snapshot=_snapshot_id(model)))
        if correct_ids == prev_correct_ids:
            report.termination = "converged"
            return model, report
        prev_correct_ids = correct_ids
        retrain = seed + [kept[i] for i in sorted(kept)]
        model = train_mle(retrain, model.dictionary, model.vocab, model.k)
    report.termination = "max_iters"
    return model, report


# ---------------------------------------------------------------------------
# Constrained alignment

def required_concepts(win_tokens, dictionary: ConceptDictionary):
    """Multiset of folded concept keywords a labeling must realize.

    Accepts a Template or any iterable of keyword strings; token order is
    deliberately ignored.
    """
    if isinstance(win_tokens, Template):
        keywords = [t.keyword for t in win_tokens.tokens]
    else:
        keywords = list(win_tokens)
    for k in keywords:
        if k not in dictionary:
            raise ChronusError(f"win keyword {k!r} is not a concept")
    return Counter(keywords)


def align_win(sentence, win_tokens: Template, model: ConceptHmm,
              dictionary: ConceptDictionary | None = None) -> SegmentedSentence:
    """Viterbi decoding constrained to emit exactly the win concept multiset.

    Segment concepts (after attribute folding) must match the required
    multiset; special concepts (dummy, and) are unconstrained.  The order
    of win tokens is irrelevant: the constraint is the reordering device.
    Raises AlignmentInfeasibleError when no finite-probability labeling
    satisfies the constraint.
    """
    if dictionary is None:
        dictionary = model.dictionary
    words = tuple(sentence)
    if not words:
        raise ChronusError("cannot align an empty sequence")
    required = required_concepts(win_tokens, dictionary)
    req_keys = sorted(required)
    req_vec = tuple(required[k] for k in req_keys)
    key_index = {k: i for i, k in enumerate(req_keys)}

    allowed = []
    for c in dictionary.names:
        if dictionary.is_special(c) or dictionary.fold(c) in required:
            allowed.append(c)

    def open_segment(counts, concept):
        """Counts after opening a segment of `concept`; None if infeasible."""
        if dictionary.is_special(concept):
            return counts
        idx = key_index[dictionary.fold(concept)]
        if counts[idx] + 1 > req_vec[idx]:
            return None
        return counts[:idx] + (counts[idx] + 1,) + counts[idx + 1:]

    zero = tuple(0 for _ in req_keys)
    labels = _traceback(words, model, dictionary, allowed, open_segment,
                        req_vec, zero)
    return SegmentedSentence(words, labels)


MAX_ALIGN_ORACLE_CONCEPTS = 6
MAX_ALIGN_ORACLE_LEN = 8


def brute_force_align(sentence, win_tokens, model: ConceptHmm) -> SegmentedSentence:
    """Exhaustive reference for align_win at small sizes.

    Enumerates every labeling, keeps those whose folded non-special segment
    concepts equal the required multiset, and picks the best finite score
    with the decoder's tie order (reversed position-wise concept index).
    """
    from itertools import product

    from .model import sequence_log_prob

    dictionary = model.dictionary
    words = tuple(sentence)
    if len(dictionary.names) > MAX_ALIGN_ORACLE_CONCEPTS:
        raise ChronusError("too many concepts for the alignment oracle")
    if len(words) > MAX_ALIGN_ORACLE_LEN:
        raise ChronusError("sequence too long for the alignment oracle")
    required = required_concepts(win_tokens, dictionary)
    best = None
    best_key = None
    best_labels = None
    for labels in product(dictionary.names, repeat=len(words)):
        sent = SegmentedSentence(words, labels)
        realized = Counter(dictionary.fold(c) for c, _, _ in sent.segments()
                           if not dictionary.is_special(c))
        if realized != required:
            continue
        score = sequence_log_prob(model, sent)
        if score == NEG_INF:
            continue
        key = tuple(dictionary.index(c) for c in reversed(labels))
        if best is None or score > best or (score == best and key < best_key):
            best, best_key, best_labels = score, key, labels
    if best_labels is None:
        raise AlignmentInfeasibleError(
            "no labeling satisfies the win concept multiset")
    return SegmentedSentence(words, best_labels)


def _traceback(words, model, dictionary, allowed, open_segment, req_vec, zero):
    layers = []
    cells = {}
    for c in allowed:
        counts = open_segment(zero, c)
        if counts is None:
            continue
        score = model.log_initial(c) + model.log_emit(c, BEGIN, words[0].sym)
        if score == NEG_INF:
            continue
        cells[(c, counts)] = (score, None)
    layers.append(cells)
    for i in range(1, len(words)):
        nxt = {}
        for (cp, counts_p) in sorted(cells, key=lambda s: (dictionary.index(s[0]), s[1])):
            score_p = cells[(cp, counts_p)][0]
            for c in allowed:
                if c == cp:
                    counts, ctx = counts_p, words[i - 1].sym
                else:
                    counts, ctx = open_segment(counts_p, c), BEGIN
                if counts is None:
                    continue
                score = (score_p + model.log_transition(cp, c)
                         + model.log_emit(c, ctx, words[i].sym))
                if score == NEG_INF:
                    continue
                state = (c, counts)
                if state not in nxt or score > nxt[state][0]:
                    nxt[state] = (score, (cp, counts_p))
        cells = nxt
        layers.append(cells)

    best = None
    best_state = None
    for (c, counts) in sorted(cells, key=lambda s: (dictionary.index(s[0]), s[1])):
        if counts != req_vec:
            continue
        score = cells[(c, counts)][0] + model.log_final(c)
        if score == NEG_INF:
            continue
        if best is None or score > best:
            best, best_state = score, (c, counts)
    if best_state is None:
        raise AlignmentInfeasibleError(
            "no labeling satisfies the win concept multiset")
    labels = []
    state = best_state
    for layer in reversed(layers):
        labels.append(state[0])
        state = layer[state][1]
        if state is None:
            break
    return tuple(reversed(labels))
