"""MAP decoding of concept sequences.

Sequence decoding maximizes P(W, C) over labelings; lattice decoding
jointly maximizes over lattice paths and labelings.  Because the word
bigram context of an arc is the superword of the incoming arc, the
dynamic program is indexed by (arc, concept) rather than (position,
concept).

Tie-breaking is fully deterministic: at every cell, candidates are
examined in order of (concept index, incoming-arc key) and only strictly
better scores replace the incumbent.  The brute-force oracle reproduces
the same rule globally, so the two decoders agree bit-for-bit even on
degenerate all-impossible inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import ChronusError
from .lexicon import Arc, Lattice, Superword, enumerate_path_arcs
from .model import BEGIN, NEG_INF, ConceptHmm, SegmentedSentence


class DecodeSizeError(ChronusError):
    """Brute-force oracle guard tripped."""


@dataclass
class DecodeResult:
    labels: tuple
    words: tuple              # chosen path's superwords
    log_prob: float
    degenerate: bool = False  # no labeling had nonzero probability
    relaxations: int = 0      # DP candidate evaluations (complexity contract)

    def segmentation(self) -> SegmentedSentence:
        return SegmentedSentence(self.words, self.labels)


def _chain_lattice(words) -> Lattice:
    arcs = [Arc(i, i + 1, w.sym, w.value) for i, w in enumerate(words)]
    return Lattice(len(words), arcs)


def viterbi_decode(model: ConceptHmm, words) -> DecodeResult:
    """MAP labeling of a superword sequence; O(N * |concepts|^2) relaxations."""
    words = tuple(w if isinstance(w, Superword) else Superword(w) for w in words)
    if not words:
        raise ChronusError("cannot decode an empty sequence")
    return viterbi_decode_lattice(model, _chain_lattice(words))


def viterbi_decode_lattice(model: ConceptHmm, lattice: Lattice) -> DecodeResult:
    """Joint MAP over lattice paths and concept labelings."""
    names = model.dictionary.names
    arcs = sorted(lattice.arcs, key=Arc.key)  # start-major: predecessors first
    incoming = {}
    for a in arcs:
        incoming.setdefault(a.end, []).append(a)

    delta = {}  # (arc, concept) -> score
    back = {}   # (arc, concept) -> (prev_arc, prev_concept) or None
    relax = 0

    for a in arcs:
        preds = incoming.get(a.start, [])
        for c in names:
            best = None
            best_bp = None
            if a.start == 0:
                relax += 1
                score = (model.log_initial(c)
                         + model.log_emit(c, BEGIN, a.sym))
                best, best_bp = score, None
            for cp in names:
                trans = model.log_transition(cp, c)
                for b in preds:
                    cell = delta.get((b, cp))
                    if cell is None:
                        continue
                    relax += 1
                    ctx = BEGIN if c != cp else b.sym
                    score = cell + trans + model.log_emit(c, ctx, a.sym)
                    if best is None or score > best:
                        best, best_bp = score, (b, cp)
            if best is not None:
                delta[(a, c)] = best
                back[(a, c)] = best_bp

    final_best = None
    final_cell = None
    for c in names:
        for a in incoming.get(lattice.n_positions, []):
            cell = delta.get((a, c))
            if cell is None:
                continue
            relax += 1
            score = cell + model.log_final(c)
            if final_best is None or score > final_best:
                final_best, final_cell = score, (a, c)

    if final_cell is None:
        raise ChronusError("lattice has no decodable complete path")

    rev_arcs, rev_labels = [], []
    cell = final_cell
    while cell is not None:
        rev_arcs.append(cell[0])
        rev_labels.append(cell[1])
        cell = back[cell]
    words = tuple(a.superword for a in reversed(rev_arcs))
    labels = tuple(reversed(rev_labels))
    return DecodeResult(labels=labels, words=words, log_prob=final_best,
                        degenerate=(final_best == NEG_INF), relaxations=relax)


def path_score(model: ConceptHmm, path_arcs, labels) -> float:
    """Joint log probability of one lattice path with one labeling."""
    logp = 0.0
    prev_label = None
    prev_sym = BEGIN
    for a, c in zip(path_arcs, labels):
        if prev_label is None:
            logp += model.log_initial(c)
            ctx = BEGIN
        else:
            logp += model.log_transition(prev_label, c)
            ctx = BEGIN if c != prev_label else prev_sym
        logp += model.log_emit(c, ctx, a.sym)
        prev_label, prev_sym = c, a.sym
    return logp + model.log_final(prev_label)


MAX_ORACLE_CONCEPTS = 6
MAX_ORACLE_PATH_LEN = 8


def brute_force_decode(model: ConceptHmm, lattice: Lattice) -> DecodeResult:
    """Exhaustive maximization over paths x labelings; verification oracle.

    Guarded against blowup: at most 6 concepts and path length 8.
    Tie-breaking matches viterbi_decode_lattice exactly: among equal
    scores, the candidate minimizing the back-to-front sequence of
    (concept index, arc key) pairs wins.
    """
    names = model.dictionary.names
    if len(names) > MAX_ORACLE_CONCEPTS:
        raise DecodeSizeError(f"more than {MAX_ORACLE_CONCEPTS} concepts")
    paths = enumerate_path_arcs(lattice)
    for p in paths:
        if len(p) > MAX_ORACLE_PATH_LEN:
            raise DecodeSizeError(f"path longer than {MAX_ORACLE_PATH_LEN}")

    best_score = None
    best_key = None
    best = None
    for path in paths:
        for labels in itertools.product(names, repeat=len(path)):
            score = path_score(model, path, labels)
            key = tuple((model.dictionary.index(c), a.key())
                        for a, c in zip(reversed(path), reversed(labels)))
            if (best_score is None or score > best_score
                    or (score == best_score and key < best_key)):
                best_score, best_key, best = score, key, (path, labels)

    path, labels = best
    words = tuple(a.superword for a in path)
    return DecodeResult(labels=tuple(labels), words=words, log_prob=best_score,
                        degenerate=(best_score == NEG_INF))
