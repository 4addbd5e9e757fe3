"""Surface-to-superword lexical analysis.

Turns a raw sentence into a lattice of superwords: plain words, inflection
groups (AIRFARES -> AIRFARE(S)) and finite-state grammar matches such as
((number)37).  Articles are deleted up front, so they never reach the
statistical models downstream, and out-of-vocabulary words are mapped to a
reserved unknown marker instead of failing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ChronusError, DataFormatError

UNKNOWN = "<UNK>"

_TOKEN_RE = re.compile(r"[A-Z0-9']+")
_SUPERWORD_RE = re.compile(r"^\(\((\w[\w-]*)\)(.*)\)$")


class LexiconError(ChronusError):
    pass


class EmptyAfterDeletionError(LexiconError):
    """All tokens of the sentence were stop words."""


class LatticeError(ChronusError):
    pass


def tokenize(sentence: str):
    """Uppercase and split on whitespace, stripping punctuation except apostrophes."""
    return _TOKEN_RE.findall(sentence.upper())


@dataclass(frozen=True, order=True)
class Superword:
    """A lexical unit: either a word/inflection-group symbol or a grammar match.

    For grammar matches ``sym`` is the bracketed grammar identifier
    (e.g. ``((number))``) and ``value`` the normalized form (e.g. ``37``).
    The stochastic model only ever sees ``sym``.
    """

    sym: str
    value: str | None = None

    @property
    def grammar_id(self) -> str | None:
        if self.sym.startswith("((") and self.sym.endswith("))"):
            return self.sym[2:-2]
        return None

    def render(self) -> str:
        if self.value is None:
            return self.sym
        return f"{self.sym[:-1]}{self.value})"


def parse_superword(text: str) -> Superword:
    """Inverse of Superword.render: ((city)BOSTON) -> sym ((city)), value BOSTON."""
    m = _SUPERWORD_RE.match(text)
    if m:
        gid, value = m.group(1), m.group(2)
        return Superword(f"(({gid}))", value or None)
    return Superword(text)


@dataclass(frozen=True, order=True)
class Arc:
    start: int
    end: int
    sym: str
    value: str | None = None

    @property
    def superword(self) -> Superword:
        return Superword(self.sym, self.value)

    def key(self):
        return (self.start, self.end, self.sym, self.value or "")


class Lattice:
    """DAG of superword arcs over token positions 0..n_positions."""

    def __init__(self, n_positions: int, arcs):
        arcs = tuple(sorted(arcs, key=Arc.key))
        if n_positions < 1:
            raise LatticeError("lattice needs at least one token position")
        seen = set()
        for a in arcs:
            if not (0 <= a.start < a.end <= n_positions):
                raise LatticeError(f"arc {a} out of bounds for n={n_positions}")
            dup = (a.start, a.end, a.sym)
            if dup in seen:
                raise LatticeError(f"duplicate arc {dup}")
            seen.add(dup)
        self.n_positions = n_positions
        self.arcs = arcs
        self._from = {p: [] for p in range(n_positions + 1)}
        self._into = {p: [] for p in range(n_positions + 1)}
        for a in arcs:
            self._from[a.start].append(a)
            self._into[a.end].append(a)
        if not self._complete():
            raise LatticeError("no complete path from position 0 to the end")

    def _complete(self) -> bool:
        reach = {0}
        for a in self.arcs:  # arcs sorted by start: single pass suffices
            if a.start in reach:
                reach.add(a.end)
        return self.n_positions in reach

    def arcs_from(self, pos):
        return self._from[pos]

    def arcs_into(self, pos):
        return self._into[pos]

    def to_text(self) -> str:
        lines = [f"{a.start}\t{a.end}\t{a.superword.render()}" for a in self.arcs]
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        return (isinstance(other, Lattice)
                and self.n_positions == other.n_positions
                and self.arcs == other.arcs)


# ---------------------------------------------------------------------------
# Normalizers

_UNITS = {"ONE": 1, "TWO": 2, "THREE": 3, "FOUR": 4, "FIVE": 5,
          "SIX": 6, "SEVEN": 7, "EIGHT": 8, "NINE": 9}
_TEENS = {"TEN": 10, "ELEVEN": 11, "TWELVE": 12, "THIRTEEN": 13,
          "FOURTEEN": 14, "FIFTEEN": 15, "SIXTEEN": 16, "SEVENTEEN": 17,
          "EIGHTEEN": 18, "NINETEEN": 19}
_TENS = {"TWENTY": 20, "THIRTY": 30, "FORTY": 40, "FIFTY": 50,
         "SIXTY": 60, "SEVENTY": 70, "EIGHTY": 80, "NINETY": 90}
_NUMBER_WORDS = set(_UNITS) | set(_TEENS) | set(_TENS) | {"HUNDRED", "THOUSAND"}


def compound_number_value(words) -> int | None:
    """Value of a compound numeral (THIRTY SEVEN -> 37), or None if invalid."""
    total, i, n = 0, 0, len(words)
    if i + 1 < n and words[i] in _UNITS and words[i + 1] == "THOUSAND":
        total += _UNITS[words[i]] * 1000
        i += 2
    if i + 1 < n and words[i] in _UNITS and words[i + 1] == "HUNDRED":
        total += _UNITS[words[i]] * 100
        i += 2
    if i < n:
        w = words[i]
        if w in _TEENS:
            total += _TEENS[w]
            i += 1
        elif w in _TENS:
            total += _TENS[w]
            i += 1
            if i < n and words[i] in _UNITS:
                total += _UNITS[words[i]]
                i += 1
        elif w in _UNITS:
            total += _UNITS[w]
            i += 1
    return total if i == n and total > 0 else None


def _normalize_digits(words) -> str:
    """Render numeral groups as digits, pass everything else through.

    D C TEN -> DC10; THIRTY SEVEN -> 37.  Numeral runs are consumed
    greedily, longest compound first.
    """
    out, i, n = [], 0, len(words)
    while i < n:
        if words[i] in _NUMBER_WORDS:
            for j in range(n, i, -1):
                value = compound_number_value(words[i:j])
                if value is not None:
                    out.append(str(value))
                    i = j
                    break
            else:
                out.append(words[i])
                i += 1
        else:
            out.append(words[i])
            i += 1
    return "".join(out)


NORMALIZERS = {
    "identity": lambda words: " ".join(words),
    "join": lambda words: "".join(words),
    "digits": _normalize_digits,
}


# ---------------------------------------------------------------------------
# FSA grammars

class FsaGrammar:
    """Finite-state acceptor over surface words plus a value normalizer.

    Transitions may be nondeterministic as written; the acceptor is
    determinized by subset construction at load time, so matching is
    linear in input length.
    """

    START = "0"

    def __init__(self, gid, transitions, accepting, normalizer="identity"):
        if normalizer not in NORMALIZERS:
            raise LexiconError(f"grammar {gid}: unknown normalizer {normalizer!r}")
        self.gid = gid
        self.normalizer = normalizer
        self.words = {w for (_, w) in transitions}
        nfa = {}
        for (state, word), targets in transitions.items():
            nfa.setdefault(state, {}).setdefault(word, set()).update(targets)
        accepting = set(accepting)
        # subset construction
        start = frozenset({self.START})
        self._dfa = {}
        self._accept = set()
        stack = [start]
        seen = {start}
        while stack:
            cur = stack.pop()
            if cur & accepting:
                self._accept.add(cur)
            row = {}
            words_here = set()
            for s in cur:
                words_here.update(nfa.get(s, ()))
            for w in words_here:
                nxt = frozenset(t for s in cur for t in nfa.get(s, {}).get(w, ()))
                row[w] = nxt
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
            self._dfa[cur] = row
        self._start = start

    def match_ends(self, tokens, start_idx):
        """End indices (exclusive) of all accepted prefixes starting at start_idx."""
        ends = []
        state = self._start
        for i in range(start_idx, len(tokens)):
            state = self._dfa.get(state, {}).get(tokens[i])
            if state is None:
                break
            if state in self._accept:
                ends.append(i + 1)
        return ends

    def normalize(self, words) -> str:
        return NORMALIZERS[self.normalizer](list(words))


# ---------------------------------------------------------------------------
# Lexicon

class SuperwordLexicon:
    """Plain words, inflection groups, stop words and grammars."""

    def __init__(self, words, inflect, stop, grammars, unknown=UNKNOWN):
        self.words = frozenset(words)
        self.inflect = dict(inflect)
        self.stop = frozenset(stop)
        self.grammars = list(grammars)
        self.unknown = unknown
        self._validate()

    def _validate(self):
        for surface in self.inflect:
            if surface in self.words:
                raise LexiconError(
                    f"{surface} is both a plain word and an inflection-group member")
        if self.unknown in self.words or self.unknown in self.inflect:
            raise LexiconError("unknown marker must not be a surface word")
        gids = set()
        for g in self.grammars:
            if g.gid in gids:
                raise LexiconError(f"duplicate grammar id {g.gid}")
            gids.add(g.gid)
            overlap = g.words & self.stop
            if overlap:
                raise LexiconError(
                    f"stop words {sorted(overlap)} appear in grammar {g.gid}")

    def word_sym(self, token: str) -> str:
        if token in self.inflect:
            return self.inflect[token]
        if token in self.words:
            return token
        return self.unknown

    @property
    def superwords(self):
        """All model-visible symbols this lexicon can emit (incl. unknown)."""
        syms = set(self.words)
        syms.update(self.inflect.values())
        syms.update(f"(({g.gid}))" for g in self.grammars)
        syms.add(self.unknown)
        return syms

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_lines(fh, path=str(path))

    @classmethod
    def from_lines(cls, lines, path=None):
        words, inflect, stop = set(), {}, set()
        grammars = []
        section = None
        gid = None
        g_trans, g_accept, g_norm = {}, set(), "identity"

        def flush_grammar():
            if gid is not None:
                grammars.append(FsaGrammar(gid, g_trans, g_accept, g_norm))

        for ln, raw in enumerate(lines, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if line.startswith("["):
                if not line.endswith("]"):
                    raise DataFormatError("unterminated section header", path, ln)
                header = line[1:-1].strip()
                if header.startswith("grammar"):
                    flush_grammar()
                    parts = header.split()
                    if len(parts) != 2:
                        raise DataFormatError("expected [grammar <id>]", path, ln)
                    gid = parts[1]
                    g_trans, g_accept, g_norm = {}, set(), "identity"
                    section = "grammar"
                elif header in ("words", "inflect", "stop"):
                    flush_grammar()
                    gid = None
                    section = header
                else:
                    raise DataFormatError(f"unknown section [{header}]", path, ln)
                continue
            if section == "words":
                words.update(line.split())
            elif section == "inflect":
                parts = line.split("\t")
                if len(parts) != 2:
                    raise DataFormatError("expected SURFACE<TAB>SUPERWORD", path, ln)
                if parts[0] in inflect and inflect[parts[0]] != parts[1]:
                    raise DataFormatError(f"{parts[0]} in two inflection groups", path, ln)
                inflect[parts[0]] = parts[1]
            elif section == "stop":
                stop.update(line.split())
            elif section == "grammar":
                parts = line.split("\t")
                if parts[0] == "accept" and len(parts) == 2:
                    g_accept.add(parts[1])
                elif parts[0] == "normalize" and len(parts) == 2:
                    g_norm = parts[1]
                elif len(parts) == 3:
                    g_trans.setdefault((parts[0], parts[1]), set()).add(parts[2])
                else:
                    raise DataFormatError("bad grammar line", path, ln)
            else:
                raise DataFormatError("content before first section header", path, ln)
        flush_grammar()
        return cls(words, inflect, stop, grammars)


def lex_parse(sentence: str, lexicon: SuperwordLexicon) -> Lattice:
    """Parse a raw sentence into a superword lattice.

    Stop words are deleted, inflection groups collapse to their canonical
    superword, every maximal grammar match becomes a parallel arc carrying
    its normalized value, and anything left over becomes a plain-word or
    unknown-marker arc.
    """
    tokens = tokenize(sentence)
    if not tokens:
        raise LexiconError("sentence is empty after tokenization")
    kept = [t for t in tokens if t not in lexicon.stop]
    if not kept:
        raise EmptyAfterDeletionError("all tokens are stop words")

    arcs = [Arc(i, i + 1, lexicon.word_sym(tok)) for i, tok in enumerate(kept)]
    for grammar in lexicon.grammars:
        matches = []
        for start in range(len(kept)):
            for end in grammar.match_ends(kept, start):
                matches.append((start, end))
        # keep only maximal matches: not strictly contained in another
        # match of the same grammar
        for (s, e) in matches:
            contained = any((s2 <= s and e <= e2 and (s2, e2) != (s, e))
                            for (s2, e2) in matches)
            if contained:
                continue
            arcs.append(Arc(s, e, f"(({grammar.gid}))",
                            grammar.normalize(kept[s:e])))
    return Lattice(len(kept), arcs)


def enumerate_paths(lattice: Lattice, limit: int):
    """Up to `limit` complete paths, lexicographic by (start, superword).

    Returns a list of tuples of Superword.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    order = sorted(lattice.arcs, key=lambda a: (a.start, a.sym, a.end, a.value or ""))
    by_start = {}
    for a in order:
        by_start.setdefault(a.start, []).append(a)
    paths = []

    def walk(pos, prefix):
        if len(paths) >= limit:
            return
        if pos == lattice.n_positions:
            paths.append(tuple(a.superword for a in prefix))
            return
        for a in by_start.get(pos, ()):
            walk(a.end, prefix + [a])
            if len(paths) >= limit:
                return

    walk(0, [])
    return paths


def enumerate_path_arcs(lattice: Lattice):
    """All complete paths as arc tuples, in enumerate_paths order."""
    order = sorted(lattice.arcs, key=lambda a: (a.start, a.sym, a.end, a.value or ""))
    by_start = {}
    for a in order:
        by_start.setdefault(a.start, []).append(a)
    paths = []

    def walk(pos, prefix):
        if pos == lattice.n_positions:
            paths.append(tuple(prefix))
            return
        for a in by_start.get(pos, ()):
            walk(a.end, prefix + [a])

    walk(0, [])
    return paths
