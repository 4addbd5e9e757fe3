"""Meaning templates: keyword/value tokens produced from a segmentation.

Each concept has an ordered list of phrase patterns; the first pattern
found inside a segment supplies the token value.  Grammar-typed slots
(e.g. ((city))) either match a specific normalized value or take the
value of whatever grammar arc they matched.  Attribute concepts fold
into their restriction counterpart, so ECONOMY under a_fare yields the
same token as under fare.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .concepts import ConceptDictionary
from .errors import ChronusError, DataFormatError
from .lexicon import parse_superword
from .model import SegmentedSentence

CATEGORIES = ("item", "attribute", "logic", "operator")
TAKE_VALUE = "*"


class TemplateError(ChronusError):
    pass


@dataclass(frozen=True)
class Pattern:
    tokens: tuple       # Superword tokens; grammar slots have value None ("any")
    value: str          # token value, or TAKE_VALUE to copy the matched slot's
    category: str

    def matches_at(self, segment, i) -> str | None:
        """Value produced if the pattern matches segment words at offset i."""
        if i + len(self.tokens) > len(segment):
            return None
        slot_value = None
        for p, w in zip(self.tokens, segment[i:]):
            if p.sym != w.sym:
                return None
            if p.grammar_id is not None:
                if p.value is not None and p.value != w.value:
                    return None
                if slot_value is None:
                    slot_value = w.value
            elif p.value != w.value:
                return None
        if self.value == TAKE_VALUE:
            return slot_value
        return self.value


@dataclass(frozen=True)
class TemplateToken:
    keyword: str
    value: str
    category: str
    segment_index: int = -1


@dataclass
class Template:
    tokens: list = field(default_factory=list)
    unmatched: int = 0

    @property
    def matched(self) -> int:
        return len(self.tokens)

    def keywords(self):
        return [t.keyword for t in self.tokens]

    def get(self, keyword) -> TemplateToken | None:
        for t in self.tokens:
            if t.keyword == keyword:
                return t
        return None

    def render(self) -> str:
        return " ".join(f"({t.keyword},{t.value})" for t in self.tokens)


class ValueTable:
    """Per-concept ordered pattern lists."""

    def __init__(self, tables):
        self.tables = {c: list(pats) for c, pats in tables.items()}
        for concept, pats in self.tables.items():
            if any(not p.tokens for p in pats):
                raise TemplateError(f"empty pattern under {concept}")
            for i, p in enumerate(pats):
                for q in pats[i + 1:]:
                    if len(q.tokens) > len(p.tokens) and q.tokens[:len(p.tokens)] == p.tokens:
                        raise TemplateError(
                            f"{concept}: pattern {_render_tokens(p.tokens)} listed "
                            f"before the longer {_render_tokens(q.tokens)}")

    def patterns(self, concept):
        return self.tables.get(concept, [])

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_lines(fh, path=str(path))

    @classmethod
    def from_lines(cls, lines, path=None):
        tables = {}
        concept = None
        for ln, raw in enumerate(lines, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if line.startswith("["):
                header = line[1:-1].strip()
                if not header.startswith("concept "):
                    raise DataFormatError("expected [concept <name>]", path, ln)
                concept = header.split(None, 1)[1]
                tables.setdefault(concept, [])
                continue
            if concept is None:
                raise DataFormatError("pattern before any [concept] header", path, ln)
            parts = line.split("\t")
            if len(parts) != 3:
                raise DataFormatError("expected PATTERN<TAB>value<TAB>category",
                                      path, ln)
            words, value, category = parts
            if category not in CATEGORIES:
                raise DataFormatError(f"unknown category {category!r}", path, ln)
            tokens = tuple(parse_superword(w) for w in words.split())
            tables[concept].append(Pattern(tokens, value, category))
        return cls(tables)


def _render_tokens(tokens):
    return " ".join(t.render() for t in tokens)


def generate_template(segmentation: SegmentedSentence, tables: ValueTable,
                      dictionary: ConceptDictionary) -> Template:
    """One token per matched segment, in segment order; dummy/and skipped."""
    template = Template()
    for seg_idx, (label, start, end) in enumerate(segmentation.segments()):
        if label not in dictionary:
            raise TemplateError(f"segment label {label!r} not in dictionary")
        if dictionary.is_special(label):
            continue
        keyword = dictionary.fold(label)
        words = list(segmentation.words[start:end])
        token = _match_segment(keyword, words, tables, seg_idx)
        if token is None:
            template.unmatched += 1
        else:
            template.tokens.append(token)
    return template


def _match_segment(keyword, words, tables, seg_idx):
    for pattern in tables.patterns(keyword):
        for i in range(len(words)):
            value = pattern.matches_at(words, i)
            if value is not None:
                return TemplateToken(keyword, value, pattern.category, seg_idx)
    return None


def should_reject(template: Template, threshold: float) -> bool:
    """Reject when too few decoded concepts matched a value (0/0 rejects)."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must be in [0, 1]")
    total = template.matched + template.unmatched
    if total == 0:
        return True
    return template.matched / total < threshold


def matched_fraction(template: Template) -> float:
    total = template.matched + template.unmatched
    return template.matched / total if total else 0.0
