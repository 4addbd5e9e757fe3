"""Concept inventory: the label set over which conceptual decoding operates."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ChronusError, DataFormatError

ROLES = ("question", "subject", "restriction", "attribute", "special")

DUMMY = "dummy"
AND = "and"


@dataclass(frozen=True)
class Concept:
    name: str
    role: str
    rank: int = 9                   # dialog hierarchy; smaller = higher
    counterpart: str | None = None  # for attributes: the concept they fold into


class ConceptDictionary:
    """Ordered, validated concept set.

    Order is significant: the decoder breaks score ties by concept index,
    so two dictionaries with the same concepts in different order are
    different models.
    """

    def __init__(self, concepts):
        self.concepts = tuple(concepts)
        self._index = {}
        for i, c in enumerate(self.concepts):
            if c.name in self._index:
                raise ChronusError(f"duplicate concept name: {c.name}")
            if c.role not in ROLES:
                raise ChronusError(f"unknown role {c.role!r} for concept {c.name}")
            self._index[c.name] = i
        for c in self.concepts:
            if c.role == "attribute":
                if c.counterpart is None or c.counterpart not in self._index:
                    raise ChronusError(
                        f"attribute concept {c.name} has no valid counterpart")
                if self[c.counterpart].role in ("attribute", "special"):
                    raise ChronusError(
                        f"attribute {c.name} folds into non-foldable "
                        f"{c.counterpart}")
        for special in (DUMMY, AND):
            if special not in self._index or self[special].role != "special":
                raise ChronusError(f"dictionary must define special concept {special!r}")

    @property
    def names(self):
        return [c.name for c in self.concepts]

    def __len__(self):
        return len(self.concepts)

    def __contains__(self, name):
        return name in self._index

    def __iter__(self):
        return iter(self.concepts)

    def __getitem__(self, name) -> Concept:
        return self.concepts[self._index[name]]

    def index(self, name) -> int:
        return self._index[name]

    def fold(self, name) -> str:
        """Map an attribute concept to the concept it mirrors."""
        c = self[name]
        return c.counterpart if c.role == "attribute" else name

    def is_special(self, name) -> bool:
        return self[name].role == "special"

    def to_lines(self):
        lines = []
        for c in self.concepts:
            parts = [c.name, c.role, str(c.rank)]
            if c.counterpart is not None:
                parts.append(c.counterpart)
            lines.append("\t".join(parts))
        return lines

    @classmethod
    def from_lines(cls, lines, path=None):
        concepts = []
        for ln, raw in enumerate(lines, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) not in (3, 4):
                raise DataFormatError("expected name<TAB>role<TAB>rank[<TAB>counterpart]",
                                      path=path, line=ln)
            name, role, rank = parts[0], parts[1], parts[2]
            try:
                rank_i = int(rank)
            except ValueError:
                raise DataFormatError(f"bad rank {rank!r}", path=path, line=ln)
            if rank_i < 0:
                raise DataFormatError("rank must be non-negative", path=path, line=ln)
            counterpart = parts[3] if len(parts) == 4 else None
            concepts.append(Concept(name, role, rank_i, counterpart))
        return cls(concepts)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_lines(fh, path=str(path))
