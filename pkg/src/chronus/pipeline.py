"""End-to-end composition of the understanding pipeline.

One place that chains lexical parsing, lattice decoding, template
generation, rejection and query evaluation, shared by the CLI, the
evaluation harness and the training loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .concepts import ConceptDictionary
from .decoder import DecodeResult, viterbi_decode_lattice
from .lexicon import SuperwordLexicon, lex_parse
from .model import ConceptHmm
from .query import Answer, Conventions, MiniDb, execute, plan_query
from .template import Template, ValueTable, generate_template, should_reject


def data_path(name: str):
    """Path of a bundled data file."""
    return resources.files("chronus.data") / name


@dataclass
class Artifacts:
    """Static pipeline inputs (everything except the trained model)."""

    lexicon: SuperwordLexicon
    dictionary: ConceptDictionary
    tables: ValueTable
    db: MiniDb

    @classmethod
    def load(cls, lexicon_path, dictionary_path, tables_path, db_path,
             conventions_path):
        conventions = Conventions.load(conventions_path)
        return cls(
            lexicon=SuperwordLexicon.load(lexicon_path),
            dictionary=ConceptDictionary.load(dictionary_path),
            tables=ValueTable.load(tables_path),
            db=MiniDb.load(db_path, conventions),
        )

    @classmethod
    def load_bundled(cls):
        return cls.load(data_path("lexicon.txt"), data_path("concepts.txt"),
                        data_path("values.txt"), data_path("db.txt"),
                        data_path("conventions.txt"))


@dataclass
class TurnResult:
    decode: DecodeResult
    template: Template
    rejected: bool
    merged: Template | None = None
    answer: Answer | None = None
    error: str | None = None   # query planning failure, if any


def run_turn(text: str, model: ConceptHmm, artifacts: Artifacts,
             context_template: Template | None = None,
             threshold: float | None = None) -> TurnResult:
    """Decode one sentence and, unless rejected, answer it.

    ``context_template`` (from the dialog manager) is what actually gets
    planned when provided; the caller owns merging.
    """
    if threshold is None:
        threshold = artifacts.db.conventions.reject_threshold
    lattice = lex_parse(text, artifacts.lexicon)
    decode = viterbi_decode_lattice(model, lattice)
    template = generate_template(decode.segmentation(), artifacts.tables,
                                 artifacts.dictionary)
    rejected = should_reject(template, threshold) or decode.degenerate
    result = TurnResult(decode=decode, template=template, rejected=rejected)
    if rejected:
        return result
    basis = context_template if context_template is not None else template
    result.merged = basis
    try:
        plan = plan_query(basis, artifacts.db)
        result.answer = execute(plan, artifacts.db)
    except Exception as exc:  # planning errors are data, not crashes
        result.error = str(exc)
    return result
