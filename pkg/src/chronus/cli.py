"""Command-line surface: train, decode, eval, repl, loop, gen.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass

from .concepts import ConceptDictionary
from .dialog import DialogState, merge_context
from .errors import ChronusError
from . import gen as genmod
from .lexicon import SuperwordLexicon
from .model import (SegmentedSentence, apply_synonym_smoothing, load_model,
                    save_model, train_mle)
from .pipeline import Artifacts, data_path, run_turn
from .query import score_answer
from .template import generate_template, matched_fraction, should_reject
from .training import FeedbackCorpus, run_training_loop


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_artifact_args(p):
    for name in ("lexicon", "concepts", "values", "db", "conventions"):
        p.add_argument(f"--{name}", default=None,
                       help=f"{name} file (default: bundled demo {name})")


def _load_artifacts(args) -> Artifacts:
    def pick(name):
        given = getattr(args, name)
        return given if given is not None else data_path(f"{name}.txt")
    return Artifacts.load(pick("lexicon"), pick("concepts"), pick("values"),
                          pick("db"), pick("conventions"))


def _load_synonyms(path):
    """One group per line: concept<TAB>word<TAB>word..."""
    groups = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) < 3:
                raise ChronusError(
                    f"synonym line needs a concept and two or more words: {line!r}")
            groups.setdefault(fields[0], []).append(fields[1:])
    return groups


# ---------------------------------------------------------------------------
# train

def _full_vocabulary(lexicon, sentences):
    """Every symbol the lexicon can emit, plus anything seen in training."""
    syms = set(lexicon.superwords)
    syms.update(w.sym for s in sentences for w in s.words)
    return sorted(syms)


def cmd_train(args, out) -> int:
    dictionary = ConceptDictionary.load(
        args.concepts if args.concepts else data_path("concepts.txt"))
    lexicon = SuperwordLexicon.load(
        args.lexicon if args.lexicon else data_path("lexicon.txt"))
    corpus = []
    for path in args.corpus:
        corpus.extend(FeedbackCorpus.load(path).seed_segmentations())
    if not corpus:
        raise ChronusError("training corpus has no gold segmentations")
    vocab = _full_vocabulary(lexicon, corpus)
    model = train_mle(corpus, dictionary, vocab, args.k)
    if args.synonyms:
        model = apply_synonym_smoothing(model, _load_synonyms(args.synonyms))
        for name, row in model.rows():
            if abs(sum(row.values()) - 1.0) > 1e-9:
                raise ChronusError(f"row {name} is no longer normalized")
        print("synonyms applied; all rows normalized", file=out)
    rows, nonzero = model.parameter_counts()
    print(f"rows\t{rows}", file=out)
    print(f"nonzero\t{nonzero}", file=out)
    save_model(model, args.out)
    return 0


# ---------------------------------------------------------------------------
# decode

def render_segments(segmentation: SegmentedSentence) -> str:
    parts = []
    for label, start, end in segmentation.segments():
        words = " ".join(w.render() for w in segmentation.words[start:end])
        parts.append(f"{label}:[{words}]")
    return " ".join(parts)


def cmd_decode(args, out) -> int:
    artifacts = _load_artifacts(args)
    model = load_model(args.model)
    result = run_turn(args.sentence, model, artifacts, threshold=args.threshold)
    if not (args.segments or args.template or args.answer or args.emit_sql):
        args.template = True
    if args.segments:
        print(render_segments(result.decode.segmentation()), file=out)
    if result.rejected:
        print(f"REJECT {matched_fraction(result.template):.3f}", file=out)
        return 0
    if args.template:
        print(result.template.render(), file=out)
    if args.emit_sql:
        from .query import plan_query
        print(plan_query(result.template, artifacts.db).render_sql(), file=out)
    if args.answer:
        if result.error is not None:
            print(f"ERROR {result.error}", file=out)
        else:
            for line in result.answer.render_lines():
                print(line, file=out)
    return 0


# ---------------------------------------------------------------------------
# eval

@dataclass
class EvalReport:
    concept_accuracy: float
    sentence_accuracy: float
    answers_correct: float
    answers_wrong: float
    answers_rejected: float
    errors: dict

    def render(self) -> str:
        lines = [
            f"concept_accuracy\t{self.concept_accuracy:.1f}",
            f"sentence_accuracy\t{self.sentence_accuracy:.1f}",
            f"answers_correct\t{self.answers_correct:.1f}",
            f"answers_wrong\t{self.answers_wrong:.1f}",
            f"answers_rejected\t{self.answers_rejected:.1f}",
        ]
        for cat in ("decoding", "template", "dialog", "translator"):
            lines.append(f"errors_{cat}\t{self.errors.get(cat, 0)}")
        return "\n".join(lines)


def evaluate_corpus(corpus: FeedbackCorpus, model, artifacts,
                    threshold=None) -> EvalReport:
    gold_segments = hyp_segments = 0
    gold_sentences = correct_sentences = 0
    answered = correct = wrong = rejected = 0
    errors = {"decoding": 0, "template": 0, "dialog": 0, "translator": 0}
    for entry in corpus.entries:
        turn = run_turn(entry.text, model, artifacts, threshold=threshold)
        seg = turn.decode.segmentation()
        seg_match = None
        if entry.gold is not None:
            gold_sentences += 1
            gold = set(entry.gold.segments())
            hyp = set(seg.segments())
            gold_segments += len(gold)
            hyp_segments += len(gold & hyp)
            seg_match = gold == hyp
            if seg_match:
                correct_sentences += 1
        if not entry.has_references:
            continue
        answered += 1
        if turn.rejected:
            rejected += 1
            continue
        if turn.answer is not None and score_answer(
                turn.answer, entry.refmin, entry.refmax) == "correct":
            correct += 1
            continue
        wrong += 1
        # classify by the first stage that diverges from gold artifacts
        if seg_match is False:
            errors["decoding"] += 1
        elif entry.gold is not None:
            gold_template = generate_template(entry.gold, artifacts.tables,
                                              artifacts.dictionary)
            if gold_template.render() != turn.template.render():
                errors["template"] += 1
            else:
                errors["translator"] += 1
        else:
            errors["translator"] += 1

    def pct(a, b):
        return 100.0 * a / b if b else 0.0

    return EvalReport(
        concept_accuracy=pct(hyp_segments, gold_segments),
        sentence_accuracy=pct(correct_sentences, gold_sentences),
        answers_correct=pct(correct, answered),
        answers_wrong=pct(wrong, answered),
        answers_rejected=pct(rejected, answered) if answered else 100.0,
        errors=errors,
    )


def cmd_eval(args, out) -> int:
    artifacts = _load_artifacts(args)
    model = load_model(args.model)
    corpus = FeedbackCorpus.load(args.corpus)
    report = evaluate_corpus(corpus, model, artifacts, threshold=args.threshold)
    print(report.render(), file=out)
    return 0


# ---------------------------------------------------------------------------
# repl

def cmd_repl(args, out) -> int:
    artifacts = _load_artifacts(args)
    model = load_model(args.model)
    state = DialogState()
    if args.script:
        with open(args.script, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        echo = True
    else:
        lines = (line.rstrip("\n") for line in sys.stdin)
        echo = False
    for line in lines:
        text = line.strip()
        if not text:
            continue
        if echo:
            print(f"> {text}", file=out)
        if text == ":quit":
            break
        if text == ":reset":
            state = DialogState()
            print("context cleared", file=out)
            continue
        try:
            turn = run_turn(text, model, artifacts, threshold=args.threshold)
            if turn.rejected:
                print(f"REJECT {matched_fraction(turn.template):.3f}", file=out)
                continue
            state, merged = merge_context(state, turn.template,
                                          artifacts.dictionary)
            turn = run_turn(text, model, artifacts, context_template=merged,
                            threshold=args.threshold)
            print(merged.render(), file=out)
            if turn.error is not None:
                print(f"ERROR {turn.error}", file=out)
            elif turn.answer is not None:
                for ans_line in turn.answer.render_lines():
                    print(ans_line, file=out)
        except ChronusError as exc:
            print(f"ERROR {exc}", file=out)
    return 0


# ---------------------------------------------------------------------------
# loop

def cmd_loop(args, out) -> int:
    artifacts = _load_artifacts(args)
    corpus = FeedbackCorpus.load(args.corpus)
    if args.model:
        model = load_model(args.model)
    else:
        seed = corpus.seed_segmentations()
        vocab = _full_vocabulary(artifacts.lexicon, seed)
        model = train_mle(seed, artifacts.dictionary, vocab, args.k)
    model, report = run_training_loop(corpus, model, artifacts,
                                      max_iters=args.max_iters,
                                      threshold=args.threshold)
    print(report.to_text(), end="", file=out)
    if args.out:
        save_model(model, args.out)
    return 0


# ---------------------------------------------------------------------------
# gen

def cmd_gen(args, out) -> int:
    import os

    rng = random.Random(args.seed)
    os.makedirs(args.out, exist_ok=True)

    def write(name, lines):
        with open(os.path.join(args.out, name), "w", encoding="utf-8") as fh:
            for line in lines:
                fh.write(line + "\n")

    if args.kind == "recovery":
        model = genmod.make_recovery_model()
        save_model(model, os.path.join(args.out, "model.txt"))
        train = genmod.sample_corpus(model, args.train, rng)
        test = genmod.sample_corpus(model, args.test, rng)
        write("train.txt", [s.render() for s in train])
        write("test.txt", [s.render() for s in test])
        print(f"wrote {len(train)} train and {len(test)} test sentences",
              file=out)
    elif args.kind == "superword":
        raw, fused, spans = genmod.superword_effect_corpus(rng, args.train + args.test)
        write("raw.txt", [s.render() for s in raw])
        write("fused.txt", [s.render() for s in fused])
        write("spans.txt", [" ".join(str(w) for w in sp) for sp in spans])
        print(f"wrote {len(raw)} sentence pairs", file=out)
    elif args.kind == "alignment":
        model = genmod.make_recovery_model()
        triples = genmod.alignment_corpus(model, rng, args.test)
        write("alignment.txt",
              [" ".join(win) + "\t" + sent.render()
               for _, win, sent in triples])
        print(f"wrote {len(triples)} alignment instances", file=out)
    else:  # unreachable: argparse restricts choices
        raise UsageError(f"unknown generator {args.kind!r}")
    return 0


# ---------------------------------------------------------------------------
# argument wiring

def build_parser() -> _Parser:
    parser = _Parser(prog="chronus",
                     description="concept-decoding language understanding pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="estimate a model from gold segmentations")
    p.add_argument("--corpus", required=True, action="append",
                   help="corpus with gold segmentations (repeatable)")
    p.add_argument("--concepts", default=None)
    p.add_argument("--lexicon", default=None,
                   help="lexicon whose symbols define the model vocabulary")
    p.add_argument("--k", type=float, default=0.001)
    p.add_argument("--synonyms", default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("decode", help="decode one sentence")
    p.add_argument("--model", required=True)
    _add_artifact_args(p)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--segments", action="store_true")
    p.add_argument("--template", action="store_true")
    p.add_argument("--answer", action="store_true")
    p.add_argument("--emit-sql", dest="emit_sql", action="store_true")
    p.add_argument("sentence")

    p = sub.add_parser("eval", help="score a corpus with gold and references")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--threshold", type=float, default=None)
    _add_artifact_args(p)

    p = sub.add_parser("repl", help="interactive multi-turn dialog")
    p.add_argument("--model", required=True)
    p.add_argument("--script", default=None)
    p.add_argument("--threshold", type=float, default=None)
    _add_artifact_args(p)

    p = sub.add_parser("loop", help="semi-supervised training from answers")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", default=None,
                   help="seed model (default: train from corpus golds)")
    p.add_argument("--k", type=float, default=0.001)
    p.add_argument("--max-iters", dest="max_iters", type=int, default=20)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--out", default=None)
    _add_artifact_args(p)

    p = sub.add_parser("gen", help="generate synthetic test corpora")
    p.add_argument("kind", choices=["recovery", "superword", "alignment"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--train", type=int, default=2000)
    p.add_argument("--test", type=int, default=500)
    p.add_argument("--out", required=True)

    return parser


_COMMANDS = {
    "train": cmd_train,
    "decode": cmd_decode,
    "eval": cmd_eval,
    "repl": cmd_repl,
    "loop": cmd_loop,
    "gen": cmd_gen,
}


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args, out)
    except FileNotFoundError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except ChronusError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
