"""Dialog context: merging each turn's template into the running context.

Rules, in order:
  (a) a rank-0 concept (flight endpoints) mentioned with a value different
      from the context clears the whole context first;
  (b) otherwise, any keyword re-mentioned with a new value deletes every
      context token of strictly larger hierarchy rank;
  (c) the new tokens are overlaid on what survived; the merged template is
      both the answer basis and the next context.

A keyword absent from the context never triggers (a) or (b); only a real
value change does.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .concepts import ConceptDictionary
from .template import Template, TemplateToken


@dataclass
class DialogState:
    context: dict = field(default_factory=dict)  # keyword -> TemplateToken
    turns: int = 0

    def context_template(self) -> Template:
        return Template(tokens=list(self.context.values()))


def merge_context(state: DialogState, new: Template,
                  dictionary: ConceptDictionary):
    """Returns (next_state, merged_template)."""
    ctx = dict(state.context)

    def changed(token):
        old = ctx.get(token.keyword)
        return old is not None and old.value != token.value

    endpoint_change = any(changed(t) and dictionary[t.keyword].rank == 0
                          for t in new.tokens)
    if endpoint_change:
        ctx = {}
    else:
        for t in new.tokens:
            if changed(t):
                rank = dictionary[t.keyword].rank
                ctx = {k: v for k, v in ctx.items()
                       if dictionary[k].rank <= rank}

    merged = dict(ctx)
    for t in new.tokens:
        merged[t.keyword] = t

    # surviving context tokens keep their order; new keywords append in
    # template order
    ordered = [merged[k] for k in ctx if k in merged]
    for t in new.tokens:
        if t.keyword not in ctx and merged[t.keyword] is t:
            ordered.append(t)
    # a template may mention one keyword twice (e.g. question + q_attr);
    # keep the surviving token only once
    deduped, seen = [], set()
    for t in ordered:
        if t.keyword not in seen:
            seen.add(t.keyword)
            deduped.append(merged[t.keyword])

    merged_template = Template(tokens=deduped)
    next_state = DialogState(context=dict(merged), turns=state.turns + 1)
    return next_state, merged_template
