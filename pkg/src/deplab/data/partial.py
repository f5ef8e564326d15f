"""Partial-code prefixes: the first K statement nodes of a function.

The prefix is the raw byte prefix of the source up to the end of the K-th
node's span; closing braces are *not* repaired, so the snippet is genuinely
partial and generally unparsable. Ground truth comes from analyzing the
complete function and restricting to the surviving nodes and occurrences;
the model side of the pipeline only ever sees the prefix.
"""

from __future__ import annotations

from deplab.analysis.pdg import FunctionAnalysis, analyze_source
from deplab.bpe import BpeModel, encode
from deplab.data.groundtruth import (
    ExampleConfig,
    TrainingExample,
    KIND_NONE,
    build_gc,
    build_gd,
    node_membership,
    surviving_node_count,
)
from deplab.errors import TooShort
from deplab.frontend.tokens import lex


def make_partial(function_id: str, source: str, k: int, model: BpeModel,
                 config: ExampleConfig,
                 analysis: FunctionAnalysis | None = None) -> TrainingExample:
    fa = analysis if analysis is not None else analyze_source(source)
    if len(fa.nodes) < k:
        raise TooShort(f"{function_id}: {len(fa.nodes)} nodes < K={k}")
    cut = fa.nodes[k - 1].end
    prefix = source.encode("utf-8")[:cut].decode("utf-8")
    seq = encode(model, prefix, lex(prefix), max_seq_len=config.max_seq_len)

    node_spans = [n.span for n in fa.nodes[:k]]
    members = node_membership(node_spans, seq)
    n_eff = surviving_node_count(members, config.max_nodes)

    control = {(i, j) for i, j in fa.control.pairs if i < k and j < k}
    dep_spans = [
        (fa.occ_span(d.def_occ), fa.occ_span(d.use_occ))
        for d in fa.data
        if d.def_stmt < k and d.use_stmt < k
    ]
    return TrainingExample(
        id=f"{function_id}#K{k}",
        source=prefix,
        ids=list(seq.ids),
        spans=[list(s) for s in seq.spans],
        kinds=[KIND_NONE if kind is None else int(kind) for kind in seq.kinds],
        node_spans=[list(s) for s in node_spans[:n_eff]],
        node_members=members[:n_eff],
        gc=build_gc(control, n_eff),
        gd=build_gd(dep_spans, seq),
        ident_mask=seq.ident_mask(),
    )
