"""Ground-truth construction: per-function training examples.

An example carries the subword sequence plus four supervision structures:

* ``gc``: sparse statement-level control pairs (i, j) over node indices,
  truncated to the node cap
* ``gd``: sparse token-level data pairs (x, y): for each dependency the
  first subword piece of the defining occurrence points at the first piece
  of the using occurrence
* ``node_members``: per node, the subtoken indices whose spans overlap it
* ``ident_mask``: 1 where the subtoken kind is Identifier

Token truncation (max_seq_len) and node truncation (node cap) apply
independently; a pair survives only if all of its endpoints survive both.
Nodes whose spans fall entirely beyond the token cut are dropped from the
back; a zero-member node anywhere else is a hard error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from deplab.analysis.pdg import FunctionAnalysis, analyze_source
from deplab.bpe import BpeModel, SubTokenSequence, encode
from deplab.errors import EmptyNode

KIND_NONE = -1


@dataclass
class ExampleConfig:
    max_seq_len: int = 256
    max_nodes: int = 50  # statement cap for the control matrix


@dataclass
class TrainingExample:
    id: str
    source: str
    ids: list[int]
    spans: list[list[int]]
    kinds: list[int]               # TokenKind ints, -1 for [CLS]/filler
    node_spans: list[list[int]]
    node_members: list[list[int]]
    gc: list[list[int]]
    gd: list[list[int]]
    ident_mask: list[int]

    @property
    def node_count(self) -> int:
        return len(self.node_spans)


def _overlaps(a_start: int, a_end: int, b_start: int, b_end: int) -> bool:
    return max(a_start, b_start) < min(a_end, b_end)


def node_membership(node_spans: list[tuple[int, int]], seq: SubTokenSequence) -> list[list[int]]:
    """Subtoken indices overlapping each node span; [CLS] is never a member."""
    members: list[list[int]] = []
    for start, end in node_spans:
        members.append(
            [i for i in range(1, len(seq)) if _overlaps(start, end, *seq.spans[i])]
        )
    return members


def build_gc(control_pairs, node_count: int) -> list[list[int]]:
    """Control pairs restricted to nodes below ``node_count``, sorted."""
    return [
        [i, j] for i, j in sorted(control_pairs) if i < node_count and j < node_count
    ]


def first_piece_index(span: tuple[int, int], seq: SubTokenSequence) -> int | None:
    """Index of the first subtoken overlapping ``span``; None when truncated."""
    for i in range(1, len(seq)):
        if _overlaps(span[0], span[1], *seq.spans[i]):
            return i
    return None


def build_gd(dep_spans, seq: SubTokenSequence) -> list[list[int]]:
    """Token-level data pairs from (def occurrence span, use occurrence span)
    pairs; a dependency with a truncated endpoint contributes nothing."""
    pairs = set()
    for def_span, use_span in dep_spans:
        x = first_piece_index(def_span, seq)
        y = first_piece_index(use_span, seq)
        if x is not None and y is not None:
            pairs.add((x, y))
    return [list(p) for p in sorted(pairs)]


def surviving_node_count(members: list[list[int]], max_nodes: int) -> int:
    """Nodes kept after both caps: at most ``max_nodes``, and any suffix of
    nodes left without member tokens by the sequence cut is dropped."""
    n = min(len(members), max_nodes)
    while n > 0 and not members[n - 1]:
        n -= 1
    for i in range(n):
        if not members[i]:
            raise EmptyNode(f"node {i} has no member subtokens")
    return n


def build_example(function_id: str, source: str, model: BpeModel,
                  config: ExampleConfig,
                  analysis: FunctionAnalysis | None = None) -> TrainingExample:
    fa = analysis if analysis is not None else analyze_source(source)
    seq = encode(model, source, fa.tokens, max_seq_len=config.max_seq_len)
    all_spans = [n.span for n in fa.nodes]
    members = node_membership(all_spans, seq)
    n_eff = surviving_node_count(members, config.max_nodes)
    dep_spans = [(fa.occ_span(d.def_occ), fa.occ_span(d.use_occ)) for d in fa.data]
    mask = seq.ident_mask()
    return TrainingExample(
        id=function_id,
        source=source,
        ids=list(seq.ids),
        spans=[list(s) for s in seq.spans],
        kinds=[KIND_NONE if k is None else int(k) for k in seq.kinds],
        node_spans=[list(s) for s in all_spans[:n_eff]],
        node_members=members[:n_eff],
        gc=build_gc(fa.control.pairs, n_eff),
        gd=build_gd(dep_spans, seq),
        ident_mask=mask,
    )
