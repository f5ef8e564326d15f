"""Dependence prediction from source code alone.

Inference does not require a parse: when the input fails to parse (partial
code), node spans come from a lightweight token-level splitter that segments
on top-level semicolons and ``if``/``while``/``for`` headers. Pair
probabilities from both heads are thresholded; the token-kind mask is NOT
applied at inference, so data pairs are scored over all token positions
(excluding [CLS], which covers no source bytes).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from deplab.bpe import BpeModel, encode
from deplab.data.groundtruth import node_membership, surviving_node_count
from deplab.errors import ParseError, UnsupportedConstruct
from deplab.frontend.parser import parse
from deplab.frontend.segment import NodeRole, segment_statements
from deplab.frontend.tokens import CodeToken, lex
from deplab.nn.encoder import encoder_forward
from deplab.nn.heads import cdp_forward, ddp_forward
from deplab.nn.model import ModelParams


@dataclass
class SegmentSpan:
    role: NodeRole
    start: int
    end: int


@dataclass
class Prediction:
    node_spans: list[SegmentSpan]
    control_pairs: list[tuple[int, int]]
    data_pairs: list[tuple[int, int]]
    token_spans: list[tuple[int, int]]
    elapsed_ms: float


def fallback_segment(tokens: list[CodeToken]) -> list[SegmentSpan]:
    """Greedy statement/predicate segmentation for unparsable code."""
    spans: list[SegmentSpan] = []
    i = 0
    n = len(tokens)

    def balanced_paren_range(open_idx: int) -> int:
        """Index just past the matching ')'; n when truncated."""
        depth = 0
        j = open_idx
        while j < n:
            if tokens[j].text == "(":
                depth += 1
            elif tokens[j].text == ")":
                depth -= 1
                if depth == 0:
                    return j + 1
            j += 1
        return n

    while i < n:
        tok = tokens[i]
        if tok.text in ("if", "while") and i + 1 < n and tokens[i + 1].text == "(":
            end = balanced_paren_range(i + 1)
            inner_last = end - 2 if end <= n and end - 2 > i + 1 else n - 1
            if i + 2 <= inner_last:
                spans.append(SegmentSpan(NodeRole.Predicate,
                                         tokens[i + 2].start, tokens[inner_last].end))
            i = end if end > i + 1 else i + 1
            continue
        if tok.text == "for" and i + 1 < n and tokens[i + 1].text == "(":
            end = balanced_paren_range(i + 1)
            inner = tokens[i + 2 : min(end - 1, n)]
            clauses: list[list[CodeToken]] = [[]]
            depth = 0
            for t in inner:
                if t.text == "(":
                    depth += 1
                elif t.text == ")":
                    depth -= 1
                if t.text == ";" and depth == 0:
                    clauses.append([])
                else:
                    clauses[-1].append(t)
            roles = [NodeRole.Statement, NodeRole.Predicate, NodeRole.Statement]
            for clause, role in zip(clauses, roles):
                if clause:
                    spans.append(SegmentSpan(role, clause[0].start, clause[-1].end))
            i = end if end > i + 1 else i + 1
            continue
        if tok.text in ("{", "}") or tok.text == "else":
            i += 1
            continue
        # plain statement: runs to the next top-level ';'
        j = i
        while j < n and tokens[j].text != ";" and tokens[j].text not in ("{", "}"):
            j += 1
        if j < n and tokens[j].text == ";":
            spans.append(SegmentSpan(NodeRole.Statement, tok.start, tokens[j].end))
            i = j + 1
        else:
            spans.append(SegmentSpan(NodeRole.Statement, tok.start, tokens[j - 1].end if j > i else tok.end))
            i = j if j > i else i + 1
    return spans


def segment_for_inference(source: str, tokens: list[CodeToken]) -> list[SegmentSpan]:
    """Parser-based segmentation with a token-level fallback for partial code."""
    try:
        nodes = segment_statements(parse(tokens))
        return [SegmentSpan(node.role, node.start, node.end) for node in nodes]
    except (ParseError, UnsupportedConstruct):
        return fallback_segment(tokens)


def predict_pairs(params: ModelParams, ids, node_members: list[list[int]],
                  threshold: float) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Thresholded control pairs (over nodes) and data pairs (over tokens,
    [CLS] excluded). No identifier masking at inference."""
    h = encoder_forward(params, ids)
    control: list[tuple[int, int]] = []
    if node_members:
        p_c = cdp_forward(params, h, node_members).value
        n = len(node_members)
        control = [(i, j) for i in range(n) for j in range(n) if p_c[i, j] >= threshold]
    p_d = ddp_forward(params, h).value
    data = [
        (x, y)
        for x in range(1, len(ids))
        for y in range(1, len(ids))
        if p_d[x, y] >= threshold
    ]
    return control, data


def predict_dependencies(params: ModelParams, bpe_model: BpeModel, source: str,
                         threshold: float = 0.5) -> Prediction:
    """Full inference pipeline on raw source (only lexing is required)."""
    t0 = time.perf_counter()
    tokens = lex(source)
    spans = segment_for_inference(source, tokens)
    seq = encode(bpe_model, source, tokens, max_seq_len=params.config.max_seq_len)
    members = node_membership([(s.start, s.end) for s in spans], seq)
    n_eff = surviving_node_count(members, params.config.max_nodes)
    control, data = predict_pairs(params, list(seq.ids), members[:n_eff], threshold)
    elapsed = (time.perf_counter() - t0) * 1000.0
    return Prediction(
        node_spans=spans[:n_eff],
        control_pairs=control,
        data_pairs=data,
        token_spans=[tuple(s) for s in seq.spans],
        elapsed_ms=elapsed,
    )
