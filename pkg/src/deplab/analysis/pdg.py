"""Program dependence graph assembly and export (DOT and JSON).

The PDG aggregates the control and data relations over the segmented nodes.
Edge ordering is deterministic: control edges sort by (src, dst); data edges
by (def_stmt, use_stmt) and then by occurrence spans.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from deplab.analysis.cfg import Cfg, build_cfg
from deplab.analysis.control import ControlDeps, control_dependencies
from deplab.analysis.defuse import DefUse, def_use_sets
from deplab.analysis.postdom import post_dominators
from deplab.analysis.reaching import OccurrenceDataDep, data_dependencies
from deplab.frontend.parser import Ast, parse
from deplab.frontend.segment import NodeRole, PdgNodeSpan, segment_statements
from deplab.frontend.tokens import lex


@dataclass
class Pdg:
    nodes: list[PdgNodeSpan]
    control_edges: list[tuple[int, int]]
    data_edges: list[OccurrenceDataDep]


def build_pdg(control: ControlDeps, data: list[OccurrenceDataDep],
              nodes: list[PdgNodeSpan], ast: Ast | None = None) -> Pdg:
    data_sorted = sorted(
        data,
        key=lambda d: (
            d.def_stmt,
            d.use_stmt,
            _occ_span(ast, d.def_occ) if ast else d.def_occ,
            _occ_span(ast, d.use_occ) if ast else d.use_occ,
        ),
    )
    return Pdg(nodes, control.sorted_pairs(), data_sorted)


def _occ_span(ast: Ast, occ: int) -> tuple[int, int]:
    node = ast.node(occ)
    return (node.start, node.end)


@dataclass
class FunctionAnalysis:
    """Everything the rest of the pipeline needs about one function."""

    source: str
    tokens: list
    ast: Ast
    nodes: list[PdgNodeSpan]
    cfg: Cfg
    defuse: list[DefUse]
    control: ControlDeps
    data: list[OccurrenceDataDep]
    pdg: Pdg

    def occ_span(self, occ: int) -> tuple[int, int]:
        node = self.ast.node(occ)
        return (node.start, node.end)


def analyze_source(source: str) -> FunctionAnalysis:
    """Lex, parse, segment and run both dependence analyses on one function."""
    tokens = lex(source)
    ast = parse(tokens)
    nodes = segment_statements(ast)
    cfg = build_cfg(ast, nodes)
    ipdom = post_dominators(cfg)
    control = control_dependencies(cfg, ipdom, nodes)
    defuse = def_use_sets(ast, nodes)
    data = data_dependencies(cfg, defuse)
    return FunctionAnalysis(
        source, tokens, ast, nodes, cfg, defuse, control, data,
        build_pdg(control, data, nodes, ast),
    )


def _node_label(source: str, node: PdgNodeSpan) -> str:
    data = source.encode("utf-8")
    text = data[node.start : node.end].decode("utf-8", errors="replace")
    text = " ".join(text.split())
    if len(text) > 40:
        text = text[:37] + "..."
    return f"{node.index}: {text}"


def pdg_to_dot(pdg: Pdg, source: str) -> str:
    """Render the PDG in DOT: control edges dashed, data edges labeled with
    the variable name."""
    lines = ["digraph pdg {", "  node [fontname=monospace];"]
    for node in pdg.nodes:
        shape = "diamond" if node.role == NodeRole.Predicate else "box"
        label = _node_label(source, node).replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  n{node.index} [shape={shape}, label="{label}"];')
    for src, dst in pdg.control_edges:
        lines.append(f"  n{src} -> n{dst} [style=dashed];")
    for dep in pdg.data_edges:
        lines.append(f'  n{dep.def_stmt} -> n{dep.use_stmt} [label="{dep.variable}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def pdg_to_json(pdg: Pdg, ast: Ast) -> str:
    payload = {
        "nodes": [
            {
                "index": n.index,
                "kind": "predicate" if n.role == NodeRole.Predicate else "statement",
                "span": [n.start, n.end],
            }
            for n in pdg.nodes
        ],
        "control_edges": [{"src": s, "dst": d} for s, d in pdg.control_edges],
        "data_edges": [
            {
                "variable": dep.variable,
                "def_stmt": dep.def_stmt,
                "use_stmt": dep.use_stmt,
                "def_span": list(_occ_span(ast, dep.def_occ)),
                "use_span": list(_occ_span(ast, dep.use_occ)),
            }
            for dep in pdg.data_edges
        ],
    }
    return json.dumps(payload, indent=2) + "\n"
