"""Split a function AST into ordered statement/predicate node spans.

One node per simple statement (declaration, expression statement, return,
break, continue) and one Predicate node per if/while condition. A for-loop
contributes three nodes: init (Statement), condition (Predicate), update
(Statement); its body follows. Predicate spans cover only the condition
expression. Indices are dense and textual (by span start).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from deplab.frontend.parser import Ast, NodeKind


class NodeRole(enum.IntEnum):
    Statement = 0
    Predicate = 1


@dataclass(frozen=True)
class PdgNodeSpan:
    index: int
    role: NodeRole
    start: int
    end: int
    ast_node: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


_SIMPLE_STATEMENTS = (
    NodeKind.Decl,
    NodeKind.ExprStmt,
    NodeKind.Return,
    NodeKind.Break,
    NodeKind.Continue,
)


def segment_statements(ast: Ast) -> list[PdgNodeSpan]:
    out: list[PdgNodeSpan] = []

    def emit(role: NodeRole, node_id: int):
        node = ast.node(node_id)
        out.append(PdgNodeSpan(len(out), role, node.start, node.end, node_id))

    def visit(node_id: int):
        node = ast.node(node_id)
        if node.kind in _SIMPLE_STATEMENTS:
            emit(NodeRole.Statement, node_id)
        elif node.kind == NodeKind.Block:
            for child in node.children:
                visit(child)
        elif node.kind == NodeKind.If:
            emit(NodeRole.Predicate, node.children[0])
            visit(node.children[1])
            if len(node.children) == 3:
                visit(node.children[2])
        elif node.kind == NodeKind.While:
            emit(NodeRole.Predicate, node.children[0])
            visit(node.children[1])
        elif node.kind == NodeKind.For:
            init, cond, update, body = node.children
            emit(NodeRole.Statement, init)
            emit(NodeRole.Predicate, cond)
            emit(NodeRole.Statement, update)
            visit(body)
        else:
            raise AssertionError(f"unexpected node kind in statement position: {node.kind!r}")

    body = ast.node(ast.root).children[-1]
    visit(body)
    assert all(a.start < b.start for a, b in zip(out, out[1:])), "nodes must be in textual order"
    return out
