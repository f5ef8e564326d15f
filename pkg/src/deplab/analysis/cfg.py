"""Intraprocedural control flow graph over statement/predicate nodes.

Node ids 0..n-1 are the PdgNodeSpan indices; two synthetic nodes ENTRY and
EXIT are appended at ids n and n+1. ``break``/``continue`` edges target the
loop exit/continuation point, ``return`` edges target EXIT, and an
augmentation edge ENTRY->EXIT guarantees that EXIT post-dominates every node.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from deplab.frontend.parser import Ast, NodeKind
from deplab.frontend.segment import PdgNodeSpan

TRUE = "true"
FALSE = "false"

# an open exit is (node id, edge label to use when the target becomes known)
_Exit = tuple[int, "str | None"]


@dataclass
class Cfg:
    n_stmts: int
    edges: list[tuple[int, int, str | None]] = field(default_factory=list)

    @property
    def entry(self) -> int:
        return self.n_stmts

    @property
    def exit(self) -> int:
        return self.n_stmts + 1

    @property
    def n_nodes(self) -> int:
        return self.n_stmts + 2

    def successors(self) -> list[list[int]]:
        succ: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for src, dst, _ in self.edges:
            succ[src].append(dst)
        return succ

    def predecessors(self) -> list[list[int]]:
        pred: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for src, dst, _ in self.edges:
            pred[dst].append(src)
        return pred


def build_cfg(ast: Ast, nodes: list[PdgNodeSpan]) -> Cfg:
    cfg = Cfg(len(nodes))
    index_of = {n.ast_node: n.index for n in nodes}
    seen = set()

    def add_edge(src: int, dst: int, label: str | None = None):
        key = (src, dst, label)
        if key not in seen:
            seen.add(key)
            cfg.edges.append(key)

    loop_stack: list[tuple[int, list[_Exit]]] = []  # (continue target, break exits)

    def wire_block(stmt_ids: list[int]) -> tuple[int | None, list[_Exit]]:
        entry: int | None = None
        open_exits: list[_Exit] = []
        for sid in stmt_ids:
            s_entry, s_exits = wire(sid)
            if s_entry is None:
                continue
            if entry is None:
                entry = s_entry
            for src, label in open_exits:
                add_edge(src, s_entry, label)
            open_exits = s_exits
        return entry, open_exits

    def wire(node_id: int) -> tuple[int | None, list[_Exit]]:
        node = ast.node(node_id)
        kind = node.kind
        if kind == NodeKind.Block:
            return wire_block(node.children)
        if kind in (NodeKind.Decl, NodeKind.ExprStmt):
            idx = index_of[node_id]
            return idx, [(idx, None)]
        if kind == NodeKind.Return:
            idx = index_of[node_id]
            add_edge(idx, cfg.exit)
            return idx, []
        if kind == NodeKind.Break:
            idx = index_of[node_id]
            loop_stack[-1][1].append((idx, None))
            return idx, []
        if kind == NodeKind.Continue:
            idx = index_of[node_id]
            add_edge(idx, loop_stack[-1][0])
            return idx, []
        if kind == NodeKind.If:
            cond_idx = index_of[node.children[0]]
            then_entry, exits = wire(node.children[1])
            exits = list(exits)
            if then_entry is None:
                exits.append((cond_idx, TRUE))  # empty branch falls through
            else:
                add_edge(cond_idx, then_entry, TRUE)
            if len(node.children) == 3:
                else_entry, else_exits = wire(node.children[2])
                exits.extend(else_exits)
                if else_entry is None:
                    exits.append((cond_idx, FALSE))
                else:
                    add_edge(cond_idx, else_entry, FALSE)
            else:
                exits.append((cond_idx, FALSE))
            return cond_idx, exits
        if kind == NodeKind.While:
            cond_idx = index_of[node.children[0]]
            breaks: list[_Exit] = []
            loop_stack.append((cond_idx, breaks))
            body_entry, body_exits = wire(node.children[1])
            loop_stack.pop()
            add_edge(cond_idx, body_entry if body_entry is not None else cond_idx, TRUE)
            for src, label in body_exits:
                add_edge(src, cond_idx, label)
            return cond_idx, breaks + [(cond_idx, FALSE)]
        if kind == NodeKind.For:
            init_id, cond_id, update_id, body_id = node.children
            init_idx, cond_idx, update_idx = index_of[init_id], index_of[cond_id], index_of[update_id]
            add_edge(init_idx, cond_idx)
            breaks = []
            loop_stack.append((update_idx, breaks))
            body_entry, body_exits = wire(body_id)
            loop_stack.pop()
            add_edge(cond_idx, body_entry if body_entry is not None else update_idx, TRUE)
            for src, label in body_exits:
                add_edge(src, update_idx, label)
            add_edge(update_idx, cond_idx)
            return init_idx, breaks + [(cond_idx, FALSE)]
        raise AssertionError(f"unexpected node kind in CFG position: {kind!r}")

    body = ast.node(ast.root).children[-1]
    entry, open_exits = wire(body)
    add_edge(cfg.entry, entry if entry is not None else cfg.exit)
    for src, label in open_exits:
        add_edge(src, cfg.exit, label)
    add_edge(cfg.entry, cfg.exit)
    return cfg
