"""Per-node definition and use sets at identifier-occurrence granularity.

A definition or use is (variable name, IdentifierRef node id). Rules:

* assignment LHS and a declaration's name define; a declaration without
  initializer still defines (it kills) but generates no use
* compound assignment and prefix ++/-- make the operand both def and use
* every IdentifierRef in expression position is a use: right-hand sides,
  conditions, call arguments, array index expressions
* an assignment through an array element (``a[i] = x``) defines the whole
  array weakly: the definition does not kill earlier definitions of ``a``
* call arguments are uses; the callee name is neither def nor use
"""

from __future__ import annotations

from dataclasses import dataclass, field

from deplab.frontend.parser import Ast, AstNode, NodeKind
from deplab.frontend.segment import PdgNodeSpan

Occurrence = tuple[str, int]  # (variable name, IdentifierRef node id)


@dataclass
class DefUse:
    defs: list[Occurrence] = field(default_factory=list)
    uses: list[Occurrence] = field(default_factory=list)
    killing: bool = True  # False for weak (array-element) definitions


def _root_identifier(ast: Ast, node_id: int) -> int:
    """Identifier at the base of an Index chain (``a`` for ``a[i][j]``)."""
    node = ast.node(node_id)
    while node.kind == NodeKind.Index:
        node_id = node.children[0]
        node = ast.node(node_id)
    assert node.kind == NodeKind.IdentifierRef
    return node_id


def _collect_uses(ast: Ast, node_id: int, out: list[Occurrence]):
    node = ast.node(node_id)
    if node.kind == NodeKind.IdentifierRef:
        out.append((node.value, node_id))
        return
    if node.kind == NodeKind.Call:
        for arg in node.children[1:]:  # children[0] is the callee name
            _collect_uses(ast, arg, out)
        return
    for child in node.children:
        _collect_uses(ast, child, out)


def _index_uses(ast: Ast, node_id: int, out: list[Occurrence]):
    """Uses inside the subscript expressions of an Index chain."""
    node = ast.node(node_id)
    while node.kind == NodeKind.Index:
        _collect_uses(ast, node.children[1], out)
        node_id = node.children[0]
        node = ast.node(node_id)


def _analyze_effect(ast: Ast, node_id: int, du: DefUse):
    node = ast.node(node_id)
    if node.kind == NodeKind.Assign:
        lhs, rhs = node.children
        target = _root_identifier(ast, lhs)
        du.defs.append((ast.node(target).value, target))
        if ast.node(lhs).kind == NodeKind.Index:
            du.killing = False
            _index_uses(ast, lhs, du.uses)
        _collect_uses(ast, rhs, du.uses)
        return
    if node.kind == NodeKind.CompoundAssign:
        lhs, rhs = node.children
        target = _root_identifier(ast, lhs)
        name = ast.node(target).value
        du.defs.append((name, target))
        du.uses.append((name, target))  # reads the old value
        if ast.node(lhs).kind == NodeKind.Index:
            du.killing = False
            _index_uses(ast, lhs, du.uses)
        _collect_uses(ast, rhs, du.uses)
        return
    if node.kind == NodeKind.UnaryOp and node.value in ("++", "--"):
        operand = node.children[0]
        target = _root_identifier(ast, operand)
        name = ast.node(target).value
        du.defs.append((name, target))
        du.uses.append((name, target))
        if ast.node(operand).kind == NodeKind.Index:
            du.killing = False
            _index_uses(ast, operand, du.uses)
        return
    # plain call or other effect expression: uses only
    _collect_uses(ast, node_id, du.uses)


def def_use_sets(ast: Ast, nodes: list[PdgNodeSpan]) -> list[DefUse]:
    result = []
    for pnode in nodes:
        du = DefUse()
        anode = ast.node(pnode.ast_node)
        if anode.kind == NodeKind.Decl:
            name_ref = anode.children[0]
            du.defs.append((anode.value, name_ref))
            if len(anode.children) == 2:
                _collect_uses(ast, anode.children[1], du.uses)
        elif anode.kind == NodeKind.ExprStmt:
            _analyze_effect(ast, anode.children[0], du)
        elif anode.kind == NodeKind.Return:
            if anode.children:
                _collect_uses(ast, anode.children[0], du.uses)
        elif anode.kind in (NodeKind.Break, NodeKind.Continue):
            pass
        elif _is_effect(anode):
            # for-init or for-update expression
            _analyze_effect(ast, pnode.ast_node, du)
        else:
            # predicate condition
            _collect_uses(ast, pnode.ast_node, du.uses)
        result.append(du)
    return result


def _is_effect(node: AstNode) -> bool:
    return node.kind in (NodeKind.Assign, NodeKind.CompoundAssign, NodeKind.Call) or (
        node.kind == NodeKind.UnaryOp and node.value in ("++", "--")
    )
