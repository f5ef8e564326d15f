"""Canonical source rendering of an AST.

Used by the generator round-trip property: re-parsing the rendered text must
give a structurally equal tree. Types are not stored in the AST, so all
functions render as ``void`` and all declarations as ``int``; structural
equality ignores this.
"""

from __future__ import annotations

from deplab.frontend.parser import Ast, NodeKind

_PRECEDENCE = {
    "||": 1, "&&": 2,
    "==": 3, "!=": 3,
    "<": 4, ">": 4, "<=": 4, ">=": 4,
    "+": 5, "-": 5,
    "*": 6, "/": 6, "%": 6,
}
_UNARY_PRECEDENCE = 7


def _expr(ast: Ast, nid: int, parent_prec: int = 0, right_side: bool = False) -> str:
    node = ast.node(nid)
    if node.kind == NodeKind.IdentifierRef or node.kind == NodeKind.Literal:
        return node.value
    if node.kind == NodeKind.Call:
        args = ", ".join(_expr(ast, c) for c in node.children[1:])
        return f"{node.value}({args})"
    if node.kind == NodeKind.Index:
        base, index = node.children
        return f"{_expr(ast, base, _UNARY_PRECEDENCE)}[{_expr(ast, index)}]"
    if node.kind == NodeKind.UnaryOp:
        inner = _expr(ast, node.children[0], _UNARY_PRECEDENCE)
        return f"{node.value}{inner}"
    if node.kind == NodeKind.BinaryOp:
        prec = _PRECEDENCE[node.value]
        left = _expr(ast, node.children[0], prec, False)
        right = _expr(ast, node.children[1], prec, True)
        text = f"{left} {node.value} {right}"
        needs_parens = prec < parent_prec or (prec == parent_prec and right_side)
        return f"({text})" if needs_parens else text
    if node.kind in (NodeKind.Assign, NodeKind.CompoundAssign):
        lhs = _expr(ast, node.children[0])
        rhs = _expr(ast, node.children[1])
        return f"{lhs} {node.value} {rhs}"
    raise AssertionError(f"not an expression node: {node.kind!r}")


def _stmt(ast: Ast, nid: int, indent: int, out: list[str]):
    pad = "    " * indent
    node = ast.node(nid)
    if node.kind == NodeKind.Decl:
        init = f" = {_expr(ast, node.children[1])}" if len(node.children) == 2 else ""
        out.append(f"{pad}int {node.value}{init};")
    elif node.kind == NodeKind.ExprStmt:
        out.append(f"{pad}{_expr(ast, node.children[0])};")
    elif node.kind == NodeKind.Return:
        expr = f" {_expr(ast, node.children[0])}" if node.children else ""
        out.append(f"{pad}return{expr};")
    elif node.kind == NodeKind.Break:
        out.append(f"{pad}break;")
    elif node.kind == NodeKind.Continue:
        out.append(f"{pad}continue;")
    elif node.kind == NodeKind.Block:
        out.append(f"{pad}{{")
        for child in node.children:
            _stmt(ast, child, indent + 1, out)
        out.append(f"{pad}}}")
    elif node.kind == NodeKind.If:
        out.append(f"{pad}if ({_expr(ast, node.children[0])}) {{")
        _body(ast, node.children[1], indent, out)
        if len(node.children) == 3:
            out.append(f"{pad}}} else {{")
            _body(ast, node.children[2], indent, out)
        out.append(f"{pad}}}")
    elif node.kind == NodeKind.While:
        out.append(f"{pad}while ({_expr(ast, node.children[0])}) {{")
        _body(ast, node.children[1], indent, out)
        out.append(f"{pad}}}")
    elif node.kind == NodeKind.For:
        init, cond, update, body = node.children
        header = f"for ({_expr(ast, init)}; {_expr(ast, cond)}; {_expr(ast, update)})"
        out.append(f"{pad}{header} {{")
        _body(ast, body, indent, out)
        out.append(f"{pad}}}")
    else:
        raise AssertionError(f"not a statement node: {node.kind!r}")


def _body(ast: Ast, nid: int, indent: int, out: list[str]):
    node = ast.node(nid)
    if node.kind == NodeKind.Block:
        for child in node.children:
            _stmt(ast, child, indent + 1, out)
    else:
        _stmt(ast, nid, indent + 1, out)


def pretty_print(ast: Ast) -> str:
    root = ast.node(ast.root)
    params = ", ".join(f"int {ast.node(p).value}" for p in root.children[:-1])
    out = [f"void {root.value}({params}) {{"]
    _body(ast, root.children[-1], 0, out)
    out.append("}")
    return "\n".join(out) + "\n"
