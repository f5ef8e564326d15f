import pytest

from deplab.errors import ParseError, UnsupportedConstruct
from deplab.frontend import NodeKind, lex, parse


def parse_src(src):
    return parse(lex(src))


def kinds_on_path(ast, *path):
    node = ast.node(ast.root)
    kinds = [node.kind]
    for idx in path:
        node = ast.node(node.children[idx])
        kinds.append(node.kind)
    return kinds


def test_decl_with_initializer():
    ast = parse_src("void f() { int a = 1; }")
    assert kinds_on_path(ast, -1, 0) == [NodeKind.Function, NodeKind.Block, NodeKind.Decl]
    decl = ast.node(ast.node(ast.node(ast.root).children[-1]).children[0])
    assert decl.value == "a"
    assert [ast.node(c).kind for c in decl.children] == [NodeKind.IdentifierRef, NodeKind.Literal]


def test_if_with_comparison():
    ast = parse_src("void f() { if (a > 0) { b = 1; } }")
    block = ast.node(ast.node(ast.root).children[-1])
    if_node = ast.node(block.children[0])
    assert if_node.kind == NodeKind.If
    cond = ast.node(if_node.children[0])
    assert cond.kind == NodeKind.BinaryOp and cond.value == ">"
    then = ast.node(if_node.children[1])
    assert then.kind == NodeKind.Block
    assert ast.node(then.children[0]).kind == NodeKind.ExprStmt


def test_missing_expression_position():
    src = "void f() { x = ; }"
    with pytest.raises(ParseError) as err:
        parse_src(src)
    assert err.value.position == src.index(";")


def test_child_spans_contained_in_parent():
    ast = parse_src("int g(int a, int b) { if (a < b) { return a; } return b; }")
    for nid in ast.walk():
        node = ast.node(nid)
        for c in node.children:
            child = ast.node(c)
            assert node.start <= child.start and child.end <= node.end


def test_identifier_ref_spans_cover_one_token():
    src = "void f() { total = base + rate; }"
    ast = parse_src(src)
    tokens = {(t.start, t.end) for t in lex(src)}
    for nid in ast.walk():
        node = ast.node(nid)
        if node.kind == NodeKind.IdentifierRef:
            assert (node.start, node.end) in tokens


def test_compound_assign_and_call():
    ast = parse_src("void f() { s += g(x, y + 1); }")
    stmt = ast.node(ast.node(ast.node(ast.root).children[-1]).children[0])
    compound = ast.node(stmt.children[0])
    assert compound.kind == NodeKind.CompoundAssign and compound.value == "+="
    call = ast.node(compound.children[1])
    assert call.kind == NodeKind.Call and call.value == "g"
    assert len(call.children) == 3  # callee ref + two arguments


def test_array_index_chain():
    ast = parse_src("void f() { m[i][j] = m[j][i]; }")
    stmt = ast.node(ast.node(ast.node(ast.root).children[-1]).children[0])
    assign = ast.node(stmt.children[0])
    assert ast.node(assign.children[0]).kind == NodeKind.Index


def test_precedence_mul_over_add():
    ast = parse_src("void f() { x = a + b * c; }")
    assign = ast.node(ast.node(ast.node(ast.node(ast.root).children[-1]).children[0]).children[0])
    plus = ast.node(assign.children[1])
    assert plus.value == "+"
    assert ast.node(plus.children[1]).value == "*"


def test_else_branch():
    ast = parse_src("void f() { if (c) { a = 1; } else { a = 2; } }")
    if_node = ast.node(ast.node(ast.node(ast.root).children[-1]).children[0])
    assert len(if_node.children) == 3


def test_for_requires_all_clauses():
    parse_src("void f() { for (i = 0; i < 3; i += 1) { s = s + i; } }")
    with pytest.raises(ParseError):
        parse_src("void f() { for (; i < 3; i += 1) { } }")


@pytest.mark.parametrize(
    "src,what",
    [
        ("void f() { goto end; }", "goto"),
        ("void f() { switch (x) { } }", "switch"),
        ("void f() { x = a ? b : c; }", "ternary"),
        ("void f() { x = a & b; }", "bitwise"),
        ("void f() { x = a | b; }", "bitwise"),
        ("void f(int *p) { }", "pointer"),
        ("void f() { int a, b; }", "multi-declarator"),
        ("void f() { int a[5]; }", "array declarator"),
        ("void f() { i++; }", "postfix"),
        ("void f() { x = &a; }", "address-of"),
    ],
)
def test_unsupported_constructs(src, what):
    with pytest.raises(UnsupportedConstruct) as err:
        parse_src(src)
    assert what.split("-")[0] in str(err.value)


@pytest.mark.parametrize(
    "src",
    [
        "void f() { x = 1 }",          # missing semicolon
        "void f() { a = b = 1; }",     # chained assignment
        "void f() { 3 + 4; }",         # statement without effect
        "void f() { } int g() { }",    # two functions
        "void f() { else { } }",       # dangling else
        "void f() { void v; }",        # void declaration
    ],
)
def test_parse_errors(src):
    with pytest.raises(ParseError):
        parse_src(src)


def test_trailing_garbage_rejected():
    with pytest.raises(ParseError):
        parse_src("void f() { } ;")
