"""Recursive-descent parser for the C subset.

The subset covers exactly one function definition per input: types ``int``,
``char``, ``void``; declarations with optional initializer; expression
statements (assignment, compound assignment, call, prefix ``++``/``--``);
``if``/``else``, ``while``, ``for`` (all three clauses required), ``return``,
``break``, ``continue``, nested blocks; expressions over literals,
identifiers, calls, array indexing, the usual binary operators and prefix
unary operators.

Recognized-but-excluded C features (goto, switch, do, ternary, bitwise
operators, pointers, postfix increment, array declarators, multi-declarator
declarations) raise UnsupportedConstruct instead of mis-parsing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from deplab.errors import ParseError, UnsupportedConstruct
from deplab.frontend.tokens import CodeToken, TokenKind


class NodeKind(enum.IntEnum):
    Function = 0
    Block = 1
    Decl = 2
    ExprStmt = 3
    If = 4
    While = 5
    For = 6
    Return = 7
    Break = 8
    Continue = 9
    Call = 10
    Assign = 11
    CompoundAssign = 12
    BinaryOp = 13
    UnaryOp = 14
    IdentifierRef = 15
    Literal = 16
    Index = 17


@dataclass
class AstNode:
    kind: NodeKind
    start: int
    end: int
    children: list[int] = field(default_factory=list)
    value: str | None = None


@dataclass
class Ast:
    nodes: list[AstNode]
    root: int

    def node(self, node_id: int) -> AstNode:
        return self.nodes[node_id]

    def walk(self, node_id: int | None = None):
        """Yield node ids in pre-order starting at ``node_id`` (default root)."""
        stack = [self.root if node_id is None else node_id]
        while stack:
            nid = stack.pop()
            yield nid
            stack.extend(reversed(self.nodes[nid].children))

    def structure(self, node_id: int | None = None):
        """Span-free shape of the tree, for structural equality checks."""
        nid = self.root if node_id is None else node_id
        node = self.nodes[nid]
        return (node.kind, node.value, tuple(self.structure(c) for c in node.children))


_UNSUPPORTED_KEYWORDS = {"goto", "switch", "case", "default", "do"}
_BINARY_LEVELS = [
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", ">", "<=", ">="),
    ("+", "-"),
    ("*", "/", "%"),
]
_EFFECT_KINDS = (NodeKind.Assign, NodeKind.CompoundAssign, NodeKind.Call)


class _Parser:
    def __init__(self, tokens: list[CodeToken]):
        self.tokens = tokens
        self.pos = 0
        self.nodes: list[AstNode] = []

    # -- token stream helpers ------------------------------------------------

    def peek(self) -> CodeToken | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def here(self) -> int:
        tok = self.peek()
        if tok is not None:
            return tok.start
        return self.tokens[-1].end if self.tokens else 0

    def error(self, expected: str):
        tok = self.peek()
        raise ParseError(self.here(), expected, repr(tok.text) if tok else "end of input")

    def advance(self) -> CodeToken:
        tok = self.peek()
        if tok is None:
            self.error("more input")
        self.pos += 1
        return tok

    def expect_text(self, text: str) -> CodeToken:
        tok = self.peek()
        if tok is None or tok.text != text:
            self.error(repr(text))
        return self.advance()

    def match(self, text: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.text == text:
            self.pos += 1
            return True
        return False

    def add(self, node: AstNode) -> int:
        self.nodes.append(node)
        return len(self.nodes) - 1

    # -- grammar -------------------------------------------------------------

    def parse_function(self) -> int:
        start = self.here()
        self.parse_type_name()
        name = self.expect_identifier("function name")
        self.expect_text("(")
        params = self.parse_params()
        self.expect_text(")")
        body = self.parse_block()
        if self.peek() is not None:
            self.error("end of input after function body")
        end = self.nodes[body].end
        return self.add(AstNode(NodeKind.Function, start, end, params + [body], name.text))

    def parse_type_name(self) -> CodeToken:
        tok = self.peek()
        if tok is None or tok.kind != TokenKind.Keyword or tok.text not in ("int", "char", "void"):
            self.error("type name ('int', 'char' or 'void')")
        tok = self.advance()
        if self.peek() is not None and self.peek().text == "*":
            raise UnsupportedConstruct(self.here(), "pointer declarator")
        return tok

    def expect_identifier(self, what: str) -> CodeToken:
        tok = self.peek()
        if tok is None or tok.kind != TokenKind.Identifier:
            if tok is not None and tok.kind == TokenKind.Keyword and tok.text in _UNSUPPORTED_KEYWORDS:
                raise UnsupportedConstruct(tok.start, f"'{tok.text}' statement")
            self.error(what)
        return self.advance()

    def parse_params(self) -> list[int]:
        # () and (void) mean no parameters; otherwise `type name` pairs
        tok = self.peek()
        if tok is not None and tok.text == ")":
            return []
        if tok is not None and tok.text == "void" and self.tokens[self.pos + 1 : self.pos + 2] and \
                self.tokens[self.pos + 1].text == ")":
            self.advance()
            return []
        params = []
        while True:
            self.parse_type_name()
            name = self.expect_identifier("parameter name")
            params.append(self.add(AstNode(NodeKind.IdentifierRef, name.start, name.end, [], name.text)))
            if not self.match(","):
                break
        return params

    def parse_block(self) -> int:
        start = self.expect_text("{").start
        stmts = []
        while True:
            tok = self.peek()
            if tok is None:
                self.error("'}'")
            if tok.text == "}":
                break
            stmts.append(self.parse_statement())
        end = self.expect_text("}").end
        return self.add(AstNode(NodeKind.Block, start, end, stmts))

    def parse_statement(self) -> int:
        tok = self.peek()
        if tok is None:
            self.error("statement")
        if tok.kind == TokenKind.Keyword:
            if tok.text in _UNSUPPORTED_KEYWORDS:
                raise UnsupportedConstruct(tok.start, f"'{tok.text}' statement")
            if tok.text in ("int", "char", "void"):
                return self.parse_declaration()
            if tok.text == "if":
                return self.parse_if()
            if tok.text == "while":
                return self.parse_while()
            if tok.text == "for":
                return self.parse_for()
            if tok.text == "return":
                start = self.advance().start
                expr = None
                if self.peek() is not None and self.peek().text != ";":
                    expr = self.parse_expr()
                end = self.expect_text(";").end
                children = [] if expr is None else [expr]
                return self.add(AstNode(NodeKind.Return, start, end, children))
            if tok.text in ("break", "continue"):
                start = self.advance().start
                end = self.expect_text(";").end
                kind = NodeKind.Break if tok.text == "break" else NodeKind.Continue
                return self.add(AstNode(kind, start, end))
            if tok.text == "else":
                self.error("statement ('else' without matching 'if')")
        if tok.text == "{":
            return self.parse_block()
        return self.parse_expr_statement()

    def parse_declaration(self) -> int:
        type_tok = self.parse_type_name()
        if type_tok.text == "void":
            raise ParseError(type_tok.start, "non-void declaration type")
        name = self.expect_identifier("declared name")
        name_ref = self.add(AstNode(NodeKind.IdentifierRef, name.start, name.end, [], name.text))
        children = [name_ref]
        tok = self.peek()
        if tok is not None and tok.text == "[":
            raise UnsupportedConstruct(tok.start, "array declarator")
        if tok is not None and tok.text == ",":
            raise UnsupportedConstruct(tok.start, "multi-declarator declaration")
        if self.match("="):
            children.append(self.parse_expr())
        tok = self.peek()
        if tok is not None and tok.text == ",":
            raise UnsupportedConstruct(tok.start, "multi-declarator declaration")
        end = self.expect_text(";").end
        return self.add(AstNode(NodeKind.Decl, type_tok.start, end, children, name.text))

    def parse_if(self) -> int:
        start = self.expect_text("if").start
        self.expect_text("(")
        cond = self.parse_expr()
        self.expect_text(")")
        then_stmt = self.parse_statement()
        children = [cond, then_stmt]
        end = self.nodes[then_stmt].end
        if self.peek() is not None and self.peek().text == "else":
            self.advance()
            else_stmt = self.parse_statement()
            children.append(else_stmt)
            end = self.nodes[else_stmt].end
        return self.add(AstNode(NodeKind.If, start, end, children))

    def parse_while(self) -> int:
        start = self.expect_text("while").start
        self.expect_text("(")
        cond = self.parse_expr()
        self.expect_text(")")
        body = self.parse_statement()
        return self.add(AstNode(NodeKind.While, start, self.nodes[body].end, [cond, body]))

    def parse_for(self) -> int:
        start = self.expect_text("for").start
        self.expect_text("(")
        init = self.parse_effect_expr()
        self.expect_text(";")
        cond = self.parse_expr()
        self.expect_text(";")
        update = self.parse_effect_expr()
        self.expect_text(")")
        body = self.parse_statement()
        return self.add(AstNode(NodeKind.For, start, self.nodes[body].end, [init, cond, update, body]))

    def parse_expr_statement(self) -> int:
        start = self.here()
        expr = self.parse_effect_expr()
        end = self.expect_text(";").end
        return self.add(AstNode(NodeKind.ExprStmt, start, end, [expr]))

    def parse_effect_expr(self) -> int:
        """Expression with an effect: assignment, compound assignment, call,
        or prefix increment/decrement. Used for expression statements and
        for-clauses."""
        start = self.here()
        expr = self.parse_expr()
        tok = self.peek()
        if tok is not None and tok.text in ("=", "+=", "-=", "*=", "/="):
            op = self.advance().text
            self.check_lvalue(expr, tok.start)
            rhs = self.parse_expr()
            nxt = self.peek()
            if nxt is not None and nxt.text in ("=", "+=", "-=", "*=", "/="):
                self.error("';' (chained assignment is not supported)")
            kind = NodeKind.Assign if op == "=" else NodeKind.CompoundAssign
            return self.add(AstNode(kind, self.nodes[expr].start, self.nodes[rhs].end, [expr, rhs], op))
        node = self.nodes[expr]
        is_update = node.kind == NodeKind.UnaryOp and node.value in ("++", "--")
        if node.kind not in _EFFECT_KINDS and not is_update:
            raise ParseError(start, "statement with an effect (assignment, call or '++'/'--')")
        return expr

    def check_lvalue(self, node_id: int, at: int):
        node = self.nodes[node_id]
        if node.kind == NodeKind.IdentifierRef:
            return
        if node.kind == NodeKind.Index:
            self.check_lvalue(node.children[0], at)
            return
        raise ParseError(at, "assignable left-hand side (identifier or array element)")

    def parse_expr(self, level: int = 0) -> int:
        if level == len(_BINARY_LEVELS):
            return self.parse_unary()
        left = self.parse_expr(level + 1)
        while True:
            tok = self.peek()
            if tok is None or tok.kind != TokenKind.Operator:
                break
            if level == 0 and tok.text in ("&", "|", "^"):
                raise UnsupportedConstruct(tok.start, f"bitwise operator '{tok.text}'")
            if level == 0 and tok.text == "?":
                raise UnsupportedConstruct(tok.start, "ternary conditional")
            if tok.text not in _BINARY_LEVELS[level]:
                break
            op = self.advance().text
            right = self.parse_expr(level + 1)
            left = self.add(
                AstNode(NodeKind.BinaryOp, self.nodes[left].start, self.nodes[right].end, [left, right], op)
            )
        return left

    def parse_unary(self) -> int:
        tok = self.peek()
        if tok is not None and tok.kind == TokenKind.Operator:
            if tok.text in ("-", "!", "++", "--"):
                start = self.advance().start
                operand = self.parse_unary()
                if tok.text in ("++", "--"):
                    self.check_lvalue(operand, start)
                return self.add(
                    AstNode(NodeKind.UnaryOp, start, self.nodes[operand].end, [operand], tok.text)
                )
            if tok.text == "&":
                raise UnsupportedConstruct(tok.start, "address-of operator")
            if tok.text == "*":
                raise UnsupportedConstruct(tok.start, "pointer dereference")
            if tok.text == "~":
                raise UnsupportedConstruct(tok.start, "bitwise operator '~'")
        return self.parse_postfix()

    def parse_postfix(self) -> int:
        expr = self.parse_primary()
        while True:
            tok = self.peek()
            if tok is None:
                break
            if tok.text == "(":
                if self.nodes[expr].kind != NodeKind.IdentifierRef:
                    self.error("call of a named function")
                self.advance()
                args = []
                if self.peek() is not None and self.peek().text != ")":
                    while True:
                        args.append(self.parse_expr())
                        if not self.match(","):
                            break
                end = self.expect_text(")").end
                callee = self.nodes[expr]
                expr = self.add(AstNode(NodeKind.Call, callee.start, end, [expr] + args, callee.value))
                continue
            if tok.text == "[":
                self.advance()
                index = self.parse_expr()
                end = self.expect_text("]").end
                expr = self.add(AstNode(NodeKind.Index, self.nodes[expr].start, end, [expr, index]))
                continue
            if tok.text in ("++", "--"):
                raise UnsupportedConstruct(tok.start, "postfix increment/decrement")
            break
        return expr

    def parse_primary(self) -> int:
        tok = self.peek()
        if tok is None:
            self.error("expression")
        if tok.kind == TokenKind.IntLiteral or tok.kind == TokenKind.CharLiteral or \
                tok.kind == TokenKind.StringLiteral:
            self.advance()
            return self.add(AstNode(NodeKind.Literal, tok.start, tok.end, [], tok.text))
        if tok.kind == TokenKind.Identifier:
            self.advance()
            return self.add(AstNode(NodeKind.IdentifierRef, tok.start, tok.end, [], tok.text))
        if tok.text == "(":
            self.advance()
            expr = self.parse_expr()
            self.expect_text(")")
            return expr
        self.error("expression")


def parse(tokens: list[CodeToken]) -> Ast:
    """Parse one function definition into an arena Ast."""
    parser = _Parser(tokens)
    root = parser.parse_function()
    return Ast(parser.nodes, root)
