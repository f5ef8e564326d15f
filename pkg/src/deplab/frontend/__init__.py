from deplab.frontend.tokens import CodeToken, TokenKind, lex
from deplab.frontend.parser import Ast, AstNode, NodeKind, parse
from deplab.frontend.segment import NodeRole, PdgNodeSpan, segment_statements

__all__ = [
    "CodeToken",
    "TokenKind",
    "lex",
    "Ast",
    "AstNode",
    "NodeKind",
    "parse",
    "NodeRole",
    "PdgNodeSpan",
    "segment_statements",
]
