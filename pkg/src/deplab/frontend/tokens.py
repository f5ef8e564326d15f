"""Maximal-munch lexer for the supported C subset.

Spans are byte offsets into the UTF-8 encoding of the source. Comments and
whitespace produce no tokens but the surviving spans stay absolute, so the
round-trip property holds: ``source_bytes[t.start:t.end] == t.text`` for
every token.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from deplab.errors import LexError


class TokenKind(enum.IntEnum):
    Identifier = 0
    Keyword = 1
    IntLiteral = 2
    CharLiteral = 3
    StringLiteral = 4
    Operator = 5
    Punctuation = 6


KEYWORDS = frozenset(
    {
        "int", "char", "void",
        "if", "else", "while", "for",
        "return", "break", "continue",
        # recognized so the parser can reject them with a precise error
        "goto", "switch", "case", "default", "do",
    }
)

# longest first so maximal munch falls out of ordered matching
OPERATORS = [
    "+=", "-=", "*=", "/=", "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+", "-", "*", "/", "%", "<", ">", "=", "!", "&", "|", "^", "~", "?", ":",
]

PUNCTUATION = "(){}[];,"

_IDENT_START = frozenset(b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | frozenset(b"0123456789")
_DIGITS = frozenset(b"0123456789")
_WHITESPACE = frozenset(b" \t\r\n\x0b\x0c")


@dataclass(frozen=True)
class CodeToken:
    kind: TokenKind
    text: str
    start: int
    end: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


def lex(source: str) -> list[CodeToken]:
    """Tokenize ``source`` into CodeTokens with absolute byte spans.

    Raises LexError on an unrecognized byte or an unterminated
    literal/comment. Non-ASCII bytes are accepted only inside string and
    character literals and comments.
    """
    data = source.encode("utf-8")
    n = len(data)
    tokens: list[CodeToken] = []
    i = 0
    while i < n:
        b = data[i]
        if b in _WHITESPACE:
            i += 1
            continue
        if b == 0x2F and i + 1 < n:  # '/'
            nxt = data[i + 1]
            if nxt == 0x2F:  # line comment
                j = i + 2
                while j < n and data[j] != 0x0A:
                    j += 1
                i = j
                continue
            if nxt == 0x2A:  # block comment
                j = i + 2
                while j + 1 < n:
                    if data[j] == 0x2A and data[j + 1] == 0x2F:
                        break
                    j += 1
                else:
                    raise LexError(i, "unterminated block comment")
                if j + 1 >= n:
                    raise LexError(i, "unterminated block comment")
                i = j + 2
                continue
        if b in _IDENT_START:
            j = i + 1
            while j < n and data[j] in _IDENT_CONT:
                j += 1
            text = data[i:j].decode("utf-8")
            kind = TokenKind.Keyword if text in KEYWORDS else TokenKind.Identifier
            tokens.append(CodeToken(kind, text, i, j))
            i = j
            continue
        if b in _DIGITS:
            j = i + 1
            while j < n and data[j] in _DIGITS:
                j += 1
            tokens.append(CodeToken(TokenKind.IntLiteral, data[i:j].decode(), i, j))
            i = j
            continue
        if b == 0x27 or b == 0x22:  # ' or "
            close = b
            kind = TokenKind.CharLiteral if b == 0x27 else TokenKind.StringLiteral
            j = i + 1
            while j < n:
                c = data[j]
                if c == 0x0A:
                    raise LexError(i, "unterminated literal")
                if c == 0x5C:  # backslash escape: skip the escaped byte
                    j += 2
                    continue
                if c == close:
                    break
                j += 1
            if j >= n:
                raise LexError(i, "unterminated literal")
            tokens.append(CodeToken(kind, data[i : j + 1].decode("utf-8"), i, j + 1))
            i = j + 1
            continue
        ch = chr(b)
        matched = False
        for op in OPERATORS:
            if data[i : i + len(op)] == op.encode():
                tokens.append(CodeToken(TokenKind.Operator, op, i, i + len(op)))
                i += len(op)
                matched = True
                break
        if matched:
            continue
        if ch in PUNCTUATION:
            tokens.append(CodeToken(TokenKind.Punctuation, ch, i, i + 1))
            i += 1
            continue
        raise LexError(i, f"unrecognized byte 0x{b:02x}")
    return tokens
