"""Lexical layer for the grammar-of-graphics script dialect.

Token kinds: keyword, identifier, dot, star, comma, lparen, rparen, colon,
string, number. ``#`` starts a line comment; whitespace and comments are
dropped. Statement keywords ELEMENT/GUIDE are live; DATA/SCALE/COORD are
reserved for forward compatibility.
"""

from __future__ import annotations

from dataclasses import dataclass

STATEMENT_KEYWORDS = ("ELEMENT", "GUIDE")
RESERVED_KEYWORDS = ("DATA", "SCALE", "COORD")
KEYWORDS = STATEMENT_KEYWORDS + RESERVED_KEYWORDS

_PUNCT = {
    ".": "dot",
    "*": "star",
    ",": "comma",
    "(": "lparen",
    ")": "rparen",
    ":": "colon",
}


class LexError(Exception):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    col: int

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.value!r})"


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)

    def advance(k: int = 1) -> None:
        nonlocal i, line, col
        for _ in range(k):
            if i < n and source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = source[i]
        if ch in " \t\r\n":
            advance()
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                advance()
            continue
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, line, col))
            advance()
            continue
        if ch == '"':
            start_line, start_col = line, col
            advance()
            chars: list[str] = []
            while True:
                if i >= n or source[i] == "\n":
                    raise LexError("unterminated string", start_line, start_col)
                c = source[i]
                if c == "\\" and i + 1 < n and source[i + 1] in ('"', "\\"):
                    chars.append(source[i + 1])
                    advance(2)
                    continue
                if c == '"':
                    advance()
                    break
                chars.append(c)
                advance()
            tokens.append(Token("string", "".join(chars), start_line, start_col))
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and source[i + 1].isdigit()):
            start_line, start_col = line, col
            j = i + 1 if ch == "-" else i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            text = source[i:j]
            advance(j - i)
            tokens.append(Token("number", text, start_line, start_col))
            continue
        if _is_ident_start(ch):
            start_line, start_col = line, col
            j = i
            while j < n and _is_ident(source[j]):
                j += 1
            text = source[i:j]
            advance(j - i)
            kind = "keyword" if text in KEYWORDS else "identifier"
            tokens.append(Token(kind, text, start_line, start_col))
            continue
        raise LexError(f"illegal character {ch!r}", line, col)
    return tokens
