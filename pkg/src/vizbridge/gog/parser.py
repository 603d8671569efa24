"""Recursive-descent parser and pretty-printer for the script dialect.

Grammar::

    script    := statement*
    statement := ("ELEMENT" | "GUIDE") ":" call
    call      := dotted-ident "(" [expr ("," expr)*] ")"
    expr      := primary ["*" primary]          # "*" crosses two data dims
    primary   := call | dotted-ident | string | number | "(" number "," number ")"

Pretty-printing an AST and re-parsing yields a structurally identical AST.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from vizbridge.gog.lexer import (
    RESERVED_KEYWORDS,
    STATEMENT_KEYWORDS,
    Token,
    tokenize,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int, expected: frozenset[str] = frozenset()):
        self.line = line
        self.col = col
        self.expected = expected
        suffix = f" (expected one of: {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"{line}:{col}: {message}{suffix}")


@dataclass(frozen=True)
class Identifier:
    name: str


@dataclass(frozen=True)
class StringLit:
    value: str


@dataclass(frozen=True)
class NumberLit:
    value: float


@dataclass(frozen=True)
class TupleLit:
    x: float
    y: float


@dataclass(frozen=True)
class Cross:
    left: Union["CallExpr", Identifier]
    right: Union["CallExpr", Identifier]


Expr = Union["CallExpr", Identifier, StringLit, NumberLit, TupleLit, Cross]


@dataclass(frozen=True)
class CallExpr:
    path: tuple[str, ...]
    args: tuple[Expr, ...]

    @property
    def path_name(self) -> str:
        return ".".join(self.path)


@dataclass(frozen=True)
class GogStatement:
    kind: str  # "ELEMENT" | "GUIDE"
    call: CallExpr


class _Parser:
    def __init__(self, tokens: list[Token], source_len_line: int):
        self.tokens = tokens
        self.pos = 0
        self.end_line = source_len_line

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _error(self, message: str, expected: frozenset[str] = frozenset()) -> ParseError:
        tok = self.peek()
        if tok is None:
            prev = self.tokens[-1] if self.tokens else None
            line = prev.line if prev else 1
            col = prev.col + len(prev.value) if prev else 1
            return ParseError(f"{message} at end of input", line, col, expected)
        return ParseError(f"{message}, found {tok.kind} {tok.value!r}", tok.line, tok.col, expected)

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            raise self._error(f"expected {kind}", frozenset({kind}))
        self.pos += 1
        return tok

    def parse_script(self) -> list[GogStatement]:
        statements = []
        while self.peek() is not None:
            statements.append(self.parse_statement())
        return statements

    def parse_statement(self) -> GogStatement:
        tok = self.peek()
        if tok is None or tok.kind != "keyword":
            raise self._error(
                "expected statement keyword", frozenset(STATEMENT_KEYWORDS)
            )
        if tok.value in RESERVED_KEYWORDS:
            raise ParseError(
                f"statement keyword {tok.value} is reserved and not implemented",
                tok.line,
                tok.col,
                frozenset(STATEMENT_KEYWORDS),
            )
        self.pos += 1
        self.expect("colon")
        call = self.parse_call()
        return GogStatement(tok.value, call)

    def parse_dotted_path(self) -> tuple[str, ...]:
        first = self.expect("identifier")
        path = [first.value]
        while (tok := self.peek()) is not None and tok.kind == "dot":
            self.pos += 1
            path.append(self.expect("identifier").value)
        return tuple(path)

    def parse_call(self) -> CallExpr:
        path = self.parse_dotted_path()
        self.expect("lparen")
        args: list[Expr] = []
        tok = self.peek()
        if tok is not None and tok.kind != "rparen":
            args.append(self.parse_expr())
            while (tok := self.peek()) is not None and tok.kind == "comma":
                self.pos += 1
                args.append(self.parse_expr())
        self.expect("rparen")
        return CallExpr(path, tuple(args))

    def parse_expr(self) -> Expr:
        left = self.parse_primary()
        tok = self.peek()
        if tok is not None and tok.kind == "star":
            if not isinstance(left, (Identifier, CallExpr)):
                raise ParseError(
                    "left operand of '*' must be a column or call",
                    tok.line,
                    tok.col,
                )
            self.pos += 1
            right = self.parse_primary()
            if not isinstance(right, (Identifier, CallExpr)):
                raise self._error("right operand of '*' must be a column or call")
            if (nxt := self.peek()) is not None and nxt.kind == "star":
                raise ParseError("'*' does not chain", nxt.line, nxt.col)
            return Cross(left, right)
        return left

    def parse_primary(self) -> Expr:
        tok = self.peek()
        if tok is None:
            raise self._error(
                "expected expression",
                frozenset({"identifier", "string", "number", "lparen"}),
            )
        if tok.kind == "string":
            self.pos += 1
            return StringLit(tok.value)
        if tok.kind == "number":
            self.pos += 1
            return NumberLit(float(tok.value))
        if tok.kind == "lparen":
            self.pos += 1
            x = self.expect("number")
            self.expect("comma")
            y = self.expect("number")
            self.expect("rparen")
            return TupleLit(float(x.value), float(y.value))
        if tok.kind == "identifier":
            path = self.parse_dotted_path()
            nxt = self.peek()
            if nxt is not None and nxt.kind == "lparen":
                self.pos += 1
                args: list[Expr] = []
                if (t := self.peek()) is not None and t.kind != "rparen":
                    args.append(self.parse_expr())
                    while (t := self.peek()) is not None and t.kind == "comma":
                        self.pos += 1
                        args.append(self.parse_expr())
                self.expect("rparen")
                return CallExpr(path, tuple(args))
            if len(path) > 1:
                return CallExpr(path, ())  # dotted bare name is a niladic call
            return Identifier(path[0])
        raise self._error(
            "expected expression",
            frozenset({"identifier", "string", "number", "lparen"}),
        )


def parse(source: str) -> list[GogStatement]:
    tokens = tokenize(source)
    parser = _Parser(tokens, source.count("\n") + 1)
    return parser.parse_script()


def _fmt_number(v: float) -> str:
    if v == int(v):
        return str(int(v))
    return repr(v)


def _print_expr(expr: Expr) -> str:
    if isinstance(expr, Identifier):
        return expr.name
    if isinstance(expr, StringLit):
        escaped = expr.value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(expr, NumberLit):
        return _fmt_number(expr.value)
    if isinstance(expr, TupleLit):
        return f"({_fmt_number(expr.x)},{_fmt_number(expr.y)})"
    if isinstance(expr, Cross):
        return f"{_print_expr(expr.left)}*{_print_expr(expr.right)}"
    if isinstance(expr, CallExpr):
        args = ", ".join(_print_expr(a) for a in expr.args)
        return f"{expr.path_name}({args})"
    raise TypeError(f"unknown expression node {expr!r}")


def pretty_print(statements: list[GogStatement]) -> str:
    """Canonical source form; parsing it again reproduces the AST."""
    return "\n".join(f"{s.kind}: {_print_expr(s.call)}" for s in statements)
