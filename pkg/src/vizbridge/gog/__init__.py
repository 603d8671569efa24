"""Lexer, parser, and compiler for the grammar-of-graphics script dialect."""

from vizbridge.gog.lexer import LexError, Token, tokenize
from vizbridge.gog.parser import (
    CallExpr,
    Cross,
    GogStatement,
    Identifier,
    NumberLit,
    ParseError,
    StringLit,
    TupleLit,
    parse,
    pretty_print,
)
from vizbridge.gog.compiler import (
    CompileError,
    GeomElement,
    Guide,
    SceneGraph,
    compile_scene,
)
from vizbridge.gog.kde import KdeError, KdeSpec, epanechnikov_kde_2d, silverman_bandwidth
from vizbridge.gog.contour import extract_contours

__all__ = [
    "CallExpr",
    "CompileError",
    "Cross",
    "GeomElement",
    "GogStatement",
    "Guide",
    "Identifier",
    "KdeError",
    "KdeSpec",
    "LexError",
    "NumberLit",
    "ParseError",
    "SceneGraph",
    "StringLit",
    "Token",
    "TupleLit",
    "compile_scene",
    "epanechnikov_kde_2d",
    "extract_contours",
    "parse",
    "pretty_print",
    "silverman_bandwidth",
    "tokenize",
]
