"""The in-process computing backend behind the eval endpoint.

The bridge forwards `eval` expressions to whatever backend it was attached
to; this repo ships a deliberately tiny one that evaluates integer
arithmetic with + - * only, enough to exercise the eval channel end to end.
"""

from __future__ import annotations

import ast
from typing import Protocol


class UnsupportedExpression(Exception):
    pass


class SceBackend(Protocol):
    def eval(self, expression: str) -> int: ...


class ArithmeticSce:
    """Evaluates integer expressions over +, -, * (unary minus allowed)."""

    def eval(self, expression: str) -> int:
        try:
            tree = ast.parse(expression, mode="eval")
        except SyntaxError as exc:
            raise UnsupportedExpression(f"cannot parse {expression!r}: {exc}") from exc
        return self._eval_node(tree.body)

    def _eval_node(self, node: ast.AST) -> int:
        if isinstance(node, ast.Constant) and isinstance(node.value, int) \
                and not isinstance(node.value, bool):
            return node.value
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -self._eval_node(node.operand)
        if isinstance(node, ast.BinOp):
            left = self._eval_node(node.left)
            right = self._eval_node(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
        raise UnsupportedExpression(
            "only integer arithmetic with +, -, * is supported"
        )
