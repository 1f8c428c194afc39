"""Text grammar for polynomials.

Identifiers (optionally indexed, as in ``u[1,2]``), integer literals,
rational literals ``p/q``, ``+ - * ^`` and parentheses.  ``^`` takes an
integer exponent; negative exponents are only allowed on invertible
variables (or on other units such as ``2*y``).
"""

from __future__ import annotations

import ast
import re
from fractions import Fraction

from .exactpoly import NonUnitImageError, Poly, RingSpec


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", offset: int = None):
        self.text = text
        self.offset = offset
        where = f" at column {offset + 1}" if offset is not None else ""
        super().__init__(f"{message}{where} in {text!r}")


_INDEXED = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\[\s*(\d+(?:\s*,\s*\d+)*)\s*\]")


def canonical_name(text: str) -> str:
    """Normalize whitespace inside indexed names: ``u[1, 2]`` -> ``u[1,2]``."""
    def fix(m):
        idx = re.sub(r"\s+", "", m.group(2))
        return f"{m.group(1)}[{idx}]"

    return _INDEXED.sub(fix, text)


def _prepare(text: str) -> str:
    if "**" in text:
        raise ParseError("use '^' for powers", text, text.index("**"))
    return text.replace("^", "**")


def parse_poly(text: str, ring: RingSpec) -> Poly:
    if not isinstance(text, str):
        if isinstance(text, (int, Fraction)):
            return ring.const(text)
        raise ParseError(f"expected an expression string, got {type(text).__name__}", str(text))
    if not text.strip():
        raise ParseError("empty expression", text)
    try:
        tree = ast.parse(_prepare(text.strip()), mode="eval")
    except SyntaxError as exc:
        raise ParseError("syntax error", text, (exc.offset or 1) - 1) from None
    return _Evaluator(ring, text).eval(tree.body)


class _Evaluator:
    def __init__(self, ring: RingSpec, text: str):
        self.ring = ring
        self.text = text

    def fail(self, node, message):
        raise ParseError(message, self.text, getattr(node, "col_offset", None))

    def name(self, node) -> str:
        if isinstance(node, ast.Name):
            return node.id
        if isinstance(node, ast.Subscript) and isinstance(node.value, ast.Name):
            idx = node.slice
            parts = idx.elts if isinstance(idx, ast.Tuple) else [idx]
            nums = []
            for p in parts:
                if not (isinstance(p, ast.Constant) and type(p.value) is int):
                    self.fail(node, "indices must be integer literals")
                nums.append(str(p.value))
            return f"{node.value.id}[{','.join(nums)}]"
        self.fail(node, "expected a variable")

    def integer(self, node) -> int:
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return node.value
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = self.integer(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        self.fail(node, "exponent must be an integer literal")

    def eval(self, node) -> Poly:
        if isinstance(node, ast.Constant):
            if type(node.value) is not int:
                self.fail(node, f"unsupported literal {node.value!r}")
            return self.ring.const(node.value)
        if isinstance(node, (ast.Name, ast.Subscript)):
            n = self.name(node)
            if n not in self.ring:
                self.fail(node, f"unknown variable {n!r}")
            return self.ring.var(n)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = self.eval(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                base = self.eval(node.left)
                n = self.integer(node.right)
                if n < 0 and not base.is_unit_monomial():
                    self.fail(node, "negative exponent on a non-invertible expression")
                try:
                    return base ** n
                except (ValueError, NonUnitImageError) as exc:
                    self.fail(node, str(exc))
            left, right = self.eval(node.left), self.eval(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not right.is_constant() or right.is_zero():
                    self.fail(node, "division only by nonzero rational constants")
                return left / right.constant_value()
        self.fail(node, f"unsupported syntax {type(node).__name__}")
