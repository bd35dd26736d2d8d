"""Expression syntax for ambient elements.

Grammar (whitespace is ignored)::

    expr     := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := "-" unary | factor
    factor   := atom ("^" "(" signed-rational ")" | "^" signed-integer)?
    atom     := rational | "x" | "(" expr ")" | ("exp2" | "log2" | "sqrt") "(" expr ")"
    rational := integer ("/" positive-integer)?
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

__all__ = [
    "Expr",
    "Num",
    "Var",
    "BinOp",
    "Neg",
    "Pow",
    "Call",
    "ExprSyntaxError",
    "parse_expr",
    "print_expr",
]

FUNCS = ("exp2", "log2", "sqrt")


class ExprSyntaxError(SyntaxError):
    def __init__(self, position: int, expected: str, text: str = ""):
        super().__init__(f"at offset {position}: expected {expected}")
        self.position = position
        self.expected = expected
        self.text = text


@dataclass(frozen=True)
class Expr:
    span: tuple[int, int] = field(default=(0, 0), compare=False, kw_only=True)


@dataclass(frozen=True)
class Num(Expr):
    value: Fraction


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Fraction


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr


_TOKEN = re.compile(r"\s*(?:(\d+)|(exp2|log2|sqrt|x)|(\S))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        for m in _TOKEN.finditer(text):
            if m.group(1):
                self.toks.append(("int", m.group(1), m.start(1)))
            elif m.group(2):
                self.toks.append(("name", m.group(2), m.start(2)))
            elif m.group(3):
                self.toks.append(("op", m.group(3), m.start(3)))
        self.i = 0

    # -- token helpers ---------------------------------------------------------------
    def peek(self, k: int = 0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else ("eof", "", len(self.text))

    def pos(self) -> int:
        return self.peek()[2]

    def accept(self, value: str) -> bool:
        kind, v, _ = self.peek()
        if kind in ("op", "name") and v == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str, what: str | None = None):
        if not self.accept(value):
            raise ExprSyntaxError(self.pos(), what or repr(value), self.text)

    def fail(self, expected: str):
        raise ExprSyntaxError(self.pos(), expected, self.text)

    # -- grammar ---------------------------------------------------------------------
    def parse(self) -> Expr:
        if self.peek()[0] == "eof":
            self.fail("an expression")
        e = self.expr()
        if self.peek()[0] != "eof":
            self.fail("an operator or end of input")
        return e

    def expr(self) -> Expr:
        start = self.pos()
        left = self.term()
        while True:
            kind, v, _ = self.peek()
            if kind == "op" and v in "+-":
                self.i += 1
                right = self.term()
                left = BinOp(v, left, right, span=(start, right.span[1]))
            else:
                return left

    def term(self) -> Expr:
        start = self.pos()
        left = self.unary()
        while True:
            kind, v, _ = self.peek()
            if kind == "op" and v in "*/":
                self.i += 1
                right = self.unary()
                left = BinOp(v, left, right, span=(start, right.span[1]))
            else:
                return left

    def unary(self) -> Expr:
        start = self.pos()
        if self.accept("-"):
            inner = self.unary()
            return Neg(inner, span=(start, inner.span[1]))
        return self.factor()

    def _signed_int(self) -> int:
        neg = self.accept("-")
        kind, v, _ = self.peek()
        if kind != "int":
            self.fail("an integer")
        self.i += 1
        return -int(v) if neg else int(v)

    def _end(self) -> int:
        kind, v, p = self.toks[self.i - 1]
        return p + len(v)

    def factor(self) -> Expr:
        start = self.pos()
        base = self.atom()
        if self.accept("^"):
            if self.accept("("):
                num = self._signed_int()
                den = 1
                if self.accept("/"):
                    den = self._positive_int()
                self.expect(")", "')'")
                q = Fraction(num, den)
            else:
                if self.peek()[0] not in ("int",) and self.peek()[1] != "-":
                    self.fail("an integer or '(' after '^'")
                q = Fraction(self._signed_int())
            return Pow(base, q, span=(start, self._end()))
        return base

    def _positive_int(self) -> int:
        kind, v, _ = self.peek()
        if kind != "int" or int(v) == 0:
            self.fail("a positive integer")
        self.i += 1
        return int(v)

    def atom(self) -> Expr:
        kind, v, start = self.peek()
        if kind == "int":
            self.i += 1
            q = Fraction(int(v))
            # a literal fraction binds tighter than division: 1/2 is one token group
            if self.peek()[1] == "/" and self.peek(1)[0] == "int":
                self.i += 1
                q = q / self._positive_int()
            return Num(q, span=(start, self._end()))
        if kind == "name" and v == "x":
            self.i += 1
            return Var(span=(start, self._end()))
        if kind == "name":
            self.i += 1
            self.expect("(", "'(' after function name")
            arg = self.expr()
            self.expect(")", "')'")
            return Call(v, arg, span=(start, self._end()))
        if self.accept("("):
            inner = self.expr()
            self.expect(")", "')'")
            return inner
        self.fail("a number, 'x', a function or '('")
        raise AssertionError  # pragma: no cover


def parse_expr(text: str) -> Expr:
    return _Parser(text).parse()


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def print_expr(e: Expr) -> str:
    """Render an expression so that parsing it gives the same tree."""
    if isinstance(e, Num):
        s = _fmt_q(e.value)
        return f"({s})" if e.value < 0 or e.value.denominator != 1 else s
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Neg):
        return f"(-{print_expr(e.operand)})"
    if isinstance(e, BinOp):
        right = print_expr(e.right)
        if e.op == "/" and right.isdigit():
            # keep "a / n" from reading back as the literal fraction a/n
            right = f"({right})"
        return f"({print_expr(e.left)} {e.op} {right})"
    if isinstance(e, Pow):
        base = print_expr(e.base)
        if isinstance(e.base, Pow):
            base = f"({base})"
        return f"{base}^({_fmt_q(e.exponent)})"
    if isinstance(e, Call):
        return f"{e.func}({print_expr(e.arg)})"
    raise TypeError(f"not an expression: {e!r}")
