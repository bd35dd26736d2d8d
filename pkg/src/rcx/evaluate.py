"""Evaluate parsed expressions to series over a ladder registry."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import RcxError
from .exp import exp_series, log_series
from .monomial import GroupRegistry, Monomial, grp_init_ladder
from .parser import BinOp, Call, Expr, Neg, Num, Pow, Var, parse_expr
from .series import Series, ser_inv, ser_root

__all__ = ["EvalEnv", "EvalError", "eval_expr", "eval_text", "DEFAULT_DEPTH"]

DEFAULT_DEPTH = 8


class EvalError(RcxError):
    def __init__(self, span: tuple[int, int], cause: Exception):
        super().__init__(f"{type(cause).__name__} in characters {span[0]}..{span[1]}: {cause}")
        self.span = span
        self.cause = cause


@dataclass
class EvalEnv:
    reg: GroupRegistry
    # relative precision: inverses and roots are exact above v(result) * rel_cutoff
    rel_cutoff: Monomial
    stage: int | None = None

    @classmethod
    def default(cls, depth: int = DEFAULT_DEPTH, rel_cutoff: str | None = None) -> "EvalEnv":
        reg = grp_init_ladder(depth)
        env = cls(reg, reg.ladder(0) ** -8)
        if rel_cutoff is not None:
            env.rel_cutoff = env.monomial_of(rel_cutoff)
        return env

    def monomial_of(self, text: str) -> Monomial:
        """Parse text that must evaluate to a bare monomial (coefficient 1)."""
        s = eval_expr(parse_expr(text), self)
        if len(s.terms) != 1 or s.cutoff is not None or s.terms[0][0] != 1:
            raise ValueError(f"{text!r} is not a monomial")
        return s.terms[0][1]


def _inv(s: Series, env: EvalEnv) -> Series:
    m = s.leading()[1]
    return ser_inv(s, m.inverse() * env.rel_cutoff)


def _pow(s: Series, q: Fraction, env: EvalEnv) -> Series:
    if q.denominator > 1:
        m = s.leading()[1]
        s = ser_root(s, q.denominator, m ** Fraction(1, q.denominator) * env.rel_cutoff)
    n = q.numerator
    if n < 0:
        s = _inv(s, env)
        n = -n
    # keep the declared relative precision on the power as well
    return s ** n


def eval_expr(e: Expr, env: EvalEnv) -> Series:
    try:
        return _eval(e, env)
    except EvalError:
        raise
    except (RcxError, ZeroDivisionError, ValueError) as exc:
        raise EvalError(e.span, exc) from exc


def _eval(e: Expr, env: EvalEnv) -> Series:
    def sub(x: Expr) -> Series:
        try:
            return _eval(x, env)
        except EvalError:
            raise
        except (RcxError, ZeroDivisionError, ValueError) as exc:
            raise EvalError(x.span, exc) from exc

    if isinstance(e, Num):
        return Series.const(e.value)
    if isinstance(e, Var):
        return Series.monomial(env.reg.ladder(0))
    if isinstance(e, Neg):
        return -sub(e.operand)
    if isinstance(e, BinOp):
        a, b = sub(e.left), sub(e.right)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        try:
            return a * _inv(b, env)
        except (RcxError, ZeroDivisionError) as exc:
            raise EvalError(e.right.span, exc) from exc
    if isinstance(e, Pow):
        return _pow(sub(e.base), e.exponent, env)
    if isinstance(e, Call):
        a = sub(e.arg)
        if e.func == "sqrt":
            return _pow(a, Fraction(1, 2), env)
        if e.func == "exp2":
            return exp_series(a, env.reg, env.stage)
        return log_series(a, env.reg)
    raise TypeError(f"unknown node {e!r}")


def eval_text(text: str, env: EvalEnv) -> Series:
    return eval_expr(parse_expr(text), env)
