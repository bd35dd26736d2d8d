"""Generalised power series with finite support and a precision marker.

A :class:`Series` is a finite list of ``(coefficient, monomial)`` pairs in
strictly decreasing monomial order, optionally followed by a *cutoff*:
a monomial c meaning "whatever else is there has every monomial <= c".
Operations propagate the coarsest cutoff and drop terms that it hides.
When the sign of the hidden remainder is known it is kept in ``tail_sign``
and survives the operations where it can be tracked soundly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable

from .errors import NegativeEvenRoot, UndeterminedSign, ZeroSeries
from .monomial import GroupRegistry, Monomial
from .residue import RealAlg, ra_root

__all__ = [
    "Series",
    "SeriesSplit",
    "ser_add",
    "ser_mul",
    "ser_sign",
    "ser_valuation",
    "ser_truncate",
    "ser_split",
    "ser_inv",
    "ser_root",
    "NEG",
    "ZERO",
    "POS",
]

NEG, ZERO, POS = -1, 0, 1

_ONE = RealAlg.rational(1)
_ZERO = RealAlg.rational(0)

_mono_key = cmp_to_key(lambda a, b: a.cmp(b))


def _as_coeff(c) -> RealAlg:
    return c if isinstance(c, RealAlg) else RealAlg.rational(Fraction(c))


def _max_mono(a: Monomial | None, b: Monomial | None) -> Monomial | None:
    if a is None:
        return b
    if b is None:
        return a
    return a if a.cmp(b) >= 0 else b


class Series:
    __slots__ = ("terms", "cutoff", "tail_sign")

    def __init__(self, terms=(), cutoff: Monomial | None = None, *, _sorted=False,
                 tail_sign: int | None = None):
        if not _sorted:
            acc: dict[Monomial, RealAlg] = {}
            for c, m in terms:
                c = _as_coeff(c)
                if m in acc:
                    acc[m] = acc[m] + c
                else:
                    acc[m] = c
            items = [(c, m) for m, c in acc.items() if not c.is_zero()]
            if cutoff is not None:
                items = [(c, m) for c, m in items if m.cmp(cutoff) > 0]
            items.sort(key=lambda t: _mono_key(t[1]), reverse=True)
            terms = items
        self.terms: tuple[tuple[RealAlg, Monomial], ...] = tuple(terms)
        self.cutoff = cutoff
        self.tail_sign = tail_sign if cutoff is not None else None

    # -- constructors ---------------------------------------------------------------
    @classmethod
    def zero(cls) -> "Series":
        return cls((), None, _sorted=True)

    @classmethod
    def const(cls, c) -> "Series":
        c = _as_coeff(c)
        if c.is_zero():
            return cls.zero()
        return cls(((c, Monomial()),), None, _sorted=True)

    @classmethod
    def monomial(cls, m: Monomial, c=1) -> "Series":
        c = _as_coeff(c)
        if c.is_zero():
            return cls.zero()
        return cls(((c, m),), None, _sorted=True)

    # -- accessors ----------------------------------------------------------------
    @property
    def reg(self) -> GroupRegistry | None:
        for _, m in self.terms:
            if m.reg is not None:
                return m.reg
        return self.cutoff.reg if self.cutoff is not None else None

    @property
    def is_exact(self) -> bool:
        return self.cutoff is None

    def __len__(self):
        return len(self.terms)

    def coeff(self, m: Monomial) -> RealAlg:
        for c, mm in self.terms:
            if mm == m:
                return c
        return _ZERO

    def leading(self) -> tuple[RealAlg, Monomial]:
        if not self.terms:
            if self.cutoff is not None:
                raise UndeterminedSign(f"no known terms above {self.cutoff}")
            raise ZeroSeries("the zero series has no leading term")
        return self.terms[0]

    def without_cutoff(self) -> "Series":
        return Series(self.terms, None, _sorted=True)

    def with_cutoff(self, cutoff: Monomial | None) -> "Series":
        cut = _max_mono(self.cutoff, cutoff)
        if cut is None or cut == self.cutoff:
            return self
        kept = [t for t in self.terms if t[1].cmp(cut) > 0]
        if len(kept) < len(self.terms):
            tail = self.terms[len(kept)][0].sign()
        else:
            tail = self.tail_sign
        return Series(kept, cut, _sorted=True, tail_sign=tail)

    # -- arithmetic -----------------------------------------------------------------
    def __add__(self, other):
        return ser_add(self, _as_series(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ser_add(self, -_as_series(other))

    def __rsub__(self, other):
        return ser_add(_as_series(other), -self)

    def __neg__(self):
        return Series(((-c, m) for c, m in self.terms), self.cutoff, _sorted=True,
                      tail_sign=None if self.tail_sign is None else -self.tail_sign)

    def __mul__(self, other):
        return ser_mul(self, _as_series(other))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = Series.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def scale(self, c) -> "Series":
        c = _as_coeff(c)
        if c.is_zero():
            return Series.zero() if self.cutoff is None else Series((), self.cutoff, _sorted=True)
        tail = None if self.tail_sign is None else self.tail_sign * c.sign()
        return Series(((c * a, m) for a, m in self.terms), self.cutoff, _sorted=True, tail_sign=tail)

    def shift(self, m: Monomial) -> "Series":
        """Multiply by a monomial (order preserving, so no re-sort)."""
        cut = None if self.cutoff is None else self.cutoff * m
        return Series(((c, mm * m) for c, mm in self.terms), cut, _sorted=True,
                      tail_sign=self.tail_sign)

    # -- order / equality -----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self.terms == other.terms and self.cutoff == other.cutoff
                and self.tail_sign == other.tail_sign)

    def __hash__(self):
        return hash((self.terms, self.cutoff, self.tail_sign))

    def agrees_with(self, other: "Series", above: Monomial) -> bool:
        """Equality of the terms strictly above ``above``."""
        a = [t for t in self.terms if t[1].cmp(above) > 0]
        b = [t for t in other.terms if t[1].cmp(above) > 0]
        return a == b

    def cmp(self, other) -> int:
        return ser_sign(self - _as_series(other))

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    # -- output ---------------------------------------------------------------------
    def __str__(self):
        parts = []
        for c, m in self.terms:
            neg = c.sign() < 0
            mag = -c if neg else c
            if m.is_one():
                body = str(mag)
            elif mag == 1:
                body = str(m)
            else:
                body = f"{mag}*{m}"
            parts.append(("- " if neg else "+ ") + body)
        if self.cutoff is not None:
            parts.append(f"+ O({self.cutoff})")
        if not parts:
            return "0"
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self):
        return f"Series({self})"

    def to_json(self) -> dict:
        return {
            "terms": [{"coeff": c.to_json(), "mono": m.to_json()} for c, m in self.terms],
            "cutoff": None if self.cutoff is None else self.cutoff.to_json(),
            "tail_sign": self.tail_sign,
        }

    @classmethod
    def from_json(cls, obj: dict, reg: GroupRegistry) -> "Series":
        terms = [(RealAlg.from_json(t["coeff"]), Monomial.from_json(t["mono"], reg)) for t in obj["terms"]]
        cut = obj.get("cutoff")
        return cls(terms, None if cut is None else Monomial.from_json(cut, reg),
                   tail_sign=obj.get("tail_sign"))


def _as_series(x) -> Series:
    if isinstance(x, Series):
        return x
    if isinstance(x, Monomial):
        return Series.monomial(x)
    return Series.const(x)


@dataclass(frozen=True)
class SeriesSplit:
    infinite_part: Series
    constant: RealAlg
    infinitesimal_part: Series
    constant_exact: bool = True

    def recompose(self) -> Series:
        return self.infinite_part + Series.const(self.constant) + self.infinitesimal_part


# --------------------------------------------------------------------------
# operations
# --------------------------------------------------------------------------

def ser_add(a: Series, b: Series) -> Series:
    if not b.terms and b.cutoff is None:
        return a
    if not a.terms and a.cutoff is None:
        return b
    cut = _max_mono(a.cutoff, b.cutoff)
    # merge two sorted lists
    out = []
    i = j = 0
    ta, tb = a.terms, b.terms
    while i < len(ta) and j < len(tb):
        (ca, ma), (cb, mb) = ta[i], tb[j]
        s = ma.cmp(mb)
        if s > 0:
            out.append(ta[i])
            i += 1
        elif s < 0:
            out.append(tb[j])
            j += 1
        else:
            c = ca + cb
            if not c.is_zero():
                out.append((c, ma))
            i += 1
            j += 1
    out.extend(ta[i:])
    out.extend(tb[j:])
    tail = None
    if cut is not None:
        kept = [t for t in out if t[1].cmp(cut) > 0]
        tails = {s.tail_sign for s in (a, b) if s.cutoff is not None}
        same_cut = a.cutoff is None or b.cutoff is None or a.cutoff == b.cutoff
        if same_cut and len(tails) == 1:
            tail = tails.pop()
            # absorbed terms of the same sign as the hidden tail keep that sign
            if len(kept) < len(out) and (tail is None or out[len(kept)][0].sign() != tail):
                tail = None
        out = kept
    return Series(out, cut, _sorted=True, tail_sign=tail)


def ser_mul(a: Series, b: Series) -> Series:
    cut = None
    if a.cutoff is not None:
        cut = _max_mono(cut, a.cutoff * b.terms[0][1] if b.terms else None)
        if b.cutoff is not None:
            cut = _max_mono(cut, a.cutoff * b.cutoff)
    if b.cutoff is not None and a.terms:
        cut = _max_mono(cut, b.cutoff * a.terms[0][1])
    acc: dict[Monomial, RealAlg] = {}
    for ca, ma in a.terms:
        for cb, mb in b.terms:
            m = ma * mb
            c = ca * cb
            acc[m] = acc[m] + c if m in acc else c
    out = Series(((c, m) for m, c in acc.items()), None)
    if cut is None:
        return out
    tail = None
    exact = b if a.cutoff is not None and b.cutoff is None else (
        a if b.cutoff is not None and a.cutoff is None else None)
    other = a if exact is b else b
    if exact is not None and exact.terms and other.tail_sign is not None:
        # remainder ~ lead(exact) * tail, unless some product terms fall below cut
        if all(m.cmp(cut) > 0 for _, m in out.terms):
            tail = other.tail_sign * exact.terms[0][0].sign()
    return out.with_cutoff(cut) if tail is None else Series(out.terms, cut, _sorted=True, tail_sign=tail)


def ser_sign(a: Series) -> int:
    if a.terms:
        return a.terms[0][0].sign()
    if a.tail_sign is not None:
        return a.tail_sign
    if a.cutoff is not None:
        raise UndeterminedSign(f"sign hidden below {a.cutoff}")
    return ZERO


def ser_valuation(a: Series) -> Monomial:
    return a.leading()[1]


def ser_truncate(a: Series, h: Monomial) -> Series:
    return Series([t for t in a.terms if t[1].cmp(h) < 0], a.cutoff, _sorted=True,
                  tail_sign=a.tail_sign)


def ser_split(a: Series) -> SeriesSplit:
    inf, fin = [], []
    const = _ZERO
    for c, m in a.terms:
        if m.is_one():
            const = c
        elif m.reg.sign_of(m) > 0:
            inf.append((c, m))
        else:
            fin.append((c, m))
    cut = a.cutoff
    inf_cut = cut if cut is not None and cut.reg is not None and cut.reg.sign_of(cut) > 0 else None
    const_exact = cut is None or (not cut.is_one() and cut.reg.sign_of(cut) < 0)
    return SeriesSplit(Series(inf, inf_cut, _sorted=True,
                              tail_sign=a.tail_sign if inf_cut is not None else None), const,
                       Series(fin, cut, _sorted=True,
                              tail_sign=a.tail_sign if inf_cut is None and const_exact else None),
                       const_exact)


def _expand(a: Series, coeffs, target: Monomial, max_terms: int, lead_power) -> Series:
    """Sum_k coeffs(k) * lead * eps^k for a = lead_c*lead_m*(1 + eps), cut at target."""
    c0, m0 = a.leading()
    inv_c0 = c0.inverse()
    inv_m0 = m0.inverse()
    eps = Series(((c * inv_c0, m * inv_m0) for c, m in a.terms[1:]),
                 None if a.cutoff is None else a.cutoff * inv_m0, _sorted=True)
    pre_c, pre_m = lead_power(c0, m0)
    if not eps.terms and eps.cutoff is None:
        return Series.monomial(pre_m, coeffs(0) * pre_c)
    cut = target
    # relative precision of the input propagates: |delta b| ~ |b| * cutoff(eps)
    if eps.cutoff is not None:
        cut = _max_mono(cut, eps.cutoff * pre_m)
    threshold = cut / pre_m  # keep eps-power terms strictly above this
    out: list = []
    power = Series.const(1)
    k = 0
    while power.terms:
        ck = coeffs(k)
        if not ck.is_zero():
            out.extend((ck * c * pre_c, m * pre_m) for c, m in power.terms)
        k += 1
        if k >= max_terms:
            nxt = power * eps
            live = [t for t in nxt.terms if t[1].cmp(threshold) > 0]
            if live:
                cut = _max_mono(cut, live[0][1] * pre_m)
            break
        power = _mul_above(power, eps, threshold)
    return Series(out, cut)


def _mul_above(a: Series, b: Series, threshold: Monomial) -> Series:
    """Known terms of a*b whose monomial exceeds ``threshold``.

    Both term lists are sorted descending, so a row can stop at the first
    product at or below the threshold, and so can the scan over rows.
    """
    acc: dict[Monomial, RealAlg] = {}
    for ca, ma in a.terms:
        if not b.terms or (ma * b.terms[0][1]).cmp(threshold) <= 0:
            break
        for cb, mb in b.terms:
            m = ma * mb
            if m.cmp(threshold) <= 0:
                break
            c = ca * cb
            acc[m] = acc[m] + c if m in acc else c
    return Series(((c, m) for m, c in acc.items()), None)


def ser_inv(a: Series, cutoff: Monomial, max_terms: int = 64) -> Series:
    """Inverse of a, exact for every monomial above ``cutoff``."""
    if not a.terms and a.cutoff is None:
        raise ZeroSeries("inverse of zero")
    c0, m0 = a.leading()
    if a.cutoff is not None:
        cutoff = _max_mono(cutoff, a.cutoff / (m0 * m0))
    def coeffs(k):
        return RealAlg.rational(-1 if k % 2 else 1)

    return _expand(a, coeffs, cutoff, max_terms, lambda c, m: (c.inverse(), m.inverse()))


def _binom(alpha: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out = out * (alpha - i) / (i + 1)
    return out


def ser_root(a: Series, n: int, cutoff: Monomial, max_terms: int = 64) -> Series:
    """Non-negative (even n) or real (odd n) n-th root of a."""
    if n < 1:
        raise ValueError("root index must be positive")
    if not a.terms and a.cutoff is None:
        return Series.zero()
    c0, m0 = a.leading()
    if n % 2 == 0 and c0.sign() < 0:
        raise NegativeEvenRoot("even root of a negative series")
    if n == 1:
        return a.with_cutoff(cutoff)
    alpha = Fraction(1, n)
    root_m = m0 ** alpha
    if a.cutoff is not None:
        cutoff = _max_mono(cutoff, a.cutoff * root_m / m0)

    def coeffs(k):
        return RealAlg.rational(_binom(alpha, k))

    return _expand(a, coeffs, cutoff, max_terms, lambda c, m: (ra_root(c, n), root_m))
