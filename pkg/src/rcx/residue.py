"""Exact real algebraic numbers: the residue field k.

A value is an irreducible, primitive integer polynomial with positive
leading coefficient together with a rational interval isolating exactly
one of its real roots.  Degree-one values are kept as plain fractions.
Because the defining polynomial is irreducible, two values are equal iff
they share the polynomial and the same root index, which makes hashing
and equality structural.

Polynomials are tuples of ints, lowest degree first.  sympy does the
resultants and factorisations; root isolation and counting use Sturm
sequences built here on ``Fraction``.

Sums and products of irrational values are computed in a number field
Q(theta) that contains both operands (a primitive element of the compositum
is built once and remembered).  Such results carry field coordinates and
only compute their minimal polynomial when it is asked for.  The module
keeps three memo tables (Sturm sequences, small rationals, known fields);
they never change a result, only how fast it is found.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

import mpmath
import sympy
from sympy import Poly, ZZ

from .errors import DivisionByZero, EvenDegree, NegativeEvenRoot

__all__ = [
    "RealAlg",
    "ra_from_rational",
    "ra_arith",
    "ra_compare",
    "ra_root",
    "ra_odd_root_of_poly",
    "ra_floor",
    "ra_pow2",
    "LT",
    "EQ",
    "GT",
]

LT, EQ, GT = -1, 0, 1

_X = sympy.Symbol("x")
_Y = sympy.Symbol("y")


# --------------------------------------------------------------------------
# integer polynomial helpers (tuples, low degree first)
# --------------------------------------------------------------------------

def _normalize(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    if not c:
        return (0,)
    g = 0
    for a in c:
        g = math.gcd(g, a)
    if c[-1] < 0:
        g = -g
    return tuple(a // g for a in c)


def _from_fractions(coeffs: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for a in coeffs:
        den = den * a.denominator // math.gcd(den, a.denominator)
    return _normalize(int(a * den) for a in coeffs)


def _peval(p: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sign_at(p: Sequence[int], x: Fraction) -> int:
    v = _peval(p, x)
    return (v > 0) - (v < 0)


def _to_poly(p: Sequence[int]) -> Poly:
    return Poly(list(reversed(p)), _X, domain=ZZ)


def _from_poly(P: Poly) -> tuple[int, ...]:
    return _normalize(int(c) for c in reversed(P.all_coeffs()))


def _shift(p: Sequence[int], q: Fraction) -> tuple[int, ...]:
    """Coefficients of p(x - q)."""
    out = [Fraction(0)] * len(p)
    # Horner on polynomials: acc = acc*(x - q) + c
    for c in reversed(p):
        nxt = [Fraction(0)] * len(p)
        for i, a in enumerate(out):
            if a:
                if i + 1 < len(p):
                    nxt[i + 1] += a
                nxt[i] -= a * q
        nxt[0] += c
        out = nxt
    return _from_fractions(out)


def _scale(p: Sequence[int], q: Fraction) -> tuple[int, ...]:
    """Coefficients of q^d p(x / q) (roots multiplied by q)."""
    d = len(p) - 1
    return _from_fractions([Fraction(c) * q ** (d - i) for i, c in enumerate(p)])


def _reflect(p: Sequence[int]) -> tuple[int, ...]:
    return _normalize(c if i % 2 == 0 else -c for i, c in enumerate(p))


@lru_cache(maxsize=None)
def _factors(p: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    _, fl = _to_poly(p).factor_list()
    return tuple(_from_poly(f) for f, _ in fl)


def _prem_seq(p: tuple[int, ...]) -> tuple[tuple[Fraction, ...], ...]:
    """Sturm sequence of p (Fraction coefficients, low degree first)."""
    def rem(a, b):
        a = list(a)
        while len(a) >= len(b):
            q = a[-1] / b[-1]
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[i + shift] -= q * c
            a.pop()
            while a and a[-1] == 0:
                a.pop()
        return a

    f0 = [Fraction(c) for c in p]
    f1 = [Fraction(i * c) for i, c in enumerate(p)][1:]
    seq = [f0, f1]
    while len(seq[-1]) > 1:
        r = rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return tuple(tuple(f) for f in seq)


_STURM: dict[tuple[int, ...], tuple] = {}


def _sturm_changes(p: tuple[int, ...], x: Fraction) -> int:
    seq = _STURM.get(p)
    if seq is None:
        seq = _STURM[p] = _prem_seq(p)
    n, last = 0, 0
    for f in seq:
        v = _peval(f, x)
        if v:
            sg = 1 if v > 0 else -1
            if last and sg != last:
                n += 1
            last = sg
    return n


def _sturm_count(p: tuple[int, ...], lo: Fraction, hi: Fraction) -> int:
    """Roots of squarefree p in (lo, hi]."""
    return _sturm_changes(p, lo) - _sturm_changes(p, hi)


@lru_cache(maxsize=None)
def _isolate(p: tuple[int, ...]) -> tuple[tuple[Fraction, Fraction], ...]:
    """Isolating intervals of the real roots of irreducible p, ascending.

    Floating point approximations propose tight intervals; Sturm counts
    certify them, and plain bisection takes over if they do not.
    """
    if len(p) == 2:
        r = Fraction(-p[0], p[1])
        return ((r, r),)
    bound = 1 + max(Fraction(abs(c), abs(p[-1])) for c in p[:-1])
    total = _sturm_count(p, -bound, bound)
    if total == 0:
        return ()
    out: list[tuple[Fraction, Fraction]] = []
    try:
        with mpmath.workdps(30):
            approx = mpmath.polyroots(list(reversed(p)), maxsteps=200, extraprec=200)
        reals = sorted(float(mpmath.re(z)) for z in approx
                       if abs(mpmath.im(z)) <= 1e-20 * (1 + abs(z)))
        for r in reals:
            eps = Fraction(1, 2 ** 20) * (1 + abs(Fraction(r)))
            a, b = Fraction(r) - eps, Fraction(r) + eps
            if _sturm_count(p, a, b) == 1 and (not out or out[-1][1] < a):
                out.append((a, b))
    except (mpmath.libmp.NoConvergence, ValueError, OverflowError):
        out = []
    if len(out) == total:
        return tuple(out)
    out = []
    stack = [(-bound, bound, total)]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        k = _sturm_count(p, a, m)
        stack.append((a, m, k))
        stack.append((m, b, n - k))
    return tuple(sorted(out))


def _count_roots(p: tuple[int, ...], lo: Fraction, hi: Fraction) -> int:
    """Number of real roots of squarefree p in the closed interval [lo, hi]."""
    if lo > hi:
        return 0
    if len(p) == 2:
        r = Fraction(-p[0], p[1])
        return int(lo <= r <= hi)
    return _sturm_count(p, lo, hi) + (_peval(p, lo) == 0)


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _poly_str(p: Sequence[int]) -> str:
    parts = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if not c:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        mag = abs(c)
        body = str(mag) if (mag != 1 or i == 0) else ""
        body = body + mono if body and mono else body or mono
        parts.append(("-" if c < 0 else "+") + body)
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


# --------------------------------------------------------------------------
# the value type
# --------------------------------------------------------------------------

_RATIONALS: dict = {}


class RealAlg:
    """A real algebraic number.

    ``minpoly`` is irreducible over Q; ``interval`` isolates the root.  The
    interval is narrowed in place as comparisons demand, which never changes
    the represented value.
    """

    __slots__ = ("_mp", "_ivx", "_key", "_fe", "_q")

    def __init__(self, minpoly: Sequence[int], lo, hi=None):
        self._mp = tuple(minpoly)
        self._q = Fraction(-self._mp[0], self._mp[1]) if len(self._mp) == 2 else None
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        self._ivx = (lo, hi)
        self._key = None
        # optional coordinates over a number field: (field, coords)
        self._fe = None

    @classmethod
    def _lazy(cls, K: "_Field", coords: tuple) -> "RealAlg":
        """An irrational element of K known by its coordinates only.

        Minimal polynomial and isolating interval are computed on demand;
        sign, order and equality against elements of K never need them.
        """
        r = object.__new__(cls)
        r._mp = None
        r._q = None
        r._ivx = None
        r._key = None
        r._fe = (K, coords)
        return r

    def _materialize(self) -> None:
        K, c = self._fe
        f = K.minpoly_of(c)
        while True:
            lo, hi = K.enclose(c)
            if _count_roots(f, lo, hi) == 1:
                break
            K.refine()
        self._mp = f
        self._ivx = (lo, hi)

    @property
    def minpoly(self) -> tuple[int, ...]:
        if self._mp is None:
            self._materialize()
        return self._mp

    @property
    def _iv(self) -> tuple[Fraction, Fraction]:
        if self._ivx is None:
            self._materialize()
        return self._ivx

    @_iv.setter
    def _iv(self, value) -> None:
        self._ivx = value

    # -- construction helpers ------------------------------------------------
    @classmethod
    def rational(cls, q) -> "RealAlg":
        hit = _RATIONALS.get(q)
        if hit is not None:
            return hit
        q = Fraction(q)
        r = cls((-q.numerator, q.denominator), q, q)
        if len(_RATIONALS) < 4096 and abs(q.numerator) < 1000 and q.denominator < 1000:
            # small rationals are immutable in practice, so they are shared
            _RATIONALS[q] = r
        return r

    @classmethod
    def _from_root(cls, f: tuple[int, ...], lo: Fraction, hi: Fraction) -> "RealAlg":
        if len(f) == 2:
            return cls.rational(Fraction(-f[0], f[1]))
        return cls(f, lo, hi)

    @classmethod
    def real_roots(cls, p: Sequence[int]) -> list["RealAlg"]:
        """All real roots of an integer polynomial, ascending, without repeats."""
        roots = []
        for f in _factors(_normalize(p)):
            if len(f) < 2:
                continue
            for lo, hi in _isolate(f):
                roots.append(cls._from_root(f, lo, hi))
        roots.sort(key=_SortKey)
        uniq = []
        for r in roots:
            if not uniq or uniq[-1] != r:
                uniq.append(r)
        return uniq

    # -- basic accessors -----------------------------------------------------
    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        return self._iv

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @property
    def is_rational(self) -> bool:
        # field elements are never rational: rational results are not tagged
        return self._mp is not None and len(self._mp) == 2

    @property
    def exact_rational(self) -> Fraction | None:
        return self._q

    def is_zero(self) -> bool:
        return self._mp == (0, 1)

    # -- refinement ------------------------------------------------------------
    def bisect(self) -> None:
        if self.is_rational:
            return
        lo, hi = self._iv
        mid = (lo + hi) / 2
        if _sign_at(self.minpoly, mid) == _sign_at(self.minpoly, lo):
            self._iv = (mid, hi)
        else:
            self._iv = (lo, mid)

    def refine(self, width: Fraction) -> tuple[Fraction, Fraction]:
        width = Fraction(width)
        while self._iv[1] - self._iv[0] > width:
            self.bisect()
        return self._iv

    def sign(self) -> int:
        q = self.exact_rational
        if q is not None:
            return (q > 0) - (q < 0)
        if self._fe is not None and self._ivx is None:
            K, c = self._fe
            return K.sign(c)
        # an irrational value is never 0, so 0 can be pushed strictly outside
        while self._iv[0] <= 0 <= self._iv[1]:
            self.bisect()
        return 1 if self._iv[0] > 0 else -1

    def _separate_from(self, q: Fraction) -> int:
        """Sign of self - q for irrational self."""
        if self._fe is not None and self._ivx is None:
            K, c = self._fe
            return K.sign(K.add(c, K.const(-q)))
        while self._iv[0] <= q <= self._iv[1]:
            self.bisect()
        return 1 if self._iv[0] > q else -1

    # -- canonical key -----------------------------------------------------------
    def key(self):
        if self._key is None:
            q = self.exact_rational
            if q is not None:
                self._key = (self.minpoly,)
            else:
                # the root index: how many roots lie below the isolating interval
                p = self.minpoly
                bound = 1 + max(Fraction(abs(c), abs(p[-1])) for c in p[:-1])
                self._key = (p, _sturm_count(p, -bound, self._iv[0]))
        return self._key

    def __hash__(self):
        return hash(self.key())

    def __eq__(self, other):
        if not isinstance(other, RealAlg):
            if isinstance(other, (int, Rational)):
                return self.exact_rational == other
            return NotImplemented
        qa, qb = self.exact_rational, other.exact_rational
        if qa is not None or qb is not None:
            return qa == qb
        if self._fe is not None and other._fe is not None:
            return ra_compare(self, other) == EQ
        if self.minpoly != other.minpoly:
            return False
        if self.is_rational:
            return True
        return self.key() == other.key()

    # -- order -------------------------------------------------------------------
    def cmp(self, other) -> int:
        return ra_compare(self, _coerce(other))

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    # -- arithmetic ----------------------------------------------------------------
    def __add__(self, other):
        return ra_arith("add", self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ra_arith("sub", self, _coerce(other))

    def __rsub__(self, other):
        return ra_arith("sub", _coerce(other), self)

    def __mul__(self, other):
        return ra_arith("mul", self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return ra_arith("div", self, _coerce(other))

    def __rtruediv__(self, other):
        return ra_arith("div", _coerce(other), self)

    def __neg__(self):
        q = self.exact_rational
        if q is not None:
            return RealAlg.rational(-q)
        if self._fe is not None and self._ivx is None:
            K, c = self._fe
            return RealAlg._lazy(K, tuple(-x for x in c))
        lo, hi = self._iv
        out = RealAlg(_reflect(self.minpoly), -hi, -lo)
        if self._fe is not None:
            K, c = self._fe
            out._fe = (K, tuple(-x for x in c))
        return out

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return RealAlg.rational(1) / (self ** -n)
        result = RealAlg.rational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> "RealAlg":
        q = self.exact_rational
        if q is not None:
            if q == 0:
                raise DivisionByZero("inverse of 0 in k")
            return RealAlg.rational(1 / q)
        if self._fe is not None and self._ivx is None:
            K, c = self._fe
            return RealAlg._lazy(K, K.inv(c))
        self.sign()  # pushes 0 out of the interval
        lo, hi = self._iv
        out = RealAlg(_normalize(reversed(self.minpoly)), 1 / hi, 1 / lo)
        if self._fe is not None:
            K, c = self._fe
            out._fe = (K, K.inv(c))
        return out

    # -- conversions ---------------------------------------------------------------
    def __float__(self):
        return float(self.approx(20))

    def approx(self, digits: int = 30) -> mpmath.mpf:
        q = self.exact_rational
        with mpmath.workdps(digits + 10):
            if q is not None:
                return mpmath.mpf(q.numerator) / q.denominator
            lo, hi = self.refine(Fraction(1, 10 ** (digits + 2)))
            mid = (lo + hi) / 2
            return mpmath.mpf(mid.numerator) / mid.denominator

    def log2_exponent(self) -> Fraction | None:
        """Return e if self == 2**e for a rational e, else None."""
        if self.sign() <= 0:
            return None
        q = self.exact_rational
        if q is not None:
            num, den = q.numerator, q.denominator
            if num & (num - 1) == 0 and den & (den - 1) == 0:
                return Fraction(num.bit_length() - den.bit_length())
            return None
        p = self.minpoly
        b = len(p) - 1
        if any(p[1:-1]):
            return None
        c0, cb = p[0], p[-1]
        if cb == 1 and c0 < 0 and (-c0) & (-c0 - 1) == 0:
            a = (-c0).bit_length() - 1
        elif c0 == -1 and cb > 1 and cb & (cb - 1) == 0:
            a = -(cb.bit_length() - 1)
        else:
            return None
        if math.gcd(a, b) != 1:
            return None
        return Fraction(a, b)

    def to_json(self) -> dict:
        lo, hi = self._iv
        return {"minpoly": list(self.minpoly),
                "interval": [_fmt_fraction(lo), _fmt_fraction(hi)]}

    @classmethod
    def from_json(cls, obj: dict) -> "RealAlg":
        lo, hi = (Fraction(s) for s in obj["interval"])
        f = _normalize(obj["minpoly"])
        if len(f) == 2:
            return cls.rational(Fraction(-f[0], f[1]))
        if _count_roots(f, lo, hi) != 1:
            raise ValueError("interval does not isolate a single root")
        return cls(f, lo, hi)

    def __str__(self):
        q = self.exact_rational
        if q is not None:
            return _fmt_fraction(q)
        return f"<{_poly_str(self.minpoly)} ~ {mpmath.nstr(self.approx(12), 8)}>"

    def __repr__(self):
        q = self.exact_rational
        if q is not None:
            return f"RealAlg({_fmt_fraction(q)})"
        lo, hi = self._iv
        return f"RealAlg({_poly_str(self.minpoly)}, [{lo}, {hi}])"


class _SortKey:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return ra_compare(self.v, other.v) < 0


def _coerce(x) -> RealAlg:
    if isinstance(x, RealAlg):
        return x
    if isinstance(x, (int, Rational)):
        return RealAlg.rational(Fraction(x))
    raise TypeError(f"cannot interpret {x!r} as an element of k")


# --------------------------------------------------------------------------
# operations
# --------------------------------------------------------------------------

def ra_from_rational(q) -> RealAlg:
    return RealAlg.rational(Fraction(q))


def ra_compare(a: RealAlg, b: RealAlg) -> int:
    qa, qb = a.exact_rational, b.exact_rational
    if qa is not None and qb is not None:
        return (qa > qb) - (qa < qb)
    if qa is not None:
        return -b._separate_from(qa)
    if qb is not None:
        return a._separate_from(qb)
    if a._fe is not None and b._fe is not None:
        # only when a common field is already at hand; building one just to
        # compare costs more than separating intervals
        Ka, Kb = a._fe[0], b._fe[0]
        if _known_join(Ka, Kb) is not None:
            K, ia, ib = _join(Ka, Kb)
            d = K.add(_in_field(a, K, ia), tuple(-x for x in _in_field(b, K, ib)))
            return K.sign(d) if any(d) else EQ
    if a.minpoly == b.minpoly:
        lo = max(a._iv[0], b._iv[0])
        hi = min(a._iv[1], b._iv[1])
        if lo <= hi and _count_roots(a.minpoly, lo, hi) >= 1:
            return EQ
    # distinct values: bisect until the intervals separate
    while not (a._iv[1] < b._iv[0] or b._iv[1] < a._iv[0]):
        if a._iv[1] - a._iv[0] >= b._iv[1] - b._iv[0]:
            a.bisect()
        else:
            b.bisect()
    return LT if a._iv[1] < b._iv[0] else GT


def _interval_add(a: RealAlg, b: RealAlg):
    return a._iv[0] + b._iv[0], a._iv[1] + b._iv[1]


def _interval_mul(a: RealAlg, b: RealAlg):
    ps = [x * y for x in a._iv for y in b._iv]
    return min(ps), max(ps)


@lru_cache(maxsize=None)
def _sum_poly(f: tuple[int, ...], g: tuple[int, ...]) -> tuple[int, ...]:
    F = sum(c * _Y ** i for i, c in enumerate(f))
    G = sum(c * (_X - _Y) ** i for i, c in enumerate(g))
    return _from_poly(Poly(sympy.resultant(F, sympy.expand(G), _Y), _X, domain=ZZ))


@lru_cache(maxsize=None)
def _prod_poly(f: tuple[int, ...], g: tuple[int, ...]) -> tuple[int, ...]:
    dg = len(g) - 1
    F = sum(c * _Y ** i for i, c in enumerate(f))
    G = sum(c * _X ** i * _Y ** (dg - i) for i, c in enumerate(g))
    return _from_poly(Poly(sympy.resultant(F, G, _Y), _X, domain=ZZ))


def _select_root(poly: tuple[int, ...], a: RealAlg, b: RealAlg, enclose) -> RealAlg:
    """Pick the root of ``poly`` enclosed by interval arithmetic on a, b."""
    facs = [f for f in _factors(poly) if len(f) >= 2]
    while True:
        lo, hi = enclose(a, b)
        hits = [(f, _count_roots(f, lo, hi)) for f in facs]
        total = sum(n for _, n in hits)
        if total == 1:
            f = next(f for f, n in hits if n == 1)
            if len(f) == 2:
                return RealAlg.rational(Fraction(-f[0], f[1]))
            return RealAlg(f, lo, hi)
        a.bisect()
        b.bisect()


class _Field:
    """Q(theta) for an irrational real algebraic theta.

    Elements are coordinate tuples over the power basis 1, theta, ...,
    theta^(d-1).  Coordinates are unique, so arithmetic and equality need
    no factorisation; only a result's own minimal polynomial is computed,
    by linear dependence of its powers.
    """

    def __init__(self, theta: "RealAlg"):
        self.theta = RealAlg(theta.minpoly, *theta._iv)
        m = theta.minpoly
        self.d = len(m) - 1
        self.mod = tuple(Fraction(c, m[-1]) for c in m)
        # fields known to contain this one: id -> (field, image of theta there)
        self.supers: dict[int, tuple] = {id(self): (self, self.gen())}

    def one(self) -> tuple:
        return (Fraction(1),) + (Fraction(0),) * (self.d - 1)

    def gen(self) -> tuple:
        return (Fraction(0), Fraction(1)) + (Fraction(0),) * (self.d - 2)

    def const(self, q: Fraction) -> tuple:
        return (Fraction(q),) + (Fraction(0),) * (self.d - 1)

    def add(self, a, b) -> tuple:
        return tuple(x + y for x, y in zip(a, b))

    def mul(self, a, b) -> tuple:
        # integer arithmetic over a common denominator, one Fraction per coordinate
        d = self.d
        m = self.theta.minpoly
        lead = m[-1]
        da = math.lcm(*(x.denominator for x in a))
        db = math.lcm(*(y.denominator for y in b))
        ia = [x.numerator * (da // x.denominator) for x in a]
        ib = [y.numerator * (db // y.denominator) for y in b]
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(ia):
            if x:
                for j, y in enumerate(ib):
                    if y:
                        prod[i + j] += x * y
        den = da * db
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c:
                if lead != 1:
                    prod = [p * lead for p in prod]
                    den *= lead
                for i in range(d):
                    prod[k - d + i] -= c * m[i]
        return tuple(Fraction(p, den) for p in prod[:d])

    def inv(self, a) -> tuple:
        # solve a * x = 1 with the multiplication matrix of a
        cols = [a]
        for _ in range(self.d - 1):
            cols.append(self.mul(cols[-1], self.gen()))
        rows = [[cols[j][i] for j in range(self.d)] + [Fraction(int(i == 0))]
                for i in range(self.d)]
        return tuple(_solve(rows))

    def minpoly_of(self, a) -> tuple[int, ...]:
        basis: list[tuple[list, list, int]] = []
        power = self.one()
        for k in range(self.d + 1):
            vec = list(power)
            combo = [Fraction(0)] * k + [Fraction(1)]
            for bvec, bcombo, piv in basis:
                f = vec[piv]
                if f:
                    f /= bvec[piv]
                    vec = [x - f * y for x, y in zip(vec, bvec)]
                    combo = [x - f * (bcombo[i] if i < len(bcombo) else 0)
                             for i, x in enumerate(combo)]
            piv = next((i for i, x in enumerate(vec) if x), None)
            if piv is None:
                return _from_fractions(combo)
            basis.append((vec, combo, piv))
            power = self.mul(power, a)
        raise AssertionError("no linear dependence among powers")  # pragma: no cover

    def enclose(self, a) -> tuple[Fraction, Fraction]:
        lo_t, hi_t = self.theta._iv
        lo = hi = a[-1]
        for c in reversed(a[:-1]):
            ps = (lo * lo_t, lo * hi_t, hi * lo_t, hi * hi_t)
            lo, hi = min(ps) + c, max(ps) + c
        return lo, hi

    def refine(self) -> None:
        th = self.theta
        th.refine((th._iv[1] - th._iv[0]) / 16)

    def sign(self, a) -> int:
        """Sign of a nonzero element."""
        while True:
            lo, hi = self.enclose(a)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            self.refine()

    def element(self, a) -> "RealAlg":
        if not any(a[1:]):
            return RealAlg.rational(a[0])
        return RealAlg._lazy(self, a)

    def embed(self, a, image) -> tuple:
        """Coordinates of a(phi) where phi = ``image`` is theta's image elsewhere."""
        K, phi = image
        acc = K.const(a[-1])
        for c in reversed(a[:-1]):
            acc = K.add(K.mul(acc, phi), K.const(c))
        return acc


def _solve(rows: list[list[Fraction]]) -> list[Fraction]:
    n = len(rows)
    for col in range(n):
        piv = next(r for r in range(col, n) if rows[r][col])
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        rows[col] = [x / p for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [rows[r][n] for r in range(n)]


_FIELDS: dict = {}


def _tag(a: "RealAlg") -> tuple:
    if a._fe is None:
        K = _FIELDS.get(a.key())
        if K is None:
            K = _FIELDS[a.key()] = _Field(a)
        a._fe = (K, K.gen())
    return a._fe


# polynomials over a field: lists of coordinate tuples, low degree first

def _kp_trim(K: _Field, f: list) -> list:
    while f and not any(f[-1]):
        f.pop()
    return f


def _kp_rem(K: _Field, f: list, g: list) -> list:
    f = list(f)
    lead_inv = K.inv(g[-1])
    while len(f) >= len(g):
        q = K.mul(f[-1], lead_inv)
        shift = len(f) - len(g)
        for i, c in enumerate(g):
            f[i + shift] = K.add(f[i + shift], K.mul(q, tuple(-x for x in c)))
        f.pop()
        _kp_trim(K, f)
    return f


def _kp_gcd(K: _Field, f: list, g: list) -> list:
    f, g = _kp_trim(K, list(f)), _kp_trim(K, list(g))
    while g:
        f, g = g, _kp_rem(K, f, g)
    lead_inv = K.inv(f[-1])
    return [K.mul(c, lead_inv) for c in f]


def _kp_mul(K: _Field, f: list, g: list) -> list:
    out = [K.const(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = K.add(out[i + j], K.mul(a, b))
    return out


def _record_embedding(F: _Field, L: _Field, phi: tuple) -> None:
    """Note F inside L, and with it every field already known to lie in F."""
    image = (L, phi)
    for E in list(_FIELDS.values()):
        known = E.supers.get(id(F))
        if known is not None and id(L) not in E.supers:
            E.supers[id(L)] = (L, F.embed(known[1], image))
    F.supers[id(L)] = image


def _known_join(K1: _Field, K2: _Field):
    if id(K2) in K1.supers:
        return K2, K1.supers[id(K2)], (K2, K2.gen())
    if id(K1) in K2.supers:
        return K1, (K1, K1.gen()), K2.supers[id(K1)]
    common = [key for key in K1.supers if key in K2.supers]
    if common:
        key = min(common, key=lambda k: K1.supers[k][0].d)
        return K1.supers[key][0], K1.supers[key], K2.supers[key]
    return None


def _join(K1: _Field, K2: _Field) -> tuple[_Field, tuple, tuple]:
    """A field containing K1 and K2 with the images of both generators."""
    hit = _known_join(K1, K2)
    if hit is not None:
        return hit
    t1, t2 = K1.theta, K2.theta
    f1, f2 = t1.minpoly, t2.minpoly
    for t in range(1, 64):
        theta = _untagged_arith("add", RealAlg(f1, *t1._iv), _scaled_untagged(t2, t))
        if theta.is_rational:
            continue
        K = _FIELDS.get(theta.key())
        if K is None:
            K = _FIELDS[theta.key()] = _Field(theta)
        # theta1 is the common root of f1(x) and f2((theta - x) / t) over K
        lin = [K.mul(K.gen(), K.const(Fraction(1, t))), K.const(Fraction(-1, t))]
        g2 = [K.const(f2[-1])]
        for c in reversed(f2[:-1]):
            g2 = _kp_mul(K, g2, lin)
            g2[0] = K.add(g2[0], K.const(c))
        g1 = [K.const(c) for c in f1]
        g = _kp_gcd(K, g1, g2)
        if len(g) != 2:
            continue
        phi1 = tuple(-x for x in g[0])
        phi2 = K.mul(K.add(K.gen(), tuple(-x for x in phi1)), K.const(Fraction(1, t)))
        _record_embedding(K1, K, phi1)
        _record_embedding(K2, K, phi2)
        return K, (K, phi1), (K, phi2)
    raise AssertionError("no primitive element found")  # pragma: no cover


def _scaled_untagged(a: "RealAlg", t: int) -> "RealAlg":
    lo, hi = a._iv
    return RealAlg(_scale(a.minpoly, Fraction(t)), lo * t, hi * t)


def _in_field(a: "RealAlg", K: _Field, image) -> tuple:
    Ka, ca = _tag(a)
    if Ka is K:
        return ca
    out = Ka.embed(ca, image)
    a._fe = (K, out)
    return out


def _field_arith(op: str, a: "RealAlg", b: "RealAlg") -> "RealAlg":
    Ka, Kb = _tag(a)[0], _tag(b)[0]
    K, ia, ib = _join(Ka, Kb)
    ca, cb = _in_field(a, K, ia), _in_field(b, K, ib)
    return K.element(K.add(ca, cb) if op == "add" else K.mul(ca, cb))


def _untagged_arith(op: str, a: "RealAlg", b: "RealAlg") -> "RealAlg":
    if op == "add":
        return _select_root(_sum_poly(a.minpoly, b.minpoly), a, b, _interval_add)
    return _select_root(_prod_poly(a.minpoly, b.minpoly), a, b, _interval_mul)


def ra_arith(op: str, a: RealAlg, b: RealAlg) -> RealAlg:
    if op == "sub":
        return ra_arith("add", a, -b)
    if op == "div":
        if b.is_zero():
            raise DivisionByZero("division by zero in k")
        return ra_arith("mul", a, b.inverse())
    if op not in ("add", "mul"):
        raise ValueError(f"unknown operation {op!r}")
    qa, qb = a.exact_rational, b.exact_rational
    if qa is not None and qb is not None:
        return RealAlg.rational(qa + qb if op == "add" else qa * qb)
    if qa is not None:
        a, b, qa, qb = b, a, qb, qa
    if qb is not None and a._fe is not None and a._ivx is None:
        K, c = a._fe
        if op == "add":
            return RealAlg._lazy(K, K.add(c, K.const(qb)))
        return K.element(tuple(x * qb for x in c))
    if qb is not None:
        lo, hi = a._iv
        if op == "add":
            if qb == 0:
                return a
            out = RealAlg(_shift(a.minpoly, qb), lo + qb, hi + qb)
            if a._fe is not None:
                K, c = a._fe
                out._fe = (K, K.add(c, K.const(qb)))
            return out
        if qb == 0:
            return RealAlg.rational(0)
        if qb == 1:
            return a
        ends = sorted((lo * qb, hi * qb))
        out = RealAlg(_scale(a.minpoly, qb), ends[0], ends[1])
        if a._fe is not None:
            K, c = a._fe
            out._fe = (K, tuple(x * qb for x in c))
        return out
    return _field_arith(op, a, b)


def _power_interval(r: RealAlg, n: int):
    lo, hi = r._iv
    vals = [lo ** n, hi ** n]
    if n % 2 == 0 and lo < 0 < hi:
        vals.append(Fraction(0))
    return min(vals), max(vals)


def ra_root(a: RealAlg, n: int) -> RealAlg:
    a = _coerce(a)
    if n < 1:
        raise ValueError("root index must be positive")
    if n == 1 or a.is_zero():
        return a
    s = a.sign()
    if n % 2 == 0 and s < 0:
        raise NegativeEvenRoot(f"even root ({n}) of a negative element")
    q = a.exact_rational
    if q is not None:
        poly = _normalize([-q.numerator] + [0] * (n - 1) + [q.denominator])
        for r in RealAlg.real_roots(poly):
            if r.sign() == s:
                return r
        raise AssertionError("no real root found")  # pragma: no cover
    spread = [0] * ((len(a.minpoly) - 1) * n + 1)
    for i, c in enumerate(a.minpoly):
        spread[i * n] = c
    lo_a, hi_a = a._iv
    for r in RealAlg.real_roots(spread):
        if r.sign() != s:
            continue
        while True:
            lo, hi = _power_interval(r, n)
            if lo_a < lo and hi < hi_a:
                return r
            if hi < lo_a or lo > hi_a:
                break
            r.bisect()
    raise AssertionError("no real root found")  # pragma: no cover


def ra_pow2(q) -> RealAlg:
    q = Fraction(q)
    a, b = q.numerator, q.denominator
    if b == 1:
        return RealAlg.rational(Fraction(2) ** a)
    if a > 0:
        poly = _normalize([-(2 ** a)] + [0] * (b - 1) + [1])
        return RealAlg(poly, 0, 2 ** a + 1)
    poly = _normalize([-1] + [0] * (b - 1) + [2 ** -a])
    return RealAlg(poly, 0, 1)


def ra_floor(a: RealAlg) -> int:
    a = _coerce(a)
    q = a.exact_rational
    if q is not None:
        return math.floor(q)
    while math.floor(a._iv[0]) != math.floor(a._iv[1]):
        a.bisect()
    return math.floor(a._iv[0])


def ra_odd_root_of_poly(coeffs: Sequence) -> RealAlg:
    """Smallest real root of a polynomial with coefficients in k (low first)."""
    cs = [_coerce(c) for c in coeffs]
    while cs and cs[-1].is_zero():
        cs.pop()
    deg = len(cs) - 1
    if deg < 1 or deg % 2 == 0:
        raise EvenDegree(f"degree {deg} is not odd")
    if all(c.is_rational for c in cs):
        candidates = RealAlg.real_roots(_from_fractions([c.exact_rational for c in cs]))
        return candidates[0]
    # norm: eliminate each irrational coefficient with its minimal polynomial
    syms: dict = {}
    expr = 0
    for i, c in enumerate(cs):
        q = c.exact_rational
        if q is not None:
            term = sympy.Rational(q.numerator, q.denominator)
        else:
            k = c.key()
            if k not in syms:
                syms[k] = (sympy.Symbol(f"z{len(syms)}"), c)
            term = syms[k][0]
        expr += term * _X ** i
    for z, c in syms.values():
        m = sum(cc * z ** j for j, cc in enumerate(c.minpoly))
        expr = sympy.resultant(m, sympy.expand(expr), z)
    norm = Poly(expr, _X, domain=sympy.QQ)
    norm_int = _from_fractions([Fraction(int(t.p), int(t.q)) for t in reversed(norm.all_coeffs())])
    for r in RealAlg.real_roots(norm_int):
        acc = RealAlg.rational(0)
        for c in reversed(cs):
            acc = acc * r + c
        if acc.is_zero():
            return r
    raise AssertionError("odd-degree polynomial without a real root")  # pragma: no cover
