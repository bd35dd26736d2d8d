"""Log-closed ordered monomial group.

Generators are created in stages and each one remembers its logarithm as
a purely infinite series.  The ladder y_0 > y_1 > ... satisfies
log y_i = y_{i+1}; the deepest rung has no stored log.  Derived generators
are 2^r for purely infinite r.

Monomials are compared through their logarithms: m > 1 iff log m > 0.
The recursion always descends to strictly earlier generators and bottoms
out on the ladder.  All generators are kept > 1 (a negative exponent is
realised as the inverse of the generator for -r), so every monomial above
1 dominates the missing log of the deepest rung, which is therefore never
needed to decide a sign.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Mapping

from .errors import LadderTooShallow, LogIncomplete, NotPurelyInfinite, UndeterminedSign
from .residue import EQ, GT, LT, RealAlg

if TYPE_CHECKING:  # pragma: no cover
    from .series import Series

__all__ = [
    "Generator",
    "Monomial",
    "GroupRegistry",
    "grp_init_ladder",
    "grp_new_generator",
    "grp_lookup",
    "mono_mul",
    "mono_pow",
    "mono_log",
    "mono_compare",
]


@dataclass(frozen=True, eq=False)
class Generator:
    id: int
    kind: str  # "ladder" or "derived"
    stage: int
    name: str
    index: int | None = None  # ladder rung
    log_series: "Series | None" = None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "name": self.name,
            "stage": self.stage,
            "log": None if self.log_series is None else self.log_series.to_json(),
        }


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _norm(e):
    # integral exponents are kept as int: much cheaper to add and hash
    if type(e) is Fraction and e.denominator == 1:
        return e.numerator
    return e


def _merge(a: tuple, b: tuple, sign: int) -> tuple:
    """Exponent tuple of a * b**sign for sorted exponent tuples."""
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        ga, gb = a[i][0], b[j][0]
        if ga < gb:
            out.append(a[i])
            i += 1
        elif gb < ga:
            out.append((gb, b[j][1] if sign > 0 else -b[j][1]))
            j += 1
        else:
            e = a[i][1] + b[j][1] if sign > 0 else a[i][1] - b[j][1]
            if e:
                out.append((ga, _norm(e)))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:] if sign > 0 else ((g, -e) for g, e in b[j:]))
    return tuple(out)


class Monomial:
    """Finite product of rational powers of registered generators."""

    __slots__ = ("exps", "reg", "_hash")

    def __init__(self, exps: Mapping[int, Fraction] | Iterable = (), reg: "GroupRegistry | None" = None):
        items = exps.items() if isinstance(exps, Mapping) else exps
        clean = {}
        for g, e in items:
            e = Fraction(e)
            if e:
                clean[g] = clean.get(g, Fraction(0)) + e
        self.exps = tuple(sorted((g, _norm(e)) for g, e in clean.items() if e))
        self.reg = reg
        self._hash = hash(self.exps)

    @classmethod
    def _raw(cls, exps: tuple, reg) -> "Monomial":
        """Build from an already sorted tuple of nonzero (id, exponent) pairs."""
        m = object.__new__(cls)
        m.exps = exps
        m.reg = reg
        m._hash = hash(exps)
        return m

    # -- group structure --------------------------------------------------------
    def is_one(self) -> bool:
        return not self.exps

    def _reg(self, other: "Monomial | None" = None):
        return self.reg if self.reg is not None else (other.reg if other is not None else None)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial._raw(_merge(self.exps, other.exps, 1), self._reg(other))

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return Monomial._raw(_merge(self.exps, other.exps, -1), self._reg(other))

    def inverse(self) -> "Monomial":
        return Monomial._raw(tuple((g, -e) for g, e in self.exps), self.reg)

    def __pow__(self, q) -> "Monomial":
        q = Fraction(q)
        return Monomial({g: e * q for g, e in self.exps}, self.reg)

    def exponent(self, gen_id: int) -> Fraction:
        for g, e in self.exps:
            if g == gen_id:
                return e
        return Fraction(0)

    def gen_ids(self) -> tuple[int, ...]:
        return tuple(g for g, _ in self.exps)

    # -- equality / order -------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Monomial):
            return NotImplemented
        return self.exps == other.exps

    def __hash__(self):
        return self._hash

    def cmp(self, other: "Monomial") -> int:
        if self.exps == other.exps:
            return EQ
        reg = self._reg(other)
        if reg is None:  # pragma: no cover - monomials without a registry are all 1
            raise ValueError("cannot compare monomials without a registry")
        q = _merge(self.exps, other.exps, -1)
        hit = reg._sign_cache.get(q)
        if hit is not None:
            return hit
        return reg.sign_of(Monomial._raw(q, reg))

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    # -- output -----------------------------------------------------------------
    def __str__(self):
        if not self.exps:
            return "1"
        parts = []
        for g, e in self.exps:
            name = self.reg.generators[g].name if self.reg is not None else f"g{g}"
            if e == 1:
                parts.append(name)
            elif e.denominator == 1 and e > 0:
                parts.append(f"{name}^{e}")
            else:
                parts.append(f"{name}^({_fmt_q(e)})")
        return "*".join(parts)

    __repr__ = __str__

    def to_json(self) -> list:
        return [{"gen": g, "exp": _fmt_q(e)} for g, e in self.exps]

    @classmethod
    def from_json(cls, obj: list, reg: "GroupRegistry") -> "Monomial":
        return cls({d["gen"]: Fraction(d["exp"]) for d in obj}, reg)


class GroupRegistry:
    """Append-only table of generators.

    Creation takes a lock (single writer); reads need none because
    generators are never mutated and the sign cache only ever gains
    entries that stay valid.
    """

    def __init__(self):
        self.generators: list[Generator] = []
        self.depth = 0
        self._lock = threading.RLock()
        self._sign_cache: dict = {}
        self._log_cache: dict = {}

    @property
    def stage_count(self) -> int:
        return 1 + max((g.stage for g in self.generators), default=0)

    def __len__(self):
        return len(self.generators)

    def one(self) -> Monomial:
        return Monomial((), self)

    def mono(self, gen_id: int, exp=1) -> Monomial:
        return Monomial({gen_id: Fraction(exp)}, self)

    def ladder(self, i: int) -> Monomial:
        if not 0 <= i < self.depth:
            raise LadderTooShallow(f"ladder rung y_{i} requested but depth is {self.depth}")
        return self.mono(i)

    def is_deepest(self, gen_id: int) -> bool:
        g = self.generators[gen_id]
        return g.kind == "ladder" and g.index == self.depth - 1

    def gen_log(self, gen_id: int) -> "Series":
        from .series import Series

        cached = self._log_cache.get(gen_id)
        if cached is not None:
            return cached
        g = self.generators[gen_id]
        if g.kind == "ladder":
            if g.index == self.depth - 1:
                raise LogIncomplete(f"log({g.name}) lies below the ladder depth {self.depth}")
            s = Series.monomial(self.mono(g.index + 1))
        else:
            s = g.log_series
        self._log_cache[gen_id] = s
        return s

    # -- order ------------------------------------------------------------------
    def sign_of(self, m: Monomial) -> int:
        """Return +1 if m > 1, -1 if m < 1, 0 if m == 1."""
        if not m.exps:
            return EQ
        hit = self._sign_cache.get(m.exps)
        if hit is not None:
            return hit
        s = self._sign_uncached(m)
        self._sign_cache[m.exps] = s
        return s

    def _sign_uncached(self, m: Monomial) -> int:
        from .series import Series, ser_sign

        if len(m.exps) == 1:
            # every generator is > 1; this is the only axiomatic comparison
            return GT if m.exps[0][1] > 0 else LT
        deep = Fraction(0)
        logs = []
        for g, e in m.exps:
            if self.is_deepest(g):
                deep = e
                continue
            logs.append((self.gen_log(g), e))
        if logs and all(lg.cutoff is None and len(lg.terms) == 1 for lg, _ in logs):
            # single-term logs: only the largest log monomial matters
            top = None
            for lg, e in logs:
                c, mm = lg.terms[0]
                if top is None or mm.cmp(top[1]) > 0:
                    top = [c * RealAlg.rational(e), mm]
                elif mm == top[1]:
                    top[0] = top[0] + c * RealAlg.rational(e)
            if not top[0].is_zero():
                return top[0].sign()
        if all(lg.cutoff is None for lg, _ in logs):
            # exact logs: one merge instead of repeated series additions
            acc = Series([(c * RealAlg.rational(e), mm) for lg, e in logs for c, mm in lg.terms])
        else:
            acc = Series.zero()
            for lg, e in logs:
                acc = acc + lg.scale(RealAlg.rational(e))
        if acc.terms or acc.cutoff is not None:
            return ser_sign(acc)
        if deep:
            return GT if deep > 0 else LT
        raise AssertionError(f"nontrivial monomial {m} with vanishing log")  # pragma: no cover

    # -- serialisation ---------------------------------------------------------------
    def to_json(self) -> dict:
        return {"depth": self.depth, "generators": [g.to_json() for g in self.generators]}

    def _append(self, **kw) -> Generator:
        with self._lock:
            g = Generator(id=len(self.generators), **kw)
            self.generators.append(g)
            return g


def grp_init_ladder(depth: int) -> GroupRegistry:
    if depth < 1:
        raise ValueError("ladder depth must be at least 1")
    reg = GroupRegistry()
    reg.depth = depth
    for i in range(depth):
        reg._append(kind="ladder", stage=0, name=f"y_{i}", index=i)
    return reg


# --------------------------------------------------------------------------
# log matching
# --------------------------------------------------------------------------

def _solve(rows: list[list], rhs: list) -> list | None:
    """Exact Gaussian elimination; free variables are set to zero."""
    n = len(rows[0]) if rows else 0
    m = [r[:] + [b] for r, b in zip(rows, rhs)]
    zero = RealAlg.rational(0)
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(m)):
        if not m[i][n].is_zero():
            return None
    sol = [zero] * n
    for i, c in enumerate(pivots):
        sol[c] = m[i][n]
    return sol


def grp_lookup(reg: GroupRegistry, r: "Series") -> Monomial | None:
    """Find the monomial whose log is exactly r, or None.

    A cutoff marker stands for an unknown tail shared by every series with
    the same marker; each marker contributes one extra equation.
    """
    if not r.terms and r.cutoff is None:
        return reg.one()
    cands = [g.id for g in reg.generators if not reg.is_deepest(g.id)]
    logs = {g: reg.gen_log(g) for g in cands}
    # restrict to generators connected to r through shared support
    support = {m for _, m in r.terms}
    cuts = {r.cutoff} if r.cutoff is not None else set()
    chosen: set = set()
    changed = True
    while changed:
        changed = False
        for g in cands:
            if g in chosen:
                continue
            L = logs[g]
            if any(m in support for _, m in L.terms) or (L.cutoff is not None and L.cutoff in cuts):
                chosen.add(g)
                support.update(m for _, m in L.terms)
                if L.cutoff is not None:
                    cuts.add(L.cutoff)
                changed = True
    if not chosen:
        return None
    cols = sorted(chosen)
    monos = list(support)
    one = RealAlg.rational(1)
    zero = RealAlg.rational(0)
    rows, rhs = [], []
    for mono in monos:
        rows.append([logs[g].coeff(mono) for g in cols])
        rhs.append(r.coeff(mono))
    def tail(s, c):
        # the hidden tail enters with its sign; an unsigned tail counts as +1
        if s.cutoff != c:
            return zero
        return one if (s.tail_sign or 1) > 0 else -one

    for c in cuts:
        rows.append([tail(logs[g], c) for g in cols])
        rhs.append(tail(r, c))
    sol = _solve(rows, rhs)
    if sol is None or any(not q.is_rational for q in sol):
        return None
    return Monomial({g: q.exact_rational for g, q in zip(cols, sol)}, reg)


def grp_new_generator(reg: GroupRegistry, r: "Series", stage: int, name: str | None = None) -> Monomial:
    """Return 2^r as a monomial, creating a generator only when needed."""
    from .series import ser_sign

    for _, m in r.terms:
        if reg.sign_of(m) <= 0:
            raise NotPurelyInfinite(f"monomial {m} of the exponent is not infinite")
    if not r.terms:
        if r.cutoff is not None:
            raise UndeterminedSign("exponent has no known terms")
        return reg.one()
    if ser_sign(r) < 0:
        return grp_new_generator(reg, -r, stage, name).inverse()
    with reg._lock:
        found = grp_lookup(reg, r)
        if found is not None:
            return found
        g = reg._append(kind="derived", stage=stage,
                        name=name or f"g_{len(reg.generators)}", log_series=r)
    return reg.mono(g.id)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return a * b


def mono_pow(a: Monomial, q) -> Monomial:
    return a ** Fraction(q)


def mono_log(reg: GroupRegistry, m: Monomial) -> "Series":
    from .series import Series

    acc = Series.zero()
    for g, e in m.exps:
        acc = acc + reg.gen_log(g).scale(RealAlg.rational(e))
    return acc


def mono_compare(reg: GroupRegistry, a: Monomial, b: Monomial) -> int:
    if a.exps == b.exps:
        return EQ
    return reg.sign_of(a / b)
