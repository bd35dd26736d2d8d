"""Development triples and the development of an element over them.

A triple packages a subgroup H of the monomial group (kept as the rational
span of a list of basis monomials), the generators of a field A over k(H)
and their images under an order preserving embedding into series over H.

The ambient field is the series field itself.  A basis monomial of H stands
for an ambient element, its *section*; usually that element is the monomial
itself, but a value-transcendental extension may adjoin |r - r^| which can
have several terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Sequence

from .errors import AlreadyPresent, CutoffExhausted, UndeterminedSign
from .monomial import GroupRegistry, Monomial
from .residue import RealAlg, ra_root
from .series import Series, ser_inv, ser_root, ser_sign

__all__ = [
    "HSpace",
    "Triple",
    "Step",
    "Development",
    "MaximalityEntry",
    "MaximalityReport",
    "trivial_triple",
    "ladder_triple",
    "triple_from_basis",
    "dev_compute",
    "triple_extend",
    "triple_check_maximal",
]

DEFAULT_PRECISION_STEPS = 16


class HSpace:
    """Rational span of finitely many monomials, in row echelon form."""

    def __init__(self, basis: Sequence[Monomial] = ()):
        self.basis: tuple[Monomial, ...] = ()
        # each row: (pivot generator id, exponent dict, coordinates over basis indices)
        self._rows: list[tuple[int, dict, dict]] = []
        for m in basis:
            self._add(m)

    def _reduce(self, m: Monomial) -> tuple[dict, dict]:
        vec = {g: Fraction(e) for g, e in m.exps}
        coords: dict[int, Fraction] = {}
        for pivot, row, rc in self._rows:
            f = vec.get(pivot)
            if not f:
                continue
            for g, e in row.items():
                v = vec.get(g, Fraction(0)) - f * e
                if v:
                    vec[g] = v
                else:
                    vec.pop(g, None)
            for i, c in rc.items():
                coords[i] = coords.get(i, Fraction(0)) + f * c
        return vec, coords

    def _add(self, m: Monomial) -> bool:
        vec, coords = self._reduce(m)
        if not vec:
            return False
        idx = len(self.basis)
        self.basis = self.basis + (m,)
        pivot = min(vec)
        p = vec[pivot]
        row = {g: e / p for g, e in vec.items()}
        # row represents m / prod(basis^coords), scaled by 1/p
        rc = {i: -c / p for i, c in coords.items()}
        rc[idx] = rc.get(idx, Fraction(0)) + 1 / p
        for k, (piv, r, c) in enumerate(self._rows):
            f = r.get(pivot)
            if f:
                nr = dict(r)
                for g, e in row.items():
                    v = nr.get(g, Fraction(0)) - f * e
                    if v:
                        nr[g] = v
                    else:
                        nr.pop(g, None)
                nc = dict(c)
                for i, e in rc.items():
                    nc[i] = nc.get(i, Fraction(0)) - f * e
                self._rows[k] = (piv, nr, {i: e for i, e in nc.items() if e})
        self._rows.append((pivot, row, {i: e for i, e in rc.items() if e}))
        return True

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, m: Monomial) -> bool:
        vec, _ = self._reduce(m)
        return not vec

    def coords(self, m: Monomial) -> dict[int, Fraction] | None:
        """Exponents q_i with m = prod basis[i]^q_i, or None when m is outside."""
        vec, coords = self._reduce(m)
        if vec:
            return None
        return {i: c for i, c in coords.items() if c}

    def extended(self, m: Monomial) -> "HSpace":
        out = HSpace()
        out.basis = self.basis
        out._rows = [(p, dict(r), dict(c)) for p, r, c in self._rows]
        out._add(m)
        return out


@dataclass(frozen=True)
class Triple:
    registry: GroupRegistry
    h: HSpace
    gens: tuple[tuple[str, Series], ...] = ()
    dev_map: Mapping[str, Series] = field(default_factory=lambda: MappingProxyType({}))
    section: Mapping[int, Series] = field(default_factory=lambda: MappingProxyType({}))
    cases: Mapping[str, str] = field(default_factory=lambda: MappingProxyType({}))
    maximal_agenda: tuple[Series, ...] = ()
    precision: int = DEFAULT_PRECISION_STEPS

    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.gens)

    def ambient(self, name: str) -> Series:
        for n, s in self.gens:
            if n == name:
                return s
        raise KeyError(name)

    def ambient_of(self, m: Monomial) -> Series:
        """The ambient element standing for the H-monomial m."""
        coords = self.h.coords(m)
        if coords is None:
            raise ValueError(f"{m} is not in H")
        if not any(i in self.section for i in coords):
            return Series.monomial(m)
        coeff = RealAlg.rational(1)
        factors = []
        rest = Monomial(reg=self.registry)
        for i, q in coords.items():
            b = self.h.basis[i]
            sec = self.section.get(i)
            if sec is None:
                rest = rest * b ** q
            elif len(sec.terms) == 1 and sec.cutoff is None:
                c, mm = sec.terms[0]
                c = ra_root(c, q.denominator) ** q.numerator if q > 0 else \
                    ra_root(c, q.denominator).inverse() ** (-q.numerator)
                coeff = coeff * c
                rest = rest * mm ** q
            else:
                factors.append((sec, q))
        out = Series.monomial(rest, coeff)
        for sec, q in factors:
            rel = self._relative_cut(sec)
            piece = sec
            if q.denominator > 1:
                piece = ser_root(sec, q.denominator, sec.terms[0][1] ** Fraction(1, q.denominator) * rel)
            if q.numerator < 0:
                piece = ser_inv(piece, piece.terms[0][1].inverse() * rel)
            out = out * piece ** abs(q.numerator)
        return out

    def _relative_cut(self, sec: Series) -> Monomial:
        """Relative precision used when a section has several terms."""
        lead = sec.terms[0][1]
        second = sec.terms[1][1] if len(sec.terms) > 1 else sec.cutoff
        ratio = second / lead
        return ratio ** self.precision

    def ambient_of_series(self, s: Series) -> Series:
        """phi^{-1} of a finite series over H."""
        out = Series.zero()
        for c, m in s.terms:
            out = out + self.ambient_of(m).scale(c)
        return out

    def to_json(self) -> dict:
        return {
            "h_basis": [m.to_json() for m in self.h.basis],
            "gens": [{"name": n, "ambient": s.to_json()} for n, s in self.gens],
            "dev_map": {n: s.to_json() for n, s in self.dev_map.items()},
            "cases": dict(self.cases),
        }


def trivial_triple(reg: GroupRegistry) -> Triple:
    return Triple(reg, HSpace())


def ladder_triple(reg: GroupRegistry) -> Triple:
    return Triple(reg, HSpace([reg.ladder(i) for i in range(reg.depth)]))


def triple_from_basis(reg: GroupRegistry, basis: Sequence[Monomial]) -> Triple:
    return Triple(reg, HSpace(basis))


@dataclass(frozen=True)
class Step:
    approximant: Series
    g: Monomial
    a: RealAlg


@dataclass(frozen=True)
class Development:
    prefix: Series
    complete: bool
    steps: tuple[Step, ...]
    gap: Monomial | None = None
    # leading term of r - r^ after the last step (None when complete or unknown)
    next_term: tuple[RealAlg, Monomial] | None = None
    approximant: Series = field(default_factory=Series.zero)
    remainder: Series = field(default_factory=Series.zero)
    exhausted: bool = False

    @property
    def case(self) -> str:
        if self.complete:
            return "complete"
        if self.gap is not None:
            return "value-transcendental"
        return "immediate"

    def to_json(self) -> dict:
        return {
            "steps": [{"g": s.g.to_json(), "a": s.a.to_json()} for s in self.steps],
            "complete": self.complete,
            "case": self.case,
            "prefix": self.prefix.to_json(),
            "exhausted": self.exhausted,
        }


def dev_compute(r: Series, tri: Triple, max_len: int) -> Development:
    """Develop r over the triple for at most max_len steps."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    steps: list[Step] = []
    prefix: list[tuple[RealAlg, Monomial]] = []
    approx = Series.zero()

    def build(complete, gap=None, nxt=None, diff=None, exhausted=False):
        return Development(Series(prefix, None, _sorted=True), complete, tuple(steps), gap, nxt,
                           approx, Series.zero() if diff is None else diff, exhausted)

    for _ in range(max_len):
        diff = r - approx
        if not diff.terms:
            if diff.cutoff is None:
                return build(True)
            raise CutoffExhausted(f"known terms of the element end above {diff.cutoff}",
                                  build(False, diff=diff, exhausted=True))
        lc, g = diff.terms[0]
        if not tri.h.contains(g):
            return build(False, gap=g, nxt=(lc, g), diff=diff)
        amb = tri.ambient_of(g)
        a = lc / amb.terms[0][0]
        steps.append(Step(approx, g, a))
        prefix.append((a, g))
        approx = approx + amb.scale(a)
    diff = r - approx
    if not diff.terms:
        return build(diff.cutoff is None, diff=diff, exhausted=diff.cutoff is not None)
    return build(False, nxt=diff.terms[0], diff=diff)


def _develop(r: Series, tri: Triple, max_len: int) -> Development:
    try:
        return dev_compute(r, tri, max_len)
    except CutoffExhausted as exc:
        return exc.development


def _in_image(tri: Triple, r: Series, max_len: int) -> str | None:
    """Name of a stored generator differing from r by an element of k(H).

    Two cutoff markers cancel only when they coincide (same monomial and
    same tail sign): they are read as the same unknown tail.
    """
    for name, amb in tri.gens:
        if r.cutoff != amb.cutoff or r.tail_sign != amb.tail_sign:
            continue
        diff = r.without_cutoff() - amb.without_cutoff()
        if _develop(diff, tri, max_len).complete:
            return name
    return None


def triple_extend(tri: Triple, r: Series, name: str, max_len: int = 16) -> Triple:
    if name in tri.names():
        raise AlreadyPresent(f"generator name {name!r} is taken")
    dev = _develop(r, tri, max_len)
    if dev.complete:
        raise AlreadyPresent(f"{r} already lies in k(H)")
    hit = _in_image(tri, r, max_len)
    if hit is not None:
        raise AlreadyPresent(f"{r} differs from generator {hit!r} by an element of k(H)")
    gap = dev.gap
    if gap is None and dev.next_term is not None and not tri.h.contains(dev.next_term[1]):
        gap = dev.next_term[1]
    if gap is not None:
        d = dev.remainder
        eps = ser_sign(d)
        g_amb = d.scale(eps)
        h2 = tri.h.extended(gap)
        section = dict(tri.section)
        if g_amb != Series.monomial(gap):
            section[h2.dim - 1] = g_amb
        image = dev.prefix + Series.monomial(gap, eps)
        case = "value-transcendental"
    else:
        h2 = tri.h
        section = dict(tri.section)
        if dev.next_term is not None:
            c, m = dev.next_term
            image = Series(dev.prefix.terms, m, _sorted=True, tail_sign=c.sign())
        else:
            rem = dev.remainder
            image = Series(dev.prefix.terms, rem.cutoff, _sorted=True, tail_sign=rem.tail_sign)
        case = "immediate"
    dev_map = dict(tri.dev_map)
    dev_map[name] = image
    cases = dict(tri.cases)
    cases[name] = case
    return replace(tri, h=h2, gens=tri.gens + ((name, r),), dev_map=MappingProxyType(dev_map),
                   section=MappingProxyType(section), cases=MappingProxyType(cases))


@dataclass(frozen=True)
class MaximalityEntry:
    index: int
    status: str  # in-field | in-image | value-transcendental | non-maximal-witness
    note: str = ""

    @property
    def consistent(self) -> bool:
        return self.status != "non-maximal-witness"


@dataclass(frozen=True)
class MaximalityReport:
    entries: tuple[MaximalityEntry, ...]
    triple: Triple

    @property
    def maximal_consistent(self) -> bool:
        return all(e.consistent for e in self.entries)

    def to_json(self) -> dict:
        return {
            "maximal_consistent": self.maximal_consistent,
            "entries": [{"index": e.index, "status": e.status, "note": e.note} for e in self.entries],
        }


def triple_check_maximal(tri: Triple, agenda: Sequence[Series], max_len: int = 16) -> MaximalityReport:
    entries = []
    for i, r in enumerate(agenda):
        note = ""
        try:
            dev = dev_compute(r, tri, max_len)
        except CutoffExhausted as exc:
            dev = exc.development
            note = "cutoff reached before max_len"
        except UndeterminedSign as exc:  # pragma: no cover - defensive
            entries.append(MaximalityEntry(i, "non-maximal-witness", f"undetermined: {exc}"))
            continue
        if dev.complete:
            status = "in-field"
        elif dev.gap is not None:
            status = "value-transcendental"
            note = note or f"gap {dev.gap} outside H"
        elif _in_image(tri, r, max_len) is not None:
            status = "in-image"
        else:
            status = "non-maximal-witness"
            note = note or f"development {dev.prefix} escapes the image"
        entries.append(MaximalityEntry(i, status, note))
    certified = replace(tri, maximal_agenda=tuple(agenda))
    return MaximalityReport(tuple(entries), certified)
