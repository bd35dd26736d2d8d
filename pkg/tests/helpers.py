"""Shared builders and random generators for the test suite."""

from __future__ import annotations

import json
import random
from fractions import Fraction
from pathlib import Path

from rcx.monomial import Monomial, grp_init_ladder
from rcx.residue import RealAlg, ra_root
from rcx.series import Series

ORACLES = json.loads((Path(__file__).parent / "oracle" / "frozen_oracles.json").read_text())

SQRT2 = ra_root(RealAlg.rational(2), 2)
SQRT3 = ra_root(RealAlg.rational(3), 2)


def q(text: str) -> Fraction:
    return Fraction(text)


def ladder(depth: int = 6):
    reg = grp_init_ladder(depth)
    return reg, [reg.ladder(i) for i in range(depth)]


def S(*terms, cutoff: Monomial | None = None, tail_sign=None) -> Series:
    """S((c, m), ...) or S(m, ...) with coefficient 1."""
    out = []
    for t in terms:
        out.append(t if isinstance(t, tuple) else (1, t))
    return Series(out, cutoff, tail_sign=tail_sign)


def from_oracle_powers(table: dict, x: Monomial) -> Series:
    """Series sum c_k x^k from an oracle table {k: c}."""
    return Series([(Fraction(c), x ** Fraction(k)) for k, c in table.items()])


class RandomSeries:
    """Seeded generator of exact series over a ladder."""

    def __init__(self, gens, seed: int = 0, irrational: bool = True):
        self.gens = gens
        self.rng = random.Random(seed)
        self.irrational = irrational
        self._pool = [SQRT2, SQRT3, SQRT2 + SQRT3, SQRT2 * 3 - 1] if irrational else []

    def coeff(self) -> RealAlg:
        r = self.rng
        c = RealAlg.rational(Fraction(r.choice([-3, -2, -1, 1, 2, 3, 5]), r.choice([1, 1, 2, 3])))
        if self._pool and r.random() < 0.25:
            c = c * r.choice(self._pool)
        return c

    def monomial(self, max_gens: int = 2) -> Monomial:
        r = self.rng
        exps = {}
        for g in r.sample(self.gens, k=r.randint(0, max_gens)):
            e = Fraction(r.choice([-2, -1, 1, 2, 3]), r.choice([1, 1, 2]))
            exps[g.exps[0][0]] = e
        return Monomial(exps, self.gens[0].reg)

    def series(self, max_terms: int = 3) -> Series:
        n = self.rng.randint(1, max_terms)
        return Series([(self.coeff(), self.monomial()) for _ in range(n)])

    def nonzero(self, max_terms: int = 3) -> Series:
        while True:
            s = self.series(max_terms)
            if s.terms:
                return s

    def purely_infinite(self, max_terms: int = 3, positive: bool = True) -> Series:
        while True:
            s = self.nonzero(max_terms)
            s = Series([(c, m) for c, m in s.terms if not m.is_one() and m.reg.sign_of(m) > 0])
            if s.terms:
                if positive and s.terms[0][0].sign() < 0:
                    s = -s
                return s
