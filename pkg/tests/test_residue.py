from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from helpers import ORACLES, SQRT2, SQRT3
from rcx.errors import DivisionByZero, EvenDegree, NegativeEvenRoot
from rcx.residue import (
    EQ,
    GT,
    LT,
    RealAlg,
    _untagged_arith,
    ra_arith,
    ra_compare,
    ra_floor,
    ra_from_rational,
    ra_odd_root_of_poly,
    ra_pow2,
    ra_root,
)

R = RealAlg.rational


def fresh(a: RealAlg) -> RealAlg:
    """Same value without any cached field coordinates."""
    return RealAlg(a.minpoly, *a.interval)


# -- construction -----------------------------------------------------------------

@pytest.mark.parametrize("q", [Fraction(0), Fraction(3, 2), Fraction(-7)])
def test_from_rational_is_canonical(q):
    a = ra_from_rational(q)
    assert a.is_rational and a.exact_rational == q
    assert a.degree == 1
    assert a == q


def test_rational_minpoly_is_primitive():
    assert R(Fraction(3, 2)).minpoly == (-3, 2)
    assert R(0).minpoly == (0, 1)


# -- arithmetic ----------------------------------------------------------------

def test_sqrt2_squared_is_two():
    assert ra_arith("mul", SQRT2, SQRT2) == 2
    assert (SQRT2 * SQRT2).is_rational


def test_sqrt2_minus_itself():
    assert ra_arith("add", SQRT2, -SQRT2).is_zero()
    assert ra_arith("sub", SQRT2, SQRT2) == 0


def test_sqrt2_plus_sqrt3_against_oracle():
    want = ORACLES["sqrt2_plus_sqrt3"]
    s = ra_arith("add", SQRT2, SQRT3)
    assert list(s.minpoly) == want["minpoly_low_first"]
    lo, hi = s.refine(Fraction(1, 10 ** 40))
    with mpmath.workdps(60):
        x = mpmath.mpf(want["value"])
        assert mpmath.mpf(lo.numerator) / lo.denominator <= x <= mpmath.mpf(hi.numerator) / hi.denominator


def test_field_path_matches_resultant_path():
    pairs = [(SQRT2, SQRT3), (SQRT2 + SQRT3, SQRT2 * 3 - 1), (ra_pow2(Fraction(1, 3)), SQRT2)]
    for a, b in pairs:
        for op in ("add", "mul"):
            via_field = ra_arith(op, a, b)
            via_resultant = _untagged_arith(op, fresh(a), fresh(b))
            assert via_field.minpoly == via_resultant.minpoly
            assert ra_compare(fresh(via_field), via_resultant) == EQ


def test_division():
    assert ra_arith("div", R(1), R(4)) == Fraction(1, 4)
    assert ra_arith("div", SQRT2, SQRT2) == 1
    assert (R(1) / SQRT2) * 2 == SQRT2


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        ra_arith("div", SQRT2, R(0))


def test_unknown_operation():
    with pytest.raises(ValueError):
        ra_arith("pow", SQRT2, SQRT2)


# -- order ---------------------------------------------------------------------

def test_compare_examples():
    assert ra_compare(SQRT2, fresh(SQRT2)) == EQ
    assert ra_compare(SQRT2, R(Fraction(141, 100))) == ORACLES["sqrt2_vs_141_100"] == GT
    assert ra_compare(R(0), R(1)) == LT


def test_compare_close_values():
    # 3.146264369941972 is below sqrt2 + sqrt3 by about 3.4e-16
    near = R(Fraction(3146264369941972, 10 ** 15))
    assert ra_compare(SQRT2 + SQRT3, near) == GT


def test_equal_values_built_differently():
    a = (SQRT2 + SQRT3) * (SQRT2 + SQRT3)
    b = SQRT2 * SQRT3 * 2 + 5
    assert a == b
    assert hash(fresh(a)) == hash(fresh(b))


# -- roots, floors, powers of two ----------------------------------------------------------

def test_root_examples():
    assert ra_root(R(4), 2) == 2
    assert ra_root(R(2), 2) == SQRT2
    assert ra_root(R(-8), 3) == -2


def test_even_root_of_negative():
    with pytest.raises(NegativeEvenRoot):
        ra_root(R(-2), 2)


def test_root_of_irrational():
    r = ra_root(SQRT2, 2)
    assert r ** 4 == 2
    assert r.sign() > 0


def test_odd_root_of_poly_examples():
    assert ra_odd_root_of_poly([-8, 0, 0, 1]) == 2
    assert ra_odd_root_of_poly([-5, 1]) == 5
    r = ra_odd_root_of_poly([-5, -2, 0, 1])
    with mpmath.workdps(60):
        assert abs(r.approx(40) - mpmath.mpf(ORACLES["cubic_root"])) < mpmath.mpf(10) ** -35


def test_odd_root_picks_smallest():
    # (x - 1)(x - 2)(x - 3)
    assert ra_odd_root_of_poly([-6, 11, -6, 1]) == 1


def test_odd_root_with_irrational_coefficients():
    # x^3 - sqrt2 has the real root 2^(1/6)
    r = ra_odd_root_of_poly([-SQRT2, 0, 0, 1])
    assert r ** 6 == 2


def test_odd_root_rejects_even_degree():
    with pytest.raises(EvenDegree):
        ra_odd_root_of_poly([1, 0, 1])


def test_floor_examples():
    assert ra_floor(R(Fraction(3, 2))) == 1
    assert ra_floor(SQRT2) == ORACLES["floor_sqrt2"] == 1
    assert ra_floor(R(Fraction(-1, 2))) == -1
    assert ra_floor(-SQRT2) == -2


def test_pow2_examples():
    assert ra_pow2(1) == 2
    assert ra_pow2(0) == 1
    assert ra_pow2(Fraction(1, 2)) == SQRT2
    with mpmath.workdps(60):
        err = ra_pow2(Fraction(1, 2)).approx(40) - mpmath.mpf(ORACLES["two_pow_half"])
        assert abs(err) < mpmath.mpf(10) ** -35


def test_log2_exponent_recognition():
    assert ra_pow2(Fraction(-3, 4)).log2_exponent() == Fraction(-3, 4)
    assert R(8).log2_exponent() == 3
    assert SQRT3.log2_exponent() is None


def test_json_round_trip():
    for a in (R(Fraction(-7, 3)), SQRT2 + SQRT3, ra_pow2(Fraction(2, 3))):
        b = RealAlg.from_json(a.to_json())
        assert a == b


def test_from_json_rejects_non_isolating_interval():
    with pytest.raises(ValueError):
        RealAlg.from_json({"minpoly": [-2, 0, 1], "interval": ["-2", "2"]})


# -- properties ----------------------------------------------------------------------

POOL = [SQRT2, SQRT3, -SQRT2, SQRT2 + SQRT3, SQRT2 * SQRT3, ra_pow2(Fraction(1, 3)),
        R(Fraction(7, 5)), R(-2), R(0), R(1)]

elem = st.sampled_from(POOL) | st.fractions(max_denominator=20, min_value=-20, max_value=20).map(R)


@settings(max_examples=60, deadline=None)
@given(elem, elem, elem)
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if not a.is_zero():
        assert a * a.inverse() == 1


@settings(max_examples=60, deadline=None)
@given(elem, elem, elem)
def test_order_compatibility(a, b, c):
    if a < b:
        assert a + c < b + c
    if a > 0 and b > 0:
        assert a * b > 0


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=0, max_value=50, max_denominator=12), st.integers(1, 5))
def test_root_power_identity(a, n):
    assert ra_root(R(a), n) ** n == a


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=-5, max_value=5, max_denominator=6),
       st.fractions(min_value=-5, max_value=5, max_denominator=6))
def test_pow2_homomorphism(p, q):
    assert ra_pow2(p) * ra_pow2(q) == ra_pow2(p + q)


@settings(max_examples=60, deadline=None)
@given(elem)
def test_floor_brackets(a):
    z = ra_floor(a)
    assert R(z) <= a < R(z + 1)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(POOL))
def test_refinement_agrees_with_mpmath(a):
    with mpmath.workdps(60):
        x = a.approx(50)
        lo, hi = a.refine(Fraction(1, 10 ** 30))
        assert mpmath.mpf(lo.numerator) / lo.denominator - mpmath.mpf(10) ** -45 <= x
        assert x <= mpmath.mpf(hi.numerator) / hi.denominator + mpmath.mpf(10) ** -45
