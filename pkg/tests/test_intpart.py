from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from helpers import ORACLES, SQRT2, SQRT3, S, ladder
from rcx.errors import NonPositive, UndeterminedTail
from rcx.intpart import IpElement, ip_exp, ip_floor, ip_verify
from rcx.residue import RealAlg
from rcx.series import Series, ser_sign, ser_valuation

REG, YS = ladder(5)
Y0, Y1, Y2 = YS[:3]
ONE = REG.one()


def test_floor_examples():
    assert ip_floor(S(Y0, (Fraction(1, 2), ONE))) == IpElement(S(Y0), 0)
    assert ip_floor(S((2, ONE), (-1, Y0 ** -1))) == IpElement(Series.zero(), 1)
    e = ip_floor(S(Y0, (SQRT2, ONE), Y0 ** -1))
    assert ORACLES["floor_sqrt2"] == 1
    assert e == IpElement(S(Y0), 1)


def test_floor_negative_constant():
    assert ip_floor(S(Y1, (Fraction(-1, 3), ONE))).z == -1
    assert ip_floor(S((-SQRT3, ONE))).z == -2
    assert ip_floor(S((-2, ONE), Y1 ** -1)).z == -2
    assert ip_floor(S((-2, ONE), (-1, Y1 ** -1))).z == -3


def test_floor_keeps_negative_infinite_terms():
    e = ip_floor(S((-1, Y0), Y1, (Fraction(5, 2), ONE)))
    assert e.infinite == S((-1, Y0), Y1)
    assert e.z == 2


def test_floor_with_cutoff_below_one():
    s = S(Y0, (Fraction(7, 3), ONE), cutoff=Y0 ** -1)
    assert ip_floor(s) == IpElement(S(Y0), 2)


def test_floor_hidden_boundary():
    # integer constant and nothing known about the infinitesimal tail
    with pytest.raises(UndeterminedTail):
        ip_floor(S(Y0, (3, ONE), cutoff=Y0 ** -2))
    # the tail sign is known, so the boundary is decided
    assert ip_floor(S(Y0, (3, ONE), cutoff=Y0 ** -2, tail_sign=-1)).z == 2


def test_floor_hidden_constant():
    with pytest.raises(UndeterminedTail):
        ip_floor(S(Y0, cutoff=ONE))


def test_verify_examples():
    assert ip_verify(IpElement(S(Y0), 0), S(Y0, (Fraction(1, 2), ONE)))
    assert ip_verify(IpElement(Series.zero(), 1), S((2, ONE), (-1, Y0 ** -1)))
    assert not ip_verify(IpElement(S(Y0), 1), S(Y0, (Fraction(1, 2), ONE)))


def test_element_rejects_finite_monomials():
    with pytest.raises(ValueError):
        IpElement(S(Y0 ** -1), 0)


def test_exp_examples():
    assert ip_exp(IpElement(Series.zero(), 3), REG) == IpElement(Series.zero(), 8)
    assert ip_exp(IpElement(S(Y1), 0), REG) == IpElement(S(Y0), 0)
    assert ip_exp(IpElement(S(Y1), 2), REG) == IpElement(S((4, Y0)), 0)


def test_exp_negative_shift_is_flagged():
    e = ip_exp(IpElement(S(Y1), -1), REG)
    assert e.non_integral
    assert e.infinite == S((Fraction(1, 2), Y0))
    assert e.to_json()["non_integral"] is True


def test_exp_rejects_non_positive():
    with pytest.raises(NonPositive):
        ip_exp(IpElement(Series.zero(), 0), REG)
    with pytest.raises(NonPositive):
        ip_exp(IpElement(S((-1, Y1)), 5), REG)


def test_json_round_trip():
    e = IpElement(S(Y0, (-2, Y1)), -4)
    data = e.to_json()
    assert data["z"] == -4
    assert IpElement.from_json(data, REG) == e


# -- properties ---------------------------------------------------------------------

coeffs = st.sampled_from([RealAlg.rational(Fraction(k, 3)) for k in (-7, -3, -1, 1, 2, 3, 6)]
                         + [SQRT2, -SQRT3, SQRT2 + SQRT3])
monos = st.builds(lambda e0, e1: Y0 ** e0 * Y1 ** e1,
                  *[st.sampled_from([-1, 0, Fraction(1, 2), 1])] * 2)
series = st.lists(st.tuples(coeffs, monos), max_size=4).map(Series)


@settings(max_examples=80, deadline=None)
@given(series)
def test_floor_is_an_integer_part(s):
    e = ip_floor(s)
    assert ip_verify(e, s)
    # uniqueness of z for the canonical t
    for dz in (-1, 1):
        assert not ip_verify(IpElement(e.infinite, e.z + dz), s)


@settings(max_examples=80, deadline=None)
@given(st.integers(-5, 5), st.sampled_from([Y0 ** -1, Y1 ** -2, Y0 ** -1 * Y1]), st.sampled_from([-1, 1]))
def test_boundary_cases(z, eps, sign):
    s = S(Y0, (z, ONE), (sign, eps))
    e = ip_floor(s)
    assert e.z == (z if sign > 0 else z - 1)
    assert ip_verify(e, s)


@settings(max_examples=60, deadline=None)
@given(series, series)
def test_discreteness(a, b):
    e1, e2 = ip_floor(a), ip_floor(b)
    if e1 != e2:
        d = e1.value() - e2.value()
        v = ser_valuation(d)
        assert not v.is_one() or abs(d.terms[0][0].exact_rational) >= 1


positive_elements = st.builds(
    lambda c, m, z: IpElement(Series([(c, m)]), z),
    st.sampled_from([RealAlg.rational(k) for k in (1, 2, 3)] + [SQRT2]),
    st.sampled_from([Y1, Y1 ** 2, Y0 ** Fraction(1, 2), Y2 * Y1]),
    st.integers(0, 4),
)


@settings(max_examples=40, deadline=None)
@given(positive_elements)
def test_exp_closure(e):
    out = ip_exp(e, REG)
    assert all(m.reg.sign_of(m) > 0 for _, m in out.infinite.terms)
    assert out.z == 0 and not out.non_integral
    # 2^e lies above e itself
    assert ser_sign(out.value() - e.value()) > 0
