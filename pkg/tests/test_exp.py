from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from helpers import SQRT2, S, ladder
from rcx.development import ladder_triple, triple_from_basis, trivial_triple
from rcx.errors import (
    InfinitesimalExponent,
    IrrationalConstantExponent,
    LadderTooShallow,
    LogIncomplete,
    NotLogRepresentable,
)
from rcx.exp import GadgetSpec, chain_run, dyadic_check, exp_series, gadget_build, log_series, purely_infinite
from rcx.monomial import mono_log
from rcx.residue import ra_pow2
from rcx.series import Series, ser_sign

REG, YS = ladder(6)
ONE = REG.one()


def c0(ys, i, top, cut):
    """c_{0,i} = y_i + ... + y_top followed by a positive tail."""
    return S(*ys[i:top + 1], cutoff=ys[cut], tail_sign=1)


# -- exp / log -----------------------------------------------------------------------

def test_exp_examples():
    assert exp_series(Series.const(3), REG) == Series.const(8)
    assert exp_series(S(YS[1]), REG) == S(YS[0])
    assert exp_series(S(YS[1], (Fraction(1, 2), ONE)), REG) == S((SQRT2, YS[0]))


def test_exp_rejects_infinitesimals():
    with pytest.raises(InfinitesimalExponent):
        exp_series(S(YS[1], YS[0] ** -1), REG)
    with pytest.raises(InfinitesimalExponent):
        exp_series(S(YS[1], cutoff=YS[0] ** -1), REG)


def test_exp_rejects_irrational_constant():
    with pytest.raises(IrrationalConstantExponent):
        exp_series(S(YS[1], (SQRT2, ONE)), REG)


def test_log_examples():
    assert log_series(S(YS[0]), REG) == S(YS[1])
    assert log_series(Series.const(8), REG) == Series.const(3)
    assert log_series(S((SQRT2, YS[0])), REG) == S(YS[1], (Fraction(1, 2), ONE))


def test_log_errors():
    with pytest.raises(NotLogRepresentable):
        log_series(S((3, YS[0])), REG)
    with pytest.raises(NotLogRepresentable):
        log_series(S(YS[0], YS[1]), REG)
    with pytest.raises(LogIncomplete):
        log_series(S(YS[5]), REG)


def test_purely_infinite():
    assert purely_infinite(S(YS[0], YS[1]))
    assert not purely_infinite(S(YS[0], ONE))
    assert purely_infinite(S(YS[1], cutoff=YS[3]))
    assert not purely_infinite(S(YS[1], cutoff=YS[0] ** -1))


inf_monos = st.builds(lambda a, b, c: YS[0] ** a * YS[1] ** b * YS[2] ** c,
                      *[st.sampled_from([-1, 0, Fraction(1, 2), 1, 2])] * 3
                      ).filter(lambda m: REG.sign_of(m) > 0)
rat = st.fractions(min_value=-4, max_value=4, max_denominator=4)
exponents = st.builds(
    lambda terms, c: Series([(k, m) for k, m in terms]) + Series.const(c),
    st.lists(st.tuples(st.sampled_from([-2, -1, Fraction(1, 2), 1, 3]), inf_monos), max_size=3),
    rat,
)


@settings(max_examples=50, deadline=None)
@given(exponents)
def test_log_of_exp(s):
    assert log_series(exp_series(s, REG), REG) == s


@settings(max_examples=50, deadline=None)
@given(rat, st.lists(st.tuples(st.sampled_from(YS[:5]), st.sampled_from([-2, -1, Fraction(1, 3), 2])), max_size=3))
def test_exp_of_log(q, factors):
    m = ONE
    for y, e in factors:
        m = m * y ** e
    u = S((ra_pow2(q), m))
    assert exp_series(log_series(u, REG), REG) == u


@settings(max_examples=50, deadline=None)
@given(exponents, exponents)
def test_exp_homomorphism(s, t):
    assert exp_series(s + t, REG) == exp_series(s, REG) * exp_series(t, REG)


@settings(max_examples=30, deadline=None)
@given(exponents, exponents)
def test_exp_monotone(s, t):
    assume(ser_sign(s - t) != 0)
    assert ser_sign(exp_series(t, REG) - exp_series(s, REG)) == ser_sign(t - s)


@settings(max_examples=20, deadline=None)
@given(exponents, st.integers(1, 5))
def test_exp_growth(s, n):
    assume(ser_sign(s - Series.const(n * n)) > 0)
    assert ser_sign(exp_series(s, REG) - s ** n) > 0


# -- dyadic condition -------------------------------------------------------------------

def test_dyadic_ladder_passes():
    rep = dyadic_check(ladder_triple(REG), samples=[YS[0], YS[1]], images=[S(YS[1]), S(YS[2])])
    assert rep.passed
    assert rep.checked_sub == [str(YS[0]), str(YS[1])]
    assert len(rep.checked_sup) == 2


def test_dyadic_orphan_fails():
    reg, ys = ladder(6)
    g = exp_series(c0(ys, 1, 4, 5), reg).terms[0][1]
    tri = triple_from_basis(reg, [reg.ladder(i) for i in range(6)] + [g])
    rep = dyadic_check(tri)
    assert not rep.passed
    assert [f["direction"] for f in rep.failures] == ["sub"]
    assert rep.failures[0]["sample"] == str(g)


def test_dyadic_trivial_is_vacuous():
    rep = dyadic_check(trivial_triple(REG))
    assert rep.passed and not rep.checked_sub and not rep.checked_sup


def test_dyadic_skips_deepest_rung():
    rep = dyadic_check(ladder_triple(REG))
    assert rep.passed
    assert rep.skipped == [str(YS[5])]


# -- chain ---------------------------------------------------------------------------------

def test_chain_empty_agenda():
    reg, ys = ladder(5)
    st_ = chain_run(S(ys[0]), 1, [], 5)
    assert st_.stage == 1
    assert len(reg) == 5 and st_.h_by_stage[-1].dim == 5


def test_chain_zero_stages():
    reg, ys = ladder(5)
    st_ = chain_run(S(ys[0]), 0, [S(ys[1])], 5)
    assert st_.stage == 0
    assert st_.members[0].kind == "in-field"
    assert len(st_.h_by_stage) == 1


def test_chain_normalises_y():
    reg, ys = ladder(5)
    assert chain_run(S((-1, ys[0] ** -1)), 0, [], 5).stage == 0


def test_chain_c0_generators_at_stage_one():
    reg, ys = ladder(7)
    agenda = [c0(ys, i, 4, 5) for i in (1, 2)]
    st_ = chain_run(S(ys[0]), 2, agenda, 7, names=["c01", "c02"])
    first, second = st_.member("c01"), st_.member("c02")
    assert first.entered == 0 and first.kind == "immediate"
    assert first.exp_stage == 1 and first.exp_was_new
    (gid, _), = first.exp_monomial.exps
    assert reg.generators[gid].stage == 1
    # both constants share one hidden tail, so c02 = c01 - y_1
    assert second.entered == 0 and second.kind == "in-image"
    assert second.exp_monomial == first.exp_monomial / ys[0]
    assert second.exp_stage == 1 and not second.exp_was_new
    for mem in (first, second):
        assert not st_.h_by_stage[0].contains(mem.exp_monomial)
        assert st_.h_by_stage[1].contains(mem.exp_monomial)
    assert all(ev["dyadic"]["passed"] for ev in st_.trace)


def test_chain_finite_sum_needs_no_generator():
    reg, ys = ladder(6)
    st_ = chain_run(S(ys[0]), 1, [S(*ys[1:5])], 6)
    mem = st_.members[0]
    assert mem.kind == "in-field"
    assert mem.exp_monomial == ys[0] * ys[1] * ys[2] * ys[3]
    assert not mem.exp_was_new and mem.exp_stage == 0
    assert len(reg) == 6


def test_chain_registries_nested():
    reg, ys = ladder(7)
    st_ = chain_run(S(ys[0]), 2, [c0(ys, i, 4, 5) for i in (1, 2, 3)], 7)
    hs = st_.h_by_stage
    for a, b in zip(hs, hs[1:]):
        assert b.basis[:a.dim] == a.basis
    stages = [g.stage for g in reg.generators]
    assert stages == sorted(stages)


def test_chain_rejects_shallow_registry():
    reg, ys = ladder(3)
    with pytest.raises(LadderTooShallow):
        chain_run(S(ys[0]), 1, [], 5)


# -- gadget --------------------------------------------------------------------------------

def test_gadget_level_zero():
    consts, rep = gadget_build(GadgetSpec(0, 4, 6))
    c = consts[(0, 1)]
    assert [str(m) for _, m in c.terms] == ["y_1", "y_2", "y_3", "y_4"]
    assert c.cutoff is not None and c.tail_sign == 1
    assert rep.ok


def test_gadget_level_one():
    consts, rep = gadget_build(GadgetSpec(1, 4, 7))
    reg = rep.chain.triple.registry
    log = mono_log(reg, consts[(1, 1)].terms[0][1])
    assert [str(m) for _, m in log.terms] == ["y_2", "y_3", "y_4"]
    assert log.cutoff == reg.ladder(5) and log.tail_sign == 1
    levels = {row["level"]: row for row in rep.interleaving}
    assert levels[1]["display"].startswith("y_0 > c_{1,1} > y_1 > c_{1,2} > y_2")
    assert levels[1]["ok"]
    assert all(p["ok"] and p["generator_stage"] == 1 for p in rep.placement)


def test_gadget_limit_emulation():
    consts, rep = gadget_build(GadgetSpec(2, 4, 10, limit_cofinal=(1, 2)))
    assert rep.limit and rep.limit[0]["ok"]
    assert rep.ok


def test_gadget_ladder_too_shallow():
    with pytest.raises(LadderTooShallow):
        gadget_build(GadgetSpec(2, 4, 7))


def test_gadget_json():
    _, rep = gadget_build(GadgetSpec(1, 3, 6))
    data = rep.to_json()
    assert data["ok"] is True
    assert {"interleaving", "placement", "limit", "registry"} <= set(data)
