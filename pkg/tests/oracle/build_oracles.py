"""Regenerate frozen_oracles.json from sympy / mpmath only (never imports rcx).

Run:  python3 tests/oracle/build_oracles.py
"""

from __future__ import annotations

import json
from pathlib import Path

import mpmath
import sympy as sp

OUT = Path(__file__).with_name("frozen_oracles.json")
DIGITS = 64


def q(v) -> str:
    v = sp.Rational(v)
    return str(v.p) if v.q == 1 else f"{v.p}/{v.q}"


def series_at_infinity(expr, x, order):
    """Coefficients c_k of x^k (k descending) from an expansion at infinity."""
    t = sp.Symbol("t", positive=True)
    s = sp.series(expr.subs(x, 1 / t), t, 0, order).removeO()
    poly = sp.expand(s)
    out = {}
    for term in sp.Add.make_args(poly):
        c, e = term.as_coeff_exponent(t)
        out[str(-e)] = q(c)  # t^e = x^(-e)
    return out


def lex_sign(poly_terms):
    """Sign of the lex-leading coefficient, variables ordered y1 > y2 > ..."""
    ys = sp.symbols("y1:9")
    p = sp.Poly(sum(c * m for c, m in poly_terms), *ys)
    return int(sp.sign(p.LC(order="lex")))


def main():
    mpmath.mp.dps = DIGITS + 10
    x = sp.Symbol("x", positive=True)
    res = {}

    # residue field
    mp = sp.Poly(sp.minimal_polynomial(sp.sqrt(2) + sp.sqrt(3), x), x)
    res["sqrt2_plus_sqrt3"] = {
        "minpoly_low_first": [int(c) for c in reversed(mp.all_coeffs())],
        "value": mpmath.nstr(mpmath.sqrt(2) + mpmath.sqrt(3), DIGITS),
    }
    res["sqrt2_vs_141_100"] = int(mpmath.sign(mpmath.sqrt(2) - mpmath.mpf(141) / 100))
    roots = [r for r in mpmath.polyroots([1, 0, -2, -5], maxsteps=200, extraprec=200) if abs(mpmath.im(r)) < 1e-50]
    res["cubic_root"] = mpmath.nstr(mpmath.re(roots[0]), DIGITS)
    res["floor_sqrt2"] = int(mpmath.floor(mpmath.sqrt(2)))
    res["two_pow_half"] = mpmath.nstr(mpmath.power(2, mpmath.mpf(1) / 2), DIGITS)

    # series arithmetic, with y_i as independent symbols (exact polynomial algebra)
    y0, y1, y2 = sp.symbols("y0 y1 y2")
    res["merge"] = str(sp.expand((y0 + y1) + (y1 + y2)))
    res["square"] = str(sp.expand((y0 + y1) ** 2))
    res["inv_geometric_4"] = series_at_infinity(1 / (1 - 1 / x), x, 4)
    res["root_x2_plus_x"] = series_at_infinity(sp.sqrt(x ** 2 + x), x, 3)
    res["x_over_x_minus_1_cut5"] = series_at_infinity(x / (x - 1), x, 5)
    res["x_over_x_minus_1_len6"] = series_at_infinity(x / (x - 1), x, 6)
    res["sqrt_x2_plus_x_cut8"] = series_at_infinity(sp.sqrt(x ** 2 + x), x, 9)

    # log matching: solve sum_g e_g log(g) = 2*y1 with log(y0)=y1, log(y1)=y2
    e0, e1 = sp.symbols("e0 e1")
    sol = sp.solve([sp.Eq(e0, 2), sp.Eq(e1, 0)], [e0, e1])
    res["lookup_2y1"] = {"y0": q(sol[e0]), "y1": q(sol[e1])}
    res["mono_log_y0sq_y1cube"] = str(sp.expand(2 * y1 + 3 * y2))

    # g with log = y1+y2+y3+y4 against y0^3: sign of (y1+y2+y3+y4) - 3*y1
    ys = sp.symbols("y1:9")
    res["g_vs_y0_cubed"] = lex_sign([(1, ys[0]), (1, ys[1]), (1, ys[2]), (1, ys[3]), (-3, ys[0])])

    # comparisons inside the ladder: y1^(1/2) vs y2 reduces to (1/2) y2 - y3 in the logs
    res["sqrt_y1_vs_y2"] = lex_sign([(sp.Rational(1, 2), ys[1]), (-1, ys[2])])

    OUT.write_text(json.dumps(res, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
