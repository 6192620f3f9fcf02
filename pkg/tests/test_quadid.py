import math

import mpmath
import pytest
from mpmath import mp, mpc, mpf

from zetacrit import quadid
from zetacrit.mpsf import PrecisionContext
from zetacrit.quadid import QuadratureSpec

from conftest import rel


def test_integrate_0_inf_basics(ctx):
    with mp.workprec(300):
        v, e = quadid.integrate_0_inf(lambda x: mp.exp(-x), None, ctx)
        assert abs(v - 1) < 1e-30 and e < 1e-25
        v, _ = quadid.integrate_0_inf(lambda x: x / mp.sinh(x), None, ctx)
        assert rel(v, mp.pi ** 2 / 4) < 1e-30
        v, _ = quadid.integrate_0_inf(lambda x: x * x * mp.exp(-x), None, ctx)
        assert rel(v, 2) < 1e-30


def test_panel_scheme_agrees(ctx):
    spec = QuadratureSpec(scheme="adaptive-panel-legendre")
    with mp.workprec(300):
        v, _ = quadid.integrate_0_inf(lambda x: x / mp.sinh(x), spec, ctx)
        assert rel(v, mp.pi ** 2 / 4) < 1e-28


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(scheme="simpson")
    with pytest.raises(ValueError):
        QuadratureSpec(max_levels=2)


@pytest.mark.parametrize("s", ["-1", "-2.5", "-1+3j"])
def test_x_pow_sinh(s, ctx):
    r = quadid.identity_x_pow_sinh(s, ctx)
    assert r["residual"] <= 1e-29


def test_x_pow_sinh_against_mpmath_quad(ctx):
    s = mpf("-1.5")
    with mp.workprec(200):
        direct = mpmath.quad(lambda x: x ** (-s) / mp.sinh(x), [0, 1, mp.inf])
        assert rel(quadid.identity_x_pow_sinh(s, ctx)["closed_form"], direct) < 1e-40


@pytest.mark.parametrize("s", ["0.5", "-0.7", "0.3+2j"])
def test_xcothx(s, ctx):
    assert quadid.identity_xcothx(s, ctx)["residual"] <= 1e-29


def test_xcothx_at_trivial_zero(ctx):
    # the integral does not vanish at s = -2: eta/sin stays finite there
    r = quadid.identity_xcothx("-2", ctx)
    with mp.workprec(300):
        assert rel(r["integral"], 7 * mpmath.zeta(3)) < 1e-30
    assert r["residual"] < 1e-29


def test_xcothx_at_first_zero(zero1, ctx):
    r = quadid.identity_xcothx(zero1, ctx)
    with mp.workprec(300):
        pref = abs(zero1 * mp.power(mp.pi, 1 - zero1) / mp.sinpi(zero1 / 2))
        assert abs(r["integral"]) <= 1e-6 * pref
        assert abs(r["closed_form"]) <= 1e-20 * pref


def test_sin2_contour_values(ctx):
    with mp.workprec(300):
        for x in ("0.5", "1", "2"):
            r = quadid.identity_sin2_contour(x, ctx)
            xv = mpf(x)
            assert rel(r["closed_form"], 4 * (xv * mp.coth(xv) - 1)) < 1e-40
            assert r["residual"] < 1e-28
        assert abs(quadid.identity_sin2_contour("1", ctx)["closed_form"] - mpf("1.2521")) < 1e-4
        assert abs(quadid.identity_sin2_contour("2", ctx)["closed_form"] - mpf("4.2985")) < 1e-4


def test_sin2_ml(ctx):
    with mp.workprec(300):
        half = quadid.identity_sin2_contour("1", ctx)["closed_form"] / 2
        r1 = quadid.identity_sin2_ml(1, "1", ctx)
        assert rel(r1["closed_form"], half) < 1e-40
    for k, x in ((1, "1"), (2, "1"), (2, "0.5"), (4, "1.5")):
        assert quadid.identity_sin2_ml(k, x, ctx)["residual"] < 1e-28


def test_sin2_ml_values():
    with mp.workprec(200):
        m = quadid._ml_values(mpc(0, 1) / mp.pi, 3)
        assert abs(m[2] + 2 / mp.pi ** 2) < 1e-50
        assert abs(mpc(m[3]).real) < 1e-50


@pytest.mark.parametrize("s,j", [("0.5", 1), ("0.3", 3), ("-1", 3), ("0.25+1j", 1)])
def test_tanh_moments(s, j, ctx):
    assert quadid.identity_tanh_moments(s, j, ctx)["residual"] <= 1e-29


def test_tanh_unsplit_region(ctx):
    s = mpf("-0.5")
    val, _ = quadid.tanh_moment_unsplit(s, ctx)
    with mp.workprec(300):
        want = -4 * mpmath.gamma(s) / mp.power(2, s + 1) * mpmath.altzeta(s)
        assert rel(val, want) < 1e-29


def test_identity_suite(ctx):
    rep = quadid.identity_suite(ctx)
    assert rep.passed, rep.failures


def test_error_estimate_is_conservative(ctx):
    with mp.workprec(300):
        for s in ("-1", "-2.5"):
            r = quadid.identity_x_pow_sinh(s, ctx)
            assert abs(r["integral"] - r["closed_form"]) <= max(r["err_est"], 1e-70)


def test_residual_drops_with_precision():
    lo = quadid.identity_xcothx("0.5", PrecisionContext(bits=64, rel_tol=1e-15))["residual"]
    hi = quadid.identity_xcothx("0.5", PrecisionContext(bits=128, rel_tol=1e-30))["residual"]
    assert hi <= lo
