from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf

from zetacrit import hpolya
from zetacrit.polyx import RationalPoly as RP

F = Fraction


def test_r_listed():
    fam = hpolya.r_family(3)
    assert fam[0] == RP([2])
    assert fam[1] == RP([F(8, 3), -2])
    assert fam[2] == RP([F(46, 15), -4, F(4, 3)])
    assert fam[3] == RP([F(352, 105), F(-88, 15), F(32, 9), F(-34, 45)])


def test_r_endpoints():
    assert hpolya.r_family(24).endpoint_check().passed


def test_r_generating_function_numerically():
    # compare sum R_n(z) t^n with the closed form at a sample point
    fam = hpolya.r_family(60)
    with mp.workprec(200):
        z, t = mpf("0.3"), mpf("0.2")
        k = mp.log((1 + mp.sqrt(t)) / (1 - mp.sqrt(t)))
        closed = k * mp.cosh(k / 2) ** 3 / (mp.sinh(k / 2) * mp.cosh(mp.sqrt(z) * k / 2) ** 2)
        series = sum(fam[n](F(3, 10)) * F(1, 5) ** n for n in range(61))
        assert abs(mpf(series.numerator) / series.denominator - closed) < 1e-35


def test_p_corner():
    P = hpolya.p_matrix(4)
    want = [
        [F(2, 3), F(22, 45), F(26, 63), F(5218, 14175)],
        [F(22, 45), F(382, 945), F(1702, 4725), F(4438, 13365)],
        [F(26, 63), F(1702, 4725), F(17114, 51975), F(65634094, 212837625)],
        [F(5218, 14175), F(4438, 13365), F(65634094, 212837625), F(1266926, 4343625)],
    ]
    assert P.rows() == want
    assert P.is_symmetric()


def test_p_entry_by_quadrature():
    fam = hpolya.r_family(5)
    P = hpolya.p_matrix(6, F(1, 2))
    with mp.workprec(200):
        f = lambda z: fam[2](z * z) * fam[4](z * z) * z ** 3 / 2
        want = mpmath.quad(lambda z: f(z), [0, 1])
        got = P[3, 5]
        assert abs(mpf(got.numerator) / got.denominator - want) < 1e-50


def test_hermitian_small_entry():
    rep = hpolya.hermitian_check(2)
    assert rep.passed
    assert rep.data["M"][0][0] == F(-1, 2)


@pytest.mark.parametrize("N", [4, 12, 16])
def test_hermitian_exact(N):
    assert hpolya.hermitian_check(N).passed


@pytest.mark.parametrize("nu", [F(1, 2), F(1), F(3, 4)])
def test_hermitian_modified(nu):
    rep = hpolya.hermitian_check(8, nu)
    assert rep.passed
    assert rep.data["k"] == [-F(1, 4 * (2 * i + 1)) for i in range(8)]


def test_hermitian_float_nu():
    with mp.workprec(200):
        assert hpolya.hermitian_check(6, mpf("0.3")).passed


def test_positive_definite():
    rep = hpolya.positive_definite_check(12)
    assert rep.passed
    assert all(m > 0 for m in rep.data["minors"])


def test_r_values_match_exact():
    fam = hpolya.r_family(25)
    with mp.workprec(300):
        for z in (F(1, 4), F(1, 2), F(1)):
            vals = hpolya.r_values(mpf(z.numerator) / z.denominator, 25)
            for n in range(26):
                x = fam[n](z)
                assert abs(vals[n] - mpf(x.numerator) / x.denominator) < 1e-60


def test_annihilator_z1_terms(ctx):
    from zetacrit import seqgen
    b = seqgen.v_sequence("0.3", 6, ctx)
    r = hpolya.annihilator_sum(1, "0.3", 6, ctx, bundle=b)
    with mp.workprec(300):
        acc = 0
        for n in range(6):
            acc += mpf(2) / (2 * n + 1) * b.v[n]
            assert abs(r.partial[n] - acc) < 1e-60


def test_annihilator_generic_value(ctx):
    s = mpf("0.3")
    r = hpolya.annihilator_sum(1, s, 64, ctx, quadrature=True)
    with mp.workprec(300):
        want = 4 * mp.pi * s * mp.power(mp.pi, 1 - s) * mpmath.altzeta(s) / mp.sinpi(s / 2)
        assert abs(r.closed - want) < 1e-60
        assert abs(r.closed_quadrature - want) <= 1e-10 * abs(want)
        assert abs(r.limit - 2 * s * mpmath.altzeta(s)) < 1e-60
    # the partial sums increase toward the limit at z = 1
    assert abs(r.partial[-1] - r.limit) < abs(r.partial[7] - r.limit) < abs(r.partial[0] - r.limit)


def test_annihilator_scaling_in_z(ctx):
    s = mpf("0.3")
    a = hpolya.annihilator_sum(F(1, 4), s, 4, ctx)
    b = hpolya.annihilator_sum(1, s, 4, ctx)
    with mp.workprec(300):
        assert abs(a.closed / b.closed - mp.power(4, (1 + s) / 2)) < 1e-50


def test_annihilator_at_zero(zero1, ctx):
    for z in (F(1, 4), F(1, 2), 1):
        r = hpolya.annihilator_sum(z, zero1, 8, ctx)
        assert abs(r.closed) <= 1e-8 * r.scale


def test_annihilator_domain(ctx):
    with pytest.raises(ValueError):
        hpolya.annihilator_sum(0, "0.3", 4, ctx)


def test_kernel_against_series():
    r = hpolya.genp_kernel_eval("0.1", "0.1")
    assert r["series_gap"] <= 1e-8 + r["tail_bound"]
    assert r["symmetry"] == 0


def test_kernel_pde():
    r = hpolya.genp_kernel_eval("0.2", "0.3")
    assert r["pde_residual"] <= 1e-6
    assert r["series_gap"] <= 1e-8 + r["tail_bound"]


def test_kernel_domain():
    with pytest.raises(ValueError):
        hpolya.genp_kernel_eval(0, "0.3")
