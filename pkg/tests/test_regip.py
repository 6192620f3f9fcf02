from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpc, mpf

from zetacrit import regip
from zetacrit.errors import PoleError, PrecisionEscalationExhausted
from zetacrit.mpsf import PrecisionContext
from zetacrit.polyx import RationalPoly as RP, q_poly

from conftest import rel

F = Fraction


def test_inner_examples():
    assert regip.inner(RP([1]), RP([1])) == F(1, 4)
    assert regip.inner(q_poly(1), q_poly(0)) == 0
    assert regip.inner(q_poly(1), q_poly(1)) == F(3, 4)


def test_inner_moments_match_altzeta():
    table = regip.InnerProductTable.build(12)
    with mp.workprec(200):
        for m in range(12):
            x = table.moment(m)
            assert rel(mpf(x.numerator) / x.denominator, mpmath.altzeta(-1 - 2 * m)) < 1e-50


def test_orthogonality_up_to_16():
    rep = regip.orthogonality_check(16)
    assert rep.passed
    assert len(rep.checks) == 17 * 18 // 2


def test_inner_integral_small_cases():
    ctx = PrecisionContext(bits=128, rel_tol=1e-30)
    val, _ = regip.inner_integral(RP([1]), RP([1]), ctx)
    assert rel(val, mpf(1) / 4) < 1e-28
    val, _ = regip.inner_integral(RP([0, 1]), RP([1]), ctx)
    assert rel(val, mpf(-1) / 8) < 1e-28
    val, _ = regip.inner_integral(q_poly(2), q_poly(1), ctx)
    assert abs(val) < 1e-25


def test_fs_functional():
    ctx = PrecisionContext()
    s = mpc("0.3", "2")
    with mp.workprec(300):
        assert rel(regip.fs_functional(s, RP([1]), ctx), mpmath.altzeta(s)) < 1e-30
        assert rel(regip.fs_functional(s, RP([0, 1]), ctx), mpmath.altzeta(s - 2)) < 1e-30
        assert rel(regip.fs_functional(-1, q_poly(1) * q_poly(1), ctx), mpf(3) / 4) < 1e-30
    with pytest.raises(PoleError):
        regip.fs_functional(3, RP([1]), ctx)


def test_fs_matches_inner_on_the_negative_axis():
    # F_{-1}(p q) = <p, q>
    for k in range(6):
        got = regip.fs_functional(-1, q_poly(k) * q_poly(k))
        assert abs(got - mpf(2 * k + 1) / 4) < 1e-40


def test_fs_relative_policy_rejects_true_zero():
    # an orthogonal pair sums to zero; no precision meets a relative tolerance
    with pytest.raises(PrecisionEscalationExhausted):
        regip.fs_functional(-1, q_poly(3) * q_poly(1), PrecisionContext(bits=64, rel_tol=1e-15, max_escalations=1))


def test_cosh_kernel_normalization():
    rep = regip.cosh_kernel_check(8)
    assert rep.passed
    assert rep.data["normalization"] == "1/2"
    assert rep.data["displayed_form_matches"] is False
    first = {c.name: c for c in rep.checks}
    assert first["coeff (0,0)"].residual == 0


def test_generating_kernel():
    assert regip.generating_kernel_check(12).passed
