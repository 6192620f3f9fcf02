from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpc, mpf

from zetacrit import mpsf
from zetacrit.errors import PoleError, PrecisionEscalationExhausted
from zetacrit.mpsf import CancellationAbort, PrecisionContext, escalate, to_mpc

from conftest import rel


def test_bernoulli_examples():
    assert mpsf.bernoulli(0) == 1
    assert mpsf.bernoulli(1) == Fraction(-1, 2)
    assert mpsf.bernoulli(2) == Fraction(1, 6)
    assert mpsf.bernoulli(12) == Fraction(-691, 2730)


def test_bernoulli_against_mpmath():
    for n in range(2, 61):
        p, q = mpmath.bernfrac(n)
        assert mpsf.bernoulli(n) == Fraction(int(p), int(q))


def test_eta_neg_odd_examples():
    assert mpsf.eta_neg_odd(0) == Fraction(1, 4)
    assert mpsf.eta_neg_odd(1) == Fraction(-1, 8)
    assert mpsf.eta_neg_odd(2) == Fraction(1, 4)


def test_eta_neg_odd_matches_floating_eta(ctx):
    with mp.workprec(300):
        for m in range(31):
            exact = mpsf.eta_neg_odd(m)
            val = mpsf.eta(-1 - 2 * m, ctx)
            want = mpf(exact.numerator) / exact.denominator
            assert rel(val, want) <= 1e-30
            assert rel(want, mpmath.altzeta(-1 - 2 * m)) <= 1e-30


def test_eta_special_values(ctx):
    with mp.workprec(300):
        assert abs(mpsf.eta(-1, ctx) - mpf(1) / 4) < 1e-70
        assert abs(mpsf.eta(0, ctx) - mpf(1) / 2) < 1e-70
        assert rel(mpsf.eta(2, ctx), mp.pi ** 2 / 12) < 1e-70


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(-30, 30))
def test_eta_against_mpmath_altzeta(x, y):
    ctx = PrecisionContext(bits=128, rel_tol=1e-30)
    s = mpc(x, y)
    with mp.workprec(200):
        got = mpsf.eta(s, ctx)
        want = mpmath.altzeta(s)
        assert abs(got - want) <= 1e-28 * max(abs(want), mpf(1e-20))


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 3).filter(lambda x: abs(x - 1) > 1e-3), st.floats(-20, 20))
def test_eta_zeta_relation(x, y):
    ctx = PrecisionContext(bits=128, rel_tol=1e-30)
    s = mpc(x, y)
    with mp.workprec(200):
        e = mpsf.eta(s, ctx)
        z = mpsf.zeta(s, ctx)
        assert abs(e - (1 - mp.power(2, 1 - s)) * z) <= 1e-28 * max(abs(e), mpf(1e-20))


def test_eta_conjugate_symmetry(ctx):
    with mp.workprec(300):
        for s in (mpc("0.3", "7.5"), mpc("-1.7", "2"), mpc("2.5", "-11")):
            assert abs(mpsf.eta(s.conjugate(), ctx) - mpsf.eta(s, ctx).conjugate()) < 1e-70


def test_zeta_values(ctx):
    with mp.workprec(300):
        assert rel(mpsf.zeta(2, ctx), mp.pi ** 2 / 6) < 1e-70
        assert abs(mpsf.zeta(-2, ctx)) < 1e-70
        assert abs(mpsf.zeta(0, ctx) + mpf(1) / 2) < 1e-70
    with pytest.raises(PoleError):
        mpsf.zeta(1, ctx)


def test_gamma_and_digamma(ctx):
    with mp.workprec(300):
        assert abs(mpsf.gamma(1, ctx) - 1) < 1e-70
        assert abs(mpsf.gamma(5, ctx) - 24) < 1e-65
        assert rel(mpsf.gamma(mpf(1) / 2, ctx), mp.sqrt(mp.pi)) < 1e-70
        for s in (mpc("0.3", "4"), mpc("-2.5", "1"), mpc("7.25", "-3")):
            assert rel(mpsf.gamma(s, ctx), mpmath.gamma(s)) < 1e-70
            assert rel(mpsf.digamma(s, ctx), mpmath.digamma(s)) < 1e-65
    with pytest.raises(PoleError):
        mpsf.gamma(-3, ctx)


def test_eta_prime(ctx):
    with mp.workprec(300):
        h = mpf(2) ** (-256 // 3)
        fd = (mpsf.eta(h, ctx) - mpsf.eta(-h, ctx)) / (2 * h)
        assert rel(mpsf.eta_prime(0, ctx), fd) < 1e-20
        direct = mpmath.nsum(lambda n: (-1) ** n * mp.log(n) / n ** 2, [2, mp.inf])
        assert rel(mpsf.eta_prime(2, ctx), direct) < 1e-40
        d = mpsf.eta_prime(mpf("0.37"), ctx)
        assert abs(mpc(d).imag) < 1e-70
        s = mpc("0.5", "14")
        assert rel(mpsf.eta_prime(s, ctx), mpmath.diff(mpmath.altzeta, s)) < 1e-40


def test_eta_shifts_match_pointwise(ctx):
    s = mpc("0.3", "5")
    shifts = mpsf.eta_shifts(s, 12, ctx)
    with mp.workprec(300):
        for j, v in enumerate(shifts):
            assert rel(v, mpmath.altzeta(s - 2 * j)) < 1e-28


def test_precision_doubling_never_worse():
    pts = [mpc("0.5", "14.1"), mpc("-4.5", "3"), mpc("1.5", "0")]
    with mp.workprec(800):
        truth = [mpmath.altzeta(s) for s in pts]
    prev = None
    for bits in (64, 128, 256):
        c = PrecisionContext(bits=bits, rel_tol=2.0 ** (8 - bits))
        err = max(float(rel(mpsf.eta(s, c), t)) for s, t in zip(pts, truth))
        if prev is not None:
            assert err <= prev
        prev = err


def test_to_mpc_keeps_decimal_digits():
    z = to_mpc("0.5+14.134725141734693790457251983562j")
    with mp.workprec(200):
        assert abs(z.imag - mpf("14.134725141734693790457251983562")) < mpf(10) ** -30
    assert to_mpc(Fraction(1, 3)).real != mpf(1) / 3 or mp.prec > 53


def test_context_validation():
    with pytest.raises(ValueError):
        PrecisionContext(bits=32)
    with pytest.raises(ValueError):
        PrecisionContext(bits=64, rel_tol=1e-40)
    assert PrecisionContext().doubled().bits == 512


def test_escalate_doubles_then_gives_up():
    seen = []

    def always_lossy(wp):
        seen.append(wp)
        raise CancellationAbort(10_000.0)

    with pytest.raises(PrecisionEscalationExhausted):
        escalate(always_lossy, PrecisionContext(bits=64, rel_tol=1e-10, max_escalations=2))
    assert len(seen) == 3 and seen[1] - 32 == 2 * (seen[0] - 32)

    def fine(wp):
        return mpf(1), 0.0

    assert escalate(fine, PrecisionContext(bits=64, rel_tol=1e-10))[2] == 64
