from fractions import Fraction
from math import factorial

import pytest

from zetacrit import polyx
from zetacrit.errors import UnknownSeries
from zetacrit.polyx import RationalPoly as RP

F = Fraction


def test_ml_examples():
    assert polyx.ml_poly(0) == RP([1])
    assert polyx.ml_poly(2) == RP([0, 0, 2])
    assert polyx.ml_poly(3) == RP([0, F(2, 3), 0, F(4, 3)])


def test_ml_against_explicit_sum():
    # M_n(y) = sum_k C(n-1, k-1) C(y, k) 2^k, written out through falling factorials
    for n in range(1, 9):
        p = polyx.ml_poly(n)
        for y in range(-3, 5):
            want = sum(
                F(factorial(n - 1), factorial(k - 1) * factorial(n - k)) * 2 ** k * _binom(y, k)
                for k in range(1, n + 1)
            )
            assert p(F(y)) == want


def _binom(y, k):
    out = F(1)
    for i in range(k):
        out *= F(y - i, i + 1)
    return out


def test_q_polys_listed():
    assert polyx.q_poly(1) == RP([1, 2])
    assert polyx.q_poly(2) == RP([1, F(10, 3), F(2, 3)])
    assert polyx.q_poly(3) == RP([1, F(196, 45), F(14, 9), F(4, 45)])


def test_q_three_ways_agree():
    for k in range(12):
        a = polyx.q_poly(k)
        assert a == polyx.q_poly_recursive(k) == polyx.q_poly_from_ml(k)


def test_q_structure():
    x = RP([0, 1])
    for k in range(41):
        q = polyx.q_poly(k)
        assert q.degree == k
        assert q(0) == 1
        assert q[k] == F(4 ** k, factorial(2 * k))
        if k <= 20:
            assert q(1) == 2 * k + 1
    for k in range(1, 20):
        lhs = polyx.q_poly(k) * (RP([2 * k + 1]) + x * F(2, 2 * k + 1))
        rhs = polyx.q_poly(k + 1) * (k + 1) + polyx.q_poly(k - 1) * k
        assert lhs == rhs


def test_dilatation_expansion():
    assert polyx.dilatation_expansion(0) == (0, [])
    k, w = polyx.dilatation_expansion(1)
    assert (k, w) == (1, [F(1)])
    k, w = polyx.dilatation_expansion(4)
    assert w == [F(9, 3), F(9, 15), F(9, 35), F(9, 63)]
    for k in range(1, 10):
        kk, w = polyx.dilatation_expansion(k)
        q = polyx.q_poly(k)
        # x Q_k' = k Q_k - sum_m w_m Q_{k-m}
        rhs = q * kk - sum((polyx.q_poly(k - m) * c for m, c in enumerate(w, 1)), RP([]))
        assert RP([0, 1]) * q.derivative() == rhs


def test_ml_identities():
    assert polyx.ml_identities_check(12).passed


def test_series_expand():
    q = polyx.series_expand("Q-generating", 2)
    assert list(q.coeffs) == [RP([1]), RP([1, 2]), RP([1, F(10, 3), F(2, 3)])]
    assert list(polyx.series_expand("ML-generating", 1).coeffs) == [RP([1]), RP([0, 2])]
    assert list(polyx.series_expand("R-generating", 1).coeffs) == [RP([2]), RP([F(8, 3), -2])]
    with pytest.raises(UnknownSeries):
        polyx.series_expand("nope", 3)


def test_generating_ode():
    assert all(p.is_zero() for p in polyx.q_generating_ode_residual(16))


def test_poly_arithmetic():
    p, q = RP([1, 2]), RP([F(1, 2), 0, 3])
    assert (p * q)(F(3)) == p(F(3)) * q(F(3))
    assert (p - p).is_zero()
    assert RP([0, 0, 0]).degree == -1
    assert RP([1, 1, 1]).integral_0_1() == F(11, 6)
