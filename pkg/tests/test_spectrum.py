from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpc, mpf

from zetacrit import spectrum
from zetacrit.errors import MissingParameter
from zetacrit.mpsf import PrecisionContext, to_mpc

F = Fraction


def test_start_rows():
    s = F(1, 2)
    m = spectrum.build("START", 3, s)
    assert [m[1, c] for c in (1, 2, 3)] == [1, F(1, 3), F(1, 5)]
    assert [m[3, c] for c in (1, 2, 3)] == [-s / 5, -s / 5, 1]


def test_a_matrix():
    a = spectrum.build("A", 2)
    assert a[1, 1] == F(-3, 8) and a[1, 2] == F(2, 3) and a[2, 1] == 0 and a[2, 2] == F(-7, 8)


@pytest.mark.parametrize("s", [F(1, 3), F(-7, 2), F(2)])
def test_start_is_u_minus_s_l(s):
    N = 12
    st, u, l = (spectrum.build(k, N, s if k == "START" else None) for k in ("START", "U", "L"))
    assert all(st[r, c] == u[r, c] - s * l[r, c] for r in range(1, N + 1) for c in range(1, N + 1))
    assert spectrum.rowred_from_start(N, s)


def test_build_errors():
    with pytest.raises(MissingParameter):
        spectrum.build("START", 4)
    with pytest.raises(ValueError):
        spectrum.build("NOPE", 4)
    with pytest.raises(ValueError):
        spectrum.build("U", 0)


def test_k_and_opw_shapes():
    k = spectrum.build("K", 4)
    assert [k[r, r] for r in range(1, 5)] == [-1, -3, -5, -7]
    assert k[2, 1] == 0 and k[1, 2] == F(2, 3)
    w = spectrum.build("OPW", 3, F(1))
    assert w[2, 1] == -F(1, 6) - F(1, 2) and w[1, 1] == F(1, 3) and w[3, 1] == 0


def test_det_small_cases():
    assert spectrum.det_indicator(F(1, 2), 1) == 1
    assert spectrum.det_indicator(F(3), 2) == F(4, 3)
    for n in range(1, 9):
        assert spectrum.det_polynomial_check(n)


def test_det_matches_mpmath():
    s = mpc("0.5", "14")
    ctx = PrecisionContext(bits=256)
    with mp.workprec(300):
        m = spectrum.build("START", 10, to_mpc(s)).rows()
        want = mpmath.det(mpmath.matrix(m))
        assert abs(spectrum.det_indicator(s, 10, ctx) - want) < 1e-60 * abs(want)


def test_det_precision_stable():
    s = mpc("0.5", "21")
    a = spectrum.det_indicator(s, 24, PrecisionContext(bits=128, rel_tol=1e-30))
    b = spectrum.det_indicator(s, 24, PrecisionContext(bits=256, rel_tol=1e-30))
    assert abs(a - b) <= 1e-30 * abs(b)


def test_scan_has_no_minima_below_first_zero():
    assert spectrum.zero_scan(2, 10, 0.25, 32) == []


def test_scan_profile_deterministic_across_workers():
    a = spectrum.scan_profile(12, 13, 0.25, 12, workers=1)
    b = spectrum.scan_profile(12, 13, 0.25, 12, workers=2)
    assert a == b


def test_profile_minima_picks_interior_dip():
    ts = [0.0, 1.0, 2.0, 3.0, 4.0]
    vals = [5.0, 4.0, 0.001, 4.0, 5.0]
    # refinement calls the real det; only check detection and bracketing here
    out = spectrum.profile_minima(ts[1:4], [4.0, 0.001, 4.0], 4, threshold=1.0, width=0.5)
    assert len(out) == 1 and 1.0 <= out[0].t <= 3.0


def test_matrix_residuals_trivial_zero(ctx):
    rep = spectrum.matrix_residuals(-2, 4, 64, ctx)
    assert rep.passed


def test_matrix_residuals_generic_point(ctx):
    s = to_mpc("0.3")
    rep = spectrum.matrix_residuals(s, 4, 64, ctx)
    assert not rep.passed
    assert rep.data["inhomogeneous_gap"] < 1e-10
    with mp.workprec(300):
        want = s * mpmath.altzeta(s)
        assert abs(rep.data["constraint"] - want) < 1e-10 * abs(want)


@pytest.mark.slow
def test_matrix_residuals_first_zero(zero1, ctx):
    rep = spectrum.matrix_residuals(zero1, 4, 64, ctx)
    assert rep.passed, rep.failures


def test_nonsimple_residual_generic(ctx):
    rep = spectrum.nonsimple_residual("0.3", 3, 64, ctx)
    assert rep.passed, rep.failures


def test_nonsimple_step_halving(ctx):
    gaps = []
    for h in (1e-2, 5e-3):
        rep = spectrum.nonsimple_residual("0.3", 2, 64, ctx, h=h)
        gaps.append(max(abs(a - b) for a, b in zip(rep.data["fd"], rep.data["analytic"])))
    assert 3.0 < float(gaps[0] / gaps[1]) < 5.0


def test_nonsimple_trivial_zero(ctx):
    rep = spectrum.nonsimple_residual(-2, 2, 64, ctx)
    with mp.workprec(300):
        d = mpmath.diff(mpmath.altzeta, -2)
        # at s = -2 the derivative row 0 reduces to s eta'(s)
        assert abs(rep.data["analytic"][0] - (-2) * d) < 1e-30
    assert rep.passed
