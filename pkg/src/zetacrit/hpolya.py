"""The R_n polynomials, the Gram-type matrix P built from them, and the
functionals sum_n R_n(z) v_n that annihilate the difference sequence at a zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from mpmath import mp, mpc, mpf

from . import mpsf, quadid, seqgen, spectrum
from .checks import Report
from .mpsf import DEFAULT_CTX, GUARD_BITS, PrecisionContext, to_mpc
from .polyx import RationalPoly, series_expand

__all__ = [
    "RFamily",
    "r_family",
    "PMatrix",
    "p_matrix",
    "hermitian_check",
    "leading_minors",
    "positive_definite_check",
    "r_values",
    "AnnihilatorResult",
    "annihilator_sum",
    "genp_series",
    "genp_integral",
    "genp_kernel_eval",
]


# --------------------------------------------------------------------- R_n

@dataclass(frozen=True)
class RFamily:
    polys: tuple[RationalPoly, ...]

    @property
    def order(self) -> int:
        return len(self.polys) - 1

    def __getitem__(self, n: int) -> RationalPoly:
        return self.polys[n]

    def __len__(self) -> int:
        return len(self.polys)

    def endpoint_check(self) -> Report:
        """R_n(1) = 2/(2n+1) and R_n(0) = 2 sum_{k<=n} 1/(2k+1), exactly."""
        rep = Report("R_n endpoints")
        partial = Fraction(0)
        for n, r in enumerate(self.polys):
            partial += Fraction(1, 2 * n + 1)
            at1, at0 = r(Fraction(1)), r(Fraction(0))
            rep.add(f"R_{n}(1)", at1 == Fraction(2, 2 * n + 1), at1 - Fraction(2, 2 * n + 1), 0)
            rep.add(f"R_{n}(0)", at0 == 2 * partial, at0 - 2 * partial, 0)
        return rep


def r_family(order: int) -> RFamily:
    if order < 0:
        raise ValueError("order must be >= 0")
    return RFamily(series_expand("R-generating", order).coeffs)


# --------------------------------------------------------------------- P

def _as_nu(nu):
    if isinstance(nu, (int, Fraction)):
        return Fraction(nu)
    if isinstance(nu, float) and nu.is_integer():
        return Fraction(int(nu))
    return mpf(nu)


@dataclass(frozen=True)
class PMatrix:
    entries: tuple[tuple, ...]
    nu: object = Fraction(0)

    @property
    def N(self) -> int:
        return len(self.entries)

    @property
    def exact(self) -> bool:
        return isinstance(self.nu, Fraction)

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r - 1][c - 1]

    def rows(self) -> list[list]:
        return [list(row) for row in self.entries]

    def is_symmetric(self) -> bool:
        n = self.N
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(i))


def p_matrix(N: int, nu=0, family: RFamily | None = None) -> PMatrix:
    """P_nm = (1/2) int_0^1 R_{n-1}(z^2) R_{m-1}(z^2) z^(2+2nu) dz, 1 <= n, m <= N.

    Exact for rational nu; an mpf nu gives mpf entries at the current precision.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    nu = _as_nu(nu)
    if nu < 0:
        raise ValueError("nu must be >= 0")
    fam = family if family is not None and len(family) >= N else r_family(N - 1)
    exact = isinstance(nu, Fraction)
    coeffs = [fam[n].coeffs if exact else [_mpf(c) for c in fam[n].coeffs] for n in range(N)]
    rows = [[None] * N for _ in range(N)]
    for i in range(N):
        for j in range(i, N):
            acc = Fraction(0) if exact else mpf(0)
            for a, x in enumerate(coeffs[i]):
                for b, y in enumerate(coeffs[j]):
                    acc += x * y / (3 + 2 * nu + 2 * a + 2 * b)
            rows[i][j] = rows[j][i] = acc / 2
    return PMatrix(tuple(tuple(r) for r in rows), nu)


def _mpf(x: Fraction):
    return mpf(x.numerator) / x.denominator


def _matmul(a, b):
    k = len(b)
    return [[sum((a[i][l] * b[l][j] for l in range(k)), Fraction(0)) for j in range(len(b[0]))]
            for i in range(len(a))]


def hermitian_check(N: int, nu=0) -> Report:
    """(PA) + (PA)^T - (nu/2) P against a symmetric rank-two correction k f^T + f k^T.

    For nu = 0 the correction must equal -(1/2) f f^T with f_i = 1/(2i-1).  For
    nu > 0 k is solved from the first column and every other entry is checked.
    ``data["k"]`` holds the recovered vector.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    P = p_matrix(N, nu)
    A = spectrum.build("A", N).rows()
    if not P.exact:
        A = [[_mpf(x) for x in row] for row in A]
    PA = _matmul(P.rows(), A)
    half_nu = P.nu / 2
    M = [[PA[i][j] + PA[j][i] - half_nu * P.entries[i][j] for j in range(N)] for i in range(N)]
    f = [Fraction(1, 2 * i + 1) for i in range(N)]
    if not P.exact:
        f = [_mpf(x) for x in f]

    rep = Report(f"hermitian identity N={N} nu={P.nu}")
    exact = P.exact
    if P.nu == 0:
        k = [-x / 4 for x in f]
    else:
        k1 = M[0][0] / 2
        k = [k1] + [M[i][0] - f[i] * k1 for i in range(1, N)]
    rep.data["k"] = k
    rep.data["M"] = M
    scale = max(abs(x) for row in M for x in row)
    for i in range(N):
        for j in range(i, N):
            want = k[i] * f[j] + f[i] * k[j]
            gap = M[i][j] - want
            if exact:
                rep.add(f"({i + 1},{j + 1})", gap == 0, gap, 0)
            else:
                tol = scale * mpf(2) ** (-mp.prec + 16)
                rep.add(f"({i + 1},{j + 1})", abs(gap) <= tol, abs(gap), tol)
    return rep


def leading_minors(P: PMatrix) -> list:
    rows = P.rows()
    out = []
    for n in range(1, P.N + 1):
        sub = [r[:n] for r in rows[:n]]
        out.append(spectrum._det_exact(sub) if P.exact else mp.det(mp.matrix(sub)))
    return out


def positive_definite_check(N: int, nu=0) -> Report:
    P = p_matrix(N, nu)
    rep = Report(f"P leading minors N={N}")
    minors = leading_minors(P)
    for n, d in enumerate(minors, 1):
        rep.add(f"minor {n}", d > 0, d, 0)
    rep.data["minors"] = minors
    return rep


# ------------------------------------------------------------ numeric R_n(z)

def _odd_partial_sums(n_max: int):
    acc, out = mpf(0), []
    for n in range(n_max + 1):
        acc += mpf(1) / (2 * n + 1)
        out.append(acc)
    return out


def r_values(z, n_max: int, ctx: PrecisionContext = DEFAULT_CTX) -> list:
    """R_0(z), ..., R_n_max(z) for a numeric z.

    Uses c_n, the t-coefficients of cosh(sqrt(z) kappa(t)), which obey
    (n+1)(n+1/2) c_{n+1} = (z + 2n^2) c_n - (n-1)(n-1/2) c_{n-1},
    and R(t) = 4 h(t) / ((1 - t)(1 + C(t))) with h = sum t^k/(2k+1).
    Cost is quadratic in n_max.
    """
    with mp.workprec(ctx.bits + GUARD_BITS + 16):
        z = mpf(z) if not isinstance(z, (mpc, complex)) else mpc(z)
        c = [mpf(1), 2 * z]
        for n in range(1, n_max):
            c.append(((z + 2 * n * n) * c[n] - (n - 1) * (n - mpf(0.5)) * c[n - 1])
                     / ((n + 1) * (n + mpf(0.5))))
        c = c[: n_max + 1]
        denom = [c[0] + 1] + c[1:]
        inv = [1 / denom[0]]
        for n in range(1, n_max + 1):
            inv.append(-mp.fdot(denom[1 : n + 1], inv[n - 1 :: -1]) / denom[0])
        front = [4 * x for x in _odd_partial_sums(n_max)]
        return [mp.fdot(front[: n + 1], inv[n::-1]) for n in range(n_max + 1)]


# -------------------------------------------------------------- annihilator

@dataclass(frozen=True)
class AnnihilatorResult:
    """Partial sums S_M = sum_{n<=M} R_n(z) v_n with two reference values.

    ``closed`` is 4 pi z^(-(1+s)/2) s pi^(1-s) eta(s)/sin(pi s/2), the integral
    that controls the sum; ``limit`` is the value the sum itself should reach,
    pi^(s-2) sin(pi s/2)/2 times ``closed``, which simplifies to
    2 s eta(s) z^(-(1+s)/2).  ``scale`` is |closed| with eta(s) replaced by 1,
    the size against which vanishing at a zero is judged.
    """

    z: object
    s: mpc
    partial: tuple
    closed: mpc
    limit: mpc
    scale: mpf
    closed_quadrature: mpc | None = None

    def dyadic(self) -> list[tuple[int, mpc]]:
        out, m = [], 1
        while m <= len(self.partial):
            out.append((m - 1, self.partial[m - 1]))
            m *= 2
        return out


def annihilator_sum(z, s, N: int, ctx: PrecisionContext = DEFAULT_CTX, *,
                    bundle: seqgen.SequenceBundle | None = None,
                    quadrature: bool = False) -> AnnihilatorResult:
    zz = Fraction(z) if isinstance(z, (int, Fraction)) else mpf(z)
    if not 0 < zz <= 1:
        raise ValueError("z must lie in (0, 1]")
    sz = to_mpc(s)
    if bundle is None or bundle.v is None or len(bundle.v) < N:
        bundle = seqgen.v_sequence(sz, N, ctx)
    v = bundle.v[:N]
    with mp.workprec(max(ctx.bits, max(bundle.bits.values(), default=ctx.bits)) + GUARD_BITS):
        zm = mpf(zz.numerator) / zz.denominator if isinstance(zz, Fraction) else zz
        rv = r_values(zm, N - 1, ctx)
        partial, acc = [], mpc(0)
        for r, x in zip(rv, v):
            acc += r * x
            partial.append(+acc)
        zpow = mp.power(zm, -(1 + sz) / 2)
        core = quadid.xcothx_closed(sz, ctx)
        closed = 4 * mp.pi * zpow * core
        limit = 2 * sz * mpsf.eta(sz, ctx) * zpow
        sin_half = mp.sinpi(sz / 2)
        scale = abs(4 * mp.pi * zpow * sz * mp.power(mp.pi, 1 - sz) / sin_half) if sin_half != 0 else abs(closed)
        quad = None
        if quadrature:
            val, _ = quadid.xcothx_integral(sz, ctx)
            quad = 4 * mp.pi * zpow * val
    return AnnihilatorResult(zz, sz, tuple(partial), closed, limit, scale, quad)


# ------------------------------------------------------- generating kernel

def genp_series(t, p, N: int = 20, P: PMatrix | None = None):
    """sum_{i,j<=N} P_ij t^(i-1) p^(j-1)."""
    P = P if P is not None and P.N >= N else p_matrix(N)
    t, p = mpf(t), mpf(p)
    tp = [t ** i for i in range(N)]
    pp = [p ** j for j in range(N)]
    acc = mpf(0)
    for i in range(N):
        for j in range(N):
            e = P.entries[i][j]
            acc += (mpf(e.numerator) / e.denominator) * tp[i] * pp[j]
    return acc


def _kappa(t):
    r = mp.sqrt(t)
    return mp.log((1 + r) / (1 - r))


def _g(x):
    return x / (16 * mp.cosh(x / 2) ** 2)


def genp_integral(t, p, ctx: PrecisionContext = DEFAULT_CTX):
    """The closed kernel built from g(x) = x/(16 cosh^2(x/2)), by quadrature.

    It carries an overall minus sign, so it equals the negated power series
    of P (see ``genp_kernel_eval``).
    """
    with mp.workprec(ctx.bits + GUARD_BITS):
        T, Q = _kappa(mpf(t)), _kappa(mpf(p))
        pref = -4 * (mp.cosh(T / 2) * mp.cosh(Q / 2)) ** 3 / (mp.sinh(T / 2) * mp.sinh(Q / 2))
        i1 = mp.quad(lambda z: T * _g(z * Q) * z / mp.cosh(z * T / 2) ** 2, [0, 1])
        i2 = mp.quad(lambda z: Q * _g(z * T) * z / mp.cosh(z * Q / 2) ** 2, [0, 1])
        return pref * (i1 + i2)


def _kgen(t):
    return _kappa(t) / (8 * mp.sqrt(t))


def _pde_residual(F, t, p, h):
    """Left minus right side of the first-order PDE satisfied by the kernel."""
    def coeff0(x):
        return ((3 * x - 1) / mp.sqrt(x) * _kappa(x) - 1) / 8

    def coeff1(x):
        return mp.sqrt(x) * (x - 1) * _kappa(x) / 4

    Fv = F(t, p)
    dt = (F(t + h, p) - F(t - h, p)) / (2 * h)
    dp = (F(t, p + h) - F(t, p - h)) / (2 * h)
    lhs = (coeff0(p) + coeff0(t)) * Fv + coeff1(p) * dp + coeff1(t) * dt
    rhs = _kappa(t) / (2 * mp.sqrt(t)) * _kgen(p) + _kappa(p) / (2 * mp.sqrt(p)) * _kgen(t)
    return lhs - rhs, max(abs(lhs), abs(rhs))


def genp_kernel_eval(t, p, ctx: PrecisionContext = DEFAULT_CTX, *, N: int = 20, h: float = 1e-6) -> dict:
    """Evaluate the kernel by quadrature, compare with the truncated P series,
    and measure the PDE residual by central differences.

    Keys: ``integral``, ``series``, ``series_gap`` (|integral + series|),
    ``tail_bound`` (a geometric bound on the dropped terms), ``pde_residual``
    (relative) and ``symmetry``.  The integral solves the PDE whose source is
    k(t) = (1/4) sum t^n/(2n+1); the P series is its negative and pairs with -k,
    matching k = -f/4 in ``hermitian_check``.
    """
    t, p = mpf(t), mpf(p)
    if not (0 < t < 1 and 0 < p < 1):
        raise ValueError("t and p must lie in (0, 1)")
    with mp.workprec(ctx.bits + GUARD_BITS):
        P = p_matrix(N)
        integral = genp_integral(t, p, ctx)
        series = genp_series(t, p, N, P)
        # entries are bounded by P_11 and decay, so the tail is below a geometric bound
        m = max(t, p)
        tail = 2 * mpf(2) / 3 * m ** N / (1 - m) ** 2
        swapped = genp_integral(p, t, ctx)
        h = mpf(h)
        res, scale = _pde_residual(lambda a, b: genp_integral(a, b, ctx), t, p, h)
        return {
            "integral": integral,
            "series": series,
            "series_gap": abs(integral + series),
            "tail_bound": tail,
            "pde_residual": abs(res) / scale,
            "symmetry": abs(integral - swapped),
        }
