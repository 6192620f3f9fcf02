"""The sequences u_k, v_k = u_{k+1} - u_k and c_k, their recursion residuals
and decay diagnostics.

u_k = F_s(Q_k) and v_k = F_s(M_{2k+2}(sqrt x)) are sums of positive
polynomial coefficients against shifted eta values; the cancellation in those
sums grows roughly linearly in k and drives precision escalation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Mapping, Sequence

from mpmath import mp, mpc, mpf

from . import mpsf
from .errors import EtaZero, MethodDisagreement, PoleError, PrecisionEscalationExhausted, U1Zero
from .mpsf import (
    DEFAULT_CTX,
    GUARD_BITS,
    CancellationAbort,
    PrecisionContext,
    acceptable,
    escalate,
    lost_bits,
    to_mpc,
)
from .quadid import QuadratureSpec, _gl_rule, _ml_values, integrate_0_inf, sin2_ml_rhs, tanh_moment

__all__ = [
    "SequenceBundle",
    "u_sequence",
    "v_sequence",
    "derivative_bundle",
    "derivative_fd_check",
    "ResidualRow",
    "recursion_residual",
    "recursion_residuals",
    "k0_identity",
    "c_sequence",
    "c_identity_check",
    "mu_ratio",
    "mu_ratio_check",
    "DecayReport",
    "decay_report",
    "genfb_eval",
    "genfb_cross_check",
]


def _freeze(d) -> Mapping:
    return MappingProxyType(dict(d))


@dataclass(frozen=True)
class SequenceBundle:
    """Immutable container for the sequences at one point s.

    ``u[k]`` for k = 0..N, ``v[k]`` for k = 0..N-1 and ``c[k-1]`` = c_k for
    k = 1..N.  ``err``, ``method`` and ``bits`` are keyed by array name.
    """

    s: mpc
    N: int
    u: tuple | None = None
    v: tuple | None = None
    c: tuple | None = None
    u_prime: tuple | None = None
    j: int = 1
    err: Mapping[str, tuple] = field(default_factory=lambda: _freeze({}))
    method: Mapping[str, str] = field(default_factory=lambda: _freeze({}))
    bits: Mapping[str, int] = field(default_factory=lambda: _freeze({}))

    def with_array(self, name: str, values, errs, method: str, bits: int) -> "SequenceBundle":
        return replace(
            self,
            **{name: tuple(values)},
            err=_freeze({**self.err, name: tuple(errs)}),
            method=_freeze({**self.method, name: method}),
            bits=_freeze({**self.bits, name: bits}),
        )

    def c_k(self, k: int):
        if self.c is None:
            raise ValueError("c is not filled")
        if not 1 <= k <= len(self.c):
            raise IndexError(k)
        return self.c[k - 1]

    def difference_residuals(self):
        """max_k |v_k - (u_{k+1} - u_k)| / (combined error), needs u and v."""
        if self.u is None or self.v is None:
            raise ValueError("u and v must both be filled")
        worst = 0.0
        eu, ev = self.err["u"], self.err["v"]
        with mp.workprec(max(self.bits["u"], self.bits["v"]) + GUARD_BITS):
            for k, vk in enumerate(self.v[: len(self.u) - 1]):
                gap = abs(vk - (self.u[k + 1] - self.u[k]))
                bound = ev[k] + eu[k] + eu[k + 1]
                if gap:
                    worst = max(worst, float(gap / bound) if bound else math.inf)
        return worst


# ----------------------------------------------------------- eta-sum engine


def _check_s(z: mpc):
    if z.imag == 0 and z.real > 0 and z.real == int(z.real) and int(z.real) % 2 == 1:
        raise PoleError(f"s = {int(z.real)} is a positive odd integer")


def _ml_even_coefficients(n_max: int):
    """Yield (m, coeffs of M_{2m}(sqrt x) in x) for m = 1..n_max at the current precision.

    Odd members are kept as y * P(y^2); all coefficients are nonnegative.
    """
    prev, cur = [mpf(1)], [mpf(2)]
    for n in range(1, 2 * n_max):
        inv = mpf(1) / (n + 1)
        if n % 2:
            nxt = [mpf(0)] + [2 * c for c in cur]
            for i, c in enumerate(prev):
                nxt[i] += (n - 1) * c
        else:
            nxt = [2 * c for c in cur]
            for i, c in enumerate(prev):
                nxt[i] += (n - 1) * c
        nxt = [c * inv for c in nxt]
        prev, cur = cur, nxt
        if n % 2:
            yield (n + 1) // 2, cur


def _eta_sum(z: mpc, n_max: int, ctx: PrecisionContext, want_u: bool, want_v: bool, values=None):
    """u_0..u_n_max and/or v_0..v_{n_max-1} against ``values(ctx) -> [E_0..E_n_max]``."""
    values = values or (lambda c: mpsf.eta_shifts(z, n_max, c))
    log_tol = ctx.rel_tol

    def compute(wp):
        bits = wp - GUARD_BITS
        E = values(ctx.with_bits(bits))
        absE = [abs(e) for e in E]
        out = {"u": ([], []), "v": ([], [])}
        worst = [0.0]
        unit = mpf(2) ** (-bits)

        def record(coeffs, name):
            total = mp.fdot(coeffs, E[: len(coeffs)])
            scale = mp.fdot(coeffs, absE[: len(coeffs)])
            lost = lost_bits(scale, total)
            if not acceptable(lost, bits, log_tol):
                raise CancellationAbort(lost)
            worst[0] = max(worst[0], lost)
            out[name][0].append(total)
            out[name][1].append(scale * unit * (len(coeffs) + 2))

        q = [mpf(1)]
        if want_u:
            record(q, "u")
        for m, coeffs in _ml_even_coefficients(n_max):
            if want_v:
                record(coeffs, "v")
            if want_u:
                q = [a + b for a, b in zip(q + [mpf(0)], coeffs)]
                record(q, "u")
        return out, worst[0]

    out, lost, bits = escalate(compute, ctx)
    return out, bits


def u_sequence(s, N: int, ctx: PrecisionContext = DEFAULT_CTX, *, with_v: bool = False) -> SequenceBundle:
    """u_k = F_s(Q_k) for k = 0..N (and v_k alongside when ``with_v``)."""
    z = to_mpc(s)
    _check_s(z)
    if N < 1:
        raise ValueError("N must be >= 1")
    out, bits = _eta_sum(z, N, ctx, True, with_v)
    b = SequenceBundle(s=z, N=N).with_array("u", out["u"][0], out["u"][1], "eta-sum", bits)
    if with_v:
        b = b.with_array("v", out["v"][0], out["v"][1], "eta-sum", bits)
    return b


def _v_integral(z: mpc, N: int, ctx: PrecisionContext, spec: QuadratureSpec | None):
    if not 0 < z.real < 2:
        raise ValueError("the integral form of v_k needs 0 < Re s < 2")
    spec = spec or QuadratureSpec.for_ctx(ctx)
    with mp.workprec(ctx.bits + GUARD_BITS):
        inv_pi = 1 / mp.pi

        def f(x):
            m = _ml_values(mpc(0, x * inv_pi), 2 * N)
            g = mp.exp(-z * mp.log(x)) / mp.sinh(x)
            return [m[2 * k + 2] * g for k in range(N)]

        vals, errs = integrate_0_inf(f, spec, ctx, oscillation=abs(float(z.imag)) + 2, vector=True)
        pref = -mp.power(mp.pi, z - 1) * mp.sinpi(z / 2)
        return [pref * v for v in vals], [abs(pref) * e for e in errs]


def v_sequence(s, N: int, ctx: PrecisionContext = DEFAULT_CTX, method: str = "auto", *,
               cross_check: bool = False, spec: QuadratureSpec | None = None) -> SequenceBundle:
    """v_k for k = 0..N-1.

    ``eta-sum`` works for every admissible s; ``integral`` needs 0 < Re s < 2.
    ``auto`` uses the eta sum and falls back to the integral when precision
    escalation is exhausted.  With ``cross_check`` both are computed and
    MethodDisagreement is raised if they differ by more than 10 rel_tol.
    """
    z = to_mpc(s)
    _check_s(z)
    if N < 1:
        raise ValueError("N must be >= 1")
    if method not in ("eta-sum", "integral", "auto"):
        raise ValueError(f"unknown method {method!r}")
    b = SequenceBundle(s=z, N=N)
    if method in ("eta-sum", "auto"):
        try:
            out, bits = _eta_sum(z, N, ctx, False, True)
            b = b.with_array("v", out["v"][0], out["v"][1], "eta-sum", bits)
        except PrecisionEscalationExhausted:
            if method == "eta-sum" or not 0 < z.real < 2:
                raise
    if b.v is None or method == "integral":
        vals, errs = _v_integral(z, N, ctx, spec)
        b = b.with_array("v", vals, errs, "integral", ctx.bits)
    if cross_check:
        other = "integral" if b.method["v"] == "eta-sum" else "eta-sum"
        if other == "integral":
            ov, _ = _v_integral(z, N, ctx, spec)
        else:
            ov = _eta_sum(z, N, ctx, False, True)[0]["v"][0]
        for k, (a, c) in enumerate(zip(b.v, ov)):
            scale = max(abs(a), abs(c))
            if scale and abs(a - c) > 10 * ctx.rel_tol * scale:
                raise MethodDisagreement(
                    f"v_{k}: eta-sum and integral differ by {mp.nstr(abs(a - c) / scale, 3)} (relative)"
                )
    return b


def derivative_bundle(s, N: int, ctx: PrecisionContext = DEFAULT_CTX) -> SequenceBundle:
    """u and u' = d u / d s, both by eta sums (u' against eta'(s - 2j))."""
    z = to_mpc(s)
    _check_s(z)
    b = u_sequence(z, N, ctx)

    def primes(c):
        return [mpsf.eta_prime(z - 2 * m, c) for m in range(N + 1)]

    out, bits = _eta_sum(z, N, ctx, True, False, values=primes)
    return b.with_array("u_prime", out["u"][0], out["u"][1], "eta-sum", bits)


def derivative_fd_check(s, N: int, ctx: PrecisionContext = DEFAULT_CTX, h: float = 1e-8):
    """Largest relative gap between u'_k and a central difference of u_k with step h."""
    z = to_mpc(s)
    b = derivative_bundle(z, N, ctx)
    with mp.workprec(ctx.bits + GUARD_BITS):
        hh = mpf(h)
        up = u_sequence(z + hh, N, ctx).u
        dn = u_sequence(z - hh, N, ctx).u
        worst = mpf(0)
        for k in range(N + 1):
            fd = (up[k] - dn[k]) / (2 * hh)
            scale = max(abs(b.u_prime[k]), mpf(1) if b.u_prime[k] == 0 else 0)
            worst = max(worst, abs(fd - b.u_prime[k]) / scale)
    return float(worst)


# ------------------------------------------------------- recursion residuals


@dataclass(frozen=True)
class ResidualRow:
    k: int
    residual: mpc
    scale: mpf
    tail: mpc
    tail_err: float

    @property
    def relative(self) -> float:
        return float(abs(self.residual) / self.scale) if self.scale else float(abs(self.residual))


_ALPHA0 = mpf("0.6")


def _sin_factor_bits(z: mpc) -> int:
    # 2 pi^(s-1) sin(pi s/2) is about e^(pi |t|/2); the contour integrals cancel that much
    return int(math.pi * abs(float(z.imag)) / 2 / math.log(2)) + 1


class _ContourGrid:
    """Nodes and weights for int_0^inf h(x) x^(-s)/sinh(x) dx with the weight folded in."""

    def __init__(self, z: mpc, tol: float, rate: float, wp: int, degree: int = 4):
        sigma, t = float(z.real), abs(float(z.imag))
        ln_tol = -math.log(tol)
        y_max = (ln_tol + 5) / max(2 - sigma, 0.25)
        x_max = ln_tol + 10 + 2 * abs(sigma) * math.log(ln_tol + 10)
        rule = _gl_rule(degree, wp)
        n = len(rule)
        # an n-point rule integrates a phase of total swing P over a panel to
        # about (e P / 4n)^(2n); pick the largest swing meeting tol
        swing = 4 * n / math.e * tol ** (1.0 / (2 * n))
        nodes, weights = [], []
        with mp.workprec(wp):
            a = 0.0
            while a < y_max:
                b = min(a + min(1.0, swing / (1 + t + rate * math.exp(-a))), y_max)
                lo, hi = mpf(a), mpf(b)
                for u, w in rule:
                    y = (lo + hi) / 2 + (hi - lo) / 2 * u
                    x = mp.exp(-y)
                    nodes.append(x)
                    weights.append(w * (hi - lo) / 2 * x * mp.exp(-z * mp.log(x)) / mp.sinh(x))
                a = b
            a = 1.0
            while a < x_max:
                b = min(a + min(1.0, swing / (1 + t / a + rate)), x_max)
                lo, hi = mpf(a), mpf(b)
                for u, w in rule:
                    x = (lo + hi) / 2 + (hi - lo) / 2 * u
                    nodes.append(x)
                    weights.append(w * (hi - lo) / 2 * mp.exp(-z * mp.log(x)) / mp.sinh(x))
                a = b
        self.nodes = nodes
        self.weights = weights

    def sin2(self, omega):
        c = omega / (2 * mp.pi)
        return mp.fdot(self.weights, [mp.sin(c * x) ** 2 for x in self.nodes])


def _double_tails(z: mpc, u: Sequence, ks: Sequence[int], tol: float, ctx: PrecisionContext):
    """S_k = sum_n u_{k+n}/((2n+1)(2n+3)) through the generating function Xi.

    alpha in [0, alpha0]: the power series of u_{k+n} integrated termwise.
    alpha in [alpha0, 1): alpha = tanh(w/2) with (1 - alpha^2) Xi(alpha^2)
    from its sin^2 integral on a shared grid, Gauss-Legendre panel pairs in w.
    """
    k_max = max(ks)
    a0 = _ALPHA0
    cancel = float(a0) ** (2 * k_max)
    # the sin^2 integral is smaller than its integrand by about e^(-pi |t|/2)
    grid_tol = tol * cancel * 0.1 * 2.0 ** (-_sin_factor_bits(z))
    wp = max(128, int(-math.log2(grid_tol)) + 48)
    with mp.workprec(wp):
        a2 = a0 * a0
        series = {}
        for k in ks:
            acc = mpc(0)
            p = a0
            n = 0
            while True:
                if k + n >= len(u):
                    raise ValueError(f"u must reach index {k + n} for the tail at k = {k}")
                w = p / (2 * n + 1) - p * a2 / (2 * n + 3)
                term = u[k + n] * w
                acc += term
                if n > 4 and abs(w) * (abs(u[k + n]) + 1) < tol * cancel * 1e-3:
                    break
                p *= a2
                n += 1
            series[k] = acc / 2

        omega_max = -math.log(tol * cancel * 0.1) + 8
        grid = _ContourGrid(z, grid_tol, omega_max / math.pi, wp)
        eta0 = u[0]
        pref = 2 * mp.power(mp.pi, z - 1) * mp.sinpi(z / 2)
        uu = [mpc(x) for x in u[:k_max]]

        def integrand(w):
            G = eta0 + pref * grid.sin2(w)
            alpha = mp.tanh(w / 2)
            one_m = 1 / mp.cosh(w / 2) ** 2
            x2 = alpha * alpha
            out = []
            P = mpc(0)
            pw = mpf(1)
            kset = set(ks)
            for k in range(k_max + 1):
                if k in kset:
                    out.append((G - one_m * P) / pw * one_m / 4)
                if k < k_max:
                    P += uu[k] * pw
                    pw *= x2
            return out

        w0 = 2 * mp.atanh(a0)
        hi_rule, lo_rule = _gl_rule(4, wp), _gl_rule(3, wp)
        total = [mpc(0)] * len(ks)
        err = [mpf(0)] * len(ks)
        a = w0
        quiet = 0
        width = mpf(6)
        while quiet < 2:
            b = a + width
            mid, half = (a + b) / 2, width / 2
            hi = [mpc(0)] * len(ks)
            lo = [mpc(0)] * len(ks)
            for rule, acc in ((hi_rule, hi), (lo_rule, lo)):
                for x, wt in rule:
                    vals = integrand(mid + half * x)
                    for i, v in enumerate(vals):
                        acc[i] += wt * half * v
            for i in range(len(ks)):
                total[i] += hi[i]
                err[i] += abs(hi[i] - lo[i])
            small = all(abs(h) < tol * 0.01 * (abs(t) + abs(series[k]) + 1)
                        for h, t, k in zip(hi, total, ks))
            quiet = quiet + 1 if small else 0
            a = b
            if a > w0 + 4 * omega_max:
                break
        return {k: (series[k] + total[i], float(err[i])) for i, k in enumerate(ks)}


def _single_tails(z: mpc, u: Sequence, ks: Sequence[int], tol: float, ctx: PrecisionContext):
    """S_k = u_{k-1}/2 + (1/4) pi^(s-1) sin(pi s/2) int B_k(x) x^(-s)/sinh x dx, with
    B_k(x) = 2 sum_{n<k} M_2n(ix/pi)/(2n-2k+1) - i pi M_{2k-1}(ix/pi) coth x."""
    if not z.real < 2:
        raise ValueError("needs Re s < 2")
    wp = max(128, int(-math.log2(tol)) + 64 + _sin_factor_bits(z) + 4 * max(ks))
    local = ctx.with_bits(wp - GUARD_BITS)
    spec = QuadratureSpec(scheme="adaptive-panel-legendre", abs_tol=tol * 1e-6, rel_tol=tol * 1e-3)
    with mp.workprec(wp):
        k_max = max(ks)
        inv_pi = 1 / mp.pi

        def f(x):
            m = _ml_values(mpc(0, x * inv_pi), 2 * k_max)
            g = mp.exp(-z * mp.log(x)) / mp.sinh(x)
            cth = mp.coth(x)
            out = []
            for k in ks:
                acc = mpc(0)
                for n in range(k):
                    acc += m[2 * n] / (2 * n - 2 * k + 1)
                out.append((2 * acc - 1j * mp.pi * m[2 * k - 1] * cth) * g)
            return out

        vals, errs = integrate_0_inf(f, spec, local, oscillation=abs(float(z.imag)) + 1, vector=True)
        pref = mp.power(mp.pi, z - 1) * mp.sinpi(z / 2) / 4
        return {k: (u[k - 1] / 2 + pref * vals[i], float(abs(pref) * errs[i])) for i, k in enumerate(ks)}


def _depth_for(ks, tol):
    k_max = max(ks)
    a0 = float(_ALPHA0)
    cancel = a0 ** (2 * k_max)
    return k_max + int(-math.log(tol * cancel * 1e-3) / (-2 * math.log(a0))) + 12


def recursion_residuals(bundle: SequenceBundle, ks: Sequence[int], ctx: PrecisionContext = DEFAULT_CTX,
                        *, tail: str = "double", tol: float = 1e-14) -> list[ResidualRow]:
    """Residuals of -(1/2)(s/(2k-1) + 1) u_{k-1} + sum_n u_{k+n}/((2n+1)(2n+3)).

    ``tail="double"`` evaluates the infinite sum through the generating
    function Xi (series near 0, contour integral for alpha >= 0.6);
    ``tail="single"`` uses the closed inner integral over alpha.  If the
    bundle is too short for the double method it is extended.
    """
    ks = sorted(set(int(k) for k in ks))
    if not ks or ks[0] < 1:
        raise ValueError("k must be >= 1")
    if bundle.u is None:
        raise ValueError("bundle.u must be filled")
    z = bundle.s
    if not z.real < 2:
        raise ValueError("the recursion holds for Re s < 2")
    u = bundle.u
    if tail == "double":
        need = _depth_for(ks, tol)
        if len(u) <= need:
            u = u_sequence(z, need, ctx).u
        tails = _double_tails(z, u, ks, tol, ctx)
    elif tail == "single":
        tails = _single_tails(z, u, ks, tol, ctx)
    else:
        raise ValueError(f"unknown tail method {tail!r}")
    rows = []
    with mp.workprec(ctx.bits + GUARD_BITS):
        for k in ks:
            head = -(z / (2 * k - 1) + 1) * u[k - 1] / 2
            S, e = tails[k]
            # |u_k|/3 is the first term of the tail; it keeps the scale honest when u_{k-1} ~ 0
            scale = abs(head) + abs(S) + abs(u[k]) / 3
            rows.append(ResidualRow(k, head + S, scale, S, e))
    return rows


def recursion_residual(bundle: SequenceBundle, k: int, ctx: PrecisionContext = DEFAULT_CTX,
                       *, tail: str = "double", tol: float = 1e-14) -> mpc:
    return recursion_residuals(bundle, [k], ctx, tail=tail, tol=tol)[0].residual


def k0_identity(s, ctx: PrecisionContext = DEFAULT_CTX, *, tail: str = "double",
                tol: float = 1e-14) -> ResidualRow:
    """-(1/2)(s+1) u_0 + sum_n u_{n+1}/((2n+1)(2n+3)), which vanishes for Re s < 2."""
    z = to_mpc(s)
    b = u_sequence(z, _depth_for([1], tol) + 1, ctx)
    return recursion_residuals(b, [1], ctx, tail=tail, tol=tol)[0]


# -------------------------------------------------------------- c sequence


def c_sequence(s, N: int, ctx: PrecisionContext = DEFAULT_CTX, j: int = 1, *,
               c1=None, zero_tol: float = 1e-10) -> SequenceBundle:
    """c_1..c_N solving
    delta_kj = -(s/(2(2k+1)) + 1/2) c_{k+1} + sum_{n<k} c_{k-n}/((2n+1)(2n+3)),
    with c_1 = (2/(s+1)) u_j/eta(s) unless ``c1`` overrides it.

    The closure is the ratio of regularised tanh moments of exponents 2j+1
    and 1, which reduces to u_j/u_0.  EtaZero is raised when |eta(s)| <= zero_tol.
    """
    z = to_mpc(s)
    if j < 1:
        raise ValueError("j must be >= 1")
    if N < 1:
        raise ValueError("N must be >= 1")
    if not -1 < z.real < 1:
        raise ValueError("the closure needs -1 < Re s < 1")
    bits = ctx.bits
    with mp.workprec(bits + GUARD_BITS):
        if c1 is None:
            ub = u_sequence(z, j, ctx)
            eta_s = ub.u[0]
            if abs(eta_s) <= zero_tol:
                raise EtaZero(f"|eta(s)| = {mp.nstr(abs(eta_s), 3)}: the c_1 closure is undefined at a zero")
            c1v = 2 / (z + 1) * ub.u[j] / eta_s
        else:
            c1v = mpc(to_mpc(c1))
        w = [mpf(1) / ((2 * n + 1) * (2 * n + 3)) for n in range(N)]
        c = [c1v]
        for k in range(1, N):
            acc = mp.fdot(c[::-1][:k], w[:k])
            if k == j:
                acc -= 1
            c.append(acc / (z / (2 * (2 * k + 1)) + mpf(1) / 2))
        unit = mpf(2) ** (-bits)
        errs = [abs(x) * unit * (i + 2) for i, x in enumerate(c)]
    b = SequenceBundle(s=z, N=N, j=j)
    return b.with_array("c", c, errs, "closure" if c1 is None else "given-c1", bits)


def c_identity_check(bundle: SequenceBundle, n: int, ctx: PrecisionContext = DEFAULT_CTX):
    """Residual of sum_{m<=n} c_{n+1-m}/(2m+1) - s sum_{k>=n+2} c_k/(2k-1) - 2 delta_0n.

    Summing the first n+1 rows of the c recursion and closing with
    sum_k c_k/(2k-1) = ((s+1) c_1 - 2)/s gives the right-hand side 2 delta_0n.

    The sum to infinity stops at N; the remainder is bounded by |s| C/(2N)
    with C the largest k |c_k| over the upper half of the range.
    Returns a dict with residual, tail_bound and passed.
    """
    if bundle.c is None:
        raise ValueError("bundle.c must be filled")
    if bundle.j != 1:
        raise ValueError("the identity is stated for the j = 1 inhomogeneity")
    c = bundle.c
    N = len(c)
    if n + 2 > N:
        raise ValueError("need N >= n + 2")
    z = bundle.s
    with mp.workprec(bundle.bits["c"] + GUARD_BITS):
        head = sum((c[n - m] / (2 * m + 1) for m in range(n + 1)), mpc(0))
        tail = sum((c[k - 1] / (2 * k - 1) for k in range(n + 2, N + 1)), mpc(0))
        rhs = 2 if n == 0 else 0
        res = head - z * tail - rhs
        C = max(abs(c[k - 1]) * k for k in range(max(1, N // 2), N + 1))
        bound = abs(z) * C / (2 * N) + 10 * ctx.rel_tol
    return {"residual": res, "tail_bound": bound, "passed": bool(abs(res) <= bound)}


def mu_ratio(j: int, s, ctx: PrecisionContext = DEFAULT_CTX, spec: QuadratureSpec | None = None):
    """mu_j(s) = T_{2j+1}(s) / T_3(s) with T_m the regularised Mellin moment of tanh^m."""
    if j < 1:
        raise ValueError("j must be >= 1")
    z = to_mpc(s)
    if not -1 < z.real < 1:
        raise ValueError("needs -1 < Re s < 1")
    if j == 1:
        return mpc(1)
    t3, e3 = tanh_moment(z, 3, ctx, spec)
    if abs(t3) <= 100 * e3:
        raise U1Zero("the tanh^3 moment (proportional to u_1) vanishes")
    tj, _ = tanh_moment(z, 2 * j + 1, ctx, spec)
    with mp.workprec(ctx.bits + GUARD_BITS):
        return tj / t3


def mu_ratio_check(j: int, s, ctx: PrecisionContext = DEFAULT_CTX):
    """mu_j against u_j/u_1; returns (mu, ratio, relative gap)."""
    z = to_mpc(s)
    mu = mu_ratio(j, z, ctx)
    u = u_sequence(z, max(j, 1), ctx).u
    if u[1] == 0:
        raise U1Zero("u_1 = 0")
    with mp.workprec(ctx.bits + GUARD_BITS):
        ratio = u[j] / u[1]
        return mu, ratio, float(abs(mu - ratio) / max(abs(ratio), abs(mu)))


# ------------------------------------------------------------------ decay


@dataclass(frozen=True)
class DecayReport:
    quantity: str
    c_star: float
    windows: tuple
    slope: float
    threshold: float
    passed: bool


def _fit_slope(points):
    if len(points) < 2:
        return 0.0
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx if sxx else 0.0


def decay_report(bundle: SequenceBundle, quantity: str = "v", threshold: float = 0.05) -> DecayReport:
    """Empirical check of |v_k| = O(log k / k) (or |c_k| = O(1/k)).

    C* is the maximum of the normalised magnitude over [N/10, N]; the trend
    is the least-squares slope of log(window maximum) against log k over
    dyadic windows starting at N/10.  Passes when the slope is <= threshold.
    """
    if quantity == "v":
        seq = bundle.v
        if seq is None:
            raise ValueError("bundle.v must be filled")
        norm = lambda k, x: float(abs(x)) * k / math.log(k)
        offset = 0
    elif quantity == "c":
        seq = bundle.c
        if seq is None:
            raise ValueError("bundle.c must be filled")
        norm = lambda k, x: float(abs(x)) * k
        offset = 1
    else:
        raise ValueError("quantity must be 'v' or 'c'")
    n = len(seq) - 1 + offset
    lo = max(2, len(seq) // 10)
    vals = {k: norm(k, seq[k - offset]) for k in range(lo, n + 1)}
    c_star = max(vals.values())
    windows = []
    a = lo
    while a <= n:
        b = min(2 * a, n + 1)
        peak = max(vals[k] for k in range(a, b))
        windows.append((a, b - 1, peak))
        a = b
    pts = [(math.log(math.sqrt(a * max(a, b))), math.log(p)) for a, b, p in windows if p > 0]
    slope = _fit_slope(pts) if c_star > 0 else 0.0
    return DecayReport(quantity, c_star, tuple(windows), slope, threshold, slope <= threshold)


# ------------------------------------------------------ generating function


def genfb_eval(s, t, ctx: PrecisionContext = DEFAULT_CTX, spec: QuadratureSpec | None = None):
    """Xi(t) = sum u_k t^k from (1 - t) Xi(t) = eta(s) + 2 pi^(s-1) sin(pi s/2)
    int_0^inf sin^2(w x/2pi) x^(-s)/sinh x dx, w = log((1+sqrt t)/(1-sqrt t))."""
    z = to_mpc(s)
    _check_s(z)
    if not z.real < 2:
        raise ValueError("needs Re s < 2")
    wp = ctx.bits + GUARD_BITS + _sin_factor_bits(z)
    local = ctx.with_bits(wp - GUARD_BITS)
    with mp.workprec(wp):
        t = mpf(t)
        if not 0 < t < 1:
            raise ValueError("t must lie in (0, 1)")
        r = mp.sqrt(t)
        w = mp.log((1 + r) / (1 - r))
        c = w / (2 * mp.pi)
        eta_s = mpsf.eta(z, local)
        pref = 2 * mp.power(mp.pi, z - 1) * mp.sinpi(z / 2)
        if pref == 0:
            return eta_s / (1 - t)
        f = lambda x: mp.sin(c * x) ** 2 * mp.exp(-z * mp.log(x)) / mp.sinh(x)
        spec = spec or QuadratureSpec.for_ctx(ctx)
        val, _ = integrate_0_inf(f, spec, local, oscillation=abs(float(z.imag)) + float(w / mp.pi))
        return (eta_s + pref * val) / (1 - t)


def genfb_cross_check(s, t, N: int = 128, ctx: PrecisionContext = DEFAULT_CTX):
    """Compare genfb_eval with sum_{k<=N} u_k t^k; the truncation is bounded
    by 2 max|u_k| t^(N+1)/(1-t).  Returns a dict."""
    z = to_mpc(s)
    integral = genfb_eval(z, t, ctx)
    u = u_sequence(z, N, ctx).u
    with mp.workprec(ctx.bits + GUARD_BITS):
        t = mpf(t)
        series = sum((uk * t ** k for k, uk in enumerate(u)), mpc(0))
        tail = 2 * max(abs(x) for x in u) * t ** (N + 1) / (1 - t)
        gap = abs(integral - series)
        scale = max(abs(integral), abs(series), mpf(1))
        bound = 10 * ctx.rel_tol * scale + tail
    return {"integral": integral, "series": series, "tail_bound": tail,
            "residual": gap, "passed": bool(gap <= bound)}
