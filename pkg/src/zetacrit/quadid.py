"""Multiprecision quadrature and the analytic-identity verification suite.

Integrands may return a scalar or a list of scalars; lists are integrated
component-wise with a shared set of nodes, which is how the sequence module
evaluates whole families of integrals in one sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from mpmath import mp, mpc, mpf
from mpmath.calculus.quadrature import GaussLegendre

from . import mpsf
from .checks import Report
from .errors import QuadratureNonconvergence
from .mpsf import DEFAULT_CTX, GUARD_BITS, PrecisionContext, to_mpc

__all__ = [
    "QuadratureSpec",
    "integrate_interval",
    "integrate_0_inf",
    "XGrid",
    "identity_x_pow_sinh",
    "identity_xcothx",
    "identity_sin2_contour",
    "identity_sin2_ml",
    "identity_tanh_moments",
    "tanh_moment",
    "tanh_moment_unsplit",
    "tanh_closed",
    "eta_over_sin",
    "xcothx_closed",
    "xcothx_integral",
    "identity_suite",
]

SCHEMES = ("tanh-sinh", "adaptive-panel-legendre")


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: str = "tanh-sinh"
    abs_tol: float = 1e-40
    rel_tol: float = 1e-30
    max_levels: int = 10

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_levels < 4:
            raise ValueError("max_levels must be >= 4")

    @classmethod
    def for_ctx(cls, ctx: PrecisionContext, scheme: str = "tanh-sinh", rel_tol=None):
        rt = ctx.rel_tol if rel_tol is None else rel_tol
        return cls(scheme=scheme, abs_tol=float(rt) * 1e-10, rel_tol=float(rt))


# ------------------------------------------------------------------ helpers


def _as_list(v):
    return (list(v), True) if isinstance(v, (list, tuple)) else ([v], False)


def _tol_ok(err, val, spec: QuadratureSpec, slack=1.0):
    return all(e <= slack * max(spec.abs_tol, spec.rel_tol * abs(v)) for e, v in zip(err, val))


def _bits_for(spec: QuadratureSpec) -> int:
    return int(-math.log2(min(spec.rel_tol, 1e-6))) + 8


@lru_cache(maxsize=32)
def _gl_rule(degree: int, wp: int):
    """Gauss-Legendre nodes and weights on [-1, 1] with 3*2**(degree-1) points."""
    with mp.workprec(wp):
        nodes = GaussLegendre(mp).calc_nodes(degree, wp)
    return tuple(nodes)


def _gl_degree(spec: QuadratureSpec) -> int:
    # the lower rule of the pair must already resolve the target on a unit panel
    need = _bits_for(spec) / 5.0
    d = 3
    while 3 * 2 ** (d - 2) < need and d < 8:
        d += 1
    return d


def _gl_panel(f, a, b, degree, wp):
    """Integrate over [a, b] with the rule pair (degree, degree-1); value, error."""
    half = (b - a) / 2
    mid = (b + a) / 2
    hi_vals = None
    for x, w in _gl_rule(degree, wp):
        fx, _ = _as_list(f(mid + half * x))
        if hi_vals is None:
            hi_vals = [w * v for v in fx]
        else:
            for i, v in enumerate(fx):
                hi_vals[i] += w * v
    lo_vals = None
    for x, w in _gl_rule(degree - 1, wp):
        fx, _ = _as_list(f(mid + half * x))
        if lo_vals is None:
            lo_vals = [w * v for v in fx]
        else:
            for i, v in enumerate(fx):
                lo_vals[i] += w * v
    hi = [half * v for v in hi_vals]
    lo = [half * v for v in lo_vals]
    return hi, [abs(h - l) for h, l in zip(hi, lo)]


def _adaptive_panel(f, a, b, degree, wp, spec, scale, depth=0):
    val, err = _gl_panel(f, a, b, degree, wp)
    target = [max(spec.abs_tol, spec.rel_tol * max(abs(v), s)) / 16 for v, s in zip(val, scale)]
    if all(e <= t for e, t in zip(err, target)) or depth >= spec.max_levels:
        return val, err
    m = (a + b) / 2
    v1, e1 = _adaptive_panel(f, a, m, degree, wp, spec, scale, depth + 1)
    v2, e2 = _adaptive_panel(f, m, b, degree, wp, spec, scale, depth + 1)
    return [x + y for x, y in zip(v1, v2)], [x + y for x, y in zip(e1, e2)]


def _march(f, start, width_at, spec, wp, max_panels=4000, min_extent=0.0):
    """Integrate f over [start, inf) panel by panel until two consecutive
    panels are negligible against the running total."""
    degree = _gl_degree(spec)
    a = mpf(start)
    total = err = None
    quiet = 0
    for _ in range(max_panels):
        b = a + width_at(a)
        scale = [abs(v) for v in total] if total else None
        if scale is None:
            probe, _ = _gl_panel(f, a, b, degree, wp)
            scale = [abs(v) for v in probe]
        val, e = _adaptive_panel(f, a, b, degree, wp, spec, scale)
        if total is None:
            total, err = val, e
        else:
            total = [x + y for x, y in zip(total, val)]
            err = [x + y for x, y in zip(err, e)]
        small = all(
            abs(v) <= max(spec.abs_tol, spec.rel_tol * abs(t)) / 16 for v, t in zip(val, total)
        )
        quiet = quiet + 1 if small else 0
        a = b
        if quiet >= 2 and a - start >= min_extent:
            return total, [x + abs(y) for x, y in zip(err, val)]
    raise QuadratureNonconvergence(f"tail not exhausted after {max_panels} panels")


def _tanh_sinh(f, a, b, spec: QuadratureSpec, wp: int):
    """Nested tanh-sinh on [a, b]; nodes never touch the endpoints."""
    a, b = mpf(a), mpf(b)
    length = b - a
    half_pi = mp.pi / 2
    floor = mpf(2) ** (-wp - 10)

    def pair(t):
        u = half_pi * mp.sinh(t)
        d = length / (1 + mp.exp(2 * u))  # distance from the nearer endpoint
        w = half_pi * mp.cosh(t) / mp.cosh(u) ** 2 * length / 2
        return d, w

    def level_sum(h, odd_only):
        acc = None
        k = 1 if odd_only else 0
        step = 2 if odd_only else 1
        while True:
            t = k * h
            d, w = pair(t)
            if w < floor or d == 0:
                break
            pts = [(a + length / 2, w)] if k == 0 else [(a + d, w), (b - d, w)]
            for x, wt in pts:
                fx, _ = _as_list(f(x))
                if acc is None:
                    acc = [wt * v for v in fx]
                else:
                    for i, v in enumerate(fx):
                        acc[i] += wt * v
            k += step
        return acc

    h = mpf(1)
    total = [h * v for v in level_sum(h, False)]
    prev = None
    for level in range(1, spec.max_levels + 1):
        h /= 2
        new = level_sum(h, True)
        total = [t / 2 + h * v for t, v in zip(total, new)]
        if prev is not None:
            err = [abs(x - y) for x, y in zip(total, prev)]
            if level >= 3 and _tol_ok(err, total, spec):
                return total, err
        prev = total
    raise QuadratureNonconvergence(f"tanh-sinh did not converge in {spec.max_levels} levels")


def integrate_interval(f: Callable, a, b, spec: QuadratureSpec = None,
                       ctx: PrecisionContext = DEFAULT_CTX, *, vector: bool = False):
    """Integral over a finite interval; tanh-sinh by default, GL panels otherwise."""
    spec = spec or QuadratureSpec.for_ctx(ctx)
    wp = ctx.bits + GUARD_BITS
    with mp.workprec(wp):
        if spec.scheme == "tanh-sinh":
            val, err = _tanh_sinh(f, a, b, spec, wp)
        else:
            a, b = mpf(a), mpf(b)
            degree = _gl_degree(spec)
            probe, _ = _gl_panel(f, a, b, degree, wp)
            val, err = _adaptive_panel(f, a, b, degree, wp, spec, [abs(v) for v in probe])
    if vector:
        return val, err
    return val[0], err[0]


def integrate_0_inf(
    f: Callable,
    spec: QuadratureSpec = None,
    ctx: PrecisionContext = DEFAULT_CTX,
    *,
    oscillation: float = 0.0,
    vector: bool = False,
):
    """Integral of f over (0, inf), split at x = 1.

    On (0, 1] tanh-sinh is used unless ``oscillation`` (the rate of an
    x**(-i*omega) factor) is large, in which case the substitution x = e^-y
    turns the phase linear and Gauss-Legendre panels are marched in y.
    [1, inf) is always covered by marching Gauss-Legendre panels whose width
    shrinks with ``oscillation``.  Returns ``(value, err_est)``.
    """
    spec = spec or QuadratureSpec.for_ctx(ctx)
    wp = ctx.bits + GUARD_BITS
    osc = abs(float(oscillation))
    with mp.workprec(wp):
        if spec.scheme == "tanh-sinh" and osc <= 4:
            head, herr = _tanh_sinh(f, 0, 1, spec, wp)
        else:
            g = lambda y: _scale_vals(f(mp.exp(-y)), mp.exp(-y))
            head, herr = _march(g, 0, lambda y: mpf(min(1.0, 6.0 / (1 + osc))), spec, wp, min_extent=4)
        tail, terr = _march(
            f, 1, lambda x: mpf(min(2.0, max(0.25, 6.0 * float(x) / (1 + osc)))), spec, wp
        )
        val = [x + y for x, y in zip(head, tail)]
        err = [x + y for x, y in zip(herr, terr)]
    if vector:
        return val, err
    return val[0], err[0]


def _scale_vals(v, c):
    if isinstance(v, (list, tuple)):
        return [c * x for x in v]
    return c * v


class XGrid:
    """Fixed nodes and weights for repeated integrals over (0, inf).

    ``(0, 1]`` is covered in y = -log x out to ``y_max`` and ``[1, x_max]`` in
    x, both by Gauss-Legendre panels.  Reusing one grid for many integrands
    sharing the factor x**(-s)/sinh(x) lets that factor be precomputed.
    """

    def __init__(self, ctx: PrecisionContext, *, tol: float, oscillation: float = 0.0,
                 y_max: float | None = None, x_max: float | None = None, degree: int = 5,
                 width: float = 1.0):
        self.wp = ctx.bits + GUARD_BITS
        ln_tol = -math.log(tol)
        y_max = y_max if y_max is not None else ln_tol + 8
        x_max = x_max if x_max is not None else 2 * ln_tol + 20
        osc = abs(float(oscillation))
        nodes, weights = [], []
        with mp.workprec(self.wp):
            rule = _gl_rule(degree, self.wp)
            hy = min(width, 6.0 / (1 + osc))
            a = 0.0
            while a < y_max:
                b = min(a + hy, y_max)
                for x, w in rule:
                    y = (mpf(a) + mpf(b)) / 2 + (mpf(b) - mpf(a)) / 2 * x
                    ex = mp.exp(-y)
                    nodes.append(ex)
                    weights.append(w * (mpf(b) - mpf(a)) / 2 * ex)
                a = b
            a = 1.0
            while a < x_max:
                hx = min(width, max(0.25 * width, 6.0 * a / (1 + osc)))
                b = min(a + hx, x_max)
                for x, w in rule:
                    nodes.append((mpf(a) + mpf(b)) / 2 + (mpf(b) - mpf(a)) / 2 * x)
                    weights.append(w * (mpf(b) - mpf(a)) / 2)
                a = b
        self.nodes = nodes
        self.weights = weights

    def __len__(self):
        return len(self.nodes)

    def integrate(self, f):
        with mp.workprec(self.wp):
            acc = None
            for x, w in zip(self.nodes, self.weights):
                fx, is_vec = _as_list(f(x))
                if acc is None:
                    acc = [w * v for v in fx]
                    vec = is_vec
                else:
                    for i, v in enumerate(fx):
                        acc[i] += w * v
        return acc if vec else acc[0]


# ------------------------------------------------------------ identity suite


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else abs(a - b)


def eta_over_sin(s, ctx: PrecisionContext = DEFAULT_CTX):
    """eta(s)/sin(pi s/2), continued to the trivial zeros s = -2, -4, ..."""
    s = to_mpc(s)
    sin_half = mp.sinpi(s / 2)
    if sin_half == 0:
        if s == 0:
            raise ValueError("eta(s)/sin(pi s/2) has a pole at s = 0")
        return mpsf.eta_prime(s, ctx) / (mp.pi / 2 * mp.cospi(s / 2))
    return mpsf.eta(s, ctx) / sin_half


def identity_x_pow_sinh(s, ctx: PrecisionContext = DEFAULT_CTX, spec: QuadratureSpec = None):
    """Residual of int_0^inf x^-s / sinh x dx = -pi^(1-s) eta(s) / sin(pi s/2), Re s < 0."""
    s = to_mpc(s)
    if s.real >= 0:
        raise ValueError("direct integral needs Re s < 0")
    with mp.workprec(ctx.bits + GUARD_BITS):
        f = lambda x: mp.exp(-s * mp.log(x)) / mp.sinh(x)
        val, err = integrate_0_inf(f, spec, ctx, oscillation=float(s.imag))
        closed = -mp.power(mp.pi, 1 - s) * eta_over_sin(s, ctx)
        return {"integral": val, "closed_form": closed, "err_est": err, "residual": _rel(val, closed)}


def _xcothx_m1(x):
    """x coth x - 1 without cancellation for small x."""
    if x < mpf("0.25"):
        # sum_{n>=1} 4^n B_2n x^2n / (2n)!
        x2 = x * x
        acc = mpf(0)
        term = mpf(1)
        n = 1
        while True:
            term *= 4 * x2
            b = mpsf.bernoulli(2 * n)
            c = term * (mpf(b.numerator) / b.denominator) / mp.factorial(2 * n)
            acc += c
            if abs(c) < mp.eps * abs(acc):
                break
            n += 1
        return acc
    return x * mp.coth(x) - 1


def xcothx_closed(s, ctx: PrecisionContext = DEFAULT_CTX):
    """s pi^(1-s) eta(s)/sin(pi s/2), the value of int (x coth x - 1) x^-s/sinh x dx."""
    s = to_mpc(s)
    with mp.workprec(ctx.bits + GUARD_BITS):
        return s * mp.power(mp.pi, 1 - s) * eta_over_sin(s, ctx)


def xcothx_integral(s, ctx: PrecisionContext = DEFAULT_CTX, spec: QuadratureSpec = None):
    s = to_mpc(s)
    if s.real >= 2:
        raise ValueError("the integral needs Re s < 2")
    with mp.workprec(ctx.bits + GUARD_BITS):
        f = lambda x: _xcothx_m1(x) * mp.exp(-s * mp.log(x)) / mp.sinh(x)
        return integrate_0_inf(f, spec, ctx, oscillation=float(s.imag))


def identity_xcothx(s, ctx: PrecisionContext = DEFAULT_CTX, spec: QuadratureSpec = None):
    """Residual of int_0^inf (x coth x - 1) x^-s / sinh x dx = s pi^(1-s) eta(s)/sin(pi s/2).

    The residual is relative to the size of the prefactor s pi^(1-s)/sin(pi s/2)
    so that it stays meaningful where eta(s) vanishes.
    """
    s = to_mpc(s)
    if s.real >= 2 or s == 0:
        raise ValueError("needs Re s < 2 and s != 0")
    val, err = xcothx_integral(s, ctx, spec)
    closed = xcothx_closed(s, ctx)
    with mp.workprec(ctx.bits + GUARD_BITS):
        sin_half = mp.sinpi(s / 2)
        pref = abs(s * mp.power(mp.pi, 1 - s) / sin_half) if sin_half != 0 else mpf(0)
        scale = max(abs(val), abs(closed), pref)
        return {"integral": val, "closed_form": closed, "err_est": err,
                "residual": abs(val - closed) / scale}


def _omega_march(f, spec, ctx):
    """int_0^inf f(w) dw for the smooth, exponentially decaying integrands
    produced by the substitution alpha = tanh(w/2)."""
    spec = spec or QuadratureSpec.for_ctx(ctx)
    wp = ctx.bits + GUARD_BITS
    val, err = _march(f, 0, lambda w: mpf(1), spec, wp, min_extent=4)
    return val[0], err[0]


def identity_sin2_contour(x, ctx: PrecisionContext = DEFAULT_CTX, spec: QuadratureSpec = None):
    """Residual of int_{-1}^{1} (2 - r^{ix/pi} - r^{-ix/pi}) da / a^2 = 4 (x coth x - 1),
    r = (1+a)/(1-a).

    The integrand is even in a; with a = tanh(w/2) the half-range integral becomes
    int_0^inf 2 sin^2(w x / 2 pi) / sinh^2(w/2) dw, which has no oscillatory endpoint.
    """
    x = mpf(x)
    if x <= 0:
        raise ValueError("x must be positive")
    with mp.workprec(ctx.bits + GUARD_BITS):
        def f(w):
            if w == 0:
                return 2 * (x / mp.pi) ** 2
            return 2 * mp.sin(w * x / (2 * mp.pi)) ** 2 / mp.sinh(w / 2) ** 2

        val, err = _omega_march(f, spec, ctx)
        val, err = 2 * val, 2 * err
        closed = 4 * _xcothx_m1(x)
        return {"integral": val, "closed_form": closed, "err_est": err, "residual": _rel(val, closed)}


def _ml_values(y, n_max: int):
    """[M_0(y), ..., M_{n_max}(y)] by the three-term recurrence."""
    vals = [mpc(1), 2 * y]
    for n in range(1, n_max):
        vals.append((2 * y * vals[n] + (n - 1) * vals[n - 1]) / (n + 1))
    return vals[: n_max + 1]


def sin2_ml_rhs(k: int, x):
    """2 sum_{n<k} M_2n(ix/pi)/(2n-2k+1) - i pi M_{2k-1}(ix/pi) coth x (current precision)."""
    m = _ml_values(mpc(0, x / mp.pi), 2 * k)
    return 2 * sum(m[2 * n] / (2 * n - 2 * k + 1) for n in range(k)) - 1j * mp.pi * m[2 * k - 1] * mp.coth(x)


def identity_sin2_ml(k: int, x, ctx: PrecisionContext = DEFAULT_CTX, spec: QuadratureSpec = None):
    """Residual of the Mittag-Leffler generalisation on (0, 1):

    int_0^1 [2 - r^{ix/pi} - r^{-ix/pi} + 2 sum_{n=1}^{k-1} M_{2n}(ix/pi) a^{2n}] da / a^{2k}
      = 2 sum_{n=0}^{k-1} M_{2n}(ix/pi)/(2n-2k+1) - i pi M_{2k-1}(ix/pi) coth x.

    Evaluated with a = tanh(w/2); near a = 0 the bracket is replaced by its
    convergent expansion -2 sum_{n>=k} M_2n(ix/pi) a^(2n).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    x = mpf(x)
    if x <= 0:
        raise ValueError("x must be positive")
    wp = ctx.bits + GUARD_BITS + 4 * k
    local = ctx.with_bits(wp - GUARD_BITS)
    with mp.workprec(wp):
        y = mpc(0, x / mp.pi)
        m = _ml_values(y, 2 * k + 200)

        def bracket(a, w):
            if a < mpf("0.25"):
                acc = mpc(0)
                p = mpf(1)
                for n in range(k, k + 100):
                    term = m[2 * n] * p
                    acc += term
                    if n > k + 4 and abs(term) < mp.eps * abs(acc):
                        break
                    p *= a * a
                return -2 * acc
            core = 2 - 2 * mp.cos(w * x / mp.pi)
            a2 = a * a
            p = a2
            for n in range(1, k):
                core += 2 * m[2 * n] * p
                p *= a2
            return core / a2 ** k

        def f(w):
            a = mp.tanh(w / 2)
            return bracket(a, w) / (2 * mp.cosh(w / 2) ** 2)

        val, err = _omega_march(f, spec, local)
        closed = sin2_ml_rhs(k, x)
        return {"integral": val, "closed_form": closed, "err_est": err, "residual": _rel(val, closed)}


def tanh_moment(s, j: int, ctx: PrecisionContext = DEFAULT_CTX, spec: QuadratureSpec = None):
    """Regularised Mellin moment of tanh^j:
    int_0^1 v^(s-1) tanh^j v dv + int_1^inf v^(s-1)(tanh^j v - 1) dv - 1/s.

    Analytic for -j < Re s; only Re s < 1 is of interest here.
    """
    s = to_mpc(s)
    if j < 1 or j % 2 == 0:
        raise ValueError("j must be a positive odd integer")
    if not (-j < s.real < 1) or s == 0:
        raise ValueError("split form needs -j < Re s < 1 and s != 0")
    spec = spec or QuadratureSpec.for_ctx(ctx)
    wp = ctx.bits + GUARD_BITS
    with mp.workprec(wp):
        def head(v):
            return mp.exp((s - 1) * mp.log(v)) * mp.tanh(v) ** j

        def tail(v):
            # tanh^j v - 1 = expm1(j log(1 - 2q/(1+q))), q = e^(-2v)
            q = mp.exp(-2 * v)
            return mp.exp((s - 1) * mp.log(v)) * mp.expm1(j * mp.log1p(-2 * q / (1 + q)))

        v1, e1 = integrate_interval(head, 0, 1, spec, ctx)
        v2, e2 = _march(tail, 1, lambda v: mpf(2), spec, wp)
        return v1 + v2[0] - 1 / s, e1 + e2[0]


def tanh_moment_unsplit(s, ctx: PrecisionContext = DEFAULT_CTX, spec: QuadratureSpec = None):
    """int_0^inf v^(s-1) tanh v dv for -1 < Re s < 0, through v = e^u."""
    s = to_mpc(s)
    if not (-1 < s.real < 0):
        raise ValueError("the plain integral needs -1 < Re s < 0")
    spec = spec or QuadratureSpec.for_ctx(ctx)
    wp = ctx.bits + GUARD_BITS
    osc = abs(float(s.imag))
    width = lambda u: mpf(min(1.0, 6.0 / (1 + osc)))
    with mp.workprec(wp):
        up = lambda u: mp.exp(s * u) * mp.tanh(mp.exp(u))
        down = lambda u: mp.exp(-s * u) * mp.tanh(mp.exp(-u))
        v1, e1 = _march(up, 0, width, spec, wp, min_extent=2)
        v2, e2 = _march(down, 0, width, spec, wp, min_extent=2)
        return v1[0] + v2[0], e1[0] + e2[0]


def _tanh_bracket(s, j: int, ctx, derivative=False):
    d = mpsf.eta_prime if derivative else mpsf.eta
    if j == 1:
        return d(s, ctx)
    if j == 3:
        return 2 * d(s - 2, ctx) + d(s, ctx)
    raise ValueError("closed form available for j = 1, 3 only")


def tanh_closed(s, j: int, ctx: PrecisionContext = DEFAULT_CTX):
    """-(4 Gamma(s)/2^(s+1)) times eta(s) (j = 1) or 2 eta(s-2) + eta(s) (j = 3).

    At a pole of Gamma the bracket vanishes and the limit uses the residue
    (-1)^n/n! of Gamma at -n together with the derivative of the bracket.
    """
    s = to_mpc(s)
    with mp.workprec(ctx.bits + GUARD_BITS):
        if s.imag == 0 and s.real <= 0 and s.real == mp.floor(s.real):
            n = -int(s.real)
            residue = mpf(-1) ** n / mp.factorial(n)
            return -4 * residue / mp.power(2, s + 1) * _tanh_bracket(s, j, ctx, derivative=True)
        return -4 * mpsf.gamma(s, ctx) / mp.power(2, s + 1) * _tanh_bracket(s, j, ctx)


def identity_tanh_moments(s, j: int, ctx: PrecisionContext = DEFAULT_CTX, spec: QuadratureSpec = None,
                          unsplit: bool = False):
    """Residual of the tanh^j Mellin moment against its eta closed form.

    ``unsplit=True`` (j = 1, -1 < Re s < 0) checks the plain integral
    int_0^inf v^(s-1) tanh v dv instead of the split continuation.
    """
    s = to_mpc(s)
    if unsplit:
        if j != 1:
            raise ValueError("the plain integral is only used for j = 1")
        val, err = tanh_moment_unsplit(s, ctx, spec)
    else:
        val, err = tanh_moment(s, j, ctx, spec)
    closed = tanh_closed(s, j, ctx)
    with mp.workprec(ctx.bits + GUARD_BITS):
        return {"integral": val, "closed_form": closed, "err_est": err, "residual": _rel(val, closed)}


def identity_suite(ctx: PrecisionContext = DEFAULT_CTX, tol: float = 1e-10) -> Report:
    """Run every identity on its default sample points."""
    rep = Report("identities")
    cases = [
        ("x^-s/sinh", identity_x_pow_sinh, [("-1",), ("-2.5",), ("-1+3j",)]),
        ("xcothx", identity_xcothx, [("0.5",), ("-0.7",), ("0.3+2j",)]),
        ("sin2 contour", identity_sin2_contour, [("0.5",), ("1",), ("2",)]),
        ("sin2 ML", identity_sin2_ml, [(1, "1"), (2, "1"), (2, "0.5"), (4, "1.5")]),
        ("tanh moments", identity_tanh_moments, [("0.5", 1), ("0.3", 3), ("-1", 3), ("0.25+1j", 1)]),
    ]
    for name, fn, args in cases:
        for a in args:
            r = fn(*a, ctx)
            rep.add(f"{name} {a}", r["residual"] <= tol, float(r["residual"]), tol)
    return rep
