"""Arbitrary-precision special functions: eta, zeta, Gamma, Bernoulli numbers.

All floating results are mpmath ``mpc`` values.  Every public routine takes a
:class:`PrecisionContext`; the working precision is set locally with
``mp.workprec`` so callers never see the global context change.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

from mpmath import mp, mpc, mpf

from .errors import EtaFactorZero, PoleError, PrecisionEscalationExhausted

__all__ = [
    "PrecisionContext",
    "DEFAULT_CTX",
    "to_mpc",
    "escalate",
    "CancellationAbort",
    "bernoulli",
    "eta_neg_odd",
    "eta",
    "eta_shifts",
    "zeta",
    "gamma",
    "digamma",
    "eta_prime",
]

GUARD_BITS = 32
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision, accuracy target and cancellation policy."""

    bits: int = 256
    rel_tol: float = 1e-30
    max_escalations: int = 4

    def __post_init__(self):
        if int(self.bits) != self.bits or self.bits < 64:
            raise ValueError(f"bits must be an integer >= 64, got {self.bits!r}")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.rel_tol < 2.0 ** (1 - self.bits):
            raise ValueError(f"rel_tol {self.rel_tol!r} is below 2**(1-bits) for bits={self.bits}")
        if self.max_escalations < 0:
            raise ValueError("max_escalations must be >= 0")

    @property
    def eps(self):
        return mpf(2) ** (-self.bits)

    def with_bits(self, bits: int) -> "PrecisionContext":
        tol = max(self.rel_tol, 2.0 ** (1 - bits))
        return replace(self, bits=int(bits), rel_tol=tol)

    def doubled(self) -> "PrecisionContext":
        return self.with_bits(2 * self.bits)


DEFAULT_CTX = PrecisionContext()


def to_mpc(s) -> mpc:
    """Coerce numbers, strings like ``"0.5+14.1347j"`` and Fractions to ``mpc``."""
    if isinstance(s, mpc):
        return s
    # decimal strings and rationals are rounded at a generous precision so a
    # later, higher working precision still sees the intended value
    if isinstance(s, Fraction):
        with mp.workprec(max(mp.prec, 512)):
            return mpc(mpf(s.numerator) / s.denominator)
    if isinstance(s, str):
        text = s.strip().replace(" ", "")
        with mp.workprec(max(mp.prec, 512, 4 * len(text))):
            return mpc(mp.mpmathify(text))
    return mpc(s)


def lost_bits(scale, value) -> float:
    """Bits of cancellation when a sum of magnitude ``scale`` produces ``value``."""
    scale = abs(scale)
    value = abs(value)
    if scale == 0:
        return 0.0
    if value == 0:
        return math.inf
    return max(0.0, float(mp.log(scale / value, 2)))


class CancellationAbort(Exception):
    """Raised inside an ``escalate`` attempt to give up on the current precision early."""

    def __init__(self, lost: float):
        super().__init__(f"{lost:.1f} bits lost")
        self.lost = lost


def acceptable(lost: float, bits: int, rel_tol: float) -> bool:
    """The acceptance rule shared by ``escalate`` and its early-abort callers."""
    return lost < bits / 2 and lost - (bits + GUARD_BITS) <= math.log2(rel_tol)


def escalate(compute, ctx: PrecisionContext):
    """Run ``compute(wp) -> (value, lost_bits)`` with the doubling policy.

    A result is accepted when fewer than half of the attempt's bits were lost
    and the implied error ``2**(lost - wp)`` meets ``ctx.rel_tol``.  ``compute``
    may raise :class:`CancellationAbort` to skip to the next precision.
    Returns ``(value, lost_bits, bits_used)``.
    """
    bits = ctx.bits
    lost = math.inf
    for _ in range(ctx.max_escalations + 1):
        wp = bits + GUARD_BITS
        try:
            with mp.workprec(wp):
                value, lost = compute(wp)
        except CancellationAbort as exc:
            lost = exc.lost
        else:
            if acceptable(lost, bits, ctx.rel_tol):
                return value, lost, bits
        bits *= 2
    raise PrecisionEscalationExhausted(
        f"{lost:.1f} bits lost; precision escalation stopped at {bits // 2} bits"
    )


# ---------------------------------------------------------------- Bernoulli

_bern_lock = threading.Lock()
_bern: list[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """B_n with the convention B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > 1 and n % 2:
        return Fraction(0)
    if n < len(_bern):
        return _bern[n]
    with _bern_lock:
        # sum_{k=0}^{m} C(m+1, k) B_k = 0
        while len(_bern) <= n:
            m = len(_bern)
            acc = Fraction(0)
            binom = 1
            for k in range(m):
                acc += binom * _bern[k]
                binom = binom * (m + 1 - k) // (k + 1)
            _bern.append(-acc / (m + 1))
    return _bern[n]


def eta_neg_odd(m: int) -> Fraction:
    """Exact eta(-1-2m) = (4^(m+1) - 1) B_(2m+2) / (2m+2)."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return (4 ** (m + 1) - 1) * bernoulli(2 * m + 2) / (2 * m + 2)


# ------------------------------------------------------------ Borwein series


@lru_cache(maxsize=32)
def _borwein_d(n: int) -> tuple[int, ...]:
    d = []
    term = Fraction(1)
    acc = Fraction(0)
    for i in range(n + 1):
        acc += term
        d.append(acc)
        term = term * 2 * (n + i) * (n - i) / ((2 * i + 1) * (i + 1))
    out = tuple(int(x) for x in d)
    assert all(Fraction(x) == y for x, y in zip(out, d))
    return out


@lru_cache(maxsize=64)
def _borwein_weights(n: int, wp: int):
    """(-1)^k (d_n - d_k)/d_n and log(k+1) for k < n, at precision wp."""
    d = _borwein_d(n)
    dn = d[n]
    with mp.workprec(wp):
        w = tuple(((-1) ** k) * (mpf(dn - d[k]) / dn) for k in range(n))
        logs = tuple(mp.log(k + 1) for k in range(n))
    return w, logs


def _borwein_terms(s, wp: int) -> int:
    t = abs(float(mpc(s).imag))
    need = wp * _LN2 + math.log(3 * (1 + 2 * t)) + math.pi * t / 2
    return int(math.ceil(need / math.log(3 + math.sqrt(8)))) + 2


def _eta_borwein(s: mpc, wp: int, derivative: bool = False):
    n = _borwein_terms(s, wp)
    w, logs = _borwein_weights(n, wp)
    total = mpc(0)
    scale = mpf(0)
    for k in range(n):
        term = w[k] * mp.exp(-s * logs[k])
        if derivative:
            term = -logs[k] * term
        total += term
        scale += abs(term)
    return total, lost_bits(scale, total)


# -------------------------------------------------------------------- Gamma


@lru_cache(maxsize=32)
def _spouge_coeffs(a: int, wp: int):
    with mp.workprec(wp):
        cs = [mp.sqrt(2 * mp.pi)]
        fact = mpf(1)
        for k in range(1, a):
            if k > 1:
                fact *= k - 1
            ck = ((-1) ** (k - 1)) / fact * mp.power(mpf(a - k), k - mpf(0.5)) * mp.exp(a - k)
            cs.append(ck)
    return tuple(cs)


def _spouge_params(bits: int):
    a = int(math.ceil(bits * _LN2 / math.log(2 * math.pi))) + 2
    return a, 2 * bits + 24


def _gamma_right(z: mpc, bits: int) -> mpc:
    """Gamma(z) for Re z >= 1/2 by Spouge's formula."""
    a, wp = _spouge_params(bits)
    cs = _spouge_coeffs(a, wp)
    with mp.workprec(wp):
        zz = mpc(z) - 1
        acc = cs[0]
        for k in range(1, a):
            acc += cs[k] / (zz + k)
        return mp.exp((zz + mpf(0.5)) * mp.log(zz + a) - zz - a) * acc


def _digamma_right(z: mpc, bits: int) -> mpc:
    """psi(z) for Re z >= 1/2, differentiating the Spouge representation."""
    a, wp = _spouge_params(bits)
    cs = _spouge_coeffs(a, wp)
    with mp.workprec(wp):
        zz = mpc(z) - 1
        acc = cs[0]
        dacc = mpc(0)
        for k in range(1, a):
            r = 1 / (zz + k)
            acc += cs[k] * r
            dacc -= cs[k] * r * r
        return mp.log(zz + a) + (zz + mpf(0.5)) / (zz + a) - 1 + dacc / acc


def _is_nonpositive_integer(z: mpc) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == mp.floor(z.real)


def gamma(s, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    z = to_mpc(s)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z.real}")
    bits = ctx.bits + GUARD_BITS
    with mp.workprec(bits):
        if z.real >= 0.5:
            return +_gamma_right(z, bits)
        return mp.pi / (mp.sinpi(z) * _gamma_right(1 - z, bits))


def digamma(s, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    z = to_mpc(s)
    if _is_nonpositive_integer(z):
        raise PoleError(f"digamma has a pole at {z.real}")
    bits = ctx.bits + GUARD_BITS
    with mp.workprec(bits):
        if z.real >= 0.5:
            return +_digamma_right(z, bits)
        return _digamma_right(1 - z, bits) - mp.pi * mp.cospi(z) / mp.sinpi(z)


# ---------------------------------------------------------------- eta, zeta


def _neg_odd_integer(z: mpc):
    if z.imag == 0 and z.real < 0 and z.real == mp.floor(z.real) and int(z.real) % 2:
        return (-int(z.real) - 1) // 2
    return None


def _eta_reflected(s: mpc, wp: int) -> mpc:
    """eta(s) for Re s <= -1/2 through the functional equation."""
    w = 1 - s
    eta_w, _ = _eta_borwein(w, wp)
    zeta_w = eta_w / (1 - mp.power(2, s))
    chi = mp.power(2, s) * mp.power(mp.pi, s - 1) * mp.sinpi(s / 2) * _gamma_right(w, wp)
    return (1 - mp.power(2, w)) * chi * zeta_w


def eta(s, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    """Dirichlet eta function to relative accuracy ``ctx.rel_tol``."""
    z = to_mpc(s)
    m = _neg_odd_integer(z)
    if m is not None:
        q = eta_neg_odd(m)
        with mp.workprec(ctx.bits + GUARD_BITS):
            return mpc(mpf(q.numerator) / q.denominator)

    def compute(wp):
        if z.real > -0.5:
            return _eta_borwein(z, wp)
        return _eta_reflected(z, wp), 0.0

    return escalate(compute, ctx)[0]


def zeta(s, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    z = to_mpc(s)
    if z == 1:
        raise PoleError("zeta has a pole at s = 1")
    with mp.workprec(ctx.bits + GUARD_BITS):
        factor = 1 - mp.power(2, 1 - z)
        if abs(factor) < mpf(2) ** (8 - ctx.bits):
            raise EtaFactorZero(f"1 - 2^(1-s) vanishes at s = {z}")
    e = eta(z, ctx)
    with mp.workprec(ctx.bits + GUARD_BITS):
        return e / factor


def eta_shifts(s, m_max: int, ctx: PrecisionContext = DEFAULT_CTX) -> list[mpc]:
    """[eta(s - 2m) for m = 0..m_max], sharing work across the shifts.

    Values with Re(s - 2m) <= -1/2 come from the functional equation with
    Gamma and the powers advanced recursively in m; the zeta(1 - s + 2m)
    factors reuse the powers (k+1)^-(1-s).
    """
    z = to_mpc(s)
    first = 0
    while first <= m_max and (z - 2 * first).real > -0.5:
        first += 1
    out = [eta(z - 2 * m, ctx) for m in range(first)]
    if first > m_max:
        return out

    def compute(wp):
        w0 = 1 - z + 2 * first  # 1 - (s - 2m) at m = first, Re >= 3/2
        n = _borwein_terms(w0, wp)
        weights, logs = _borwein_weights(n, wp)
        base = [weights[k] * mp.exp(-w0 * logs[k]) for k in range(n)]
        inv_sq = [mpf(1) / ((k + 1) * (k + 1)) for k in range(n)]
        tiny = mpf(2) ** (-wp - 8)
        gam = _gamma_right(w0, wp)
        pref = mp.power(2, z - 2 * first) * mp.power(mp.pi, z - 2 * first - 1)
        quarter_pi2 = 1 / (4 * mp.pi ** 2)
        sin_half = mp.sinpi(z / 2) * (-1) ** first
        two_pow = mp.power(2, 1 - z + 2 * first)  # 2^(1 - w) with w = s - 2m
        vals = []
        active = n
        for m in range(first, m_max + 1):
            wm = 1 - z + 2 * m
            eta_w = mpc(0)
            for k in range(active):
                eta_w += base[k]
            # drop trailing terms once they are negligible
            while active > 1 and abs(base[active - 1]) < tiny:
                active -= 1
            zeta_w = eta_w / (1 - 1 / two_pow * 2)
            vals.append((1 - two_pow) * pref * sin_half * gam * zeta_w)
            # advance m -> m + 1
            for k in range(active):
                base[k] *= inv_sq[k]
            gam *= wm * (wm + 1)
            pref *= quarter_pi2
            sin_half = -sin_half
            two_pow *= 4
        return vals, 0.0

    return out + escalate(compute, ctx)[0]


def eta_prime(s, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    """d eta / ds by analytic differentiation of the series or the functional equation."""
    z = to_mpc(s)

    def compute(wp):
        if z.real > -0.5:
            return _eta_borwein(z, wp, derivative=True)
        w = 1 - z
        eta_w, _ = _eta_borwein(w, wp)
        deta_w, _ = _eta_borwein(w, wp, derivative=True)
        ln2 = mp.ln2
        two_s = mp.power(2, z)  # = 2^(1-w)
        zeta_w = eta_w / (1 - two_s)
        dzeta_w = deta_w / (1 - two_s) - eta_w * two_s * ln2 / (1 - two_s) ** 2
        g = _gamma_right(w, wp)
        base = two_s * mp.power(mp.pi, z - 1) * g
        sin_h, cos_h = mp.sinpi(z / 2), mp.cospi(z / 2)
        chi = base * sin_h
        dchi = base * ((mp.log(2 * mp.pi) - _digamma_right(w, wp)) * sin_h + mp.pi / 2 * cos_h)
        zeta_z = chi * zeta_w
        dzeta_z = dchi * zeta_w - chi * dzeta_w
        e = 1 - mp.power(2, w)
        de = mp.power(2, w) * ln2
        return de * zeta_z + e * dzeta_z, 0.0

    return escalate(compute, ctx)[0]
