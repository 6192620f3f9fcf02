"""Exact rational polynomials, truncated power series with polynomial
coefficients, and the Mittag-Leffler / Q_k families built on them."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from mpmath import mp

from .checks import Report
from .errors import InternalMismatch, UnknownSeries

__all__ = [
    "RationalPoly",
    "PolySeries",
    "ml_poly",
    "q_poly",
    "q_poly_recursive",
    "q_poly_from_ml",
    "dilatation_expansion",
    "ml_identities_check",
    "series_expand",
    "q_generating_ode_residual",
    "SERIES_NAMES",
]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class RationalPoly:
    """Dense univariate polynomial with Fraction coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "RationalPoly":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, RationalPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RationalPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RationalPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            parts.append(f"{c}" if not mono else (mono if c == 1 else f"({c})*{mono}"))
        return " + ".join(parts)

    def _coerce(self, other) -> "RationalPoly":
        return other if isinstance(other, RationalPoly) else RationalPoly([other])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self), len(other))
        return RationalPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, RationalPoly):
            c = _frac(other)
            return RationalPoly(c * a for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return RationalPoly()
        out = [Fraction(0)] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = _frac(c)
        return RationalPoly(a / c for a in self.coeffs)

    def shift(self, k: int = 1) -> "RationalPoly":
        """Multiply by x**k."""
        return RationalPoly([0] * k + list(self.coeffs)) if self.coeffs else RationalPoly()

    def derivative(self) -> "RationalPoly":
        return RationalPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def integral_0_1(self) -> Fraction:
        return sum((c / (i + 1) for i, c in enumerate(self.coeffs)), Fraction(0))

    def even_to_square(self) -> "RationalPoly":
        """For an even polynomial p(y), return q with q(y**2) = p(y)."""
        if any(self.coeffs[1::2]):
            raise ValueError("polynomial is not even")
        return RationalPoly(self.coeffs[::2])

    def odd_over_x(self) -> "RationalPoly":
        """For an odd polynomial p(y), return q with y*q(y**2) = p(y)."""
        if any(self.coeffs[0::2]):
            raise ValueError("polynomial is not odd")
        return RationalPoly(self.coeffs[1::2])

    def substitute_square(self) -> "RationalPoly":
        """p(x) -> p(x**2)."""
        out = []
        for c in self.coeffs:
            out.extend([c, 0])
        return RationalPoly(out)

    def __call__(self, x):
        """Horner evaluation; exact for Fraction/int input, mpmath otherwise."""
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + mp.mpf(c.numerator) / c.denominator
        return acc


ZERO = RationalPoly()
ONE = RationalPoly([1])
X = RationalPoly([0, 1])


@dataclass(frozen=True)
class PolySeries:
    """Truncated series sum_n coeffs[n] t**n with polynomial coefficients."""

    coeffs: tuple[RationalPoly, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> RationalPoly:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else ZERO

    def __len__(self):
        return len(self.coeffs)


# ---- series arithmetic on lists of RationalPoly (truncated to a fixed length)


def _smul(a: Sequence[RationalPoly], b: Sequence[RationalPoly], n: int) -> list[RationalPoly]:
    out = [ZERO] * n
    for i in range(min(n, len(a))):
        if a[i].is_zero():
            continue
        for j in range(min(n - i, len(b))):
            if not b[j].is_zero():
                out[i + j] = out[i + j] + a[i] * b[j]
    return out


def _sinv_const(a: Sequence[RationalPoly], n: int) -> list[RationalPoly]:
    """Reciprocal of a series whose constant term is a nonzero constant."""
    if a[0].degree != 0:
        raise ValueError("series constant term must be a nonzero constant")
    c0 = a[0][0]
    out = [RationalPoly([1 / c0])]
    for k in range(1, n):
        acc = ZERO
        for j in range(1, min(k, len(a) - 1) + 1):
            acc = acc + a[j] * out[k - j]
        out.append(acc * (-1 / c0))
    return out


def _sexp_linear(var_coeff: RationalPoly, g: Sequence[Fraction], n: int) -> list[RationalPoly]:
    """exp(var_coeff * g(t)) with g(0) = 0 via n e_n = sum_k k g_k var e_{n-k}."""
    out = [ONE]
    for m in range(1, n):
        acc = ZERO
        for k in range(1, min(m, len(g) - 1) + 1):
            if g[k]:
                acc = acc + out[m - k] * (k * g[k])
        out.append(var_coeff * acc / m)
    return out


def _atanh_series(n: int) -> list[Fraction]:
    """log((1+t)/(1-t)) = 2 sum t^(2k+1)/(2k+1), coefficients up to t^(n-1)."""
    return [Fraction(2, k) if k % 2 else Fraction(0) for k in range(n)]


def _odd_reciprocal_series(n: int) -> list[Fraction]:
    """sum_k t^k/(2k+1)."""
    return [Fraction(1, 2 * k + 1) for k in range(n)]


def _kappa_squared(n: int) -> list[Fraction]:
    """log((1+sqrt t)/(1-sqrt t))**2 = 4 t (sum t^k/(2k+1))**2 in integer powers of t."""
    h = _odd_reciprocal_series(n)
    out = [Fraction(0)] * n
    for i in range(n):
        for j in range(n - 1 - i):
            out[i + j + 1] += 4 * h[i] * h[j]
    return out


def _cosh_sqrt_var(w: Sequence[Fraction], n: int) -> list[RationalPoly]:
    """cosh(sqrt(z) kappa) = sum_m z^m kappa^(2m)/(2m)! with kappa^2 = w(t), as a
    t-series whose coefficients are polynomials in z."""
    out = [ZERO] * n
    power = [Fraction(1)] + [Fraction(0)] * (n - 1)  # w^m
    m = 0
    while any(power):
        scale = Fraction(1, factorial(2 * m))
        for k, c in enumerate(power):
            if c:
                out[k] = out[k] + RationalPoly.monomial(m, c * scale)
        nxt = [Fraction(0)] * n
        for i, a in enumerate(power):
            if a:
                for j in range(1, n - i):
                    if w[j]:
                        nxt[i + j] += a * w[j]
        power = nxt
        m += 1
    return out


# ---------------------------------------------------------- named families

_cache_lock = threading.Lock()
_ml: list[RationalPoly] = [ONE, RationalPoly([0, 2])]
_qrec: list[RationalPoly] = [ONE, RationalPoly([1, 2])]


def ml_poly(n: int) -> RationalPoly:
    """Mittag-Leffler polynomial M_n(y), coefficient of t^n in ((1+t)/(1-t))^y.

    Built from (n+1) M_{n+1} = 2 y M_n + (n-1) M_{n-1}.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n < len(_ml):
        return _ml[n]
    with _cache_lock:
        two_y = RationalPoly([0, 2])
        while len(_ml) <= n:
            k = len(_ml) - 1
            _ml.append((two_y * _ml[k] + _ml[k - 1] * (k - 1)) / (k + 1))
    return _ml[n]


def q_poly_recursive(k: int) -> RationalPoly:
    """Q_k from (2k+1 + 2x/(2k+1)) Q_k = (k+1) Q_{k+1} + k Q_{k-1}."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k < len(_qrec):
        return _qrec[k]
    with _cache_lock:
        while len(_qrec) <= k:
            j = len(_qrec) - 1
            lhs = _qrec[j] * (2 * j + 1) + _qrec[j].shift() * Fraction(2, 2 * j + 1)
            _qrec.append((lhs - _qrec[j - 1] * j) / (j + 1))
    return _qrec[k]


def q_poly_from_ml(k: int) -> RationalPoly:
    """Q_k(x) = sum_{j<=k} M_{2j}(sqrt x)."""
    acc = ZERO
    for j in range(k + 1):
        acc = acc + ml_poly(2 * j).even_to_square()
    return acc


def q_poly(k: int) -> RationalPoly:
    """Q_k, cross-checked between the three-term recursion and the M_{2j} sum."""
    a = q_poly_recursive(k)
    b = q_poly_from_ml(k)
    if a != b:
        raise InternalMismatch(f"Q_{k}: recursion and Mittag-Leffler sum disagree")
    return a


def dilatation_expansion(k: int) -> tuple[int, list[Fraction]]:
    """Weights w_m with x Q_k' = k Q_k - sum_{m=1}^k w_m Q_{k-m}."""
    if k < 0:
        raise ValueError("k must be non-negative")
    weights = [Fraction(2 * k + 1, (2 * m - 1) * (2 * m + 1)) for m in range(1, k + 1)]
    lhs = q_poly(k).derivative().shift()
    rhs = q_poly(k) * k
    for m, w in enumerate(weights, start=1):
        rhs = rhs - q_poly(k - m) * w
    if lhs != rhs:
        raise InternalMismatch(f"dilatation expansion fails at k={k}")
    return k, weights


def ml_identities_check(n_max: int) -> Report:
    """Exact check of the derivative and odd-quotient identities for M_n."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rep = Report("mittag-leffler identities")
    for n in range(1, n_max + 1):
        rhs = ZERO
        for k in range((n - 1) // 2 + 1):
            rhs = rhs + ml_poly(n - 2 * k - 1) * Fraction(2, 2 * k + 1)
        rep.add(f"derivative n={n}", ml_poly(n).derivative() == rhs)
        lhs = RationalPoly(ml_poly(2 * n + 1).coeffs[1:])
        rhs = ZERO
        for k in range(n + 1):
            rhs = rhs + ml_poly(2 * k)
        rep.add(f"odd quotient n={n}", lhs == rhs * Fraction(2, 2 * n + 1))
    return rep


# ------------------------------------------------------------ named series

SERIES_NAMES = ("Q-generating", "ML-generating", "R-generating")


def _ml_generating(n: int) -> list[RationalPoly]:
    return _sexp_linear(RationalPoly([0, 1]), _atanh_series(n), n)


def _q_generating(n: int) -> list[RationalPoly]:
    # cosh(sqrt(x) w(sqrt t)) / (1 - t)
    c = _cosh_sqrt_var(_kappa_squared(n), n)
    out, acc = [], ZERO
    for k in range(n):
        acc = acc + c[k]
        out.append(acc)
    return out


def _r_generating(n: int) -> list[RationalPoly]:
    # kappa cosh^3(kappa/2)/sinh(kappa/2) = 2 h(t)/(1-t);  cosh^2(u) = (1 + cosh 2u)/2
    h = _odd_reciprocal_series(n)
    front = []
    acc = Fraction(0)
    for k in range(n):
        acc += 2 * h[k]
        front.append(RationalPoly([2 * acc]))  # extra factor 2 from 1/cosh^2 = 2/(1 + cosh)
    c = _cosh_sqrt_var(_kappa_squared(n), n)
    denom = [c[0] + 1] + c[1:]
    return _smul(front, _sinv_const(denom, n), n)


def series_expand(expr: str, order: int) -> PolySeries:
    """Exact coefficients t^0..t^order of a named generating function."""
    if order < 0:
        raise ValueError("order must be non-negative")
    builders = {
        "Q-generating": _q_generating,
        "ML-generating": _ml_generating,
        "R-generating": _r_generating,
    }
    try:
        build = builders[expr]
    except KeyError:
        raise UnknownSeries(f"unknown series {expr!r}; expected one of {SERIES_NAMES}") from None
    return PolySeries(tuple(build(order + 1)))


def q_generating_ode_residual(order: int) -> list[RationalPoly]:
    """Coefficients of t^0..t^(order-1) of
    t(t-1)^2 F'' + (t-1)(7t-1) F'/2 + (3t-1) F/2 - x F for F = sum Q_k t^k."""
    q = [q_poly_recursive(k) for k in range(order + 1)]
    res = []
    for n in range(order):
        # t(t^2 - 2t + 1) F''  ->  coefficient of t^n
        acc = ZERO
        for shift, mult in ((1, 1), (2, -2), (3, 1)):
            j = n - shift + 2  # F'' coefficient index j-2 carries (j)(j-1) q_j
            if 0 <= n - shift and j <= order:
                acc = acc + q[j] * (mult * j * (j - 1))
        # (7t^2 - 8t + 1)/2 F'
        for shift, mult in ((0, Fraction(1, 2)), (1, Fraction(-8, 2)), (2, Fraction(7, 2))):
            j = n - shift + 1
            if 0 <= n - shift and j <= order:
                acc = acc + q[j] * (mult * j)
        # (3t - 1)/2 F - x F
        acc = acc + q[n] * Fraction(-1, 2) - q[n].shift()
        if n >= 1:
            acc = acc + q[n - 1] * Fraction(3, 2)
        res.append(acc)
    return res
