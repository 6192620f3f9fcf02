"""The eta-regularised inner product on polynomials and the functional F_s.

<x^j, x^k> = eta(-1-2j-2k), a positive definite inner product for which the
Q_k are orthogonal with <Q_k, Q_k> = (2k+1)/4.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from mpmath import mp, mpc, mpf

from . import mpsf
from .checks import Report
from .errors import PoleError
from .mpsf import DEFAULT_CTX, GUARD_BITS, PrecisionContext, escalate, lost_bits, to_mpc
from .polyx import RationalPoly, q_poly
from .quadid import QuadratureSpec, integrate_0_inf

__all__ = [
    "InnerProductTable",
    "inner",
    "inner_integral",
    "fs_functional",
    "cosh_kernel_check",
    "generating_kernel_check",
    "orthogonality_check",
]


@dataclass(frozen=True)
class InnerProductTable:
    moments: tuple[Fraction, ...]

    @classmethod
    def build(cls, size: int) -> "InnerProductTable":
        return cls(tuple(mpsf.eta_neg_odd(m) for m in range(size)))

    @property
    def size(self) -> int:
        return len(self.moments)

    def moment(self, m: int) -> Fraction:
        return self.moments[m] if m < len(self.moments) else mpsf.eta_neg_odd(m)


def inner(p: RationalPoly, q: RationalPoly, table: InnerProductTable | None = None) -> Fraction:
    """Exact <p, q> = sum_{j,k} p_j q_k eta(-1-2j-2k)."""
    prod = p * q
    get = table.moment if table is not None else mpsf.eta_neg_odd
    return sum((c * get(m) for m, c in enumerate(prod.coeffs)), Fraction(0))


def inner_integral(p: RationalPoly, q: RationalPoly, ctx: PrecisionContext = DEFAULT_CTX,
                   spec: QuadratureSpec | None = None):
    """<p, q> as int_0^inf p(-w^2) q(-w^2) w dw / sinh(pi w).  Returns (value, err)."""
    prod = (p * q).coeffs
    # alternating-sign polynomial in w^2: cancellation grows with the degree
    extra = 4 * len(prod) + 16
    local = ctx.with_bits(ctx.bits + extra)
    with mp.workprec(local.bits + GUARD_BITS):
        cs = [mpf(c.numerator) / c.denominator for c in prod]

        def f(w):
            u = -w * w
            acc = mpf(0)
            for c in reversed(cs):
                acc = acc * u + c
            return acc * w / mp.sinh(mp.pi * w)

        val, err = integrate_0_inf(f, spec, local)
    return val, err


def _is_positive_odd_integer(s: mpc) -> bool:
    return s.imag == 0 and s.real > 0 and s.real == mp.floor(s.real) and int(s.real) % 2 == 1


def fs_functional(s, p: RationalPoly, ctx: PrecisionContext = DEFAULT_CTX):
    """F_s(p) = sum_j p_j eta(s - 2j), with cancellation-driven precision escalation."""
    z = to_mpc(s)
    if _is_positive_odd_integer(z):
        raise PoleError(f"F_s is not defined at the positive odd integer s = {z.real}")
    coeffs = p.coeffs
    if not coeffs:
        return mpc(0)

    def compute(wp):
        etas = mpsf.eta_shifts(z, len(coeffs) - 1, ctx.with_bits(wp))
        total = mpc(0)
        scale = mpf(0)
        for c, e in zip(coeffs, etas):
            term = (mpf(c.numerator) / c.denominator) * e
            total += term
            scale += abs(term)
        if total == 0:
            # exact cancellation: the error is absolute, below scale * 2^-wp
            return total, 0.0
        return total, lost_bits(scale, total)

    return escalate(compute, ctx)[0]


def orthogonality_check(k_max: int = 16) -> Report:
    rep = Report("orthogonality")
    table = InnerProductTable.build(2 * k_max + 1)
    qs = [q_poly(k) for k in range(k_max + 1)]
    for k in range(k_max + 1):
        for j in range(k + 1):
            val = inner(qs[k], qs[j], table)
            want = Fraction(2 * k + 1, 4) if j == k else Fraction(0)
            rep.add(f"<Q_{k},Q_{j}>", val == want, val - want, 0)
    return rep


# ------------------------------------------------------ bivariate series utils
# dense dict {(i, j): Fraction} truncated at i + j <= order


def _bmul(a: dict, b: dict, order: int) -> dict:
    out: dict = {}
    for (i, j), x in a.items():
        for (k, m), y in b.items():
            if i + j + k + m <= order:
                key = (i + k, j + m)
                out[key] = out.get(key, 0) + x * y
    return out


def _binv(a: dict, order: int) -> dict:
    """Reciprocal of a bivariate series with nonzero constant term."""
    c0 = a[(0, 0)]
    rest = {k: v / c0 for k, v in a.items() if k != (0, 0)}
    # 1/(1 + r) = sum (-r)^n; r has no constant term so order+1 terms suffice
    out = {(0, 0): Fraction(1)}
    power = {(0, 0): Fraction(1)}
    for n in range(1, order + 1):
        power = _bmul(power, rest, order)
        sign = -1 if n % 2 else 1
        for k, v in power.items():
            out[k] = out.get(k, 0) + sign * v
    return {k: v / c0 for k, v in out.items()}


def _cosh_coeffs(order: int):
    # cosh t = sum a^k/(2k)! with a = t^2
    return [Fraction(1, factorial(2 * k)) for k in range(order + 1)]


def cosh_kernel_check(order: int = 8) -> Report:
    """Compare sum <x^k, x^m> t1^2k t2^2m / ((2k)!(2m)!) with
    (1 + cosh t1 cosh t2) / (c (cosh t1 + cosh t2)^2) for c = 2 and c = 1.

    The report's ``data["normalization"]`` names the factor c that matches.
    """
    if order > 24:
        raise ValueError("order must be <= 24")
    ch = _cosh_coeffs(order)
    c1 = {(k, 0): ch[k] for k in range(order + 1)}
    c2 = {(0, k): ch[k] for k in range(order + 1)}
    num = _bmul(c1, c2, order)
    num[(0, 0)] = num.get((0, 0), 0) + 1
    den = {}
    for key, v in list(c1.items()) + list(c2.items()):
        den[key] = den.get(key, 0) + v
    kernel = _bmul(num, _binv(_bmul(den, den, order), order), order)

    rep = Report("cosh kernel")
    matches = {2: True, 1: True}
    for k in range(order + 1):
        for m in range(order + 1 - k):
            lhs = mpsf.eta_neg_odd(k + m) / (factorial(2 * k) * factorial(2 * m))
            rhs = kernel.get((k, m), Fraction(0))
            for c in matches:
                if lhs != rhs / c:
                    matches[c] = False
            rep.add(f"coeff ({k},{m})", lhs == rhs / 2, lhs - rhs / 2, 0)
    rep.data["normalization"] = "1/2" if matches[2] else ("1" if matches[1] else "neither")
    rep.data["displayed_form_matches"] = matches[1]
    return rep


def generating_kernel_check(order: int = 12) -> Report:
    """<Phi(., t1), Phi(., t2)> against (1 + t1 t2)/(4 (1 - t1 t2)^2) coefficientwise."""
    table = InnerProductTable.build(2 * order + 1)
    qs = [q_poly(k) for k in range(order + 1)]
    rep = Report("generating kernel")
    for k in range(order + 1):
        for m in range(order + 1):
            lhs = inner(qs[k], qs[m], table)
            # (1 + u)/(4 (1-u)^2) = sum (2n+1) u^n / 4 with u = t1 t2
            rhs = Fraction(2 * k + 1, 4) if k == m else Fraction(0)
            rep.add(f"t1^{k} t2^{m}", lhs == rhs, lhs - rhs, 0)
    return rep
