"""Finite truncations of the infinite matrices, their residuals against the
sequences, and the determinant scan.

Matrix formulas use 1-based (row r, column c).  The start system acts on the
difference vector (v_0, v_1, ...), and K acts on (u_0, u_1, ...).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, mpf

from . import mpsf, seqgen
from .checks import Report
from .errors import MissingParameter
from .mpsf import DEFAULT_CTX, GUARD_BITS, PrecisionContext, to_mpc

__all__ = [
    "KINDS",
    "TruncatedSystem",
    "build",
    "rowred_from_start",
    "det_polynomial_check",
    "matrix_residuals",
    "det_indicator",
    "ScanMinimum",
    "scan_profile",
    "profile_minima",
    "zero_scan",
    "nonsimple_residual",
]

S_DEPENDENT = ("START", "OPW", "ROWRED")
KINDS = ("START", "OPW", "U", "L", "K", "A", "ROWRED")


def _coerce_s(s):
    """Keep rationals exact; everything else becomes mpc."""
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return to_mpc(s)


def _entry(kind: str, r: int, c: int, s):
    if kind == "START":
        if c == r:
            return Fraction(1)
        if c > r:
            return Fraction(1, 2 * (c - r) + 1)
        return -s / (2 * r - 1)
    if kind == "OPW":
        if c == r - 1:
            return -s / (2 * (2 * r - 1)) - Fraction(1, 2)
        if c >= r:
            m = c - r
            return Fraction(1, (2 * m + 1) * (2 * m + 3))
        return Fraction(0)
    if kind == "U":
        return Fraction(1, 2 * (c - r) + 1) if c >= r else Fraction(0)
    if kind == "L":
        return Fraction(1, 2 * r - 1) if c < r else Fraction(0)
    if kind == "K":
        if c == r:
            return Fraction(-(2 * r - 1))
        if c > r:
            m = c - r
            return Fraction(2 * (2 * r - 1), (2 * m - 1) * (2 * m + 1))
        return Fraction(0)
    if kind in ("A", "ROWRED"):
        if c == r:
            if kind == "A":
                return Fraction(-(4 * r - 1), 8)
            return -(s + 2 * r - 1) / 4
        if c > r:
            m = c - r
            return Fraction(c, (2 * m - 1) * (2 * m + 1))
        return Fraction(0)
    raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")


@dataclass(frozen=True)
class TruncatedSystem:
    kind: str
    N: int
    entries: tuple
    s: object = None

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r - 1][c - 1]

    def rows(self):
        return [list(row) for row in self.entries]

    @property
    def exact(self) -> bool:
        return all(isinstance(x, Fraction) for row in self.entries for x in row)


def build(kind: str, N: int, s=None) -> TruncatedSystem:
    kind = kind.upper()
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if N < 1:
        raise ValueError("N must be >= 1")
    if kind in S_DEPENDENT:
        if s is None:
            raise MissingParameter(f"{kind} needs s")
        s = _coerce_s(s)
    elif s is not None:
        raise ValueError(f"{kind} does not depend on s")
    entries = tuple(tuple(_entry(kind, r, c, s) for c in range(1, N + 1)) for r in range(1, N + 1))
    return TruncatedSystem(kind, N, entries, s)


def rowred_from_start(N: int, s) -> bool:
    """Build ROWRED by row operations on START (exact for rational s) and compare.

    Row r of ROWRED is ((2r+1) START_{r+1} - (2r-1) START_r)/4, restricted to
    the first N columns.
    """
    s = _coerce_s(s)
    start = build("START", N + 1, s)
    target = build("ROWRED", N, s)
    for r in range(1, N + 1):
        for c in range(1, N + 1):
            val = ((2 * r + 1) * start[r + 1, c] - (2 * r - 1) * start[r, c]) / 4
            if val != target[r, c]:
                return False
    return True


# -------------------------------------------------------------- determinant


def _det_exact(rows) -> Fraction:
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for i in range(n):
        p = next((j for j in range(i, n) if a[j][i] != 0), None)
        if p is None:
            return Fraction(0)
        if p != i:
            a[i], a[p] = a[p], a[i]
            det = -det
        det *= a[i][i]
        for j in range(i + 1, n):
            f = a[j][i] / a[i][i]
            if f:
                for k in range(i, n):
                    a[j][k] -= f * a[i][k]
    return det


def _det_float(rows, wp: int):
    """Partial-pivot elimination; returns (det, smallest pivot ratio)."""
    with mp.workprec(wp):
        a = [[mpc(x) if not isinstance(x, Fraction) else mpc(mpf(x.numerator) / x.denominator)
              for x in r] for r in rows]
        n = len(a)
        det = mpc(1)
        worst = mpf(1)
        for i in range(n):
            p = max(range(i, n), key=lambda j: abs(a[j][i]))
            col_scale = max(abs(a[j][i]) for j in range(n))
            if a[p][i] == 0:
                return mpc(0), mpf(0)
            if p != i:
                a[i], a[p] = a[p], a[i]
                det = -det
            piv = a[i][i]
            if col_scale:
                worst = min(worst, abs(piv) / col_scale)
            det *= piv
            inv = 1 / piv
            for j in range(i + 1, n):
                f = a[j][i] * inv
                if f:
                    row_i, row_j = a[i], a[j]
                    for k in range(i + 1, n):
                        row_j[k] -= f * row_i[k]
        return det, worst


def det_indicator(s, N: int, ctx: PrecisionContext = DEFAULT_CTX):
    """det of the N x N leading block of START(s) by pivoted elimination.

    A pivot smaller than 2^(-bits/2) relative to its column triggers one
    recomputation at doubled precision.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    z = _coerce_s(s)
    rows = build("START", N, z).rows()
    if isinstance(z, Fraction):
        return _det_exact(rows)
    det, worst = _det_float(rows, ctx.bits + GUARD_BITS)
    if worst and worst < mpf(2) ** (-ctx.bits // 2):
        det, _ = _det_float(rows, 2 * ctx.bits + GUARD_BITS)
    return det


def det_polynomial_check(N: int) -> bool:
    """det START_N(s) agrees with a degree N-1 polynomial through N nodes at two further nodes."""
    nodes = [Fraction(k, 3) for k in range(N + 2)]
    vals = [det_indicator(x, N) for x in nodes]

    def lagrange(x, xs, ys):
        total = Fraction(0)
        for i, (xi, yi) in enumerate(zip(xs, ys)):
            term = yi
            for j, xj in enumerate(xs):
                if j != i:
                    term *= (x - xj) / (xi - xj)
            total += term
        return total

    xs, ys = nodes[:N], vals[:N]
    return all(lagrange(x, xs, ys) == y for x, y in zip(nodes[N:], vals[N:]))


# ----------------------------------------------------------------- scanning


@dataclass(frozen=True)
class ScanMinimum:
    t: float
    value: float
    grid_t: float


def _abs_det(args):
    t, N, bits, rel_tol = args
    ctx = PrecisionContext(bits=bits, rel_tol=rel_tol)
    with mp.workprec(bits + GUARD_BITS):
        s = mpc(mpf(1) / 2, mpf(t))
    return float(abs(det_indicator(s, N, ctx)))


def scan_profile(t_min, t_max, step, N: int, ctx: PrecisionContext = DEFAULT_CTX, workers: int = 1):
    """|det_indicator(1/2 + i t, N)| on the grid t_min, t_min + step, ... <= t_max."""
    if not 0 < t_min < t_max or step <= 0:
        raise ValueError("need 0 < t_min < t_max and step > 0")
    count = int(math.floor((t_max - t_min) / step + 1e-9)) + 1
    ts = [t_min + i * step for i in range(count)]
    jobs = [(t, N, ctx.bits, ctx.rel_tol) for t in ts]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            vals = list(pool.map(_abs_det, jobs, chunksize=8))
    else:
        vals = [_abs_det(j) for j in jobs]
    return ts, vals


def _golden(f, a, b, width):
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > width:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def profile_minima(ts, vals, N: int, ctx: PrecisionContext = DEFAULT_CTX, *,
                   threshold: float = 1e-2, width: float = 1e-6) -> list[ScanMinimum]:
    """Grid-local minima of a scan profile below threshold * median, each
    refined by golden-section search to the given width."""
    ordered = sorted(vals)
    half = len(ordered) // 2
    median = ordered[half] if len(ordered) % 2 else (ordered[half - 1] + ordered[half]) / 2
    cut = threshold * median
    out = []
    f = lambda t: _abs_det((t, N, ctx.bits, ctx.rel_tol))
    for i in range(1, len(ts) - 1):
        if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1] and vals[i] < cut:
            t_star, v_star = _golden(f, ts[i - 1], ts[i + 1], width)
            out.append(ScanMinimum(t_star, v_star, ts[i]))
    return out


def zero_scan(t_min, t_max, step, N: int, ctx: PrecisionContext = DEFAULT_CTX, *,
              threshold: float = 1e-2, width: float = 1e-6, workers: int = 1) -> list[ScanMinimum]:
    """Refined local minima of |det| along the critical line."""
    if N < 1:
        raise ValueError("N must be >= 1")
    ts, vals = scan_profile(t_min, t_max, step, N, ctx, workers)
    return profile_minima(ts, vals, N, ctx, threshold=threshold, width=width)


# ----------------------------------------------------------------- residuals


def _start_rows(z, u, tails):
    """Row i (0-based) of START applied to v: -s/(2i+1) (u_i - u_0) + 2 S_{i+1} - u_i,
    with ``tails[i]`` = S_{i+1}."""
    return [-z / (2 * i + 1) * (u[i] - u[0]) + 2 * tails[i] - u[i] for i in range(len(tails))]


def matrix_residuals(s, N_rows: int, depth: int = 512, ctx: PrecisionContext = DEFAULT_CTX, *,
                     tol: float = 1e-14, rtol: float = 1e-8) -> Report:
    """Rows of (U - sL) v, the row-reduced form (A - (s - 1/2)/4) v, the
    constraint f.v, and (K - s) u, with the infinite sums taken from the
    generating-function tails.

    Away from zeros (U - sL) v has row i equal to s eta(s)/(2i+1); the report
    data keeps the raw rows and that prediction, and ``data["inhomogeneous_gap"]``
    the largest departure from it.  ``passed`` asks every homogeneous form to
    vanish within rtol * scale, which is expected only at a zero.
    """
    z = to_mpc(s)
    if N_rows < 1:
        raise ValueError("N_rows must be >= 1")
    b = seqgen.u_sequence(z, max(depth, N_rows + 2), ctx)
    ks = list(range(1, N_rows + 2))
    rows = seqgen.recursion_residuals(b, ks, ctx, tol=tol)
    tails = {r.k: r.tail for r in rows}
    rep = Report(f"matrix residuals at s = {mp.nstr(z, 12)}")
    with mp.workprec(ctx.bits + GUARD_BITS):
        u = b.u
        eta_s = u[0]
        start = _start_rows(z, u, [tails[k] for k in ks])
        scale = max([abs(x) for x in u[: N_rows + 2]] + [mpf(1)])
        bound = rtol * scale
        predicted = [z * eta_s / (2 * i + 1) for i in range(N_rows)]
        rep.data["start_rows"] = start[:N_rows]
        rep.data["predicted_rows"] = predicted
        rep.data["inhomogeneous_gap"] = float(max(abs(a - b) for a, b in zip(start, predicted)) / scale)
        rep.data["constraint"] = start[0]
        rep.data["constraint_predicted"] = z * eta_s
        for i in range(N_rows):
            res = start[i]
            rep.add(f"(U - sL)v row {i}", abs(res) <= bound, float(abs(res) / scale), float(bound / scale))
        rep.add("f.v", abs(start[0]) <= bound, float(abs(start[0]) / scale), float(bound / scale))
        for r in range(1, N_rows + 1):
            # row r of the row-reduced system combines START rows r-1 and r (0-based)
            res = ((2 * r + 1) * start[r] - (2 * r - 1) * start[r - 1]) / 4
            rep.add(f"(A - (s-1/2)/4) v row {r}", abs(res) <= bound, float(abs(res) / scale),
                    float(bound / scale))
        for row in rows[:N_rows]:
            res = 2 * (2 * row.k - 1) * row.residual
            rep.add(f"(K - s) u row {row.k}", abs(res) <= bound * (4 * row.k),
                    float(abs(res) / scale), float(bound * 4 * row.k / scale))
    return rep


def nonsimple_residual(s, N_rows: int, depth: int = 512, ctx: PrecisionContext = DEFAULT_CTX, *,
                       h: float = 1e-4, tol: float = 1e-16) -> Report:
    """Derivative of the inhomogeneous start system.

    With R_i(s) = [(U - sL) v]_i = s eta(s)/(2i+1), differentiating gives
    [(U - sL) v']_i - [L v]_i = (eta(s) + s eta'(s))/(2i+1).  The left side is
    formed by a central difference of R_i from the tail representation; the
    right side is analytic.  At a multiple zero both sides vanish, which is
    the augmented system U v' = s L v' + L v.
    """
    z = to_mpc(s)
    data = {}

    def rows_at(x):
        b = seqgen.u_sequence(x, max(depth, N_rows + 2), ctx)
        res = seqgen.recursion_residuals(b, range(1, N_rows + 1), ctx, tol=tol)
        return _start_rows(x, b.u, [r.tail for r in res])

    with mp.workprec(ctx.bits + GUARD_BITS):
        hh = mpf(h)
        plus, minus = rows_at(z + hh), rows_at(z - hh)
        eta_s = mpsf.eta(z, ctx)
        deta = mpsf.eta_prime(z, ctx)
        rep = Report(f"nonsimple residual at s = {mp.nstr(z, 12)}")
        fd = [(p - m) / (2 * hh) for p, m in zip(plus, minus)]
        analytic = [(eta_s + z * deta) / (2 * i + 1) for i in range(N_rows)]
        scale = max([abs(a) for a in analytic] + [abs(x) for x in fd] + [mpf(1)])
        for i in range(N_rows):
            gap = abs(fd[i] - analytic[i])
            rep.add(f"d/ds row {i}", gap <= 1e-8 * scale, float(gap / scale), 1e-8)
        data["fd"] = fd
        data["analytic"] = analytic
        data["augmented_rows"] = analytic  # (U - sL) v' - L v, zero only at a multiple zero
        rep.data.update(data)
    return rep
