"""Bound-constant engine.

Evaluates the envelope function g, its per-dimension weighted form h_d,
the integer minimizer L_d with the resulting quality ratio m_d = 2^d h_d(L_d),
the optimal scale ratio for a given class count, the competing classical
lower bounds, and asymptotic self-checks.  Everything runs at configurable
precision (default 50 significant digits).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import InputError, VerificationError

DEFAULT_DPS = 50
RESIDUAL_BOUND = 5.0

_dps = DEFAULT_DPS
# _log_tables[x] = (log(x + 2), log g(x)) for integer x >= 1; index 0 unused.
# Shared by every dimension's scan: log h_d(x) = _log_tables[x][0] + d * _log_tables[x][1].
_log_tables: list[tuple[mpmath.mpf, mpmath.mpf] | None] = [None]
_opt_cache: dict[int, tuple[int, mpmath.mpf, mpmath.mpf]] = {}


def set_precision(dps: int) -> None:
    """Set the working precision in significant digits; clears caches."""
    global _dps
    if dps < 15:
        raise InputError("working precision below double precision is not supported")
    _dps = dps
    del _log_tables[1:]
    _opt_cache.clear()


def _to_mpf(x) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def g_eval(x) -> mpmath.mpf:
    """g(x) = (2x)^(1/(x+1)) * (1 + 1/x), strictly decreasing on [1, oo)."""
    with mpmath.workdps(_dps):
        t = _to_mpf(x)
        if t <= 0:
            raise InputError("g is defined for x > 0")
        return (2 * t) ** (1 / (t + 1)) * (1 + 1 / t)


def h_eval(d: int, x) -> mpmath.mpf:
    """h_d(x) = (x + 2) * g(x)^d."""
    if d < 1:
        raise InputError("dimension must be >= 1")
    with mpmath.workdps(_dps):
        t = _to_mpf(x)
        if t <= 0:
            raise InputError("h is defined for x > 0")
        return (t + 2) * g_eval(t) ** d


def log_deriv_h(d: int, x) -> mpmath.mpf:
    """Logarithmic derivative of h_d: 1/(x+2) - d * log(2x) / (x+1)^2."""
    if d < 1:
        raise InputError("dimension must be >= 1")
    with mpmath.workdps(_dps):
        t = _to_mpf(x)
        if t <= 0:
            raise InputError("the derivative is defined for x > 0")
        return 1 / (t + 2) - d * mpmath.log(2 * t) / (t + 1) ** 2


def scan_bound(d: int) -> int:
    """Largest integer x the minimizer scan must cover: floor(4d log(4d) + 1)."""
    return math.floor(4 * d * math.log(4 * d) + 1)


def _ensure_tables(upto: int) -> None:
    with mpmath.workdps(_dps):
        while len(_log_tables) <= upto:
            x = len(_log_tables)
            t = mpmath.mpf(x)
            a = mpmath.log(t + 2)
            b = mpmath.log(2 * t) / (t + 1) + mpmath.log(1 + 1 / t)
            _log_tables.append((a, b))


def optimize_L(d: int) -> tuple[int, mpmath.mpf, mpmath.mpf]:
    """Exhaustive integer minimization of h_d over [1, scan_bound(d)].

    Returns (L_d, h_d(L_d), m_d) where L_d is the minimal argmin and
    m_d = 2^d h_d(L_d).  The logarithmic derivative of h_d is positive beyond
    the scan bound, so the scan cannot miss the minimum.
    """
    if d < 1:
        raise InputError("dimension must be >= 1")
    hit = _opt_cache.get(d)
    if hit is not None:
        return hit
    limit = scan_bound(d)
    _ensure_tables(limit)
    with mpmath.workdps(_dps):
        a, b = _log_tables[1]
        best_log = a + d * b
        best_L = 1
        for L in range(2, limit + 1):
            a, b = _log_tables[L]
            v = a + d * b
            if v < best_log:
                best_log, best_L = v, L
        h_min = mpmath.e ** best_log
        m = mpmath.mpf(2) ** d * h_min
    out = (best_L, h_min, m)
    _opt_cache[d] = out
    return out


def optimal_lambda(J: int) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Closed-form minimizer of lambda * (1 + 2 lambda^(1-J)) over lambda >= 1.

    J = 2 gives (1, 3); J >= 3 gives lambda* = (2(J-2))^(1/(J-1)) with minimum
    value lambda* (J-1)/(J-2).
    """
    if J < 2:
        raise InputError("class count J must be >= 2")
    with mpmath.workdps(_dps):
        if J == 2:
            return mpmath.mpf(1), mpmath.mpf(3)
        lam = (2 * (J - 2)) ** (1 / mpmath.mpf(J - 1))
        return lam, lam * (J - 1) / (J - 2)


def bdj_lambda(d: int) -> mpmath.mpf:
    """Solve 3^d - (lambda^(1/d) - 2)^d / 2 = lambda on [(5/2)^d, 3^d].

    Bisection; the sign change at the bracket endpoints and strict decrease
    along the bracket are checked numerically.  The relative width is driven
    far below 1e-12 (to ten digits short of working precision): the gap
    3^d - lambda_d approaches 1/2 from below with margin ~3^-d, so certifying
    it for d up to 30 needs absolute accuracy well beyond 1e-12 relative.
    """
    if d < 1:
        raise InputError("dimension must be >= 1")
    with mpmath.workdps(_dps):
        dm = mpmath.mpf(d)

        def f(lam):
            return 3 ** dm - (lam ** (1 / dm) - 2) ** dm / 2 - lam

        lo = (mpmath.mpf(5) / 2) ** dm
        hi = mpmath.mpf(3) ** dm
        flo, fhi = f(lo), f(hi)
        if not (flo > 0 > fhi):
            raise VerificationError(f"no sign change on the bracket at d={d}")
        probes = [f(lo + (hi - lo) * k / 8) for k in range(9)]
        if any(p2 >= p1 for p1, p2 in zip(probes, probes[1:])):
            raise VerificationError(f"defining function is not decreasing on the bracket at d={d}")
        tol = min(mpmath.mpf("1e-12"), mpmath.mpf(10) ** (10 - _dps))
        while (hi - lo) / lo > tol:
            mid = (lo + hi) / 2
            if f(mid) > 0:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2


@dataclass(frozen=True)
class BoundsRow:
    """One dimension's bound constants and the competing lower bounds."""

    d: int
    L: int
    m: mpmath.mpf
    m_over_3d: mpmath.mpf
    vitali: mpmath.mpf
    rado: mpmath.mpf
    bdj: mpmath.mpf
    ours: mpmath.mpf


def bounds_table(d_max: int) -> list[BoundsRow]:
    """Rows for d = 1..d_max: (d, L_d, m_d, m_d/3^d) plus comparison bounds.

    Comparison columns: vitali = 3^-d, rado = (3^d - 7^-d)^-1, bdj = 1/lambda_d,
    ours = 2^-d / h_d(L_d) = 1/m_d.
    """
    if d_max < 1:
        raise InputError("d_max must be >= 1")
    rows = []
    for d in range(1, d_max + 1):
        L, h_min, m = optimize_L(d)
        with mpmath.workdps(_dps):
            three = mpmath.mpf(3) ** d
            rows.append(
                BoundsRow(
                    d=d,
                    L=L,
                    m=m,
                    m_over_3d=m / three,
                    vitali=1 / three,
                    rado=1 / (three - mpmath.mpf(7) ** -d),
                    bdj=1 / bdj_lambda(d),
                    ours=mpmath.mpf(2) ** -d / h_min,
                )
            )
    return rows


def improvement_frontier() -> int:
    """Smallest dimension from which the new bound beats 3^-d forever.

    Verifies m_d/3^d >= 1 for d <= 13, m_14/3^14 < 1, L_14 >= 9 with
    g(L_14) <= 3/2, and the induction factor (2/3) g(L_14) < 1, then
    returns 14.  Any failed check aborts with a diagnostic.
    """
    rows = bounds_table(14)
    for row in rows[:13]:
        if not row.m_over_3d >= 1:
            raise VerificationError(f"expected no improvement at d={row.d}, got m/3^d={row.m_over_3d}")
    last = rows[13]
    if not last.m_over_3d < 1:
        raise VerificationError(f"expected improvement at d=14, got m/3^d={last.m_over_3d}")
    if last.L < 9:
        raise VerificationError(f"induction needs L_14 >= 9, got {last.L}")
    with mpmath.workdps(_dps):
        g14 = g_eval(last.L)
        if not g14 <= mpmath.mpf(3) / 2:
            raise VerificationError(f"induction needs g(L_14) <= 3/2, got {g14}")
        if not mpmath.mpf(2) / 3 * g14 < 1:
            raise VerificationError(f"induction factor (2/3) g(L_14) = {2 * g14 / 3} is not < 1")
    return last.d


@dataclass(frozen=True)
class AsymptoticRow:
    d: int
    L: int
    rho: mpmath.mpf
    residual: mpmath.mpf
    log_m_over_d: mpmath.mpf


def asymptotic_check(d_list) -> list[AsymptoticRow]:
    """High-dimensional envelope checks for each listed d >= 50.

    rho_d = h_d(L_d) / (d log d * e^(1 + log log d / log d)) must land in
    [0.4, 2.5] with |rho_d - 1| * log d <= RESIDUAL_BOUND, and log(m_d)/d must
    lie within 3 log(d)/d of log 2.
    """
    rows = []
    for d in d_list:
        if d < 50:
            raise InputError("asymptotic checks start at d = 50")
        L, h_min, m = optimize_L(d)
        with mpmath.workdps(_dps):
            logd = mpmath.log(d)
            rho = h_min / (d * logd * mpmath.e ** (1 + mpmath.log(logd) / logd))
            residual = abs(rho - 1) * logd
            log_m_over_d = mpmath.log(m) / d
            if not 0.4 <= rho <= 2.5:
                raise VerificationError(f"rho({d}) = {rho} outside [0.4, 2.5]")
            if not residual <= RESIDUAL_BOUND:
                raise VerificationError(f"residual({d}) = {residual} exceeds {RESIDUAL_BOUND}")
            if not abs(log_m_over_d - mpmath.log(2)) <= 3 * logd / d:
                raise VerificationError(f"log(m_{d})/{d} = {log_m_over_d} too far from log 2")
        rows.append(AsymptoticRow(d, L, rho, residual, log_m_over_d))
    return rows
