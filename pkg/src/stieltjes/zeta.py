"""Riemann zeta, its first two derivatives, and the regularized function phi.

Everything goes through one Euler-Maclaurin routine.  For a cutoff N and M
correction terms

    zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
              + sum_{j=1..M} B_2j/(2j)! (s)_(2j-1) N^(1-s-2j) + R

and the derivatives are taken term by term.  The regularized variant replaces
N^(1-s)/(s-1) with (N^(1-s) - 1)/(s-1), which is analytic at s = 1, so
phi(s) = zeta(s) - 1/(s-1) is computed without cancellation near the pole.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, perm

import mpmath
from mpmath import mp, mpc, mpf

from .mp_core import (
    ConvergenceError,
    DomainError,
    PoleError,
    PrecisionContext,
    gamma,
    rgamma,
    to_mp,
)

_BERNOULLI: list[Fraction] = [Fraction(1)]  # B_0, B_2, B_4, ...


def bernoulli_even(j: int) -> Fraction:
    """B_{2j} as an exact rational (append-only cache)."""
    while len(_BERNOULLI) <= j:
        _BERNOULLI.append(Fraction(*mpmath.bernfrac(2 * len(_BERNOULLI))))
    return _BERNOULLI[j]


@lru_cache(maxsize=64)
def _em_coefficients(j_max: int, prec: int) -> tuple:
    # B_2j/(2j)! rounded to `prec` bits
    with mp.workprec(prec):
        out = [mpf(0)]
        fact = 1
        for j in range(1, j_max + 1):
            fact *= (2 * j - 1) * (2 * j)
            b = bernoulli_even(j)
            out.append(mpf(b.numerator) / (b.denominator * fact))
        return tuple(out)


def _coefficient(j: int):
    size = 64
    while size < j:
        size *= 2
    return _em_coefficients(size, mp.prec)[j]


@lru_cache(maxsize=16)
def _logs(N: int, prec: int) -> tuple:
    with mp.workprec(prec):
        return tuple(mpmath.log(n) if n > 1 else mpf(0) for n in range(N))


@dataclass(frozen=True)
class ZetaValue:
    s: object
    value: object
    order: int

    def __post_init__(self):
        if self.order not in (0, 1, 2):
            raise ValueError("order must be 0, 1 or 2")


def choose_cutoff(s, dps: int) -> int:
    """Initial Euler-Maclaurin cutoff N for a target of `dps` digits."""
    return int(0.5 * dps + float(abs(s)) / 3.0) + 10


def _expm1_over(u, order):
    """(e^u - 1)/u and its first `order` derivatives in u."""
    if order == 0:
        return [mpmath.expm1(u) / u if u != 0 else mpf(1)]
    if abs(u) < 0.5:
        # h^(m)(u) = sum_k k!/(k-m)! u^(k-m)/(k+1)!
        tol = mpf(2) ** (-mp.prec - 8)
        h = [mpf(0)] * (order + 1)
        coeff = mpf(1)
        k = 0
        while True:
            for m in range(min(k, order) + 1):
                h[m] += coeff * perm(k, m) * u ** (k - m)
            if k > order and coeff < tol:
                break
            k += 1
            coeff /= k + 1
        return h
    e = mpmath.exp(u)
    h0 = (e - 1) / u
    out = [h0]
    if order >= 1:
        out.append((u * e - (e - 1)) / u ** 2)
    if order >= 2:
        out.append((u * u * e - 2 * u * e + 2 * (e - 1)) / u ** 3)
    return out


def _head(s, N, L, order, regularized):
    """N^(1-s)/(s-1) (or its regularized form) plus N^-s/2, with derivatives."""
    out = [None] * (order + 1)
    if regularized:
        # (N^(1-s) - 1)/(s-1) = -L h(u), u = (1-s)L, d/ds = -L d/du
        h = _expm1_over((1 - s) * L, order)
        for m in range(order + 1):
            out[m] = -L * (-L) ** m * h[m]
    else:
        E = mpmath.exp((1 - s) * L)
        r = 1 / (s - 1)
        inv = [r, -r * r, 2 * r * r * r]
        for m in range(order + 1):
            out[m] = sum(comb(m, i) * (-L) ** (m - i) * E * inv[i] for i in range(m + 1))
    half = mpmath.exp(-s * L) / 2
    for m in range(order + 1):
        out[m] += (-L) ** m * half
    return out


def _bernoulli_tail(s, N, L, order, tol):
    """Sum of the Bernoulli corrections; None when the series stalls before tol."""
    total = [mpf(0)] * (order + 1)
    # P = (s)_(2j-1) and its derivatives, X = N^(1-s-2j)
    P = [s, mpf(1), mpf(0)]
    X = mpmath.exp(-(s + 1) * L)
    invN2 = mpf(1) / (N * N)
    prev = None
    j = 1
    j_cap = 4 * mp.dps + 50
    if order == 0:
        return _bernoulli_tail0(s, N, L, tol, j_cap)
    while True:
        c = _coefficient(j)
        terms = []
        for m in range(order + 1):
            t = sum(comb(m, i) * P[i] * (-L) ** (m - i) for i in range(m + 1))
            terms.append(c * t * X)
        mag = max(abs(t) for t in terms)
        for m in range(order + 1):
            total[m] += terms[m]
        scale = max(1, max(abs(t) for t in total))
        if mag <= tol * scale and j > 1:
            return total, mag
        if prev is not None and mag > prev and mag > tol:
            return None
        if j > j_cap:
            return None
        prev = mag
        # advance to (s)_(2j+1): multiply by (s+2j-1)(s+2j)
        for a in (s + 2 * j - 1, s + 2 * j):
            P = [P[0] * a, P[1] * a + P[0], P[2] * a + 2 * P[1]]
        X *= invN2
        j += 1


def _bernoulli_tail0(s, N, L, tol, j_cap):
    # value-only version of the loop above
    total = mpf(0)
    P = s
    X = mpmath.exp(-(s + 1) * L)
    invN2 = mpf(1) / (N * N)
    prev = None
    for j in range(1, j_cap + 1):
        t = _coefficient(j) * P * X
        total += t
        mag = abs(t)
        if j > 1 and mag <= tol * max(1, abs(total)):
            return [total], mag
        if prev is not None and mag > prev and mag > tol:
            return None
        prev = mag
        P *= (s + 2 * j - 1) * (s + 2 * j)
        X *= invN2
    return None


def _power_sum(s, N, order, logs):
    out = [mpf(1)] + [mpf(0)] * order
    for n in range(2, N):
        ln = logs[n]
        v = mpmath.exp(-s * ln)
        out[0] += v
        if order >= 1:
            v = -ln * v
            out[1] += v
        if order >= 2:
            out[2] += -ln * v
    return out


def euler_maclaurin(s, order: int, dps: int, regularized: bool = False):
    """[zeta(s), zeta'(s), ...] up to `order` at `dps` digits (caller sets mp.dps).

    With ``regularized=True`` the value returned is zeta(s) - 1/(s-1) and its
    derivatives.  The cutoff N doubles whenever the Bernoulli series starts
    growing before reaching the tolerance.
    """
    re = s.real if isinstance(s, mpc) else s
    if re < 1:
        # the partial sums grow like N^(1 - Re s) while zeta itself does not
        extra = int((1 - float(re)) * math.log10(choose_cutoff(s, dps))) + 5
        with mp.workdps(mp.dps + extra):
            vals = _euler_maclaurin(s, order, dps + extra, regularized)
        return [+v for v in vals]
    return _euler_maclaurin(s, order, dps, regularized)


def _euler_maclaurin(s, order, dps, regularized):
    tol = mpf(10) ** (-dps - 3)
    N = choose_cutoff(s, dps)
    while True:
        logs = _logs(N, mp.prec)
        L = mpmath.log(N)
        tail = _bernoulli_tail(s, N, L, order, tol)
        if tail is not None:
            break
        N *= 2
        if N > 10 ** 6:
            raise ConvergenceError(f"Euler-Maclaurin did not converge at s={s}")
    corr, _ = tail
    head = _head(s, N, L, order, regularized)
    body = _power_sum(s, N, order, logs)
    return [body[m] + head[m] + corr[m] for m in range(order + 1)]


def _prepare(s):
    s = to_mp(s)
    if isinstance(s, mpc) and s.imag == 0:
        s = s.real
    return s


def zeta(s, ctx: PrecisionContext):
    """zeta(s) for s != 1."""
    with ctx.workdps():
        s = _prepare(s)
        if s == 1:
            raise PoleError(1, "zeta has a pole at s = 1")
        return euler_maclaurin(s, 0, ctx.working)[0]


def zeta_deriv(s, order: int, ctx: PrecisionContext):
    """d^order zeta / ds^order for order in {1, 2}."""
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    with ctx.workdps():
        s = _prepare(s)
        if s == 1:
            raise PoleError(1, "zeta has a pole at s = 1")
        return euler_maclaurin(s, order, ctx.working)[order]


def zeta_all(s, ctx: PrecisionContext, max_order: int = 2) -> tuple[ZetaValue, ...]:
    """zeta and its derivatives up to max_order from a single summation."""
    with ctx.workdps():
        s = _prepare(s)
        if s == 1:
            raise PoleError(1, "zeta has a pole at s = 1")
        vals = euler_maclaurin(s, max_order, ctx.working)
    return tuple(ZetaValue(s, v, m) for m, v in enumerate(vals))


def phi(s, ctx: PrecisionContext):
    """Regularized zeta: zeta(s) - 1/(s-1), equal to Euler's gamma at s = 1."""
    with ctx.workdps():
        s = _prepare(s)
        if s == 1:
            return +mp.euler
        return euler_maclaurin(s, 0, ctx.working, regularized=True)[0]


def functional_eq_residual(z, ctx: PrecisionContext):
    """Relative defect of zeta(1+z) = pi^(1/2+z) Gamma(-z/2)/Gamma((1+z)/2) zeta(-z)."""
    with ctx.workdps():
        z = _prepare(z)
        if z == 0 or z == -1:
            raise DomainError(f"functional equation is singular at z = {z}")
        try:
            g = gamma(-z / 2, ctx)
        except PoleError as exc:
            raise DomainError(f"Gamma(-z/2) has a pole at z = {z}") from exc
        lhs = zeta(1 + z, ctx)
        rhs = mpmath.power(mp.pi, mpf(1) / 2 + z) * g * rgamma((1 + z) / 2, ctx) * zeta(-z, ctx)
        return abs(lhs - rhs) / abs(lhs)
