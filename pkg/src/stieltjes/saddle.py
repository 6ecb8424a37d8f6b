"""Lambert W, the closed-form saddle points, and derivatives of log f_k.

With omega = log f_k the saddle equation omega'(s) = 0 reads
p_k(s) zeta(eps s) + eps zeta'(eps s) = 0.  Replacing the digamma and zeta
factors by their large-|s| forms gives

    3 + 2k + s eps (2 log(2 pi/(s eps)) + i pi) = 0,

solved by s = (k + 3/2) / (eps W0((k + 3/2)/(2 pi i))).  The conjugate root is
the "minus" branch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

import mpmath
from mpmath import mp, mpc, mpf

from .mp_core import (
    ConvergenceError,
    DomainError,
    PrecisionContext,
    as_fraction,
    digamma,
    to_mp,
    trigamma,
)
from .zeta import zeta_all

BRANCHES = ("plus", "minus")

_SEED_DIGITS = 30


def _halley(w, z):
    e = z * mpmath.exp(-w)
    h = w - e
    h1 = 1 + e
    return w - 2 * h * h1 / (2 * h1 * h1 + h * e), h


def _seed(z, branch):
    if branch == 0 and abs(z) < mpf("0.3"):
        return z - z ** 2 + mpf(3) / 2 * z ** 3 - mpf(8) / 3 * z ** 4
    r = 2 * (mp.e * z + 1)
    if abs(r) < mpf("0.6") and (branch == 0 or z.imag >= 0):
        p = mpmath.sqrt(r)
        if branch == -1:
            p = -p
        return -1 + p - p ** 2 / 3 + mpf(11) / 72 * p ** 3
    if branch == 0 and abs(z) <= 3:
        return mpmath.log(1 + z)
    L1 = mpmath.log(z) + 2j * mp.pi * branch
    L2 = mpmath.log(L1)
    return L1 - L2 + L2 / L1


def _ramp(target: int) -> list[int]:
    # Halley triples the correct digits per step, so each level may be a
    # third of the next
    levels = [target]
    while levels[-1] > 3 * _SEED_DIGITS:
        levels.append(levels[-1] // 3 + 5)
    return levels[::-1]


def lambert_w(z, branch: int = 0, ctx: PrecisionContext = PrecisionContext(), max_steps: int = 60):
    """W_branch(z) for branch 0 or -1, accurate to ctx.digits.

    The iteration starts at a few dozen digits and the precision is then
    roughly tripled per Halley step, so a huge argument costs only a couple
    of full-precision exponentials.
    """
    if branch not in (0, -1):
        raise ValueError("only branches 0 and -1 are supported")
    with ctx.workdps():
        z = mpc(to_mp(z))
        if z == 0:
            if branch == 0:
                return mpc(0)
            raise DomainError("W_-1 is singular at 0")
        if z == -1 / mp.e:
            return mpc(-1)
    levels = _ramp(ctx.working + 5)
    with mp.workdps(levels[0]):
        w = _seed(+z, branch)
    trajectory = []
    for i, dps in enumerate(levels):
        first, last = i == 0, i == len(levels) - 1
        with mp.workdps(dps):
            w = +w
            tol = mpf(10) ** (-dps + 3)
            for _ in range(max_steps if first or last else 1):
                w_new, _h = _halley(w, z)
                trajectory.append(w_new)
                done = abs(w_new - w) <= tol * abs(w_new)
                w = w_new
                if done:
                    break
            else:
                if first or last:
                    raise ConvergenceError(
                        f"Lambert W did not converge for z={mpmath.nstr(z, 10)}",
                        estimate=w,
                        trajectory=trajectory[-5:],
                    )
    with ctx.workdps():
        return +w


def w_residual(w, z, ctx: PrecisionContext):
    """|W e^W - z| / |z|."""
    with ctx.workdps():
        z = to_mp(z)
        return abs(w * mpmath.exp(w) - z) / abs(z)


@dataclass(frozen=True)
class SaddlePoint:
    n_or_k: int
    epsilon: Fraction
    branch: str
    location: object
    residual: object

    def __post_init__(self):
        if self.branch not in BRANCHES:
            raise ValueError(f"branch must be one of {BRANCHES}")

    def conjugate(self) -> "SaddlePoint":
        other = "minus" if self.branch == "plus" else "plus"
        return replace(self, branch=other, location=mpmath.conj(self.location))


def _check_branch(branch):
    if branch not in BRANCHES:
        raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")


def _closed_location(k, epsilon, branch, ctx):
    _check_branch(branch)
    with ctx.workdps():
        a = mpf(2 * k + 3) / 2
        w = lambert_w(a / (2j * mp.pi), 0, ctx)
        s = a / (to_mp(epsilon) * w)
        return s if branch == "plus" else mpmath.conj(s)


def equation1_residual(s, k: int, epsilon, branch: str, ctx: PrecisionContext):
    """Relative residual of 3 + 2k + s eps (2 log(2 pi/(s eps)) +- i pi) = 0."""
    _check_branch(branch)
    with ctx.workdps():
        se = to_mp(s) * to_mp(as_fraction(epsilon))
        sign = 1 if branch == "plus" else -1
        r = 3 + 2 * k + se * (2 * mpmath.log(2 * mp.pi / se) + sign * 1j * mp.pi)
        return abs(r) / (3 + 2 * k)


def saddle_closed(k: int, epsilon, branch: str = "plus", ctx: PrecisionContext = PrecisionContext()) -> SaddlePoint:
    """Closed-form saddle; residual is |omega'| under the exact saddle equation."""
    if k < 0:
        raise ValueError("k must be >= 0")
    epsilon = as_fraction(epsilon)
    s = _closed_location(k, epsilon, branch, ctx)
    return SaddlePoint(k, epsilon, branch, s, abs(omega_d1(s, k, epsilon, ctx)))


def saddle_for_n(n: int, branch: str = "plus", ctx: PrecisionContext = PrecisionContext()) -> SaddlePoint:
    """s_n = (n + 3/2)/W0((n + 3/2)/(2 pi i)), i.e. the eps = 1 saddle.

    The residual is the one of the defining equation (relative), which is
    all that can be evaluated when n is astronomically large.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    s = _closed_location(n, Fraction(1), branch, ctx)
    return SaddlePoint(n, Fraction(1), branch, s, equation1_residual(s, n, 1, branch, ctx))


def _args(s, epsilon, ctx):
    s = to_mp(s)
    eps = to_mp(as_fraction(epsilon))
    return s, eps


def p_fun(s, k: int, epsilon, ctx: PrecisionContext):
    """psi(s) - psi(s+k+1) + (eps/2)(psi(s eps/2) + psi((1 - s eps)/2) - 2 log pi)."""
    with ctx.workdps():
        s, eps = _args(s, epsilon, ctx)
        return (
            digamma(s, ctx)
            - digamma(s + k + 1, ctx)
            + eps / 2 * (digamma(s * eps / 2, ctx) + digamma((1 - s * eps) / 2, ctx) - 2 * mpmath.log(mp.pi))
        )


def p1_fun(s, k: int, epsilon, ctx: PrecisionContext):
    """d p_k / ds."""
    with ctx.workdps():
        s, eps = _args(s, epsilon, ctx)
        return (
            trigamma(s, ctx)
            - trigamma(s + k + 1, ctx)
            + (eps / 2) ** 2 * (trigamma(s * eps / 2, ctx) - trigamma((1 - s * eps) / 2, ctx))
        )


def _zetas(s, eps, ctx):
    z = zeta_all(s * eps, ctx, 2)
    if z[0].value == 0:
        raise DomainError(f"zeta(eps s) vanishes at s = {s}")
    return [v.value for v in z]


def omega_d1(s, k: int, epsilon, ctx: PrecisionContext):
    """omega' = p_k + eps zeta'(eps s)/zeta(eps s)."""
    with ctx.workdps():
        s, eps = _args(s, epsilon, ctx)
        z0, z1, _ = _zetas(s, eps, ctx)
        return p_fun(s, k, epsilon, ctx) + eps * z1 / z0


def omega_d2(s, k: int, epsilon, ctx: PrecisionContext):
    """omega'' = p1_k + eps^2 (zeta''/zeta - (zeta'/zeta)^2)."""
    with ctx.workdps():
        s, eps = _args(s, epsilon, ctx)
        z0, z1, z2 = _zetas(s, eps, ctx)
        r = z1 / z0
        return p1_fun(s, k, epsilon, ctx) + eps ** 2 * (z2 / z0 - r * r)


def f_d1(s, k: int, epsilon, ctx: PrecisionContext):
    """f_k' = g_k (p_k zeta + eps zeta')."""
    from .norlund_rice import integrand_g

    with ctx.workdps():
        s, eps = _args(s, epsilon, ctx)
        z0, z1, _ = _zetas(s, eps, ctx)
        return integrand_g(s, k, epsilon, ctx) * (p_fun(s, k, epsilon, ctx) * z0 + eps * z1)


def f_d2(s, k: int, epsilon, ctx: PrecisionContext):
    """f_k'' = g_k (q zeta + q1 zeta' + eps^2 zeta''), q = p^2 + p1, q1 = 2 eps p."""
    from .norlund_rice import integrand_g

    with ctx.workdps():
        s, eps = _args(s, epsilon, ctx)
        z0, z1, z2 = _zetas(s, eps, ctx)
        p = p_fun(s, k, epsilon, ctx)
        q = p * p + p1_fun(s, k, epsilon, ctx)
        return integrand_g(s, k, epsilon, ctx) * (q * z0 + 2 * eps * p * z1 + eps ** 2 * z2)


def saddle_refine(start: SaddlePoint, ctx: PrecisionContext = PrecisionContext(), max_iter: int = 60) -> SaddlePoint:
    """Newton on omega'(s) = 0 with the full digamma and zeta terms."""
    k, eps = start.n_or_k, start.epsilon
    with ctx.workdps():
        s = to_mp(start.location)
        trajectory = [s]
        step_tol = mpf(10) ** (-ctx.working + 5)
        for _ in range(max_iter):
            d1 = omega_d1(s, k, eps, ctx)
            d2 = omega_d2(s, k, eps, ctx)
            step = d1 / d2
            s = s - step
            trajectory.append(s)
            if abs(step) <= step_tol * abs(s):
                break
            if abs(s - trajectory[0]) > abs(trajectory[0]):
                raise ConvergenceError("saddle refinement diverged", estimate=s, trajectory=trajectory)
        else:
            raise ConvergenceError("saddle refinement did not converge", estimate=s, trajectory=trajectory)
        residual = abs(omega_d1(s, k, eps, ctx))
        if residual > mpf(10) ** (-(ctx.digits // 2)):
            raise ConvergenceError(f"residual {mpmath.nstr(residual, 5)} too large", estimate=s, trajectory=trajectory)
        return SaddlePoint(k, eps, start.branch, s, residual)


def displacement(k: int, epsilon, ctx: PrecisionContext = PrecisionContext()):
    """|refined - closed| / |closed| for the plus saddle."""
    start = saddle_closed(k, epsilon, "plus", ctx)
    end = saddle_refine(start, ctx)
    with ctx.workdps():
        return abs(end.location - start.location) / abs(start.location)
