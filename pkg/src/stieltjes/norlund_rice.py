"""Contour-integral representations of a_k(eps), used as independent checks.

Three routes to the same number:

* a rectangle around the poles 0..k of phi(1 + s eps) / prod_{i<=k} (s - i);
* the vertical line Re s = c > 0 after the functional equation and s -> -s,
  with integrand f_k(s) = g_k(s) zeta(s eps);
* the same line at Re s = -1/2 plus gamma + H_k/eps, which differs from the
  previous one by exactly the residue of f_k at s = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpc, mpf

from .finite_diff import a_coefficients, harmonic
from .mp_core import (
    ConsistencyError,
    ConvergenceError,
    DomainError,
    PrecisionContext,
    as_fraction,
    gamma,
    nonpositive_integer,
    rgamma,
    to_mp,
)
from .quadrature import integrate, integrate_path
from .zeta import phi, zeta

POLE_DISTANCE = mpf("1e-8")


@dataclass(frozen=True)
class ContourSpec:
    kind: str = "rectangle"
    delta: Fraction = Fraction(1, 2)
    line_abscissa: Fraction = Fraction(1, 2)
    truncation_height: object = None  # None: chosen from the decay of the integrand

    def __post_init__(self):
        if self.kind not in ("rectangle", "vertical_line"):
            raise ValueError(f"unknown contour kind {self.kind!r}")
        if self.kind == "rectangle" and not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1) so only the poles 0..k are enclosed")


@dataclass(frozen=True)
class IntegrandSample:
    s: object
    value: object
    k: int
    epsilon: Fraction


def _check_poles(s, epsilon):
    m = nonpositive_integer(s, POLE_DISTANCE)
    if m is not None:
        raise DomainError(f"s = {s} is within {POLE_DISTANCE} of the pole of Gamma(s) at {m}")
    m = nonpositive_integer(s * epsilon / 2, POLE_DISTANCE * epsilon / 2)
    if m is not None:
        raise DomainError(f"s = {s} is at a pole of Gamma(s eps/2), s = {2 * m / epsilon}")


def pochhammer_ratio(s, k):
    """Gamma(s)/Gamma(s+k+1) = 1/(s (s+1) ... (s+k))."""
    p = s
    for i in range(1, k + 1):
        p *= s + i
    return 1 / p


def integrand_g(s, k: int, epsilon, ctx: PrecisionContext):
    """pi^(1/2 - s eps) Gamma(s eps/2)/Gamma((1 - s eps)/2) * Gamma(s)/Gamma(s+k+1)."""
    epsilon = as_fraction(epsilon)
    with ctx.workdps():
        s = to_mp(s)
        eps = to_mp(epsilon)
        _check_poles(s, eps)
        se = s * eps
        return (
            mpmath.power(mp.pi, mpf(1) / 2 - se)
            * gamma(se / 2, ctx)
            * rgamma((1 - se) / 2, ctx)
            * pochhammer_ratio(s, k)
        )


def integrand_f(s, k: int, epsilon, ctx: PrecisionContext):
    """f_k(s) = g_k(s) zeta(s eps)."""
    with ctx.workdps():
        s = to_mp(s)
        return integrand_g(s, k, epsilon, ctx) * zeta(s * to_mp(as_fraction(epsilon)), ctx)


def sample(s, k, epsilon, ctx) -> IntegrandSample:
    return IntegrandSample(s, integrand_f(s, k, epsilon, ctx), k, as_fraction(epsilon))


def rect_integrand(s, k: int, epsilon, ctx: PrecisionContext):
    """phi(1 + s eps) / prod_{i=0..k} (s - i)."""
    with ctx.workdps():
        s = to_mp(s)
        p = mpf(1)
        for i in range(k + 1):
            p *= s - i
        return phi(1 + s * to_mp(as_fraction(epsilon)), ctx) / p


def rect_contour_integral(k: int, epsilon, spec: ContourSpec = ContourSpec(), ctx: PrecisionContext = PrecisionContext()):
    """(-1)^k k!/(2 pi i) times the integral around the rectangle enclosing 0..k.

    The four sides run counter-clockwise from -delta + i delta.
    """
    if spec.kind != "rectangle":
        raise ValueError("rect_contour_integral needs a rectangle contour")
    epsilon = as_fraction(epsilon)
    inner = ctx.with_guard(ctx.guard + 10)
    with inner.workdps():
        d = to_mp(spec.delta)
        corners = [mpc(-d, d), mpc(-d, -d), mpc(k + d, -d), mpc(k + d, d), mpc(-d, d)]
        # integrand scale ~ 1/k! on the contour; the tolerance is relative to that
        tol = mpf(10) ** (-ctx.working) / math.factorial(k)
        total, _ = integrate_path(lambda s: rect_integrand(s, k, epsilon, inner), corners, tol)
        return (-1) ** k * math.factorial(k) * total / (2j * mp.pi)


@dataclass(frozen=True)
class Residue:
    k: int
    epsilon: Fraction
    closed_form: object
    numeric: object


def residue_at_zero(k: int, epsilon, ctx: PrecisionContext = PrecisionContext(), radius=Fraction(1, 2)) -> Residue:
    """Residue of f_k at s = 0: closed form (gamma eps + H_k)/(eps k!) and a circle rule.

    The trapezoidal rule on |s| = r converges like (r/R)^points with R = 1 the
    distance to the next pole, so the point count follows from the precision.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    epsilon = as_fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    with ctx.workdps():
        eps = to_mp(epsilon)
        H = harmonic(k)
        closed = (mp.euler * eps + mpf(H.numerator) / H.denominator) / (eps * math.factorial(k))
        r = to_mp(as_fraction(radius))
        points = int((ctx.working + 10) * math.log2(10) / math.log2(1 / float(r))) + 16
        acc = mpc(0)
        for j in range(points):
            w = r * mpmath.expjpi(mpf(2 * j) / points)
            acc += integrand_f(w, k, epsilon, ctx) * w
        numeric = acc / points
        if abs(numeric.imag) < mpf(10) ** (-ctx.digits) * max(1, abs(closed)):
            numeric = numeric.real
        if abs(numeric - closed) > mpf(10) ** (-ctx.digits) * max(1, abs(closed)):
            raise ConsistencyError(f"residue mismatch at k={k}: {closed} vs {numeric}")
        return Residue(k, epsilon, closed, numeric)


@dataclass(frozen=True)
class LineIntegral:
    k: int
    epsilon: Fraction
    abscissa: Fraction
    value: object
    tail_bound: object
    quadrature_error: object
    truncation_height: object


def _tail_estimate(f, c, T, k):
    """Bound on int_T^inf |f(c+it)| dt from the observed power-law decay.

    |f_k(c+it)| ~ C t^-p with p close to k+1; the exponent is read off two
    heights and the envelope taken as the larger sample times a factor 4
    to absorb the oscillation of zeta.
    """
    a, b = abs(f(mpc(c, T))), abs(f(mpc(c, 4 * T)))
    if b == 0:
        return mpf(0)
    p = mpmath.log(a / b) / mpmath.log(4)
    if p <= 1.05:
        return mpmath.inf
    env = 4 * max(a, b * 4 ** p)
    return env * T / (p - 1)


def vertical_line_integral(k: int, epsilon, spec: ContourSpec, ctx: PrecisionContext = PrecisionContext(), tol=None) -> LineIntegral:
    """k!/(2 pi) * integral of f_k(c + it) over t, truncated at |t| = T.

    For c > 0 this is a_k(eps).  For -1 < c < 0 the line has crossed the
    double pole at 0 and the result falls short of a_k by gamma + H_k/eps.
    f_k(conj s) = conj f_k(s), so the full line equals 2 Re of the upper half.
    T is doubled until the estimated tail (the integrand decays like a power
    of t) is below tol; a user-fixed T whose tail is too large is an error.
    """
    if spec.kind != "vertical_line":
        raise ValueError("vertical_line_integral needs a vertical_line contour")
    epsilon = as_fraction(epsilon)
    with ctx.workdps():
        a = as_fraction(spec.line_abscissa)
        if not (a > 0 or -1 < a < 0) or a * epsilon == 1:
            raise DomainError(f"abscissa {a} must be > 0 (and != 1/eps) or in (-1, 0)")
        c = to_mp(a)
        scale = mpf(math.factorial(k)) / mp.pi
        tol = mpf(10) ** (-ctx.digits) if tol is None else to_mp(tol)
        f = lambda s: integrand_f(s, k, epsilon, ctx)
        if spec.truncation_height is None:
            T = mpf(32)
            while scale * _tail_estimate(f, c, T, k) > tol / 2:
                T *= 2
                if T > 2 ** 24:
                    raise ConvergenceError("no truncation height reaches the tolerance", bound=scale * _tail_estimate(f, c, T, k))
        else:
            T = to_mp(spec.truncation_height)
        tail = scale * _tail_estimate(f, c, T, k)
        if tail > tol:
            raise ConvergenceError(
                f"tail bound {mpmath.nstr(tail, 5)} exceeds tolerance; use a larger truncation_height",
                bound=tail,
            )
        # geometric panels: the integrand varies on the scale of |s|
        cuts = [mpf(0), mpf(1)]
        while cuts[-1] < T:
            cuts.append(min(T, 2 * cuts[-1]))
        total = mpc(0)
        qerr = mpf(0)
        panel_tol = tol / (4 * scale * len(cuts))
        for lo, hi in zip(cuts, cuts[1:]):
            v, e = integrate(lambda t: f(mpc(c, t)), lo, hi, panel_tol)
            total += v
            qerr += e
        value = scale * total.real
        return LineIntegral(k, epsilon, as_fraction(spec.line_abscissa), value, tail, scale * qerr, T)


def verification_report(
    k: int,
    epsilon,
    kind: str = "rectangle",
    ctx: PrecisionContext = PrecisionContext(),
    abscissa=Fraction(1, 2),
    line_rel_tol=mpf("1e-12"),
) -> dict:
    """Compare a contour route with the alternating sum; JSON-ready dict.

    The vertical line converges only like a power of the truncation height,
    so it is checked to ``line_rel_tol`` (relative) instead of ctx.digits.
    For the rectangle, ``tail_bound`` reports the spurious imaginary part.
    """
    epsilon = as_fraction(epsilon)
    guard = ctx.guard + math.ceil(k * math.log10(2 / float(epsilon))) + 10
    wide = ctx.with_guard(guard)
    table = a_coefficients(epsilon, k, wide)
    with wide.workdps():
        sum_value = table.values[k]
        tail = mpf(0)
        if kind == "rectangle":
            integral = rect_contour_integral(k, epsilon, ContourSpec("rectangle"), wide)
            if abs(integral.imag) > 0:
                tail = abs(integral.imag)
            integral = integral.real
        elif kind == "vertical_line":
            res = vertical_line_integral(
                k, epsilon, ContourSpec("vertical_line", line_abscissa=as_fraction(abscissa)), wide,
                tol=abs(sum_value) * to_mp(line_rel_tol),
            )
            integral = res.value
            if abscissa < 0:
                H = harmonic(k)
                integral += mp.euler + mpf(H.numerator) / H.denominator / to_mp(epsilon)
            tail = res.tail_bound
        else:
            raise ValueError(f"unknown kind {kind!r}")
        abs_err = abs(integral - sum_value)
        rel_err = abs_err / abs(sum_value)
        fmt = lambda x: mpmath.nstr(x, ctx.digits, strip_zeros=False)
        return {
            "k": k,
            "epsilon": str(epsilon),
            "kind": kind,
            "sum_value": fmt(sum_value),
            "integral_value": fmt(integral),
            "abs_error": mpmath.nstr(abs_err, 5),
            "rel_error": mpmath.nstr(rel_err, 5),
            "tail_bound": mpmath.nstr(tail, 5),
        }
