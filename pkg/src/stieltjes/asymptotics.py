"""Saddle-point asymptotics for a_k(eps) and gamma_n, and the sign predictor.

With s_n = (n + 3/2)/W0((n + 3/2)/(2 pi i)) and c = log(2 pi i):

    gamma_n ~ sqrt(2/pi) n! Re[Gamma(s_n) e^(-c s_n) / (s_n^n sqrt(n + s_n + 3/2))]

Everything is evaluated as the exponential of a complex logarithm, so n! and
Gamma(s_n) never overflow and the value keeps a full-range exponent.  For the
sign at astronomically large n only the imaginary part of the phase

    phi_n = ln(8 pi)/2 - n + (n+1/2) ln n + (s_n-n-1/2) ln s_n - ln(n+s_n)/2 - (c+1) s_n

matters, reduced modulo 2 pi.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpc, mpf

from .mp_core import (
    DomainError,
    PrecisionContext,
    as_fraction,
    log_gamma,
    to_mp,
)
from .norlund_rice import integrand_f
from .saddle import SaddlePoint, omega_d2, saddle_closed, saddle_for_n, saddle_refine

SIGN_FLOOR = 20
K_MIN = 10

# the conjugate saddle contributes the complex conjugate, so one branch and Re suffice
CONVENTIONS = {
    "full": "sqrt(2/pi)*Re(plus-branch term)",
    "refined": "2*Re(plus-branch term)",
}


@dataclass(frozen=True)
class NSpec:
    """An exact positive integer, remembering a 10^m origin when there is one."""

    value: int
    exponent: int | None = None

    @property
    def text(self) -> str:
        return f"10^{self.exponent}" if self.exponent is not None else str(self.value)

    def decimal_digits(self) -> int:
        if self.exponent is not None:
            return self.exponent + 1
        return len(str(self.value))


_POW = re.compile(r"^\s*10\s*\^\s*(\d+)\s*$")
_SCI = re.compile(r"^\s*(\d+)[eE]\+?(\d+)\s*$")
_INT = re.compile(r"^\s*\+?(\d+)\s*$")


def parse_n_spec(text: str) -> NSpec:
    """Parse "123", "1e10", "5E3" or "10^M" exactly."""
    text = str(text)
    m = _POW.match(text)
    if m:
        e = int(m.group(1))
        return NSpec(10 ** e, e)
    m = _SCI.match(text)
    if m:
        mant, e = int(m.group(1)), int(m.group(2))
        return NSpec(mant * 10 ** e, e if mant == 1 else None)
    m = _INT.match(text)
    if m:
        return NSpec(int(m.group(1)))
    raise ValueError(f"cannot parse n from {text!r}; use an integer, 1eM or 10^M")


@dataclass(frozen=True)
class AsymptoticEstimate:
    n: int
    value: object
    variant: str
    saddle: SaddlePoint

    @property
    def sign(self) -> int:
        return 1 if self.value > 0 else -1 if self.value < 0 else 0

    @property
    def log10_abs(self):
        return mpmath.log10(abs(self.value))


@dataclass(frozen=True)
class PhaseResult:
    n_description: str
    phase: object
    sign: int
    im_mod_2pi_digits: int
    distance_to_zero: object = None

    @property
    def certified(self) -> bool:
        if self.im_mod_2pi_digits < 5:
            return False
        return self.distance_to_zero > mpf(10) ** (-self.im_mod_2pi_digits)

    def as_dict(self) -> dict:
        with mp.workdps(max(20, self.im_mod_2pi_digits)):
            theta = mpmath.nstr(self.phase.imag % (2 * mp.pi), min(self.im_mod_2pi_digits, 30))
        return {
            "n": self.n_description,
            "sign": self.sign,
            "certified": self.certified,
            "im_phase_mod_2pi": theta,
            "im_mod_2pi_digits": self.im_mod_2pi_digits,
            "re_phase": mpmath.nstr(self.phase.real, 15),
        }


def _c():
    return mpmath.log(2j * mp.pi)


def _extra_digits(n: int) -> int:
    # the imaginary part of the log-term grows like n log n
    return len(str(n)) + 10


def a_k_asymptotic(k: int, epsilon, ctx: PrecisionContext = PrecisionContext(), saddle: str = "closed"):
    """-Re[(k!/(pi i)) sqrt(2 pi/(-omega'')) f_k(s_k)].

    ``saddle`` picks the expansion point: "closed" is the Lambert-W
    location, "refined" the exact root of omega' found by Newton.
    """
    if k < K_MIN:
        raise ValueError(f"k must be >= {K_MIN} for the asymptotic formula")
    if saddle not in ("closed", "refined"):
        raise ValueError("saddle must be 'closed' or 'refined'")
    epsilon = as_fraction(epsilon)
    sp = saddle_closed(k, epsilon, "plus", ctx)
    if saddle == "refined":
        sp = saddle_refine(sp, ctx)
    with ctx.workdps():
        s = sp.location
        d2 = omega_d2(s, k, epsilon, ctx)
        root = mpmath.sqrt(2 * mp.pi / (-d2))
        f = integrand_f(s, k, epsilon, ctx)
        return -(math.factorial(k) / (1j * mp.pi) * root * f).real


def _log_full(n, s, ctx):
    return (
        log_gamma(n + 1, ctx)
        + log_gamma(s, ctx)
        - _c() * s
        - n * mpmath.log(s)
        - mpmath.log(n + s + mpf(3) / 2) / 2
    )


def _log_refined(n, s, ctx):
    return (
        log_gamma(n + 1, ctx)
        + (s - n - mpf(3) / 2) * mpmath.log(s)
        + mpmath.log(s + mpf(1) / 12)
        - (_c() + 1) * s
        - mpmath.log(n + s + mpf(3) / 2) / 2
    )


def _estimate(n: int, ctx: PrecisionContext, variant: str) -> AsymptoticEstimate:
    if n < 1:
        raise ValueError("n must be >= 1")
    wide = ctx.with_guard(ctx.guard + _extra_digits(n))
    sp = saddle_for_n(n, "plus", wide)
    with wide.workdps():
        s = sp.location
        if variant == "full":
            value = mpmath.sqrt(2 / mp.pi) * mpmath.exp(_log_full(n, s, wide)).real
        else:
            value = 2 * mpmath.exp(_log_refined(n, s, wide)).real
    with ctx.workdps():
        return AsymptoticEstimate(n, +value, variant, sp)


def gamma_asymptotic(n: int, ctx: PrecisionContext = PrecisionContext()) -> AsymptoticEstimate:
    return _estimate(n, ctx, "full")


def gamma_asymptotic_refined(n: int, ctx: PrecisionContext = PrecisionContext()) -> AsymptoticEstimate:
    """Same saddle, Gamma(s_n) replaced by the two-term Stirling formula."""
    return _estimate(n, ctx, "refined")


def phase_value(n: NSpec, ctx: PrecisionContext):
    """phi_n at ctx precision, with ln n taken as m ln 10 when n = 10^m."""
    sp = saddle_for_n(n.value, "plus", ctx)
    with ctx.workdps():
        s = sp.location
        N = mpf(n.value)
        ln_n = n.exponent * mpmath.ln10 if n.exponent is not None else mpmath.log(N)
        return (
            mpmath.log(8 * mp.pi) / 2
            - N
            + (N + mpf(1) / 2) * ln_n
            + (s - N - mpf(1) / 2) * mpmath.log(s)
            - mpmath.log(N + s) / 2
            - (_c() + 1) * s
        )


def phase_precision(n: NSpec, ctx: PrecisionContext) -> PrecisionContext:
    """Working precision m + 40 for n ~ 10^m, never below ctx."""
    need = n.decimal_digits() + 40
    return ctx.with_guard(max(ctx.guard, need - ctx.digits))


def phase(n, ctx: PrecisionContext = PrecisionContext()) -> PhaseResult:
    """Phase, sign of cos(Im phi_n), and how many digits of Im phi_n mod 2 pi are stable."""
    if not isinstance(n, NSpec):
        n = NSpec(int(n))
    if n.value < 1:
        raise ValueError("n must be >= 1")
    lo = phase_precision(n, ctx)
    hi = lo.with_guard(lo.guard + 20)
    p_lo = phase_value(n, lo)
    p_hi = phase_value(n, hi)
    with hi.workdps():
        two_pi = 2 * mp.pi
        t_lo = p_lo.imag % two_pi
        t_hi = p_hi.imag % two_pi
        diff = abs(t_lo - t_hi)
        diff = min(diff, two_pi - diff)
        digits = 10 ** 6 if diff == 0 else max(0, int(-mpmath.log10(diff)))
        digits = min(digits, hi.working - n.decimal_digits())
        half_pi = mp.pi / 2
        dist = min(abs(t_hi - half_pi), abs(t_hi - 3 * half_pi))
        sign = 1 if mpmath.cos(t_hi) > 0 else -1
        ph = mpc(p_hi.real, t_hi)
    with mp.workdps(max(ctx.working, 30)):
        return PhaseResult(n.text, +ph, sign, digits, +dist)


def sign_gamma(n_spec, ctx: PrecisionContext = PrecisionContext()) -> PhaseResult:
    """Sign of gamma_n from the phase formula; n_spec as accepted by parse_n_spec."""
    n = n_spec if isinstance(n_spec, NSpec) else parse_n_spec(str(n_spec))
    if n.value < SIGN_FLOOR:
        raise ValueError(f"n must be >= {SIGN_FLOOR}; use the exact computation below that")
    return phase(n, ctx)
