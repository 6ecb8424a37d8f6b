"""Working precision and the special functions shared by every other module.

All arithmetic runs on mpmath's ``mpf``/``mpc``.  A :class:`PrecisionContext`
says how many decimal digits the caller wants certified and how many guard
digits to carry; library functions switch mpmath to ``ctx.working`` digits for
the duration of a call and restore the caller's setting afterwards.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Union

import mpmath
from mpmath import mp, mpc, mpf

BigReal = mpf
BigComplex = mpc
Number = Union[int, float, Fraction, str, mpf, mpc, complex]

DEFAULT_MAX_DIGITS = 20000


class NumericalError(ArithmeticError):
    """Base class for every error raised by this package."""


class DomainError(NumericalError, ValueError):
    pass


class PoleError(DomainError):
    """Raised at (or too close to) a pole; ``pole`` carries the offending point."""

    def __init__(self, pole, message: str | None = None):
        self.pole = pole
        super().__init__(message or f"pole at {pole}")


class ConvergenceError(NumericalError):
    """An iteration or quadrature failed to reach its tolerance."""

    def __init__(self, message: str, estimate=None, bound=None, trajectory=None):
        super().__init__(message)
        self.estimate = estimate
        self.bound = bound
        self.trajectory = trajectory


class ConsistencyError(NumericalError):
    """Two routes to the same quantity disagree."""


def max_digits() -> int:
    """Precision ceiling for automatic escalation (env ``STIELTJES_MAX_DIGITS``)."""
    raw = os.environ.get("STIELTJES_MAX_DIGITS")
    return int(raw) if raw else DEFAULT_MAX_DIGITS


@dataclass(frozen=True)
class PrecisionContext:
    """Requested decimal digits plus guard digits carried internally."""

    digits: int = 30
    guard: int = 10

    def __post_init__(self):
        if self.digits < 20:
            raise ValueError(f"digits must be >= 20, got {self.digits}")
        if self.guard < 0:
            raise ValueError(f"guard must be >= 0, got {self.guard}")

    @property
    def working(self) -> int:
        return self.digits + self.guard

    @property
    def eps(self) -> mpf:
        with mp.workdps(self.working):
            return mpf(10) ** (-self.digits)

    def workdps(self):
        return mp.workdps(self.working)

    def with_guard(self, guard: int) -> "PrecisionContext":
        return replace(self, guard=guard)

    def escalated(self) -> "PrecisionContext":
        """Double the working precision by growing the guard."""
        return replace(self, guard=self.guard + self.working)


def to_mp(x: Number):
    """Convert to an mpmath number at the current precision.

    Fractions are divided out in mpmath so that e.g. 1/3 is correct to full
    working precision rather than to double precision.
    """
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    if isinstance(x, (mpf, mpc)):
        return +x
    if isinstance(x, complex):
        return mpc(x)
    return mpmath.mpmathify(x)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def is_real(z) -> bool:
    return not isinstance(z, mpc) or z.imag == 0


def nonpositive_integer(z, tol=None):
    """Return the integer m <= 0 that z sits on (within tol), else None."""
    re = z.real if isinstance(z, mpc) else z
    im = z.imag if isinstance(z, mpc) else 0
    m = int(mpmath.nint(re))
    if m > 0:
        return None
    d = abs(mpc(re - m, im))
    if (tol is None and d == 0) or (tol is not None and d < tol):
        return m
    return None


def agreement_digits(a, b) -> int:
    """Number of leading decimal digits on which a and b agree."""
    scale = max(abs(a), abs(b))
    diff = abs(a - b)
    if diff == 0:
        return 10 ** 9
    if scale == 0:
        return 0
    return max(0, int(mpmath.floor(-mpmath.log10(diff / scale))))


def certified(fn: Callable, ctx: PrecisionContext, *args, ceiling: int | None = None):
    """Evaluate ``fn(*args, ctx)`` and confirm it with 10 more guard digits.

    Escalates (doubling the working precision) until ``ctx.digits`` digits
    agree or the ceiling is reached.  Returns ``(value, digits_agreeing)``.
    """
    ceiling = ceiling or max_digits()
    cur = ctx
    while True:
        lo = fn(*args, cur)
        hi = fn(*args, cur.with_guard(cur.guard + 10))
        with mp.workdps(cur.working + 10):
            good = agreement_digits(lo, hi)
        if good >= ctx.digits or cur.working * 2 > ceiling:
            return hi, good
        cur = cur.escalated()


def complex_log(z, ctx: PrecisionContext):
    """Principal logarithm, Im in (-pi, pi]."""
    with ctx.workdps():
        z = to_mp(z)
        if z == 0:
            raise DomainError("log(0) is undefined")
        return mpmath.log(mpc(z))


def _check_pole(z, name):
    m = nonpositive_integer(z)
    if m is not None:
        raise PoleError(m, f"{name} has a pole at {m}")


def gamma(z, ctx: PrecisionContext):
    with ctx.workdps():
        z = to_mp(z)
        _check_pole(z, "gamma")
        return mpmath.gamma(z)


def log_gamma(z, ctx: PrecisionContext):
    """log Gamma continued analytically off the real axis (mpmath convention)."""
    with ctx.workdps():
        z = to_mp(z)
        _check_pole(z, "loggamma")
        return mpmath.loggamma(z)


def rgamma(z, ctx: PrecisionContext):
    """1/Gamma(z); entire, so no pole check."""
    with ctx.workdps():
        return mpmath.rgamma(to_mp(z))


def digamma(z, ctx: PrecisionContext):
    with ctx.workdps():
        z = to_mp(z)
        _check_pole(z, "digamma")
        return mpmath.digamma(z)


def trigamma(z, ctx: PrecisionContext):
    with ctx.workdps():
        z = to_mp(z)
        _check_pole(z, "trigamma")
        return mpmath.psi(1, z)
