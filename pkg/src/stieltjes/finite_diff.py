"""Stieltjes constants from finite differences of the regularized zeta.

The coefficients

    a_k(eps) = sum_{j=0..k} (-1)^j C(k, j) phi(1 + j eps)

are Newton-series coefficients of phi along the grid 1, 1+eps, 1+2eps, ...
Expanding the falling factorials with Stirling numbers of the first kind gives

    gamma_n = (-1)^n n!/eps^n sum_{k>=n} (-1)^k a_k S(k, n) / k!

The alternating sums cancel about k*log10(2) digits and the eps^-n prefactor
amplifies absolute error, so every gamma_n is computed at two precisions and
only the agreeing digits are reported as certified.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import mpmath
from mpmath import mp, mpf

from .mp_core import PrecisionContext, agreement_digits, as_fraction, max_digits, to_mp
from .zeta import _bernoulli_tail, _head, choose_cutoff

log = logging.getLogger(__name__)

DEFAULT_EPSILON = Fraction(1, 32)
GRID_FORMAT = "stieltjes-phi-grid v1"


def harmonic(k: int) -> Fraction:
    if k < 0:
        raise ValueError("k must be >= 0")
    return sum((Fraction(1, i) for i in range(1, k + 1)), Fraction(0))


@dataclass(frozen=True)
class Stirling1Matrix:
    """Signed Stirling numbers of the first kind, rows[k][n] = S(k, n)."""

    rows: tuple[tuple[int, ...], ...]

    @property
    def k_max(self) -> int:
        return len(self.rows) - 1

    def __call__(self, k: int, n: int) -> int:
        if n < 0 or n > k:
            return 0
        return self.rows[k][n]


@lru_cache(maxsize=8)
def stirling1(k_max: int) -> Stirling1Matrix:
    """Exact triangle via S(k+1, n) = S(k, n-1) - k S(k, n)."""
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    rows = [(1,)]
    for k in range(k_max):
        prev = rows[-1]
        row = [0] * (k + 2)
        for n in range(1, k + 2):
            row[n] = (prev[n - 1] if n - 1 <= k else 0) - k * (prev[n] if n <= k else 0)
        rows.append(tuple(row))
    return Stirling1Matrix(tuple(rows))


def stirling_band(lo: int, k_max: int):
    """Yield (k, base, row) with row[i] = S(k, base + i) for k = 0..k_max.

    Only columns that can still feed some S(k', n) with n >= lo and
    k' <= k_max are kept, so memory is one band of width k_max - lo.
    """
    width = max(k_max - lo, 0)
    row, base = [1], 0
    yield 0, base, row
    for k in range(k_max):
        new_base = max(0, k + 1 - width)
        new = []
        for n in range(new_base, k + 2):
            left = row[n - 1 - base] if base <= n - 1 <= k else 0
            here = row[n - base] if base <= n <= k else 0
            new.append(left - k * here)
        row, base = new, new_base
        yield k + 1, base, row


def default_k_max(n: int) -> int:
    return max(4 * n, n + 80)


def amplification_many(ns, k_max: int) -> dict:
    """log10 of max_k n! |S(k, n)| 2^k / k! for each n: the worst rounding-error gain of the sum."""
    ns = sorted(set(ns))
    best = {n: 0.0 for n in ns}
    for k, base, row in stirling_band(ns[0], k_max):
        lk = k * math.log(2) - math.lgamma(k + 1)
        for n in ns:
            if n > k:
                break
            s = row[n - base]
            if s:
                v = (math.log(abs(s)) + lk + math.lgamma(n + 1)) / math.log(10)
                best[n] = max(best[n], v)
    return best


def amplification_digits(n: int, k_max: int) -> float:
    return amplification_many([n], k_max)[n]


def working_digits(digits: int, k_max: int, ns, epsilon: Fraction) -> int:
    """Precision needed to survive the binomial cancellation and the eps^-n factor."""
    if isinstance(ns, int):
        ns = [ns]
    amp = amplification_many(ns, k_max)
    worst = max(amp[n] + n * math.log10(1 / epsilon) for n in amp)
    return digits + math.ceil(worst) + 30


def phi_grid(epsilon, k_max: int, ctx: PrecisionContext) -> list:
    """phi(1 + j*eps) for j = 0..k_max, all from one Euler-Maclaurin cutoff.

    n^-(1+j eps) is advanced by repeated multiplication with n^-eps, so the
    power sums cost one multiplication per term instead of an exponential.
    """
    epsilon = as_fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    dps = ctx.working + 5  # the power recurrence loses ~log10(k_max) digits
    with mp.workdps(dps):
        eps = to_mp(epsilon)
        s_max = 1 + k_max * eps
        N = choose_cutoff(s_max, dps)
        tol = mpf(10) ** (-dps - 3)
        while True:
            L = mpmath.log(N)
            tails = []
            for j in range(1, k_max + 1):
                t = _bernoulli_tail(1 + j * eps, N, L, 0, tol)
                if t is None:
                    break
                tails.append(t[0][0])
            if len(tails) == k_max:
                break
            N *= 2
        logs = [mpmath.log(n) for n in range(2, N)]
        ratio = [mpmath.exp(-eps * ln) for ln in logs]
        powers = [mpf(1) / n for n in range(2, N)]
        out = [+mp.euler]
        for j in range(1, k_max + 1):
            powers = [p * r for p, r in zip(powers, ratio)]
            s = 1 + j * eps
            head = _head(s, N, L, 0, True)[0]
            out.append(1 + mpmath.fsum(powers) + head + tails[j - 1])
    with ctx.workdps():
        return [+v for v in out]


def write_phi_grid(path, epsilon, values: Sequence, digits: int) -> None:
    """Decimal-text cache: a header line, then ``s<TAB>phi(s)<TAB>digits`` per record."""
    epsilon = as_fraction(epsilon)
    lines = [f"# {GRID_FORMAT}", f"# epsilon={epsilon} digits={digits} count={len(values)}"]
    for j, v in enumerate(values):
        lines.append(f"{1 + j * epsilon}\t{mpmath.nstr(v, digits, strip_zeros=False)}\t{digits}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_phi_grid(path) -> tuple[Fraction, list, int]:
    text = Path(path).read_text().splitlines()
    if not text or text[0] != f"# {GRID_FORMAT}":
        raise ValueError(f"{path}: not a phi grid file")
    meta = dict(item.split("=") for item in text[1][2:].split())
    epsilon = Fraction(meta["epsilon"])
    digits = int(meta["digits"])
    values = []
    with mp.workdps(digits + 5):
        for j, line in enumerate(text[2:]):
            s, v, _ = line.split("\t")
            if Fraction(s) != 1 + j * epsilon:
                raise ValueError(f"{path}: record {j} is at s={s}, expected {1 + j * epsilon}")
            values.append(mpf(v))
    return epsilon, values, digits


@dataclass(frozen=True)
class AkTable:
    epsilon: Fraction
    k_max: int
    values: tuple
    digits_certified: int
    certified: bool = True


def _differences(grid: Sequence) -> list:
    """a_k = (-1)^k Delta^k phi(1), by repeated differencing of the grid."""
    row = list(grid)
    out = [row[0]]
    sign = 1
    while len(row) > 1:
        row = [b - a for a, b in zip(row, row[1:])]
        sign = -sign
        out.append(sign * row[0])
    return out


def a_coefficients(epsilon, k_max: int, ctx: PrecisionContext, grid: Sequence | None = None) -> AkTable:
    """a_0..a_k_max at the context's working precision.

    ``digits_certified`` counts absolute decimal digits: the differences can
    amplify rounding error by up to 2^k.  Below ``ctx.digits`` the table is
    flagged uncertified rather than silently returned as if exact.
    """
    epsilon = as_fraction(epsilon)
    if grid is None:
        grid = phi_grid(epsilon, k_max, ctx)
    elif len(grid) < k_max + 1:
        raise ValueError("grid is shorter than k_max + 1")
    with ctx.workdps():
        values = _differences(grid[: k_max + 1])
    digits = int(ctx.working - k_max * math.log10(2)) - 1
    return AkTable(epsilon, k_max, tuple(values), digits, digits >= ctx.digits)


@dataclass(frozen=True)
class StieltjesResult:
    n: int
    value: object
    epsilon: Fraction
    k_truncation: int
    digits_certified: int
    requested_digits: int = 0
    tail_digits: int = 0
    working_digits: int = 0
    note: str = ""

    @property
    def certified(self) -> bool:
        return self.digits_certified >= self.requested_digits

    def decimal(self, digits: int | None = None) -> str:
        d = max(1, min(digits or self.digits_certified, self.digits_certified))
        return mpmath.nstr(self.value, d, strip_zeros=False, min_fixed=-5, max_fixed=5)


def _gamma_values(ns, epsilon, k_max, dps, grid=None):
    """gamma_n for each n at `dps` digits; also the tail size of the sum."""
    ctx = PrecisionContext(max(20, dps - 10), 10)
    if grid is None:
        grid = phi_grid(epsilon, k_max, ctx)
    ns = sorted(set(ns))
    nfact = {n: math.factorial(n) for n in ns}
    terms = {n: [] for n in ns}
    out = {}
    with mp.workdps(dps):
        a = _differences(grid[: k_max + 1])
        eps_n = to_mp(epsilon)
        kfact = 1
        for k, base, row in stirling_band(ns[0], k_max):
            if k:
                kfact *= k
            if k < ns[0]:
                continue
            ak = a[k] if k % 2 == 0 else -a[k]
            for n in ns:
                if n > k:
                    break
                terms[n].append(ak * (mpf(nfact[n] * row[n - base]) / kfact))
        for n in ns:
            terms_n = terms[n]
            total = mpmath.fsum(terms_n)
            value = total / eps_n ** n
            if n % 2:
                value = -value
            tail = max((abs(t) for t in terms_n[-5:]), default=mpf(0))
            out[n] = (value, tail / abs(total) if total else mpf(1))
    return out


def gamma_exact_many(
    ns: Iterable[int],
    epsilon=DEFAULT_EPSILON,
    k_max: int | None = None,
    ctx: PrecisionContext = PrecisionContext(),
    grid_cache=None,
) -> list[StieltjesResult]:
    """gamma_n for every n in `ns` from one shared phi grid.

    Each value is computed at the policy precision P and again at P + 20; the
    digits on which the two agree (capped by the tail test) are certified.
    When agreement falls short the precision is doubled, up to the ceiling.
    """
    ns = sorted(set(ns))
    if not ns or ns[0] < 0:
        raise ValueError("n must be >= 0")
    epsilon = as_fraction(epsilon)
    n_max = ns[-1]
    k_max = k_max if k_max is not None else default_k_max(n_max)
    if k_max < n_max:
        raise ValueError("k_max must be >= n")
    P = working_digits(ctx.digits, k_max, ns, epsilon)
    ceiling = max_digits()
    capped = P + 20 > ceiling
    if capped:
        # over the ceiling: compute what it allows and let certification say so
        log.warning("precision policy wants %d digits, ceiling is %d", P + 20, ceiling)
        P = max(30, ceiling - 20)
    while True:
        grids = [_load_or_build_grid(epsilon, k_max, dps, grid_cache) for dps in (P, P + 20)]
        lo = _gamma_values(ns, epsilon, k_max, P, grids[0])
        hi = _gamma_values(ns, epsilon, k_max, P + 20, grids[1])
        results = []
        short = False
        for n in ns:
            v_lo, _ = lo[n]
            v_hi, tail = hi[n]
            with mp.workdps(P + 20):
                agree = min(agreement_digits(v_lo, v_hi), P)
                tail_digits = int(-mpmath.log10(tail)) - 5 if tail > 0 else P
            digits = max(0, min(agree, tail_digits))
            note = ""
            if capped and digits < ctx.digits:
                note = f"precision ceiling {ceiling} reached (STIELTJES_MAX_DIGITS)"
            elif tail_digits < ctx.digits:
                note = f"truncation not converged at k_max={k_max}; increase k_max"
            elif agree < ctx.digits:
                short = True
                note = "precision insufficient"
            results.append(
                StieltjesResult(n, v_hi, epsilon, k_max, digits, ctx.digits, tail_digits, P + 20, note)
            )
        if not short or 2 * P + 20 > ceiling:
            return results
        log.info("escalating precision %d -> %d", P, 2 * P)
        P *= 2


def _load_or_build_grid(epsilon, k_max, dps, cache_dir):
    if cache_dir is None:
        return phi_grid(epsilon, k_max, PrecisionContext(dps - 10, 10))
    path = Path(cache_dir) / f"phi_{epsilon.numerator}_{epsilon.denominator}_{k_max}_{dps}.txt"
    if path.exists():
        eps, values, digits = read_phi_grid(path)
        if eps == epsilon and digits >= dps and len(values) >= k_max + 1:
            return values
    values = phi_grid(epsilon, k_max, PrecisionContext(dps - 10, 10))
    path.parent.mkdir(parents=True, exist_ok=True)
    with mp.workdps(dps):
        write_phi_grid(path, epsilon, values, dps)
    return values


def gamma_exact(
    n: int,
    epsilon=DEFAULT_EPSILON,
    k_max: int | None = None,
    ctx: PrecisionContext = PrecisionContext(),
) -> StieltjesResult:
    """Certified gamma_n from the finite-difference/Stirling formula."""
    if k_max is not None and not 0 <= n <= k_max:
        raise ValueError("need 0 <= n <= k_max")
    return gamma_exact_many([n], epsilon, k_max, ctx)[0]
