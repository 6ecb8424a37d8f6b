"""Reference values built without any code from the package under test.

gamma_n is the constant term in

    sum_{k<=K} (ln k)^n / k  -  (ln K)^(n+1)/(n+1)   as K -> infinity,

and Euler-Maclaurin at a cutoff N turns the tail into a finite correction:

    gamma_n = sum_{k<N} f(k) + f(N)/2 - (ln N)^(n+1)/(n+1)
              - sum_j B_2j/(2j)! f^(2j-1)(N),      f(x) = (ln x)^n / x.

Derivatives of f are kept exactly as x^(-1-m) * (integer polynomial in ln x).
Bernoulli numbers come from the Akiyama-Tanigawa algorithm on Fractions.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath


@lru_cache(maxsize=None)
def bernoulli_table(count: int) -> tuple:
    """B_0 .. B_{count-1} (with B_1 = +1/2, irrelevant here)."""
    out = []
    a = []
    for m in range(count):
        a.append(Fraction(1, m + 1))
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return tuple(out)


def _derivative_polys(n: int, order: int):
    """Coefficient lists c^(m) with f^(m)(x) = x^(-1-m) sum_i c_i (ln x)^i."""
    c = [0] * n + [1]
    polys = [c]
    for m in range(order):
        a = 1 + m
        nxt = [-a * c[i] + (i + 1) * (c[i + 1] if i + 1 < len(c) else 0) for i in range(len(c))]
        polys.append(nxt)
        c = nxt
    return polys


def stieltjes_oracle(n: int, dps: int = 60, N: int = 200, M: int = 60):
    with mpmath.workdps(dps + 20):
        B = bernoulli_table(2 * M + 2)
        polys = _derivative_polys(n, 2 * M)
        L = mpmath.log(N)
        total = mpmath.mpf(0)
        for k in range(2, N):
            total += mpmath.log(k) ** n / k
        if n == 0:
            total += 1
        total += L ** n / N / 2
        total -= L ** (n + 1) / (n + 1)
        fact = 1
        for j in range(1, M + 1):
            fact *= (2 * j - 1) * (2 * j)
            c = polys[2 * j - 1]
            deriv = sum(ci * L ** i for i, ci in enumerate(c) if ci) / mpmath.mpf(N) ** (2 * j)
            b = B[2 * j]
            total -= mpmath.mpf(b.numerator) / b.denominator / fact * deriv
        return +total


def euler_gamma_oracle(dps: int = 60):
    """Euler's constant via the same expansion with n = 0."""
    return stieltjes_oracle(0, dps)
