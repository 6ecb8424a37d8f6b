"""Adaptive Gauss-Legendre quadrature at arbitrary precision.

A panel is accepted when the single-panel estimate and the sum of its two
halves agree to the panel's share of the tolerance; otherwise it is bisected.
Panels are summed in a fixed left-to-right order so results are reproducible.
"""
from __future__ import annotations

from functools import lru_cache

import mpmath
from mpmath import mp, mpf

from .mp_core import ConvergenceError


@lru_cache(maxsize=32)
def gauss_legendre(degree: int, prec: int) -> tuple[tuple, tuple]:
    """Nodes and weights on [-1, 1], found by Newton iteration on P_degree."""
    if degree % 2:
        raise ValueError("degree must be even")
    with mp.workprec(prec + 20):
        nodes, weights = [], []
        tol = mpf(2) ** (-prec - 10)
        for i in range(1, degree // 2 + 1):
            x = mpmath.cos(mp.pi * (i - mpf(1) / 4) / (degree + mpf(1) / 2))
            for _ in range(100):
                p0, p1 = mpf(1), x
                for k in range(2, degree + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = degree * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < tol:
                    break
            # recompute derivative at the converged node
            p0, p1 = mpf(1), x
            for k in range(2, degree + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = degree * (x * p1 - p0) / (x * x - 1)
            w = 2 / ((1 - x * x) * dp * dp)
            nodes += [x, -x]
            weights += [w, w]
    with mp.workprec(prec):
        return tuple(+x for x in nodes), tuple(+w for w in weights)


def default_degree(dps: int) -> int:
    return max(16, 2 * int(dps * 0.3))


def _panel(f, a, b, nodes, weights):
    half = (b - a) / 2
    mid = (a + b) / 2
    return half * mpmath.fsum(w * f(mid + half * x) for x, w in zip(nodes, weights))


def integrate(f, a, b, tol, degree: int | None = None, max_depth: int = 40):
    """Integrate f over the segment [a, b] (real or complex endpoints).

    Returns ``(value, error_estimate)``.  Raises ConvergenceError when a panel
    is still unresolved after ``max_depth`` bisections.
    """
    degree = degree or default_degree(mp.dps)
    nodes, weights = gauss_legendre(degree, mp.prec)
    length = abs(b - a)
    if length == 0:
        return mpf(0), mpf(0)
    total = 0
    err = mpf(0)
    noise = mpf(2) ** (8 - mp.prec)
    stack = [(a, b, _panel(f, a, b, nodes, weights), 0)]
    # depth-first, left half first, so summation order is fixed
    while stack:
        lo, hi, whole, depth = stack.pop()
        mid = (lo + hi) / 2
        left = _panel(f, lo, mid, nodes, weights)
        right = _panel(f, mid, hi, nodes, weights)
        diff = abs(whole - (left + right))
        # below the rounding level of the panel further bisection cannot help
        share = max(tol * abs(hi - lo) / length, noise * abs(whole))
        if diff <= share:
            total += left + right
            err += diff
            continue
        if depth >= max_depth:
            raise ConvergenceError(
                "adaptive quadrature did not converge",
                estimate=total + left + right,
                bound=err + diff,
            )
        stack.append((mid, hi, right, depth + 1))
        stack.append((lo, mid, left, depth + 1))
    return total, err


def integrate_path(f, points, tol, degree: int | None = None):
    """Integrate along the polyline through `points`; tolerance split by length."""
    lengths = [abs(q - p) for p, q in zip(points, points[1:])]
    full = sum(lengths)
    total = 0
    err = mpf(0)
    for (p, q), ell in zip(zip(points, points[1:]), lengths):
        v, e = integrate(f, p, q, tol * ell / full, degree)
        total += v
        err += e
    return total, err
