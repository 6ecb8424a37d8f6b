from fractions import Fraction
from math import comb, factorial

import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpf

from oracles import stieltjes_oracle
from stieltjes.finite_diff import (
    a_coefficients,
    gamma_exact,
    gamma_exact_many,
    harmonic,
    phi_grid,
    read_phi_grid,
    stirling1,
    working_digits,
    write_phi_grid,
)
from stieltjes.mp_core import PrecisionContext

EPS = Fraction(1, 32)


def test_harmonic():
    assert harmonic(0) == 0
    assert harmonic(1) == 1
    assert harmonic(5) == Fraction(137, 60)
    with pytest.raises(ValueError):
        harmonic(-1)


def test_stirling_examples():
    S = stirling1(20)
    assert S(3, 2) == -3
    assert S(4, 2) == 11
    assert all(S(k, k) == 1 for k in range(21))
    assert all(S(k, 0) == 0 for k in range(1, 21))


def test_stirling_recurrence_exact():
    S = stirling1(60)
    for k in range(60):
        for n in range(1, k + 2):
            assert S(k + 1, n) == S(k, n - 1) - k * S(k, n)


@pytest.mark.parametrize("k", range(21))
def test_stirling_falling_factorial_at_seven(k):
    S = stirling1(20)
    falling = 1
    for i in range(k):
        falling *= 7 - i
    assert sum(S(k, n) * 7 ** n for n in range(k + 1)) == falling


@given(st.integers(0, 40))
def test_stirling_absolute_row_sum_is_factorial(k):
    S = stirling1(40)
    assert sum(abs(S(k, n)) for n in range(k + 1)) == factorial(k)


def test_a0_and_a1():
    ctx = PrecisionContext(30)
    table = a_coefficients(EPS, 1, ctx)
    grid = phi_grid(EPS, 1, ctx)
    with mp.workdps(40):
        assert abs(table.values[0] - mp.euler) < mpf(10) ** -30
        assert table.values[1] == grid[0] - grid[1]
    assert table.certified


def test_a_coefficients_match_zeta_form():
    # gamma + H_k/eps + sum_{j>=1} (-1)^j C(k,j) zeta(1 + j eps), evaluated by mpmath
    digits = 30
    table = a_coefficients(EPS, 32, PrecisionContext(digits, guard=100))
    worst = mpf(0)
    with mp.workdps(200):
        eps = mpf(1) / 32
        for k in range(33):
            H = harmonic(k)
            ref = mp.euler + mpf(H.numerator) / H.denominator / eps
            ref += mpmath.fsum((-1) ** j * comb(k, j) * mpmath.zeta(1 + j * eps) for j in range(1, k + 1))
            worst = max(worst, abs(table.values[k] - ref) / abs(ref))
    assert worst < mpf(10) ** (-digits + 5)


def test_insufficient_precision_is_flagged():
    # 200 alternating terms lose ~60 digits; a 30-digit run cannot certify anything
    table = a_coefficients(EPS, 200, PrecisionContext(30, guard=10))
    assert not table.certified


def test_grid_cache_roundtrip(tmp_path):
    ctx = PrecisionContext(30)
    grid = phi_grid(EPS, 12, ctx)
    path = tmp_path / "grid.txt"
    with mp.workdps(ctx.working):
        write_phi_grid(path, EPS, grid, ctx.working)
    eps, values, digits = read_phi_grid(path)
    assert eps == EPS and digits == ctx.working and len(values) == 13
    with mp.workdps(ctx.working):
        assert all(abs(a - b) <= mpf(10) ** (-ctx.working + 1) for a, b in zip(values, grid))


def test_low_orders_against_oracle():
    res = gamma_exact_many(range(11), EPS, ctx=PrecisionContext(40))
    with mp.workdps(60):
        for r in res:
            ref = stieltjes_oracle(r.n, 60)
            assert r.certified
            assert abs(r.value - ref) <= mpf(10) ** -40 * abs(ref)


def test_gamma_0_and_gamma_1():
    with mp.workdps(40):
        assert abs(gamma_exact(0).value - mp.euler) < mpf(10) ** -30
        assert mpmath.nstr(gamma_exact(1).value, 15) == "-0.0728158454836767"


def test_sign_137_stable_under_parameter_change():
    a = gamma_exact(137, EPS, ctx=PrecisionContext(20))
    b = gamma_exact(137, Fraction(1, 64), k_max=600, ctx=PrecisionContext(20))
    assert a.certified and b.certified
    assert mpmath.sign(a.value) == mpmath.sign(b.value)
    with mp.workdps(25):
        assert abs(a.value / b.value - 1) < mpf(10) ** -19


def test_truncation_flag():
    r = gamma_exact(5, EPS, k_max=8, ctx=PrecisionContext(30))
    assert not r.certified
    assert "increase k_max" in r.note


def test_results_are_real_and_deterministic():
    a = gamma_exact_many([3, 7], EPS, ctx=PrecisionContext(25))
    b = gamma_exact_many([7, 3], EPS, ctx=PrecisionContext(25))
    for x, y in zip(a, b):
        assert isinstance(x.value, mpmath.mpf)
        assert x.value == y.value and x.digits_certified == y.digits_certified


def test_precision_policy_grows_with_n_and_eps():
    assert working_digits(30, 200, [50], EPS) > working_digits(30, 200, [10], EPS)
    assert working_digits(30, 200, [50], Fraction(1, 64)) > working_digits(30, 200, [50], EPS)


def test_precondition():
    with pytest.raises(ValueError):
        gamma_exact(10, EPS, k_max=5)
    with pytest.raises(ValueError):
        gamma_exact_many([-1])
