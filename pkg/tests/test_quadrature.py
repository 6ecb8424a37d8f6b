import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpc, mpf

from stieltjes.mp_core import ConvergenceError
from stieltjes.quadrature import gauss_legendre, integrate, integrate_path


def test_rule_integrates_polynomials_exactly():
    with mp.workdps(40):
        nodes, weights = gauss_legendre(10, mp.prec)
        assert abs(sum(weights) - 2) < mpf(10) ** -38
        # degree 19 is the highest exact power for 10 nodes
        assert abs(mpmath.fsum(w * x ** 18 for x, w in zip(nodes, weights)) - mpf(2) / 19) < mpf(10) ** -38


def test_odd_degree_rejected():
    with pytest.raises(ValueError):
        gauss_legendre(7, 100)


@given(st.floats(0.1, 5), st.floats(0.1, 5))
def test_exponential(a, b):
    with mp.workdps(40):
        a, b = mpf(a), mpf(a) + mpf(b)
        v, err = integrate(mpmath.exp, a, b, mpf(10) ** -35)
        assert abs(v - (mpmath.exp(b) - mpmath.exp(a))) < mpf(10) ** -33 * mpmath.exp(b)


def test_closed_contour_around_pole():
    with mp.workdps(40):
        pts = [mpc(-1, -1), mpc(1, -1), mpc(1, 1), mpc(-1, 1), mpc(-1, -1)]
        v, _ = integrate_path(lambda z: 1 / z, pts, mpf(10) ** -35)
        assert abs(v - 2j * mp.pi) < mpf(10) ** -33


def test_deterministic():
    with mp.workdps(30):
        f = lambda x: mpmath.exp(-x) * mpmath.cos(7 * x)
        assert integrate(f, 0, 3, mpf(10) ** -25) == integrate(f, 0, 3, mpf(10) ** -25)


def test_nonconvergence_reports_estimate():
    with mp.workdps(30):
        with pytest.raises(ConvergenceError) as info:
            integrate(lambda x: 1 / x, mpf(0), mpf(1), mpf(10) ** -25, max_depth=4)
        assert info.value.estimate is not None
