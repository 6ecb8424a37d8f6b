"""Acceptance suite: one test per criterion, tolerances as specified.

Run with ``pytest tests/test_acceptance.py -v``; add ``--runslow`` for the
long checks (large-n exact ratios and the 10^100000 / 10^1000000 signs).
"""
import json
import random
import subprocess
import sys
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpc, mpf

from oracles import stieltjes_oracle
from stieltjes.asymptotics import gamma_asymptotic, parse_n_spec, phase_precision, sign_gamma
from stieltjes.cli import run
from stieltjes.finite_diff import gamma_exact_many
from stieltjes.mp_core import PrecisionContext, agreement_digits
from stieltjes.norlund_rice import residue_at_zero, verification_report
from stieltjes.saddle import displacement, lambert_w, w_residual

EPS = Fraction(1, 32)


def test_criterion_01_exact_matches_oracle(capsys):
    # two spare digits so output rounding cannot eat into the 30 being checked
    assert run(["exact", "--n", "0..30", "--digits", "32", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert [r["n"] for r in data] == list(range(31))
    worst = None
    with mp.workdps(70):
        for r in data:
            d = agreement_digits(mpf(r["value"]), stieltjes_oracle(r["n"], dps=70))
            worst = d if worst is None else min(worst, d)
    assert worst >= 30, f"worst agreement {worst} digits"


def test_criterion_02_epsilon_invariance():
    a = gamma_exact_many(range(51), Fraction(1, 32), ctx=PrecisionContext(20))
    b = gamma_exact_many(range(51), Fraction(1, 64), ctx=PrecisionContext(20))
    with mp.workdps(80):
        digits = [agreement_digits(x.value, y.value) for x, y in zip(a, b)]
    bad = [(n, d) for n, d in enumerate(digits) if d < 20]
    assert not bad, bad


def test_criterion_03_norlund_rice_rectangle():
    errors = {}
    for k in range(1, 13):
        rep = verification_report(k, EPS, "rectangle", PrecisionContext(25))
        errors[k] = mpf(rep["rel_error"])
    bad = {k: mpmath.nstr(e, 3) for k, e in errors.items() if not e < mpf("1e-20")}
    assert not bad, bad


def test_criterion_04_residue_identity():
    bad = {}
    for k in range(11):
        r = residue_at_zero(k, EPS, PrecisionContext(35))
        with mp.workdps(50):
            rel = abs(r.numeric - r.closed_form) / abs(r.closed_form)
        if not rel < mpf("1e-30"):
            bad[k] = mpmath.nstr(rel, 3)
    assert not bad, bad


def _saddle_argument(m, ctx):
    with ctx.workdps():
        return (mpf(m) + mpf(3) / 2) / (2j * mp.pi)


def test_criterion_05_lambert_w_property():
    ctx = PrecisionContext(30)
    tol = mpf(10) ** (-ctx.digits + 5)
    rng = random.Random(20240601)
    failures = []
    for _ in range(100):
        with ctx.workdps():
            z = mpf(10) ** rng.uniform(-6, 6) * mpmath.expj(rng.uniform(-mpmath.pi, mpmath.pi))
        for branch in (0, -1):
            if w_residual(lambert_w(z, branch, ctx), z, ctx) >= tol:
                failures.append((mpmath.nstr(z, 8), branch))
    # saddles for figures, asymptotics and the closed-form a_k saddle
    for m in range(0, 301):
        z = _saddle_argument(m, ctx)
        if w_residual(lambert_w(z, 0, ctx), z, ctx) >= tol:
            failures.append((m, 0))
    for spec in ("10^10", "10^100", "10^1000", "10^10000"):
        n = parse_n_spec(spec)
        big = phase_precision(n, ctx)
        z = _saddle_argument(n.value, big)
        if w_residual(lambert_w(z, 0, big), z, big) >= mpf(10) ** (-big.digits + 5):
            failures.append((spec, 0))
    assert not failures, failures


def test_criterion_06_asymptotic_accuracy(exact_0_200):
    ctx = PrecisionContext(30)
    ratio = {}
    wrong_sign = []
    with mp.workdps(30):
        for n in range(20, 201):
            est = gamma_asymptotic(n, ctx)
            exact = exact_0_200[n].value
            if est.sign != mpmath.sign(exact):
                wrong_sign.append(n)
            ratio[n] = est.value / exact
        off = {n: abs(r - 1) for n, r in ratio.items()}
        too_far = {n: mpmath.nstr(ratio[n], 6) for n in range(50, 201) if not off[n] < mpf("1e-2")}
        late = mpmath.fsum(off[n] for n in range(150, 201)) / 51
        early = mpmath.fsum(off[n] for n in range(50, 101)) / 51
    problems = []
    if wrong_sign:
        problems.append(f"sign mismatch at {wrong_sign}")
    if too_far:
        problems.append(f"|ratio-1| >= 1e-2 at {too_far}")
    if not late < early:
        problems.append(f"mean |ratio-1| on [150,200] = {mpmath.nstr(late, 4)} not below [50,100] = {mpmath.nstr(early, 4)}")
    assert not problems, "; ".join(problems)


@pytest.mark.slow
def test_criterion_07_large_n_ratio():
    ns = [3000, 3100, 3300]
    # the Stirling-weighted terms are below 1e-25 of the sum well before k = 4200
    exact = gamma_exact_many(ns, EPS, k_max=4200, ctx=PrecisionContext(20))
    assert all(r.certified for r in exact), [(r.n, r.digits_certified, r.note) for r in exact]
    bad = {}
    for r in exact:
        est = gamma_asymptotic(r.n, PrecisionContext(30))
        with mp.workdps(30):
            q = est.value / r.value
            if not abs(q - 1) < mpf("5e-4"):
                bad[r.n] = mpmath.nstr(q, 8)
    assert not bad, bad


SIGN_TABLE = {"10^10": 1, "10^100": 1, "10^1000": 1, "10^10000": -1}


def test_criterion_08_sign_table():
    got = {spec: sign_gamma(spec) for spec in SIGN_TABLE}
    assert all(r.certified for r in got.values()), {s: r.im_mod_2pi_digits for s, r in got.items()}
    assert {s: r.sign for s, r in got.items()} == SIGN_TABLE


@pytest.mark.slow
@pytest.mark.parametrize("spec,expected", [("10^100000", -1), ("10^1000000", 1)])
def test_criterion_08_sign_table_extended(spec, expected):
    r = sign_gamma(spec)
    assert r.certified
    assert r.sign == expected


def test_criterion_09_saddle_quality():
    ctx = PrecisionContext(30)
    ks = [25, 50, 100, 200]
    d = [displacement(k, EPS, ctx) for k in ks]
    shown = {k: mpmath.nstr(v, 5) for k, v in zip(ks, d)}
    assert all(b < a for a, b in zip(d, d[1:])), f"displacement not decreasing: {shown}"


DEFAULT_COMMANDS = [
    ["exact", "--n", "0..30", "--digits", "32", "--format", "json"],
    ["exact", "--n", "0..50", "--digits", "20", "--epsilon", "1/64"],
    ["asy", "--n", "20..200", "--variant", "both"],
    ["sign", "--n", "10^10000"],
    ["verify", "nr", "--k", "3"],
    ["verify", "residue", "--k", "10", "--digits", "35"],
    ["figure", "1", "--n", "0..60"],
    ["figure", "6"],
    ["figure", "7", "--n", "20..80", "--format", "svg"],
]


def test_criterion_10_determinism(tmp_path):
    differing = []
    for i, argv in enumerate(DEFAULT_COMMANDS):
        blobs = []
        for rep in range(2):
            path = tmp_path / f"{i}_{rep}"
            subprocess.run([sys.executable, "-m", "stieltjes", *argv, "--output", str(path)], check=True)
            blobs.append(path.read_bytes())
        if blobs[0] != blobs[1] or not blobs[0]:
            differing.append(" ".join(argv))
    assert not differing, differing
