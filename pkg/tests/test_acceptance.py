"""Acceptance criteria 1-10.

Each test prints exactly one ``ACCEPTANCE <n>: PASS|FAIL`` line to the
terminal (even under output capture) and then asserts.  Run alone with

    pytest tests/test_acceptance.py -v
"""
from __future__ import annotations

import math
import random
import time
from fractions import Fraction

import pytest

from iterfrac import (
    CoeffTriangle,
    NumericField,
    QContext,
    Series,
    alt_sum_identity,
    compose,
    gauss_expand,
    generator_exp,
    hockey_stick,
    iterate,
    itlog,
    itlog_fd_check,
    phi_triangle,
    preset,
    q_binomial,
    q_derivative,
    q_factorial,
    q_number,
    scalar_pow,
)
from iterfrac.iterate import applicable_methods, pochhammer_terms
from iterfrac.oracles import oracle_functional_root, oracle_moebius, verify_partition_lemma
from iterfrac.series import evaluate

from conftest import random_series

NUM = NumericField(128)


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\nACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {detail}")

    return emit


def rel_err(a, b):
    return abs(a - b) / abs(b) if b != 0 else abs(a)


# ---------------------------------------------------------------- 1


def test_criterion_1_five_formula_agreement(report):
    rng = random.Random(20240601)
    N = 10
    start = time.perf_counter()
    mismatches = []
    compared = 0
    for trial in range(20):
        for q in (Fraction(1), Fraction(2), Fraction(1, 3)):
            f = random_series(rng, N, q)
            methods = ["monkam", "bpp", "qschroder", "tambs", "lavoie"]
            if q == 1:
                methods += ["schroder", "jabotinsky", "jabotinsky_alt"]
            for s in range(6):
                ref = iterate(f, s, N, "matrix")
                for m in methods:
                    compared += 1
                    if iterate(f, s, N, m) != ref:
                        mismatches.append((trial, q, s, m))
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 60
    report(1, ok, f"{compared} exact triangle comparisons, {len(mismatches)} mismatches, {elapsed:.1f}s (< 60s)")
    assert not mismatches, mismatches[:5]
    assert elapsed < 60


# ---------------------------------------------------------------- 2


def test_criterion_2_unitary_half_iterate(report):
    N = 10
    f = preset("quad", N)
    root = oracle_functional_root(f, 2, N)
    got = {m: iterate(f, Fraction(1, 2), N, m).to_series() for m in ("schroder", "jabotinsky")}
    agree = all(g == root for g in got.values())
    squares = all(compose(g, g) == f for g in got.values())
    ok = agree and squares
    report(2, ok, f"Schroder/Jabotinsky == functional root through N={N}: {agree}; g o g == f exactly: {squares}")
    assert ok


# ---------------------------------------------------------------- 3


def test_criterion_3_nonunitary_moebius(report):
    N = 12
    f = preset("moebius(4)", N, NUM)
    want = oracle_moebius(4, Fraction(1, 2), N, NUM)
    worst = {}
    for m in ("qschroder", "tambs", "lavoie", "qextracted"):
        got = iterate(f, Fraction(1, 2), N, m).to_series()
        worst[m] = max(rel_err(got[n], want[n]) for n in range(1, N + 1))
    top = max(worst.values())
    ok = top < 1e-25
    detail = ", ".join(f"{m} {float(e):.1e}" for m, e in worst.items())
    report(3, ok, f"max relative error n<=12 at 128 bits: {detail} (< 1e-25)")
    assert ok


# ---------------------------------------------------------------- 4


def test_criterion_4_group_law(report):
    N = 8
    f = random_series(random.Random(4), N, NUM.coerce("0.7+0.1i"), NUM)
    s, t = NUM.coerce("0.3"), NUM.coerce("0.7")
    phi = phi_triangle(f, N)
    dev = {}
    for m in ("qschroder", "tambs", "lavoie", "qextracted"):
        dev[m] = (iterate(f, s, N, m) @ iterate(f, t, N, m)).max_rel_deviation(phi)
    ok = max(dev.values()) < 1e-20
    report(4, ok, "max relative deviation of phi^0.3 phi^0.7 from phi: " + ", ".join(f"{m} {float(d):.1e}" for m, d in dev.items()) + " (< 1e-20)")
    assert ok


# ---------------------------------------------------------------- 5


def _law_failures(f: Series, s, N: int, close) -> list:
    field = f.field
    q = f.q
    a2 = f.exponential()[2]
    qs = scalar_pow(q, s, field)
    second = a2 * scalar_pow(q, s - 1, field) * q_number(s, q, field)
    bad = []
    for m in applicable_methods(f, s, N):
        T = iterate(f, s, N, m)
        if not close(T[1, 1], qs):
            bad.append((m, "[1 1]"))
        if not close(T[2, 1], second):
            bad.append((m, "[2 1]"))
        for n in range(N + 1):
            if not close(T[n, n], scalar_pow(q, n * s, field) if n else field.one()):
                bad.append((m, f"[{n} {n}]"))
    return bad


def test_criterion_5_coefficient_laws(report):
    N = 8
    rng = random.Random(5)
    bad = []
    checked = 0
    exact_eq = lambda a, b: a == b  # noqa: E731
    for q in (Fraction(1), Fraction(2), Fraction(1, 3), Fraction(-5, 2)):
        f = random_series(rng, N, q)
        for s in (-2, -1, 0, 1, 2, 3, 4):
            bad += _law_failures(f, s, N, exact_eq)
            checked += 1
    unit = random_series(rng, N, 1)
    for s in (Fraction(1, 2), Fraction(-7, 3)):
        bad += _law_failures(unit, s, N, exact_eq)
        checked += 1
    num_close = lambda a, b: abs(a - b) <= 1e-25 * max(abs(b), NUM.ctx.mpf(2) ** -100)  # noqa: E731
    for q in ("0.7+0.1i", "2", "0.25-1.5i"):
        f = random_series(rng, N, NUM.coerce(q), NUM)
        for s in ("0.3", "1/2", "0.3+0.2i", "-1.25"):
            sv = NUM.coerce(s) if "/" not in s else Fraction(s)
            bad += _law_failures(f, sv, N, num_close)
            checked += 1
    ok = not bad
    report(5, ok, f"[1 1], [2 1], [n n] laws over {checked} (f, s) cases and all applicable methods: {len(bad)} failures")
    assert ok, bad[:5]


# ---------------------------------------------------------------- 6


def test_criterion_6_iterative_logarithm(report):
    N = 10
    geometric = itlog(preset("geometric", N)).ordinary() == [0, 0, 1] + [0] * (N - 2)

    lin = itlog(preset("linear(5/2)", N))
    linear_exact = lin.body == (0, 1) + (0,) * (N - 1) and lin.log_of == Fraction(5, 2)
    qn = NUM.coerce("0.7+0.1i")
    lin_num = itlog(Series((NUM.zero(), qn) + (NUM.zero(),) * (N - 1), NUM)).exponential()
    linear_num = abs(lin_num[1] - NUM.ctx.log(qn)) < 1e-30 and all(NUM.is_zero(c) for c in lin_num[2:])

    rng = random.Random(6)
    forms = True
    for q in (Fraction(2), Fraction(1, 3)):
        for _ in range(3):
            f = random_series(rng, N, q)
            forms &= itlog(f, N, "pochhammer") == itlog(f, N, "discrete")

    slopes = {}
    for name in ("geometric", "moebius(2)"):
        f = preset(name, 8, NUM)
        hs = [NUM.coerce(h) for h in ("1e-4", "1e-5", "1e-6")]
        devs = [itlog_fd_check(f, h) for h in hs]
        xs = [math.log10(float(h.real)) for h in hs]
        ys = [math.log10(float(d)) for d in devs]
        xm, ym = sum(xs) / 3, sum(ys) / 3
        slopes[name] = sum((x - xm) * (y - ym) for x, y in zip(xs, ys)) / sum((x - xm) ** 2 for x in xs)
    slope_ok = all(abs(v - 1) <= 0.1 for v in slopes.values())

    ok = geometric and linear_exact and linear_num and forms and slope_ok
    report(
        6,
        ok,
        f"itlog(x/(1-x)) = x^2: {geometric}; itlog(qx) = x log q: {linear_exact and linear_num}; "
        f"pochhammer == discrete (q=2, 1/3, N=10): {forms}; FD slopes "
        + ", ".join(f"{k} {v:.3f}" for k, v in slopes.items()),
    )
    assert ok


# ---------------------------------------------------------------- 7


def test_criterion_7_truncation_lemmas(report):
    N = 10
    rng = random.Random(7)
    violations = 0
    checked = 0
    # (phi - 1)^p for f'(0) = 1
    for _ in range(3):
        T = phi_triangle(random_series(rng, N, 1), N).shift_diagonal(1)
        P = CoeffTriangle.identity(N)
        for p in range(1, N + 2):
            P = P @ T
            for n in range(N + 1):
                for k in range(n + 1):
                    if p > n - k:
                        checked += 1
                        violations += P[n, k] != 0
    # prod_{i<p} (phi - q^(i+k)) restricted to column k
    for q in (Fraction(2), Fraction(1, 3), Fraction(-3, 2)):
        f = random_series(rng, N, q)
        phi = phi_triangle(f, N)
        ctx = QContext(q)
        for k in range(1, N + 1):
            P = CoeffTriangle.identity(N)
            engine = pochhammer_terms(f, k, N, ctx)
            for p in range(1, N + 2):
                P = P @ phi.shift_diagonal(ctx.power(p - 1 + k))
                for n in range(k, N + 1):
                    if p > n - k:
                        checked += 1
                        violations += P[n, k] != 0
                        if p < len(engine):
                            violations += engine[p][n] != 0
    ok = violations == 0
    report(7, ok, f"{checked} entries with p > n-k checked for (phi-1)^p and (phi,-q^k)_q^p, n<=10: {violations} nonzero")
    assert ok


# ---------------------------------------------------------------- 8


def test_criterion_8_partition_lemma(report):
    cases = [(s, k, k + gap) for s in range(1, 5) for gap in range(0, 5) for k in (0, 1, 2)]
    failed = [c for c in cases if not verify_partition_lemma(*c)]
    ok = not failed
    report(8, ok, f"bijection verified for {len(cases) - len(failed)}/{len(cases)} (s, k, n) with s<=4, n-k<=4")
    assert ok, failed


# ---------------------------------------------------------------- 9


def test_criterion_9_generator(report):
    N = 8
    dev = {}
    for name in ("geometric", "moebius(4)"):
        f = preset(name, N, NUM)
        for s in (2, Fraction(1, 2)):
            dev[(name, str(s))] = generator_exp(f, s, N).max_rel_deviation(iterate(f, s, N))
    ok = max(dev.values()) < 1e-18
    report(9, ok, "exp(s G) vs iterate: " + ", ".join(f"{n} s={s} {float(d):.1e}" for (n, s), d in dev.items()) + " (< 1e-18)")
    assert ok


# ---------------------------------------------------------------- 10


def _q_taylor_holds(coeffs, c, ctx) -> bool:
    f = Series.of(coeffs)
    out = [Fraction(0)] * len(coeffs)
    g = f
    for p in range(len(coeffs)):
        value = evaluate(g, c) / q_factorial(p, ctx)
        for ell, coeff in enumerate(gauss_expand(p, ctx)):
            out[p - ell] += value * coeff * (-c) ** ell
        g = q_derivative(g, ctx)
    return out == list(f.coeffs)


def test_criterion_10_q_identities(report):
    rng = random.Random(10)
    qs = [Fraction(1)]
    while len(qs) < 6:
        q = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        if q not in (0, 1, -1) and q not in qs:
            qs.append(q)
    taylor = alt = hockey = 0
    failures = []
    for q in qs:
        ctx = QContext(q)
        for _ in range(5):
            deg = rng.randint(0, 8)
            coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(deg + 1)]
            c = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
            taylor += 1
            if not _q_taylor_holds(coeffs, c, ctx):
                failures.append(("taylor", q, coeffs, c))
        for a in range(7):
            for b in range(7):
                lhs = sum(
                    (q_binomial(a, p, ctx) * ctx.power(p * (p - 1) // 2) * (-1) ** p for p in range(b + 1)),
                    Fraction(0),
                )
                alt += 1
                if lhs != alt_sum_identity(a, b, ctx):
                    failures.append(("alt", q, a, b))
        for n in range(2, 8):
            for ell in range(1, n):
                lhs = sum((q_binomial(p - 1, ell - 1, ctx) * ctx.power(-ell * p) for p in range(ell, n)), Fraction(0))
                hockey += 1
                if lhs != hockey_stick(n, ell, ctx):
                    failures.append(("hockey", q, n, ell))
    ok = not failures
    report(10, ok, f"q-Taylor {taylor}, alternating sum {alt}, hockey stick {hockey} exact checks over q in {[str(q) for q in qs]}: {len(failures)} failures")
    assert ok, failures[:5]


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
