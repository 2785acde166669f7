import math
import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given

from iterfrac import CoeffTriangle, NumericField, Series, compose, phi_triangle, preset, triangle_product
from iterfrac.errors import ModeMismatch, NotInvertible, SizeMismatch
from iterfrac.triangle import chain_sum, column_chain_sums, enumerate_chains

from conftest import invertible_series, random_series

N = 6


def phi_by_powers(f: Series, N: int) -> CoeffTriangle:
    """[n k] = n!/k! [x^n] f(x)^k, straight from series powers."""
    f = f.truncate(N)
    return CoeffTriangle.build(
        N, lambda n, k: Fraction(math.factorial(n), math.factorial(k)) * f.power(k).coeffs[n]
    )


def stirling2(n, k):
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


# ---------------------------------------------------------------- phi_triangle


def test_phi_of_identity():
    assert phi_triangle(Series.identity(N)) == CoeffTriangle.identity(N)


def test_phi_of_linear_is_diagonal():
    q = Fraction(3, 2)
    T = phi_triangle(preset("linear(3/2)", N))
    assert T == CoeffTriangle.build(N, lambda n, k: q**n if n == k else 0)


def test_phi_of_expm1_is_stirling():
    T = phi_triangle(preset("expm1", N))
    assert T[3, 2] == 3
    assert T == CoeffTriangle.build(N, stirling2)


@given(invertible_series())
def test_phi_matches_series_powers(f):
    assert phi_triangle(f) == phi_by_powers(f, f.order)


@given(invertible_series())
def test_phi_structure(f):
    T = phi_triangle(f)
    a = f.exponential()
    assert T[0, 0] == 1
    for n in range(1, f.order + 1):
        assert T[n, 0] == 0
        assert T[n, n] == f.q**n
        assert T[n, 1] == a[n]


def test_phi_requires_invertible():
    with pytest.raises(NotInvertible):
        phi_triangle(Series.of([0, 0, 1]))


# ---------------------------------------------------------------- products


@given(invertible_series())
def test_product_with_identity(f):
    T = phi_triangle(f)
    ident = CoeffTriangle.identity(f.order)
    assert T @ ident == T == ident @ T


@given(invertible_series(), invertible_series())
def test_product_is_composition(f, g):
    assert triangle_product(phi_triangle(f), phi_triangle(g)) == phi_triangle(compose(f, g))


def test_product_order_matters():
    f, g = preset("quad", N), preset("linear(2)", N)
    fg = phi_triangle(compose(f, g))
    gf = phi_triangle(compose(g, f))
    assert fg != gf
    assert phi_triangle(f) @ phi_triangle(g) == fg


def test_diagonal_is_multiplicative():
    U = CoeffTriangle.from_rows([[1], [0, Fraction(2, 3)]])
    V = CoeffTriangle.from_rows([[1], [0, Fraction(9, 4)]])
    assert (U @ V)[1, 1] == U[1, 1] * V[1, 1]


def test_product_checks_size_and_mode():
    U = CoeffTriangle.identity(3)
    with pytest.raises(SizeMismatch):
        U @ CoeffTriangle.identity(4)
    with pytest.raises(ModeMismatch):
        U @ CoeffTriangle.identity(3, NumericField())


def test_linearity():
    rng = random.Random(5)
    A = phi_triangle(random_series(rng, N, 2))
    B = phi_triangle(random_series(rng, N, Fraction(1, 3)))
    a, b = Fraction(-7, 2), Fraction(5, 3)
    C = A.scale(a) + B.scale(b)
    for n in range(N + 1):
        for k in range(n + 1):
            assert C[n, k] == a * A[n, k] + b * B[n, k]
    assert (A - A) == CoeffTriangle.build(N, lambda n, k: 0)


def test_power_is_repeated_product():
    T = phi_triangle(preset("geometric", N))
    assert T.power(3) == T @ T @ T
    assert T.power(0) == CoeffTriangle.identity(N)


def test_to_series_reads_column_one():
    f = preset("moebius(3)", N)
    assert phi_triangle(f).to_series() == f


# ---------------------------------------------------------------- chains


@pytest.mark.parametrize("strict", [False, True])
def test_chain_enumeration(strict):
    ok = (lambda a, b: a < b) if strict else (lambda a, b: a <= b)
    for k in range(1, 4):
        for n in range(k, k + 5):
            for steps in range(0, 5):
                brute = {
                    (k,) + mid + (n,)
                    for mid in product(range(k, n + 1), repeat=steps - 1)
                    if all(ok(x, y) for x, y in zip((k,) + mid, mid + (n,)))
                } if steps else ({(k,)} if k == n else set())
                chains = list(enumerate_chains(k, n, steps, strict))
                assert len(chains) == len(brute) and set(chains) == brute


def test_chain_dp_matches_dfs_and_powers():
    rng = random.Random(11)
    T = phi_triangle(random_series(rng, N, 2))
    factors = [T, T.shift_diagonal(1), T.shift_diagonal(Fraction(1, 2))]
    for strict in (False, True):
        for k in range(1, N + 1):
            sums = column_chain_sums(k, factors, strict)
            for n in range(k, N + 1):
                assert sums[3][n] == chain_sum(factors, k, n, strict)
    prod = factors[0] @ factors[1] @ factors[2]
    for k in range(N + 1):
        sums = column_chain_sums(k, factors)
        assert [sums[3][n] for n in range(k, N + 1)] == [prod[n, k] for n in range(k, N + 1)]


def test_unipotent_truncation():
    # (phi - 1)^p vanishes below the diagonal band p > n - k when f'(0) = 1
    rng = random.Random(2)
    T = phi_triangle(random_series(rng, 8, 1)).shift_diagonal(1)
    P = CoeffTriangle.identity(8)
    for p in range(1, 10):
        P = P @ T
        for n in range(9):
            for k in range(n + 1):
                if p > n - k:
                    assert P[n, k] == 0
