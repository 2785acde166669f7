"""Brute-force references.

Nothing here imports the iteration engine; the oracles only use series
arithmetic and direct enumeration, so agreement with the engine is evidence
rather than tautology.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from .errors import ExactInfeasible
from .scalar import EXACT, ExactField, Field, scalar_pow
from .series import Series, compose


def oracle_compose_iterate(f: Series, s: int, N: int | None = None) -> Series:
    """``f`` composed with itself ``s`` times."""
    if s < 0:
        raise ValueError("oracle_compose_iterate needs s >= 0")
    N = f.order if N is None else N
    f = f.truncate(N)
    g = Series.identity(N, f.field)
    for _ in range(s):
        g = compose(f, g, N)
    return g


def _exact_root(q: Fraction, m: int) -> Fraction:
    def iroot(v: int):
        if v < 0:
            return None
        r = round(v ** (1.0 / m))
        for c in (r - 1, r, r + 1):
            if c >= 0 and c**m == v:
                return c
        return None

    q = Fraction(q)
    sign = 1
    num = q.numerator
    if num < 0:
        if m % 2 == 0:
            raise ExactInfeasible(f"{q} has no real {m}-th root")
        sign, num = -1, -num
    a, b = iroot(num), iroot(q.denominator)
    if a is None or b is None:
        raise ExactInfeasible(f"{q} is not a rational {m}-th power")
    return sign * Fraction(a, b)


def oracle_functional_root(f: Series, m: int, N: int | None = None) -> Series:
    """The ``g`` with ``g∘...∘g`` (``m`` times) ``= f`` and ``g'(0)`` the principal
    ``m``-th root of ``f'(0)``, solved one coefficient at a time.

    The order-``n`` coefficient of the ``m``-fold composite is affine in
    ``g_n`` once ``g_1..g_{n-1}`` are fixed, so two trial evaluations give it.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    f.require_invertible()
    N = f.order if N is None else N
    field = f.field
    if isinstance(field, ExactField):
        g1 = _exact_root(f.q, m)
    else:
        g1 = scalar_pow(f.q, Fraction(1, m), field)
    coeffs = [field.zero(), g1] + [field.zero()] * (N - 1)
    for n in range(2, N + 1):
        trial = Series(tuple(coeffs[: n + 1]), field)
        c0 = oracle_compose_iterate(trial, m, n).coeffs[n]
        coeffs[n] = field.one()
        trial = Series(tuple(coeffs[: n + 1]), field)
        c1 = oracle_compose_iterate(trial, m, n).coeffs[n]
        coeffs[n] = (f[n] - c0) / (c1 - c0)
    return Series(tuple(coeffs), field)


def _mat_mul(A, B):
    return [
        [A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]],
        [A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]],
    ]


def moebius_matrix_power(q, s, field: Field = EXACT):
    """``[[q, 0], [-1, 1]]**s`` (the matrix of ``qx/(1-x)``) by diagonalization."""
    q = field.lift(q)
    one, zero = field.one(), field.zero()
    if field.is_one(q):
        # unipotent: M = I + E, E^2 = 0
        sv = field.exponent_value(s)
        return [[one, zero], [-sv, one]]
    # eigenvectors (1-q, 1) for q and (0, 1) for 1
    P = [[1 - q, zero], [one, one]]
    Pinv = [[1 / (1 - q), zero], [-1 / (1 - q), one]]
    D = [[scalar_pow(q, s, field), zero], [zero, one]]
    return _mat_mul(_mat_mul(P, D), Pinv)


def oracle_moebius(q, s, N: int, field: Field = EXACT) -> Series:
    """Iterate of ``qx/(1-x)``: the matrix ``[[A, 0], [C, 1]]`` means ``Ax/(1 + Cx)``."""
    M = moebius_matrix_power(q, s, field)
    A, C = M[0][0], M[1][0]
    coeffs = [field.zero()]
    term = A
    for _ in range(N):
        coeffs.append(term)
        term = term * -C
    return Series(tuple(coeffs), field)


def _weak_chains(k: int, n: int, s: int) -> set:
    return {
        (k,) + mid + (n,)
        for mid in combinations_with_replacement(range(k, n + 1), s - 1)
    } if s >= 1 else ({(k,)} if k == n else set())


def partition_lemma_pieces(s: int, k: int, n: int) -> dict:
    """For each ``p`` the list of chains rebuilt from a strict chain ``J`` with
    ``p`` steps and repeat indices ``0 <= i_1 <= ... <= i_{s-p} <= p``."""
    pieces = {}
    for p in range(s + 1):
        rebuilt = []
        if p == 0:
            stricts = [(k,)] if k == n else []
        else:
            stricts = [(k,) + mid + (n,) for mid in combinations(range(k + 1, n), p - 1)] if n > k else []
        for J in stricts:
            for repeats in combinations_with_replacement(range(p + 1), s - p):
                rebuilt.append(tuple(sorted(J + tuple(J[i] for i in repeats))))
        pieces[p] = rebuilt
    return pieces


def verify_partition_lemma(s: int, k: int, n: int) -> bool:
    """Weak chains ``k = j_0 <= ... <= j_s = n`` split disjointly by number of
    distinct values, each piece rebuilt bijectively from its strict skeleton."""
    if s < 1 or k > n:
        raise ValueError("need s >= 1 and k <= n")
    chains = _weak_chains(k, n, s)
    pieces = partition_lemma_pieces(s, k, n)
    seen = set()
    for p, rebuilt in pieces.items():
        for j in rebuilt:
            if j in seen or j not in chains or len(set(j)) != p + 1:
                return False
            seen.add(j)
    return seen == chains

