"""Partitions, partial Bell polynomials, complete homogeneous symmetric
polynomials and Bell partition polynomials (BPPs).

A multi-index ``l = (l_1, l_2, ...)`` records how many parts of each size a
partition has.  Two linear forms matter: ``size`` (``l_1 + l_2 + ...``, the
number of parts) and ``weight`` (``1*l_1 + 2*l_2 + ...``, the partitioned
integer).
"""
from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations_with_replacement, product
from typing import Iterable, Sequence

from .errors import BadRange


class MultiIndex(tuple):
    """Finitely supported vector of nonnegative ints, trailing zeros dropped."""

    def __new__(cls, entries: Iterable[int] = ()):
        entries = list(entries)
        while entries and entries[-1] == 0:
            entries.pop()
        if any(e < 0 for e in entries):
            raise ValueError("multi-index entries must be nonnegative")
        return super().__new__(cls, entries)

    def __getitem__(self, p):
        """1-based access: ``l[p]`` is the number of parts of size ``p``."""
        if isinstance(p, slice):
            return tuple(self)[p]
        if p < 1:
            raise IndexError("multi-indices are 1-based")
        return tuple.__getitem__(self, p - 1) if p <= len(self) else 0

    def __repr__(self):
        return f"MultiIndex{tuple(self)}"

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def weight(self) -> int:
        return sum(p * e for p, e in enumerate(self, start=1))

    def __add__(self, other):
        n = max(len(self), len(other))
        return MultiIndex(self[p] + other[p] for p in range(1, n + 1))

    def padded(self, n: int) -> tuple:
        return tuple(self[p] for p in range(1, n + 1))


@lru_cache(maxsize=None)
def _partitions(n: int, m: int) -> tuple:
    # Each result is (l_1, ..., l_n); l_1 is chosen first, largest first.
    def rec(p: int, remaining: int):
        if p > n:
            if remaining == 0:
                yield ()
            return
        for count in range(remaining // p, -1, -1):
            for tail in rec(p + 1, remaining - p * count):
                yield (count,) + tail

    if n == 0:
        return ((),) if m == 0 else ()
    return tuple(rec(1, m))


def enumerate_partitions(n: int, m: int) -> list[MultiIndex]:
    """``P_{n,m}``: all ``l`` with ``1 l_1 + ... + n l_n = m`` and no part above ``n``.

    Ordered lexicographically from the largest ``l_1`` down.
    """
    if n < 0 or m < 0:
        raise BadRange("n and m must be nonnegative")
    return [MultiIndex(t) for t in _partitions(n, m)]


@lru_cache(maxsize=None)
def _partitions_with_size(n: int, k: int) -> tuple:
    # partitions of n into exactly k parts, parts of size <= n - k + 1
    top = n - k + 1
    return tuple(t for t in _partitions(top, n) if sum(t) == k)


def multinomial(total: int, parts: Sequence[int]) -> int:
    """``total! / prod(parts!)``, zero unless the parts are nonnegative and add up."""
    if any(p < 0 for p in parts) or sum(parts) != total:
        return 0
    out = math.factorial(total)
    for p in parts:
        out //= math.factorial(p)
    return out


def _check_range(n: int, k: int) -> None:
    if k < 1 or k > n:
        raise BadRange(f"need 1 <= k <= n, got n={n}, k={k}")


def partial_bell_exp(n: int, k: int, a: Sequence):
    """Exponential partial Bell polynomial ``B_{n,k}(a_1, ..., a_{n-k+1})``.

    ``a[0]`` holds ``a_1``.
    """
    _check_range(n, k)
    total = 0
    for ell in _partitions_with_size(n, k):
        # number of set partitions of this block type
        coef = math.factorial(n)
        for p, lp in enumerate(ell, start=1):
            coef //= math.factorial(p) ** lp * math.factorial(lp)
        term = coef
        for p, lp in enumerate(ell, start=1):
            if lp:
                term = term * a[p - 1] ** lp
        total = total + term
    return total


def partial_bell_ord(n: int, k: int, qc: Sequence):
    """Ordinary partial Bell polynomial ``B^_{n,k}(q_1, ..., q_{n-k+1})``,
    the coefficient of ``x^n`` in ``(q_1 x + q_2 x^2 + ...)^k``."""
    _check_range(n, k)
    total = 0
    for ell in _partitions_with_size(n, k):
        term = multinomial(k, ell)
        for p, lp in enumerate(ell, start=1):
            if lp:
                term = term * qc[p - 1] ** lp
        total = total + term
    return total


def homogeneous_sym(k: int, xs: Sequence):
    """Complete homogeneous symmetric polynomial ``h_k(x_1, ..., x_n)``."""
    if k < 0:
        raise BadRange("degree must be nonnegative")
    # h[j] = h_j of the variables seen so far
    h = [1] + [0] * k
    for x in xs:
        for j in range(1, k + 1):
            h[j] = h[j] + x * h[j - 1]
    return h[k]


def h_multiset_form(k: int, xs: Sequence):
    """``h_k`` as the sum over ``i_1 <= ... <= i_k`` of ``x_{i_1} ... x_{i_k}``."""
    total = 0
    for idx in combinations_with_replacement(range(len(xs)), k):
        term = 1
        for i in idx:
            term = term * xs[i]
        total = total + term
    return total


def h_exponent_form(k: int, xs: Sequence):
    """``h_k`` as the sum over ``lambda_1 + ... + lambda_n = k`` of ``prod x_i^lambda_i``."""
    total = 0
    for lam in product(range(k + 1), repeat=len(xs)):
        if sum(lam) != k:
            continue
        term = 1
        for x, e in zip(xs, lam):
            if e:
                term = term * x**e
        total = total + term
    return total


class BPP:
    """``n``-Bell partition polynomial: ``sum_{l in P_n} A(l) prod_p x_p^{l_p}``."""

    def __init__(self, degree: int, coeffs: dict):
        self.degree = degree
        clean = {}
        for ell, c in coeffs.items():
            ell = MultiIndex(ell)
            if ell.weight != degree:
                raise BadRange(f"{ell!r} is not a partition of {degree}")
            if c == 0:
                continue
            clean[ell] = c
        self.coeffs = clean

    def __repr__(self):
        return f"BPP({self.degree}, {self.coeffs!r})"

    def __eq__(self, other):
        return isinstance(other, BPP) and self.degree == other.degree and self.coeffs == other.coeffs

    @classmethod
    def constant(cls, c=1) -> "BPP":
        return cls(0, {MultiIndex(): c})

    def __add__(self, other: "BPP") -> "BPP":
        if self.degree != other.degree:
            raise BadRange("BPPs of different degrees do not add")
        out = dict(self.coeffs)
        for ell, c in other.coeffs.items():
            out[ell] = out.get(ell, 0) + c
        return BPP(self.degree, out)

    def scale(self, r) -> "BPP":
        return BPP(self.degree, {ell: r * c for ell, c in self.coeffs.items()})

    def __mul__(self, other: "BPP") -> "BPP":
        return bpp_product(self, other)

    def evaluate(self, xs: Sequence):
        """Evaluate at ``x_1 = xs[0], x_2 = xs[1], ...``."""
        total = 0
        for ell, c in self.coeffs.items():
            term = c
            for p, lp in enumerate(ell, start=1):
                if lp:
                    term = term * xs[p - 1] ** lp
            total = total + term
        return total


def bpp_product(P: BPP, Q: BPP) -> BPP:
    """Multivariate Cauchy product; the result is an ``(n+m)``-BPP."""
    out: dict = {}
    for ell, a in P.coeffs.items():
        for lam, c in Q.coeffs.items():
            L = ell + lam
            out[L] = out.get(L, 0) + a * c
    return BPP(P.degree + Q.degree, out)


def partial_bell_as_bpp(n: int, k: int, x0=1) -> BPP:
    """``B^_{n,k}(x_0, x_1, ..., x_{n-k})`` as an ``(n-k)``-BPP in ``x_1..x_{n-k}``.

    The coefficient of ``lambda`` is ``multinomial(k; lambda, k - |lambda|) x_0^{k - |lambda|}``.
    """
    _check_range(n, k)
    coeffs = {}
    for lam in enumerate_partitions(n - k, n - k):
        rest = k - lam.size
        if rest < 0:
            continue
        coeffs[lam] = multinomial(k, list(lam) + [rest]) * x0**rest
    return BPP(n - k, coeffs)
