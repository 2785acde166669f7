"""Lower-triangular coefficient tables of linear operators on polynomials.

For an operator ``U`` with ``U x^n = sum_k [n k]_U x^k`` the table stores
``rows[n][k] = [n k]_U`` for ``0 <= k <= n <= N``.  Composition ``UV`` maps to
``[n k]_UV = sum_j [j k]_U [n j]_V``; a product of several factors is a sum
over increasing index chains, which :func:`column_chain_sums` evaluates by
dynamic programming and :func:`chain_sum` by explicit enumeration.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .bell import partial_bell_exp
from .errors import ModeMismatch, SizeMismatch
from .scalar import EXACT, Field
from .series import Series


@dataclass(frozen=True)
class CoeffTriangle:
    rows: tuple
    field: Field = EXACT

    @property
    def size(self) -> int:
        return len(self.rows) - 1

    def __getitem__(self, nk):
        n, k = nk
        if k > n or k < 0:
            return self.field.zero()
        return self.rows[n][k]

    @classmethod
    def from_rows(cls, rows, field: Field = EXACT) -> "CoeffTriangle":
        return cls(tuple(tuple(r) for r in rows), field)

    @classmethod
    def identity(cls, N: int, field: Field = EXACT) -> "CoeffTriangle":
        one, zero = field.one(), field.zero()
        return cls(tuple(tuple(one if k == n else zero for k in range(n + 1)) for n in range(N + 1)), field)

    @classmethod
    def build(cls, N: int, entry: Callable[[int, int], object], field: Field = EXACT) -> "CoeffTriangle":
        return cls(tuple(tuple(entry(n, k) for k in range(n + 1)) for n in range(N + 1)), field)

    def _check(self, other: "CoeffTriangle") -> None:
        if self.field != other.field:
            raise ModeMismatch(f"{self.field!r} vs {other.field!r}")
        if self.size != other.size:
            raise SizeMismatch(f"sizes {self.size} and {other.size}")

    def __add__(self, other: "CoeffTriangle") -> "CoeffTriangle":
        self._check(other)
        return CoeffTriangle(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.field
        )

    def __sub__(self, other: "CoeffTriangle") -> "CoeffTriangle":
        self._check(other)
        return CoeffTriangle(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.field
        )

    def scale(self, c) -> "CoeffTriangle":
        c = self.field.lift(c)
        return CoeffTriangle(tuple(tuple(c * a for a in r) for r in self.rows), self.field)

    def shift_diagonal(self, c) -> "CoeffTriangle":
        """The table of ``U - c``."""
        return CoeffTriangle(
            tuple(tuple(a - c if k == n else a for k, a in enumerate(r)) for n, r in enumerate(self.rows)),
            self.field,
        )

    def __matmul__(self, other: "CoeffTriangle") -> "CoeffTriangle":
        return triangle_product(self, other)

    def power(self, s: int) -> "CoeffTriangle":
        out = CoeffTriangle.identity(self.size, self.field)
        for _ in range(s):
            out = triangle_product(out, self)
        return out

    def column(self, k: int) -> list:
        return [self[n, k] for n in range(self.size + 1)]

    def close(self, other: "CoeffTriangle", rtol=None) -> bool:
        self._check(other)
        return all(
            self.field.close(a, b, rtol) for r, s in zip(self.rows, other.rows) for a, b in zip(r, s)
        )

    def max_rel_deviation(self, other: "CoeffTriangle"):
        self._check(other)
        worst = 0
        for r, s in zip(self.rows, other.rows):
            for a, b in zip(r, s):
                scale = max(abs(a), abs(b), 1)
                worst = max(worst, abs(a - b) / scale)
        return worst

    def to_series(self) -> Series:
        """Ordinary coefficients of ``f`` read off column 1: ``[n 1] / n!``."""
        import math

        vals = [self.field.zero()] + [self[n, 1] / math.factorial(n) for n in range(1, self.size + 1)]
        return Series(tuple(vals), self.field)

    def to_json(self) -> list:
        return [[self.field.to_json(a) for a in r] for r in self.rows]


def triangle_product(U: CoeffTriangle, V: CoeffTriangle) -> CoeffTriangle:
    """``[n k]_UV = sum_{j=k}^{n} [j k]_U [n j]_V``."""
    U._check(V)
    N = U.size
    zero = U.field.zero()
    rows = []
    for n in range(N + 1):
        vrow = V.rows[n]
        row = []
        for k in range(n + 1):
            acc = zero
            for j in range(k, n + 1):
                u = U.rows[j][k]
                if u != 0:
                    acc += u * vrow[j]
            row.append(acc)
        rows.append(tuple(row))
    return CoeffTriangle(tuple(rows), U.field)


def phi_triangle(f: Series, N: int | None = None) -> CoeffTriangle:
    """Coefficients of the umbral operator of ``f``: ``[n k] = B_{n,k}(a_1, a_2, ...)``."""
    f.require_invertible()
    if N is None:
        N = f.order
    a = f.truncate(N).exponential()[1:]
    zero, one = f.field.zero(), f.field.one()

    def entry(n, k):
        if k == 0:
            return one if n == 0 else zero
        return f.field.lift(partial_bell_exp(n, k, a))

    return CoeffTriangle.build(N, entry, f.field)


def column_chain_sums(k: int, factors: Sequence[CoeffTriangle], strict: bool = False) -> list:
    """Running chain sums for one column.

    Returns ``out`` with ``out[p][n] = sum over k = j_0 <= ... <= j_p = n of
    prod_i factors[i][j_{i+1}, j_i]`` for ``p = 0..len(factors)``.  With
    ``strict`` the chain must increase strictly (diagonal entries skipped).
    """
    if not factors:
        raise ValueError("need at least one factor to fix the size")
    N = factors[0].size
    field = factors[0].field
    zero = field.zero()
    v = [zero] * (N + 1)
    v[k] = field.one()
    out = [v]
    for T in factors:
        nxt = [zero] * (N + 1)
        for m in range(k, N + 1):
            row = T.rows[m]
            acc = zero
            for j in range(k, m if strict else m + 1):
                if v[j] != 0:
                    acc += v[j] * row[j]
            nxt[m] = acc
        v = nxt
        out.append(v)
    return out


def enumerate_chains(k: int, n: int, steps: int, strict: bool = False) -> Iterator[tuple]:
    """Index chains ``k = j_0 <= j_1 <= ... <= j_steps = n`` (``<`` when strict)."""
    if steps == 0:
        if k == n:
            yield (k,)
        return
    lo = k + 1 if strict else k
    for nxt in range(lo, n + 1):
        # the remaining chain must still be able to reach n
        if strict and n - nxt < steps - 1:
            break
        for tail in enumerate_chains(nxt, n, steps - 1, strict):
            yield (k,) + tail


def chain_sum(factors: Sequence[CoeffTriangle], k: int, n: int, strict: bool = False):
    """``[n k]`` of the product of ``factors`` by explicit depth-first chain enumeration.

    Partial products that hit an exact zero prune the whole subtree.
    """
    field = factors[0].field
    p = len(factors)

    def rec(i, j, acc):
        if i == p:
            return acc if j == n else field.zero()
        total = field.zero()
        lo = j + 1 if strict else j
        for nxt in range(lo, n + 1):
            if strict and n - nxt < p - i - 1:
                break
            w = factors[i][nxt, j]
            if w == 0:
                continue
            total += rec(i + 1, nxt, acc * w)
        return total

    return rec(0, k, field.one())
