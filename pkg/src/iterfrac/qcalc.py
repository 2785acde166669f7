"""q-analogues: q-factorials, q-binomials with scalar upper argument, Gauss's
expansion, the q-derivative and two summation identities.

``q = 1`` is never special-cased into separate formulas: ``[s]_1 = s`` is the
removable-singularity value, so everything here also runs at the classical
point.
"""
from __future__ import annotations

import math

from .errors import QDegenerate
from .scalar import EXACT, ExactField, Field, as_int, q_number, scalar_pow
from .series import Series


class QContext:
    """A fixed ``q`` with memoized integer powers.

    One context per computation; the memo is private and never shared.
    """

    def __init__(self, q, field: Field = EXACT):
        q = field.lift(q)
        if q == 0:
            raise QDegenerate("q = 0")
        self.q = q
        self.field = field
        self.is_one = field.is_one(q)
        self._pow = {0: field.one(), 1: q}

    def __repr__(self):
        return f"QContext(q={self.q!r}, {self.field!r})"

    def power(self, n):
        """``q**n``; integer ``n`` is memoized, anything else goes through ``scalar_pow``."""
        m = as_int(n)
        if m is None:
            return scalar_pow(self.q, n, self.field)
        got = self._pow.get(m)
        if got is None:
            if m > 0:
                got = self.power(m - 1) * self.q
            else:
                got = self.power(m + 1) / self.q
            self._pow[m] = got
        return got

    def number(self, s):
        """``[s]_q``."""
        m = as_int(s)
        if m is not None:
            if self.is_one:
                return self.field.coerce(m)
            if m >= 0:
                if isinstance(self.field, ExactField):
                    return (self.power(m) - 1) / (self.q - 1)
            return q_number(m, self.q, self.field)
        if self.is_one:
            return self.field.exponent_value(s)
        return q_number(s, self.q, self.field)

    def is_degenerate(self, n: int) -> bool:
        """True when some ``[p]_q`` with ``1 <= p <= n`` vanishes."""
        return any(self.field.is_zero(self.number(p)) for p in range(1, n + 1))


def q_factorial(n: int, ctx: QContext):
    """``[n]_q! = [n]_q [n-1]_q ... [1]_q``."""
    if n < 0:
        raise ValueError("q-factorial of a negative integer")
    out = ctx.field.one()
    for p in range(1, n + 1):
        qp = ctx.number(p)
        if ctx.field.is_zero(qp):
            raise QDegenerate(f"[{p}]_q = 0 for q = {ctx.q}")
        out = out * qp
    return out


def q_binomial(s, p: int, ctx: QContext):
    """``[s]_q [s-1]_q ... [s-p+1]_q / [p]_q!`` for any exponent ``s``."""
    if p < 0:
        return ctx.field.zero()
    denom = q_factorial(p, ctx)
    num = ctx.field.one()
    for ell in range(p):
        num = num * ctx.number(s - ell)
    return num / denom


def binomial(x, p: int, field: Field = EXACT):
    """Classical generalized binomial ``x (x-1) ... (x-p+1) / p!``."""
    if p < 0:
        return field.zero()
    m = as_int(x)
    if m is not None and m >= 0:
        return field.coerce(math.comb(m, p))
    x = field.exponent_value(x)
    num = field.one()
    for i in range(p):
        num = num * (x - i)
    return num / math.factorial(p)


def gauss_expand(n: int, ctx: QContext) -> list:
    """Coefficients of ``y^l x^(n-l)`` in ``(x + y)(x + qy)...(x + q^(n-1) y)``."""
    return [q_binomial(n, ell, ctx) * ctx.power(ell * (ell - 1) // 2) for ell in range(n + 1)]


def q_derivative(f: Series, ctx: QContext) -> Series:
    """``D_q``: ``x^n -> [n]_q x^(n-1)``; the ordinary derivative at ``q = 1``."""
    coeffs = [ctx.number(n) * f.coeffs[n] for n in range(1, len(f.coeffs))]
    if not coeffs:
        coeffs = [ctx.field.zero()]
    return Series(tuple(coeffs), f.field)


def alt_sum_identity(a, b: int, ctx: QContext):
    """Closed form of ``sum_{p<=b} qbinom(a, p) q^C(p,2) (-1)^p``, namely
    ``qbinom(b - a, b) q^(b a)``."""
    if b < 0:
        raise ValueError("b must be nonnegative")
    return q_binomial(b - a, b, ctx) * ctx.power(b * a)


def hockey_stick(n: int, ell: int, ctx: QContext):
    """Closed form of ``sum_{p=ell}^{n-1} qbinom(p-1, ell-1) q^(-ell p)``."""
    if not 1 <= ell <= n - 1:
        raise ValueError(f"need 1 <= ell <= n-1, got n={n}, ell={ell}")
    return q_binomial(n - 1, ell, ctx) * ctx.power(-ell * (n - 1))

