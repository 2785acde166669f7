"""Truncated formal power series.

A :class:`Series` keeps ordinary coefficients ``c_0..c_N``; exponential
coefficients ``a_n = n! c_n`` are computed on demand.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    ConstantTermNonzero,
    DerivativeZero,
    ModeMismatch,
    NotFixedPoint,
    NotInvertible,
    OrderTooLarge,
)
from .scalar import EXACT, Field, NumericField

DEFAULT_ORDER = 16
MAX_ORDER = 40


def check_order(N: int) -> int:
    if N < 1:
        raise OrderTooLarge(f"truncation order must be positive, got {N}")
    if N > MAX_ORDER:
        raise OrderTooLarge(f"truncation order {N} exceeds the cap {MAX_ORDER}")
    return N


@dataclass(frozen=True)
class Series:
    coeffs: tuple
    field: Field = EXACT

    @classmethod
    def of(cls, values: Sequence, field: Field = EXACT) -> "Series":
        return cls(tuple(field.coerce(v) for v in values), field)

    @classmethod
    def from_exponential(cls, values: Sequence, field: Field = EXACT) -> "Series":
        return cls.of(exp_ord_convert([field.coerce(v) for v in values], "exp_to_ord"), field)

    @classmethod
    def identity(cls, N: int, field: Field = EXACT) -> "Series":
        return cls.of([0, 1] + [0] * (N - 1), field)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def q(self):
        """``f'(0)``."""
        return self.coeffs[1]

    def __getitem__(self, n):
        return self.coeffs[n] if n < len(self.coeffs) else self.field.zero()

    def __len__(self):
        return len(self.coeffs)

    def is_invertible(self) -> bool:
        return (
            len(self.coeffs) > 1
            and self.field.is_zero(self.coeffs[0])
            and not self.field.is_zero(self.coeffs[1])
        )

    def require_invertible(self) -> None:
        if len(self.coeffs) < 2:
            raise NotInvertible("series has no linear term")
        if not self.field.is_zero(self.coeffs[0]):
            raise NotInvertible("f(0) != 0")
        if self.field.is_zero(self.coeffs[1]):
            raise NotInvertible("f'(0) = 0")

    def truncate(self, N: int) -> "Series":
        if N + 1 <= len(self.coeffs):
            return Series(self.coeffs[: N + 1], self.field)
        return Series(self.coeffs + (self.field.zero(),) * (N + 1 - len(self.coeffs)), self.field)

    def exponential(self) -> list:
        return exp_ord_convert(list(self.coeffs), "ord_to_exp")

    def to_numeric(self, field: NumericField) -> "Series":
        if isinstance(self.field, NumericField):
            return Series(tuple(field.coerce(c) for c in self.coeffs), field)
        return Series(tuple(field.from_rational(c) for c in self.coeffs), field)

    def _check(self, other: "Series") -> None:
        if self.field != other.field:
            raise ModeMismatch(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other: "Series") -> "Series":
        self._check(other)
        N = min(self.order, other.order)
        return Series(tuple(self.coeffs[i] + other.coeffs[i] for i in range(N + 1)), self.field)

    def __sub__(self, other: "Series") -> "Series":
        self._check(other)
        N = min(self.order, other.order)
        return Series(tuple(self.coeffs[i] - other.coeffs[i] for i in range(N + 1)), self.field)

    def __mul__(self, other: "Series") -> "Series":
        self._check(other)
        N = min(self.order, other.order)
        return Series(tuple(_mul(self.coeffs, other.coeffs, N, self.field.zero())), self.field)

    def scale(self, c) -> "Series":
        c = self.field.lift(c)
        return Series(tuple(c * v for v in self.coeffs), self.field)

    def power(self, k: int) -> "Series":
        """``self**k`` for ``k >= 0`` through the current order."""
        result = Series.of([1] + [0] * self.order, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def close(self, other: "Series", rtol=None) -> bool:
        self._check(other)
        N = min(self.order, other.order)
        return all(self.field.close(self.coeffs[i], other.coeffs[i], rtol) for i in range(N + 1))

    def to_json(self, kind: str = "ordinary") -> dict:
        values = self.coeffs if kind == "ordinary" else self.exponential()
        return {"kind": kind, "values": [self.field.to_json(v) for v in values], "mode": self.field.mode}

    @classmethod
    def from_json(cls, obj: dict, field: Field | None = None) -> "Series":
        mode = obj.get("mode", "exact")
        if field is None:
            field = EXACT if mode == "exact" else NumericField()
        elif field.mode != mode and mode == "numeric":
            raise ModeMismatch("numeric series requested in exact mode")
        if mode == "exact" and isinstance(field, NumericField):
            values = [field.from_rational(Fraction(v)) for v in obj["values"]]
        else:
            values = [field.from_json(v) for v in obj["values"]]
        if obj.get("kind", "ordinary") == "exponential":
            values = exp_ord_convert(values, "exp_to_ord")
        return cls(tuple(values), field)


def _mul(a, b, N, zero):
    out = [zero] * (N + 1)
    for i in range(min(N, len(a) - 1) + 1):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(min(N - i, len(b) - 1) + 1):
            out[i + j] += ai * b[j]
    return out


def exp_ord_convert(coeffs: list, direction: str) -> list:
    """Scale by ``n!`` (``"ord_to_exp"``) or by ``1/n!`` (``"exp_to_ord"``)."""
    out = []
    for n, c in enumerate(coeffs):
        fact = math.factorial(n)
        if direction == "ord_to_exp":
            out.append(c * fact)
        elif direction == "exp_to_ord":
            out.append(c / fact if not isinstance(c, int) else Fraction(c, fact))
        else:
            raise ValueError(f"unknown direction {direction!r}")
    return out


def compose(f: Series, g: Series, N: int | None = None) -> Series:
    """``f(g(x))`` through order ``N`` (Horner's scheme)."""
    f._check(g)
    if not g.field.is_zero(g[0]):
        raise ConstantTermNonzero("inner series must vanish at 0")
    if N is None:
        N = min(f.order, g.order)
    zero = f.field.zero()
    gc = list(g.truncate(N).coeffs)
    acc = [zero] * (N + 1)
    for m in range(min(f.order, N), -1, -1):
        acc = _mul(acc, gc, N, zero)
        acc[0] += f.coeffs[m]
    return Series(tuple(acc), f.field)


def _reciprocal(h: list, N: int, zero):
    """Multiplicative inverse of a series with nonzero constant term."""
    inv = [zero] * (N + 1)
    inv[0] = 1 / h[0]
    for n in range(1, N + 1):
        acc = zero
        for i in range(1, min(n, len(h) - 1) + 1):
            acc += h[i] * inv[n - i]
        inv[n] = -acc * inv[0]
    return inv


def comp_inverse(f: Series, N: int | None = None) -> Series:
    """Compositional inverse by Lagrange inversion, ``g_n = [x^{n-1}] (x/f)^n / n``."""
    f.require_invertible()
    if N is None:
        N = f.order
    zero = f.field.zero()
    # x/f(x) = 1/(c_1 + c_2 x + ...)
    shifted = list(f.truncate(N + 1).coeffs[1:])
    h = _reciprocal(shifted, N, zero)
    out = [zero] * (N + 1)
    hp = [f.field.one()] + [zero] * N
    for n in range(1, N + 1):
        hp = _mul(hp, h, N, zero)
        out[n] = hp[n - 1] / n
    return Series(tuple(out), f.field)


def evaluate(f: Series, x):
    acc = f.field.zero()
    for c in reversed(f.coeffs):
        acc = acc * x + c
    return acc


def shift_fixed_point(f: Series, a, N: int | None = None) -> Series:
    """``g(x) = f(x + a) - a`` for a fixed point ``a``; ``f^n(x) = g^n(x - a) + a``.

    The truncated coefficients of ``f`` are read as a polynomial.
    """
    field = f.field
    a = field.coerce(a)
    if N is None:
        N = f.order
    if not field.close(evaluate(f, a), a):
        raise NotFixedPoint(f"f({a}) != {a}")
    deg = f.order
    # Taylor shift: coefficient j of f(x+a) is sum_m c_m C(m,j) a^(m-j)
    out = []
    for j in range(deg + 1):
        acc = field.zero()
        for m in range(j, deg + 1):
            acc += f.coeffs[m] * math.comb(m, j) * a ** (m - j)
        out.append(acc)
    out[0] = field.zero()
    if field.is_zero(out[1]):
        raise DerivativeZero(f"f'({a}) = 0")
    return Series(tuple(out), field).truncate(N)


_PRESET_RE = re.compile(r"^\s*(\w+)\s*(?:\(\s*([^)]*)\s*\))?\s*$")


def preset(name: str, N: int = DEFAULT_ORDER, field: Field = EXACT) -> Series:
    """Named series: ``geometric``, ``quad``, ``moebius(q)``, ``linear(q)``, ``expm1``."""
    m = _PRESET_RE.match(name)
    if not m:
        raise ValueError(f"bad preset {name!r}")
    kind, arg = m.group(1), m.group(2)

    def param():
        if arg is None:
            raise ValueError(f"preset {kind} needs a parameter, e.g. {kind}(2)")
        return field.coerce(arg)

    zero = [0] * (N + 1)
    if kind == "geometric":
        return Series.of([0] + [1] * N, field)
    if kind == "quad":
        vals = zero[:]
        vals[1] = 1
        if N >= 2:
            vals[2] = 1
        return Series.of(vals, field)
    if kind == "moebius":
        q = param()
        return Series(tuple([field.zero()] + [q] * N), field)
    if kind == "linear":
        q = param()
        return Series(tuple([field.zero(), q] + [field.zero()] * (N - 1)), field)
    if kind == "expm1":
        return Series.from_exponential([0] + [1] * N, field)
    raise ValueError(f"unknown preset {kind!r}")


def load_series(text: str, N: int, field: Field) -> Series:
    """A preset name or a path to a JSON series file."""
    if text.lstrip().startswith("{"):
        obj = json.loads(text)
    else:
        try:
            with open(text) as fh:
                obj = json.load(fh)
        except FileNotFoundError:
            return preset(text, N, field)
    return Series.from_json(obj, field).truncate(N)
