"""Scalar fields: exact rationals and arbitrary-precision complex numbers.

Values are plain Python objects (``int``/``Fraction`` in exact mode, mpmath
``mpc`` in numeric mode).  A :class:`Field` tags the mode, owns the numeric
precision, and is the gatekeeper that refuses to mix the two kinds.
"""
from __future__ import annotations

import os
import re
from fractions import Fraction
from numbers import Integral, Rational
from typing import Union

import mpmath

from .errors import ExactInfeasible, ModeMismatch, ZeroBase

DEFAULT_BITS = 128
DEFAULT_RTOL = 1e-25
# |q - 1| below this is treated as the unitary case in numeric mode.
UNIT_BAND = 1e-30

Exponent = Union[int, Fraction, "mpmath.mpc"]


def default_bits() -> int:
    env = os.environ.get("ITERFRAC_BITS")
    return int(env) if env else DEFAULT_BITS


class Field:
    """Common interface of the two scalar modes."""

    mode: str

    def coerce(self, x):
        raise NotImplementedError

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def is_zero(self, x) -> bool:
        raise NotImplementedError

    def is_one(self, x) -> bool:
        return self.is_zero(x - 1)

    def close(self, a, b, rtol=None) -> bool:
        raise NotImplementedError


class ExactField(Field):
    mode = "exact"

    def __repr__(self):
        return "ExactField()"

    def __eq__(self, other):
        return isinstance(other, ExactField)

    def __hash__(self):
        return hash("exact")

    def coerce(self, x):
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, Integral):
            return Fraction(int(x))
        if isinstance(x, Fraction):
            return x
        if isinstance(x, Rational):
            return Fraction(x.numerator, x.denominator)
        if isinstance(x, str):
            return Fraction(x.strip())
        raise ModeMismatch(f"exact field cannot hold {type(x).__name__} value {x!r}")

    def lift(self, x):
        return self.coerce(x)

    def is_zero(self, x) -> bool:
        return x == 0

    def is_one(self, x) -> bool:
        return x == 1

    def close(self, a, b, rtol=None) -> bool:
        return a == b

    def exponent_value(self, s):
        if isinstance(s, (int, Fraction)):
            return Fraction(s)
        raise ModeMismatch(f"numeric exponent {s!r} used in exact mode")

    def log(self, q):
        raise ExactInfeasible("log of a rational is not rational")

    def to_json(self, x) -> str:
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"

    def from_json(self, obj):
        if isinstance(obj, dict):
            raise ModeMismatch("numeric scalar record given to exact field")
        return self.coerce(obj)

    def abs(self, x):
        return abs(x)


class NumericField(Field):
    """Complex floating point with ``bits`` mantissa bits.

    Each instance owns a private mpmath context, so two fields with different
    precision never disturb each other (or the global ``mpmath.mp``).
    """

    mode = "numeric"

    def __init__(self, bits: int | None = None, rtol: float = DEFAULT_RTOL):
        self.bits = bits or default_bits()
        self.rtol = rtol
        self.ctx = mpmath.MPContext()
        self.ctx.prec = self.bits

    def __repr__(self):
        return f"NumericField(bits={self.bits})"

    def __eq__(self, other):
        return isinstance(other, NumericField) and other.bits == self.bits

    def __hash__(self):
        return hash(("numeric", self.bits))

    def coerce(self, x):
        ctx = self.ctx
        if isinstance(x, Fraction):
            raise ModeMismatch(f"exact value {x} given to numeric field; use to_numeric")
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, str):
            return parse_complex(x, self)
        if isinstance(x, (Integral, float, complex)):
            return ctx.mpc(x)
        if hasattr(x, "_mpc_") or hasattr(x, "_mpf_"):
            return ctx.mpc(x)
        raise ModeMismatch(f"numeric field cannot hold {type(x).__name__}")

    def from_rational(self, x):
        """Explicit exact-to-numeric conversion."""
        x = Fraction(x)
        return self.ctx.mpc(self.ctx.mpf(x.numerator) / x.denominator)

    def lift(self, x):
        """Like ``coerce`` but also converts exact rationals."""
        if isinstance(x, Fraction):
            return self.from_rational(x)
        return self.coerce(x)

    def is_zero(self, x) -> bool:
        return abs(x) < UNIT_BAND

    def is_one(self, x) -> bool:
        return abs(x - 1) < UNIT_BAND

    def close(self, a, b, rtol=None) -> bool:
        rtol = self.rtol if rtol is None else rtol
        scale = max(abs(a), abs(b), 1)
        return abs(a - b) <= rtol * scale

    def exponent_value(self, s):
        if isinstance(s, Fraction):
            return self.from_rational(s)
        return self.coerce(s)

    def log(self, q):
        return self.ctx.log(q)

    def to_json(self, x) -> dict:
        x = self.ctx.mpc(x)
        digits = max(int(self.bits * 0.30103), 1)
        return {
            "re": self.ctx.nstr(x.real, digits),
            "im": self.ctx.nstr(x.imag, digits),
            "bits": self.bits,
        }

    def from_json(self, obj):
        if isinstance(obj, dict):
            return self.ctx.mpc(self.ctx.mpf(obj["re"]), self.ctx.mpf(obj.get("im", "0")))
        if isinstance(obj, str) and "/" in obj:
            return self.from_rational(Fraction(obj))
        return self.coerce(obj)

    def abs(self, x):
        return abs(x)


EXACT = ExactField()

_COMPLEX_RE = re.compile(
    r"^\s*(?P<re>[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)"
    r"(\s*(?P<im>[+-]\s*(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)\s*[ij])?\s*$"
)


def parse_complex(text: str, field: NumericField):
    """Parse ``"0.3"``, ``"0.7+0.1i"``, ``"1/3"`` into a numeric scalar."""
    text = text.strip()
    if "/" in text:
        return field.from_rational(Fraction(text))
    m = _COMPLEX_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse complex number {text!r}")
    ctx = field.ctx
    re_part = ctx.mpf(m.group("re"))
    im_part = ctx.mpf(m.group("im").replace(" ", "")) if m.group("im") else ctx.mpf(0)
    return ctx.mpc(re_part, im_part)


def parse_exponent(text: str, field: Field) -> Exponent:
    """Parse an iteration exponent.

    ``3`` and ``-2`` give ``int``, ``1/2`` gives ``Fraction``, anything with a
    decimal point or an imaginary unit gives a numeric complex (which is only
    legal in numeric mode).
    """
    text = text.strip()
    if re.fullmatch(r"[+-]?\d+", text):
        return int(text)
    if re.fullmatch(r"[+-]?\d+\s*/\s*\d+", text):
        s = Fraction(text.replace(" ", ""))
        return s.numerator if s.denominator == 1 else s
    if not _COMPLEX_RE.match(text):
        raise ValueError(f"cannot parse exponent {text!r}")
    if isinstance(field, ExactField):
        raise ModeMismatch(f"exponent {text!r} needs numeric mode")
    return parse_complex(text, field)


def as_int(s) -> int | None:
    """Return ``s`` as an int when it is an exact integer, else ``None``."""
    if isinstance(s, bool):
        return int(s)
    if isinstance(s, Integral):
        return int(s)
    if isinstance(s, Fraction) and s.denominator == 1:
        return s.numerator
    return None


def exponent_kind(s) -> str:
    if as_int(s) is not None:
        return "int"
    if isinstance(s, Fraction):
        return "rat"
    return "num"


def exact_power_feasible(q, s) -> bool:
    return as_int(s) is not None or q == 1


def scalar_pow(q, s, field: Field):
    """``q**s``; principal branch ``exp(s log q)`` for non-integer numeric powers."""
    if q == 0:
        raise ZeroBase("0 cannot be raised to an iteration exponent")
    n = as_int(s)
    if isinstance(field, ExactField):
        if n is not None:
            return Fraction(q) ** n
        if q == 1:
            return Fraction(1)
        raise ExactInfeasible(f"{q}^{s} is not rational in general")
    if n is not None:
        return field.ctx.mpc(q) ** n
    sv = field.exponent_value(s)
    return field.ctx.exp(sv * field.ctx.log(q))


def q_number(s, q, field: Field):
    """The q-analogue ``[s]_q = (q^s - 1)/(q - 1)``, equal to ``s`` at ``q = 1``."""
    n = as_int(s)
    if n is not None:
        if n < 0:
            return -scalar_pow(q, n, field) * q_number(-n, q, field)
        if isinstance(field, ExactField):
            if q == 1:
                return Fraction(n)
            return (Fraction(q) ** n - 1) / (q - 1)
        q = field.ctx.mpc(q)
        if abs(q - 1) < 0.5:
            # geometric sum stays accurate near q = 1
            total, term = field.ctx.mpc(0), field.ctx.mpc(1)
            for _ in range(n):
                total += term
                term *= q
            return total
        return (q**n - 1) / (q - 1)
    if isinstance(field, ExactField):
        if q == 1:
            return Fraction(s)
        raise ExactInfeasible(f"[{s}]_{q} is not rational in general")
    ctx = field.ctx
    sv = field.exponent_value(s)
    if q == 1:
        return sv
    if q == 0:
        raise ZeroBase("q = 0")
    d = ctx.mpc(q) - 1
    return ctx.expm1(sv * ctx.log1p(d)) / d
