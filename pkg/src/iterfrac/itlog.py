"""Iterative logarithm ``itlog(f) = d/ds f^s`` at ``s = 0``.

For ``q = f'(0) != 1`` every coefficient carries the factor ``log q``; the
result keeps it apart from a body that stays rational in exact mode.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UnitaryRequired
from .iterate import discrete_powers, iterate, pochhammer_terms, schroder_terms, with_guard_bits
from .qcalc import QContext, q_binomial
from .scalar import ExactField, Field, NumericField
from .series import Series
from .triangle import phi_triangle

FORMS = ("pochhammer", "discrete", "classical")


@dataclass(frozen=True)
class ItlogResult:
    """``itlog(f) = multiplier * sum_n body[n] x^n / n!``.

    ``log_of`` is ``q`` when the multiplier is ``log q`` and ``None`` when it
    is 1 (the unitary case).
    """

    body: tuple
    log_of: object
    field: Field

    @property
    def order(self) -> int:
        """Index of the first nonzero coefficient (0 if all vanish)."""
        for n, c in enumerate(self.body):
            if not self.field.is_zero(c):
                return n
        return 0

    def multiplier(self, field: NumericField | None = None):
        if self.log_of is None:
            return (field or self.field).one()
        field = field or self.field
        if isinstance(field, ExactField):
            raise TypeError("log q is transcendental; pass a numeric field")
        return field.ctx.log(field.lift(self.log_of))

    def exponential(self, field: Field | None = None) -> list:
        """Exponential coefficients with the multiplier applied."""
        field = field or self.field
        if self.log_of is None and isinstance(field, ExactField):
            return list(self.body)
        m = self.multiplier(field)
        return [m * field.lift(c) for c in self.body]

    def ordinary(self, field: Field | None = None) -> list:
        return [c / math.factorial(n) for n, c in enumerate(self.exponential(field))]

    def to_json(self) -> dict:
        if self.log_of is None:
            mult = "1"
        elif isinstance(self.field, ExactField):
            mult = f"log({self.field.to_json(self.log_of)})"
        else:
            mult = self.field.to_json(self.multiplier())
        return {"multiplier": mult, "coeffs": [self.field.to_json(c) for c in self.body]}


def _pochhammer_sums(f: Series, N: int, qctx: QContext) -> list:
    field = f.field
    terms = pochhammer_terms(f, 1, N, qctx)
    out = [field.zero()] * (N + 1)
    for n in range(2, N + 1):
        acc = field.zero()
        for p in range(1, n):
            t = terms[p][n]
            if t == 0:
                continue
            w = t / qctx.number(p) * qctx.power(-(p * (p + 1) // 2))
            acc += w if p % 2 == 1 else -w
        out[n] = acc
    return out


def _discrete_sums(f: Series, N: int, qctx: QContext) -> list:
    field = f.field
    powers = discrete_powers(phi_triangle(f, N), N)
    out = [field.zero()] * (N + 1)
    for n in range(2, N + 1):
        acc = field.zero()
        for p in range(1, n):
            w = (
                powers[p][n, 1]
                / qctx.number(p)
                * q_binomial(n - 1, p, qctx)
                * qctx.power(p * (p + 1) // 2 - p * n)
            )
            acc += w if p % 2 == 1 else -w
        out[n] = acc
    return out


def _classical(f: Series, N: int) -> list:
    field = f.field
    terms = schroder_terms(f, N)
    out = [field.zero()] * (N + 1)
    for n in range(2, N + 1):
        acc = field.zero()
        for p in range(1, n):
            w = terms[p][n, 1] / p
            acc += w if p % 2 == 1 else -w
        out[n] = acc
    return out


def itlog(f: Series, N: int | None = None, form: str | None = None) -> ItlogResult:
    """Exponential coefficients of ``itlog(f)`` through order ``N``.

    ``form`` is ``"pochhammer"`` (q-Pochhammer chains), ``"discrete"``
    (discrete iterates with the q-hockey-stick closed form) or ``"classical"``
    (``q = 1`` only).  At ``q = 1`` the first two reduce to the classical
    coefficients, the factor ``log q / (q - 1)`` being replaced by its limit 1.
    """
    f.require_invertible()
    N = f.order if N is None else N
    field = f.field
    unitary = field.is_one(f.q)
    if form is None:
        form = "classical" if unitary else "pochhammer"
    if form == "classical":
        if not unitary:
            raise UnitaryRequired("the classical form needs f'(0) = 1")
        return ItlogResult(tuple(_classical(f, N)), None, field)
    if form not in FORMS:
        raise ValueError(f"unknown itlog form {form!r}; choose from {', '.join(FORMS)}")
    if isinstance(field, NumericField):
        body = with_guard_bits(lambda g, _: _q_body(g, N, form, unitary), f)
    else:
        body = _q_body(f, N, form, unitary)
    return ItlogResult(body, None if unitary else f.q, field)


def _q_body(f: Series, N: int, form: str, unitary: bool) -> tuple:
    field = f.field
    qctx = QContext(f.q, field)
    sums = (_pochhammer_sums if form == "pochhammer" else _discrete_sums)(f, N, qctx)
    if unitary:
        return tuple(sums)
    scale = 1 / (qctx.q - 1)
    body = [field.zero(), field.one()] + [c * scale for c in sums[2:]]
    return tuple(body[: N + 1])


def itlog_fd_check(f: Series, h, N: int | None = None):
    """``max_n |itlog_n - ([n 1]_{phi^h} - delta_{n1}) / h|`` (numeric mode).

    The forward difference is first order, so the deviation shrinks like ``h``.
    """
    field = f.field
    if not isinstance(field, NumericField):
        raise TypeError("finite-difference check needs numeric mode")
    N = f.order if N is None else N
    exact = itlog(f, N).exponential(field)
    hv = field.exponent_value(h)
    T = iterate(f, hv, N)
    worst = field.ctx.mpf(0)
    for n in range(1, N + 1):
        fd = (T[n, 1] - (1 if n == 1 else 0)) / hv
        worst = max(worst, abs(exact[n] - fd))
    return worst
