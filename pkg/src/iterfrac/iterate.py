"""Coefficients ``[n k]`` of the iterates ``phi^s`` of the umbral operator of ``f``.

Column ``k`` of the table of ``phi^s`` holds the exponential coefficients of
``f^s(x)^k / k!``; column 1 is ``f^s`` itself.

Discrete exponents (``s`` a nonnegative integer):

* ``matrix`` -- ``s``-th power of the generalized Jabotinsky matrix.
* ``monkam`` -- strict chains weighted by complete homogeneous symmetric
  polynomials of powers of ``q``.
* ``bpp`` -- one partition sum per entry, with coefficients ``C(L)``.

Any exponent:

* ``schroder`` / ``jabotinsky`` (+ ``jabotinsky_alt``, ``extracted``) when
  ``f'(0) = 1``.
* ``qschroder`` and ``tambs`` (+ ``lavoie``, ``qextracted``) for any ``q``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from typing import Callable

from .bell import MultiIndex, enumerate_partitions, homogeneous_sym, multinomial
from .errors import BadRange, BasicSequenceViolation, ExtractedPole, NegativeExponent, UnitaryRequired
from .qcalc import QContext, binomial, q_binomial
from .scalar import NumericField, as_int
from .series import Series, comp_inverse
from .triangle import CoeffTriangle, column_chain_sums, enumerate_chains, phi_triangle, triangle_product

DISCRETE_METHODS = ("matrix", "monkam", "bpp")
UNITARY_METHODS = ("schroder", "jabotinsky", "jabotinsky_alt", "extracted")
GENERAL_METHODS = ("qschroder", "tambs", "lavoie", "qextracted")
METHODS = DISCRETE_METHODS + UNITARY_METHODS + GENERAL_METHODS


def _order(f: Series, N):
    f.require_invertible()
    return f.order if N is None else N


def _natural(s) -> int:
    n = as_int(s)
    if n is None:
        raise BadRange(f"discrete formula needs an integer exponent, got {s!r}")
    if n < 0:
        raise NegativeExponent(f"s = {n} < 0; iterate the compositional inverse instead")
    return n


def _require_unitary(f: Series) -> None:
    if not f.field.is_one(f.q):
        raise UnitaryRequired(f"f'(0) = {f.q} != 1")


def _with_identity_column(N: int, field, entry: Callable[[int, int], object]) -> CoeffTriangle:
    # column 0 of any umbral operator is delta_n
    one, zero = field.one(), field.zero()

    def full(n, k):
        if k == 0:
            return one if n == 0 else zero
        return entry(n, k)

    return CoeffTriangle.build(N, full, field)


def discrete_powers(phi: CoeffTriangle, upto: int) -> list[CoeffTriangle]:
    """``[phi^0, phi^1, ..., phi^upto]``."""
    out = [CoeffTriangle.identity(phi.size, phi.field)]
    for _ in range(upto):
        out.append(triangle_product(out[-1], phi))
    return out


# ---------------------------------------------------------------- discrete


def iterate_discrete_matrix(f: Series, s: int, N: int | None = None) -> CoeffTriangle:
    """Sum over weakly increasing chains ``k = j_0 <= ... <= j_s = n`` of
    ``prod [j_{i+1} j_i]_phi``, i.e. the ``s``-th matrix power."""
    N = _order(f, N)
    s = _natural(s)
    phi = phi_triangle(f, N)
    out = CoeffTriangle.identity(N, f.field)
    for _ in range(s):
        out = triangle_product(out, phi)
    return out


def iterate_monkam(f: Series, s: int, N: int | None = None) -> CoeffTriangle:
    N = _order(f, N)
    s = _natural(s)
    phi = phi_triangle(f, N)
    qctx = QContext(f.q, f.field)
    field = f.field

    def entry(n, k):
        total = field.zero()
        for p in range(min(s, n - k) + 1):
            for chain in enumerate_chains(k, n, p, strict=True):
                w = field.one()
                for i in range(p):
                    w = w * phi[chain[i + 1], chain[i]]
                    if w == 0:
                        break
                if w == 0:
                    continue
                total += homogeneous_sym(s - p, [qctx.power(j) for j in chain]) * w
        return total

    return _with_identity_column(N, field, entry)


@lru_cache(maxsize=None)
def bpp_coefficients(s: int, k: int, d: int) -> dict:
    """``C(L)`` for every ``L`` in ``P_d`` as polynomials in ``q``.

    Returns ``{L: {exponent: integer coefficient}}``; the polynomials depend
    only on ``(s, k, d)``, so they are shared across series and ``q`` values.
    """

    @lru_cache(maxsize=None)
    def rest(i: int, R: tuple) -> dict:
        # sum over l_i + ... + l_s = R of q^(sum_t (s-t) <l_t>) prod multinomials
        used = d - MultiIndex(R).weight
        m = k + used
        if i == s:
            ell = MultiIndex(R)
            c = multinomial(m, list(ell) + [m - ell.size])
            return {0: c} if c else {}
        out: dict = {}
        for ell in iproduct(*(range(r + 1) for r in R)):
            ell = MultiIndex(ell)
            size = ell.size
            if size > m:
                continue
            c = multinomial(m, list(ell) + [m - size])
            wt = ell.weight
            shift = (s - i) * wt
            remaining = tuple(r - ell[p] for p, r in enumerate(R, start=1))
            for e, v in rest(i + 1, MultiIndex(remaining)).items():
                key = e + shift
                out[key] = out.get(key, 0) + c * v
        return {e: v for e, v in out.items() if v}

    table = {}
    for L in enumerate_partitions(d, d):
        base = s * k - L.size
        poly = rest(1, L) if s >= 1 else ({0: 1} if d == 0 else {})
        table[L] = {e + base: v for e, v in poly.items()}
    return table


def iterate_bpp(f: Series, s: int, N: int | None = None) -> CoeffTriangle:
    """``[n k] = n!/k! sum_{L in P_{n-k}} C(L) prod_p q_{p+1}^{L_p}``."""
    N = _order(f, N)
    s = _natural(s)
    if s == 0:
        return CoeffTriangle.identity(N, f.field)
    field = f.field
    qctx = QContext(f.q, field)
    qs = f.truncate(N).coeffs

    def entry(n, k):
        total = field.zero()
        for L, poly in bpp_coefficients(s, k, n - k).items():
            c = field.zero()
            for e, v in poly.items():
                c += v * qctx.power(e)
            if c == 0:
                continue
            for p, lp in enumerate(L, start=1):
                if lp:
                    c = c * qs[p + 1] ** lp
            total += c
        return total * math.factorial(n) / math.factorial(k)

    return _with_identity_column(N, field, entry)


# ---------------------------------------------------------------- unitary


def schroder_terms(f: Series, N: int | None = None) -> list[CoeffTriangle]:
    """``[n k]_{(phi-1)^p}`` via strict chains, ``p = 0..N``."""
    N = _order(f, N)
    phi = phi_triangle(f, N)
    field = f.field
    cols = [column_chain_sums(k, [phi] * N, strict=True) for k in range(N + 1)]
    return [CoeffTriangle.build(N, lambda n, k, p=p: cols[k][p][n], field) for p in range(N + 1)]


def iterate_schroder(f: Series, s, N: int | None = None) -> CoeffTriangle:
    N = _order(f, N)
    _require_unitary(f)
    terms = schroder_terms(f, N)
    field = f.field
    binoms = [binomial(s, p, field) for p in range(N + 1)]

    def entry(n, k):
        total = field.zero()
        for p in range(n - k + 1):
            total += binoms[p] * terms[p][n, k]
        return total

    return _with_identity_column(N, field, entry)


def _check_extracted(s, N: int, field) -> None:
    n = as_int(s)
    if n is not None and 0 <= n <= N - 1:
        raise ExtractedPole(f"extracted form is singular at integer s = {n}")
    if isinstance(field, NumericField) and not isinstance(s, int):
        sv = field.exponent_value(s)
        for p in range(N):
            if field.is_zero(sv - p):
                raise ExtractedPole(f"s is numerically the integer {p}")


def iterate_jabotinsky(f: Series, s, N: int | None = None, variant: str = "standard") -> CoeffTriangle:
    """Fractional iterate from the discrete ones.

    ``variant``: ``"standard"`` (``C(s,p) C(n-k-s, n-k-p)``), ``"alternating"``
    (``C(s,p) C(s-1-p, n-k-p) (-1)^(n-k-p)``) or ``"extracted"``.
    """
    N = _order(f, N)
    _require_unitary(f)
    field = f.field
    if variant == "extracted":
        _check_extracted(s, N, field)
    elif variant not in ("standard", "alternating"):
        raise ValueError(f"unknown variant {variant!r}")
    powers = discrete_powers(phi_triangle(f, N), N)
    sv = field.exponent_value(s)

    def entry(n, k):
        d = n - k
        total = field.zero()
        if variant == "extracted":
            for p in range(d + 1):
                term = powers[p][n, k] * math.comb(d, p) * (sv - d) / (sv - p)
                total += term if (d - p) % 2 == 0 else -term
            return binomial(s, d, field) * total
        for p in range(d + 1):
            if variant == "standard":
                w = binomial(s, p, field) * binomial(d - sv, d - p, field)
            else:
                w = binomial(s, p, field) * binomial(sv - 1 - p, d - p, field)
                if (d - p) % 2:
                    w = -w
            total += powers[p][n, k] * w
        return total

    return _with_identity_column(N, field, entry)


# ---------------------------------------------------------------- any q


def pochhammer_terms(f: Series, k: int, N: int | None = None, qctx: QContext | None = None) -> list:
    """``out[p][n] = [n k]_{(phi, -q^k)_q^p}`` for ``p = 0..N``.

    Chains run over ``k = j_0 <= ... <= j_p = n`` with factors
    ``[j_{i+1} j_i]_phi - q^(i+k) delta``.
    """
    N = _order(f, N)
    phi = phi_triangle(f, N)
    qctx = qctx or QContext(f.q, f.field)
    factors = [phi.shift_diagonal(qctx.power(i + k)) for i in range(N)]
    return column_chain_sums(k, factors)


def iterate_qschroder(f: Series, s, N: int | None = None) -> CoeffTriangle:
    N = _order(f, N)
    field = f.field
    qctx = QContext(f.q, field)
    cols = [pochhammer_terms(f, k, N, qctx) for k in range(N + 1)]
    qb = [q_binomial(s, p, qctx) for p in range(N + 1)]

    def entry(n, k):
        total = field.zero()
        for p in range(n - k + 1):
            term = cols[k][p][n]
            if term == 0:
                continue
            total += qb[p] * qctx.power(k * (s - p)) * term
        return total

    return _with_identity_column(N, field, entry)


def iterate_tambs(f: Series, s, N: int | None = None, variant: str = "standard") -> CoeffTriangle:
    """Fractional iterate from discrete iterates for any ``q``.

    ``variant``: ``"standard"``, ``"lavoie"`` or ``"qextracted"``.
    """
    N = _order(f, N)
    field = f.field
    qctx = QContext(f.q, field)
    if variant == "qextracted":
        _check_extracted(s, N, field)
        sq = qctx.number(s)
        for p in range(N):
            if field.is_zero(sq - qctx.number(p)):
                raise ExtractedPole(f"[s]_q = [{p}]_q")
    elif variant not in ("standard", "lavoie"):
        raise ValueError(f"unknown variant {variant!r}")
    powers = discrete_powers(phi_triangle(f, N), N)
    qb_s = [q_binomial(s, p, qctx) for p in range(N + 1)]

    def entry(n, k):
        d = n - k
        total = field.zero()
        if variant == "qextracted":
            for p in range(d + 1):
                term = (
                    powers[p][n, k]
                    * q_binomial(d, p, qctx)
                    * (sq - qctx.number(d))
                    / (sq - qctx.number(p))
                    * qctx.power(k * (s - p) + (d - p) * (d - p - 1) // 2)
                )
                total += term if (d - p) % 2 == 0 else -term
            return qb_s[d] * total
        for p in range(d + 1):
            c = powers[p][n, k]
            if c == 0:
                continue
            if variant == "standard":
                w = qb_s[p] * q_binomial(d - s, d - p, qctx) * qctx.power((n - p) * (s - p))
            else:
                b = d - p
                w = qb_s[p] * q_binomial(s - p - 1, b, qctx) * qctx.power(k * (s - p) + b * (b + 1) // 2)
                if b % 2:
                    w = -w
            total += c * w
        return total

    return _with_identity_column(N, field, entry)


# ---------------------------------------------------------------- precision

GUARD_STEPS = (32, 64, 128, 256, 512)


@lru_cache(maxsize=None)
def _working_field(bits: int) -> NumericField:
    return NumericField(bits)


def _values(x) -> list:
    return [v for r in x.rows for v in r] if isinstance(x, CoeffTriangle) else list(x)


def _settled(a, b, bits: int) -> bool:
    va, vb = _values(a), _values(b)
    eps = 2.0 ** -(bits - 4)
    floor = max((abs(v) for v in vb), default=0) * 2.0**-bits
    return all(abs(x - y) <= eps * max(abs(y), floor) for x, y in zip(va, vb))


def with_guard_bits(compute: Callable, f: Series, s=None):
    """Run ``compute(f, s)`` at rising working precision until two runs agree
    to the field's precision, then round back.

    The q-formulas sum terms far larger than their total (roughly
    ``|q|^(n p)`` against ``O(1)``), so the working precision has to exceed
    the requested one by the number of cancelled bits.  ``compute`` returns a
    :class:`CoeffTriangle` or a sequence of scalars.
    """
    field = f.field
    prev = None
    for guard in GUARD_STEPS:
        hi = _working_field(field.bits + guard)
        s_hi = s if s is None or isinstance(s, (int, Fraction)) else hi.ctx.mpc(s)
        out = compute(f.to_numeric(hi), s_hi)
        if prev is not None and _settled(prev, out, field.bits):
            break
        prev = out
    ctx = field.ctx
    if isinstance(out, CoeffTriangle):
        return CoeffTriangle(tuple(tuple(ctx.mpc(v) for v in r) for r in out.rows), field)
    return tuple(ctx.mpc(v) for v in out)


# ---------------------------------------------------------------- dispatch


def default_method(f: Series, s) -> str:
    n = as_int(s)
    if n is not None:
        return "matrix"
    if f.field.is_one(f.q):
        return "jabotinsky"
    return "tambs"


def iterate(f: Series, s, N: int | None = None, method: str | None = None) -> CoeffTriangle:
    """Table of ``phi^s`` by the named method (or the cheapest applicable one)."""
    N = _order(f, N)
    if method in (None, "auto"):
        method = default_method(f, s)
    if method in DISCRETE_METHODS:
        n = as_int(s)
        if n is not None and n < 0:
            f = comp_inverse(f.truncate(N), N)
            s = -n
    runner = {
        "matrix": iterate_discrete_matrix,
        "monkam": iterate_monkam,
        "bpp": iterate_bpp,
        "schroder": iterate_schroder,
        "jabotinsky": iterate_jabotinsky,
        "jabotinsky_alt": lambda f, s, N: iterate_jabotinsky(f, s, N, "alternating"),
        "extracted": lambda f, s, N: iterate_jabotinsky(f, s, N, "extracted"),
        "qschroder": iterate_qschroder,
        "tambs": iterate_tambs,
        "lavoie": lambda f, s, N: iterate_tambs(f, s, N, "lavoie"),
        "qextracted": lambda f, s, N: iterate_tambs(f, s, N, "qextracted"),
    }.get(method)
    if runner is None:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if isinstance(f.field, NumericField):
        return with_guard_bits(lambda g, t: runner(g, t, N), f, s)
    return runner(f, s, N)


def iterate_series(f: Series, s, N: int | None = None, method: str | None = None) -> Series:
    """Ordinary coefficients of ``f^s``."""
    return iterate(f, s, N, method).to_series()


def applicable_methods(f: Series, s, N: int | None = None) -> list[str]:
    n = as_int(s)
    unitary = f.field.is_one(f.q)
    out = []
    for m in METHODS:
        if m in DISCRETE_METHODS and n is None:
            continue
        if m in UNITARY_METHODS and not unitary:
            continue
        if m in ("extracted", "qextracted") and n is not None and 0 <= n <= (N or f.order) - 1:
            continue
        if m in GENERAL_METHODS and n is None and not unitary and f.field.mode == "exact":
            continue
        out.append(m)
    return out


# ---------------------------------------------------------------- umbral


def umbral_apply(f: Series, s, n: int, method: str | None = None) -> list:
    """Coefficients of ``phi^s x^n``: row ``n`` of the table."""
    T = iterate(f.truncate(max(n, f.order)), s, max(n, 1), method)
    return list(T.rows[n])


def _poly_apply_series_in_D(g: Series, poly: list) -> list:
    """``g(D) p`` for a polynomial ``p`` (coefficient list)."""
    field = g.field
    out = [field.zero()] * len(poly)
    for m in range(len(g.coeffs)):
        gm = g.coeffs[m]
        if gm == 0:
            continue
        for j in range(m, len(poly)):
            # D^m x^j = j!/(j-m)! x^(j-m)
            out[j - m] += gm * poly[j] * (math.factorial(j) // math.factorial(j - m))
    return out


def basic_sequence(f: Series, N: int | None = None) -> list[list]:
    """``phi_n(x) = phi x^n`` for ``n <= N``, checked against the four defining
    conditions of the basic sequence of ``Q = f^{-1}(D)``."""
    N = _order(f, N)
    field = f.field
    T = phi_triangle(f, N)
    polys = [list(T.rows[n]) for n in range(N + 1)]
    Q = comp_inverse(f.truncate(N), N)
    for n, poly in enumerate(polys):
        if field.is_zero(poly[n]):
            raise BasicSequenceViolation(f"deg phi_{n} != {n}")
        if not field.close(poly[0], 1 if n == 0 else 0):
            raise BasicSequenceViolation(f"phi_{n}(0) != delta_{n}")
        if n + 1 <= N:
            lhs = _poly_apply_series_in_D(Q, polys[n + 1])
            rhs = [c * (n + 1) for c in poly] + [field.zero()]
            if not all(field.close(a, b) for a, b in zip(lhs, rhs)):
                raise BasicSequenceViolation(f"Q phi_{n + 1} != {n + 1} phi_{n}")
    return polys


def generator_matrix(f: Series, N: int | None = None):
    """Table of ``x itlog(f)(D)`` on ``x^0..x^N``: ``[n k] = c_{n-k+1} n!/(k-1)!``
    with ``c`` the ordinary coefficients of ``itlog(f)``."""
    from .itlog import itlog

    N = _order(f, N)
    field = f.field
    res = itlog(f, N)
    c = res.ordinary(field)

    def entry(n, k):
        if k == 0:
            return field.zero()
        m = n - k + 1
        return c[m] * (math.factorial(n) // math.factorial(k - 1))

    return CoeffTriangle.build(N, entry, field)


def generator_exp(f: Series, s, N: int | None = None) -> CoeffTriangle:
    """``exp(s G)`` with ``G`` the infinitesimal generator, numeric mode only."""
    N = _order(f, N)
    field = f.field
    if not isinstance(field, NumericField):
        raise TypeError("generator_exp needs numeric mode")
    ctx = field.ctx
    G = generator_matrix(f, N)
    sv = field.exponent_value(s)
    M = ctx.matrix(N + 1, N + 1)
    for n in range(N + 1):
        for k in range(n + 1):
            M[n, k] = sv * G[n, k]
    E = ctx.expm(M)
    return CoeffTriangle.build(N, lambda n, k: ctx.mpc(E[n, k]), field)
