"""Shared strategies and helpers."""
from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import settings
from hypothesis import strategies as st

from iterfrac import Series

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

small_fractions = st.fractions(min_value=-3, max_value=3, max_denominator=4)
nonzero_fractions = small_fractions.filter(lambda x: x != 0)


@st.composite
def invertible_series(draw, order: int = 6, q=None):
    """Exact invertible series ``q x + c_2 x^2 + ...``."""
    lead = draw(nonzero_fractions) if q is None else Fraction(q)
    tail = draw(st.lists(small_fractions, min_size=order - 1, max_size=order - 1))
    return Series.of([0, lead] + tail)


def random_series(rng: random.Random, order: int, q, field=None) -> Series:
    """Rational coefficients in [-3, 3] after the linear term ``q``.

    With a numeric ``field`` the tail is converted exactly and ``q`` is
    coerced into that field, so complex ``q`` works too.
    """
    tail = [Fraction(rng.randint(-12, 12), 4) for _ in range(order - 1)]
    if field is None:
        return Series.of([0, Fraction(q)] + tail)
    g = Series.of([0, 1] + tail).to_numeric(field)
    return Series((g.coeffs[0], field.lift(q)) + g.coeffs[2:], field)
