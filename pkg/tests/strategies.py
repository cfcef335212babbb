"""Shared hypothesis strategies and seeded samplers."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from grigrowth.sequences import OmegaSeq
from grigrowth.simplex import HALF, SimplexPoint


@st.composite
def simplex_points(draw, lo: int = 1, hi: int = 1000):
    a, b, c = (draw(st.integers(lo, hi)) for _ in range(3))
    total = a + b + c
    coords = [Fraction(x, total) for x in (a, b, c)]
    if max(coords) >= HALF:
        # fold the heavy coordinate back inside
        i = coords.index(max(coords))
        coords[i] = HALF - Fraction(1, 4 * total)
        rest = (1 - coords[i]) / 2
        coords = [coords[i] if j == i else rest for j in range(3)]
    return SimplexPoint(*coords)


letters = st.sampled_from((0, 1, 2))
gwords = st.text("abcd", max_size=16)
omegas = st.one_of(
    st.text("012", min_size=1, max_size=6).map(OmegaSeq.periodic),
    st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3)), min_size=1, max_size=4)
    .map(OmegaSeq.syllable),
)


def random_point(rnd: random.Random, lo: int = 1, hi: int = 1000, cap=HALF) -> SimplexPoint:
    while True:
        a = [rnd.randint(lo, hi) for _ in range(3)]
        p = [Fraction(x, sum(a)) for x in a]
        if max(p) < cap:
            return SimplexPoint(*p)


def random_word(rnd: random.Random, n: int) -> str:
    return "".join(rnd.choice("abcd") for _ in range(n))
