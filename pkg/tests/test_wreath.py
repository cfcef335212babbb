import json
import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import omegas, random_point

from grigrowth.grigorchuk import GElement, ball, wreath_split
from grigrowth.orbit import RHO, delta_growth
from grigrowth.sequences import OmegaSeq, letter_at
from grigrowth.simplex import SimplexPoint, apply_map, eta, weights
from grigrowth.wreath import (AbelianSpec, WNormSearch, WreathElement, ball_W, group_element,
                              lamp, psi_split, w_generators, witness_set, witness_word)

PER012 = OmegaSeq.periodic("012")
BARY = SimplexPoint.barycentre()
Z2 = AbelianSpec(2)


@st.composite
def elements(draw, omega=PER012, m=2):
    x = WreathElement.identity(omega, 0, m)
    for step in draw(st.lists(st.sampled_from(["a", "b", "c", "d"] + [f"t{r}" for r in range(1, m)]),
                              max_size=12)):
        if step.startswith("t"):
            x = x * lamp(int(step[1:]), omega, 0, m)
        else:
            x = x * group_element(step, omega, 0, m)
    return x


def test_spec_validation():
    with pytest.raises(ValueError):
        AbelianSpec(1)


def test_generators():
    gens = w_generators(PER012, Z2, BARY)
    assert [g.name for g in gens] == ["a", "b", "c", "d", "t1"]
    assert [g.weight for g in gens] == [F(1, 3), 0, 0, 0, F(1, 3)]
    assert len(w_generators(PER012, AbelianSpec(3), BARY)) == 6
    ident = WreathElement.identity(PER012)
    for gen in gens:
        assert gen.element * gen.element == ident
    t1 = lamp(1, PER012, m=3)
    assert not (t1 * t1 == WreathElement.identity(PER012, m=3))
    assert len(w_generators(PER012, Z2, BARY, mixed=True)) == 9


def test_multiply_examples():
    t = lamp(1, PER012)
    assert t * t == WreathElement.identity(PER012)
    x = group_element("a", PER012) * t
    # (f, g)(f', 1) carries f' at the points p with p.g in supp f'
    assert x.support == (("1", 1),)
    assert x.g.word == "a"


@settings(max_examples=200)
@given(elements(), elements(), elements())
def test_associativity(x, y, z):
    assert (x * y) * z == x * (y * z)


@settings(max_examples=200)
@given(elements(m=3))
def test_inverse(x):
    ident = WreathElement.identity(PER012, m=3)
    assert x * x.inverse() == ident
    assert x.inverse() * x == ident


@settings(max_examples=200)
@given(elements(), elements())
def test_psi_is_a_homomorphism(x, y):
    x1, x2, s = psi_split(x)
    y1, y2, t = psi_split(y)
    z1, z2, u = psi_split(x * y)
    ys = (y2, y1) if s else (y1, y2)
    assert u == (s != t)
    assert z1 == x1 * ys[0] and z2 == x2 * ys[1]


def test_psi_examples():
    x1, x2, s = psi_split(lamp(1, PER012))
    assert x1.support == () and x2.support == ((RHO, 1),)
    assert x1.level == x2.level == 1 and not s
    g = GElement("abacad", PER012)
    x1, x2, s = psi_split(WreathElement((), g))
    g1, g2, s2 = wreath_split(g)
    assert (x1.g, x2.g, s) == (g1, g2, s2)


def test_json_round_trip():
    x = group_element("ab", PER012) * lamp(1, PER012) * group_element("a", PER012) * lamp(1, PER012)
    data = json.dumps(x.to_json())
    assert WreathElement.from_json(data, PER012) == x
    assert json.loads(data)["support"] == sorted(json.loads(data)["support"])


def test_ball_examples():
    v = SimplexPoint(F(3, 10), F(2, 5), F(3, 10))
    assert ball_W(PER012, Z2, v, 0).count == 1
    assert ball_W(PER012, AbelianSpec(3), v, 0).count == 1
    for r in (F(1, 3), F(2, 3), 1):
        assert ball_W(PER012, Z2, BARY, r).count >= ball(PER012, 0, BARY, r).count
    assert [ball_W(PER012, Z2, BARY, r).count for r in (0, F(1, 3), F(2, 3))] == [4, 24, 96]


def test_ball_lower_bound_from_inverted_orbits():
    # R_k = 2 eta_0...eta_(k-1) mu_k and v_W(R_k) >= 2^Delta(R_k / 2)
    for r in (F(2, 3), F(4, 3)):
        assert ball_W(PER012, Z2, BARY, r).count >= 2 ** delta_growth(PER012, BARY, r / 2)


def test_log_growth_ratio_last_feasible_step():
    r1, r2 = F(2, 3), F(4, 3)  # R_1, R_2 at the barycentre
    v1, v2 = (ball_W(PER012, Z2, BARY, r).count for r in (r1, r2))
    assert 1.5 <= math.log(v2) / math.log(v1) <= 3


def test_witness_examples():
    assert len(witness_set(PER012, Z2, BARY, 0)) == 1
    elems = witness_set(PER012, Z2, BARY, F(3))
    assert len(elems) == 2**9
    gens = {g.name: g.weight for g in w_generators(PER012, Z2, BARY)}
    for x in elems[:50]:
        assert sum(gens[s] for s in witness_word(x, Z2).split()) <= 6


def test_torsion_spot_check():
    rnd = random.Random(3)
    table = ball_W(PER012, Z2, BARY, 1)
    ident = WreathElement.identity(PER012)
    for _, x in rnd.sample(table.entries, 60):
        y = x
        for _ in range(12):
            if y == ident:
                break
            y = y * y
        assert y == ident


def test_psi_norm_inequality():
    rnd = random.Random(6)
    checked = 0
    for _ in range(4):
        v = random_point(rnd, 20, 40, F(2, 5))
        omega = OmegaSeq.explicit([rnd.randint(0, 2) for _ in range(12)])
        xl = letter_at(omega, 0)
        v1, e = apply_map(v, xl), eta(v, xl)
        wa, wa1 = weights(v).wa, weights(v1).wa
        top = WNormSearch(omega, Z2, v)
        sub = WNormSearch(omega, Z2, v1, level=1)
        for n, x in rnd.sample(top.ball(2).entries, 50):
            x1, x2, _ = psi_split(x)
            assert sub.norm(x1) + sub.norm(x2) <= 2 * wa1 + 2 / e * (n + wa)
            checked += 1
    assert checked == 200


@settings(max_examples=25)
@given(omegas)
def test_generators_are_involutions_any_omega(omega):
    ident = WreathElement.identity(omega)
    for gen in w_generators(omega, Z2, BARY):
        assert gen.element * gen.element == ident
