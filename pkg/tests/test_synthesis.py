import json
import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import random_point

from grigrowth.sequences import OmegaSeq
from grigrowth.simplex import ALPHA_MINUS, ETA_PLUS, SimplexPoint, eta, eta_word, mu, orbit
from grigrowth.synthesis import (SKIPPED, ResourceError, SynthesisStall, SynthesisTrace,
                                 ackermann, check_doubling, concave_majorand, growth_report,
                                 preset_growth, synthesize_omega, verify_sandwich)

BARY = SimplexPoint.barycentre()
PER012 = OmegaSeq.periodic("012")


def test_ackermann():
    assert ackermann(0, 5) == 6
    assert ackermann(1, 1) == 3
    assert ackermann(2, 2) == 7
    assert ackermann(3, 3) == 61
    with pytest.raises(ResourceError):
        ackermann(4, 3)


def test_doubling_examples():
    assert check_doubling(preset_growth("pow:0.8"), 1, 1e6).ok
    bad = check_doubling(preset_growth("pow:0.7"), 1, 1e6)
    assert not bad.ok
    assert {side for _, side in bad.violations} == {"right"}
    lin = check_doubling(preset_growth("linear"), 1, 1e6)
    assert lin.ok and abs(lin.left_margin) < 1e-12


def test_presets():
    g = preset_growth("pow:0.7674")
    assert abs(g(2) / 2**0.7674 - 1) < 1e-9
    assert abs(preset_growth("r-over-log")(math.e) - math.e / 2) < 1e-9
    for name in ("linear", "r-over-log", "r-over-loglog", "ackermann-inverse", "pow:1/2"):
        g = preset_growth(name)
        assert abs(g(1) - 1) < 1e-9
        xs = [1.5**i for i in range(60)]
        assert all(g(x) < g(y) for x, y in zip(xs, xs[1:])), name
    with pytest.raises(KeyError):
        preset_growth("bogus")
    with pytest.raises(KeyError):
        preset_growth("pow:-1")


def test_alpha_minus_gives_isolated_twos():
    g = preset_growth(f"pow:{float(ALPHA_MINUS)!r}")
    sylls = synthesize_omega(g, BARY, 600).syllables()
    assert all(j <= 1 for _, j in sylls[1:])
    assert sum(3 * i for i, _ in sylls) >= 0.9 * 600


def test_linear_gives_long_two_blocks():
    trace = synthesize_omega(preset_growth("linear"), BARY, 600)
    assert max(j for _, j in trace.syllables()) >= 0.9 * 600


def test_sandwich_phases():
    for name in ("pow:0.8", "pow:0.9", "r-over-log", "r-over-loglog", "ackermann-inverse"):
        g = preset_growth(name)
        trace = synthesize_omega(g, BARY, 600)
        for rec in trace.records:
            if not rec.complete:
                continue
            if rec.kind == "after-2-block":
                assert -1 - 1e-9 <= rec.log2_ratio <= 1e-9, (name, rec)
            else:
                assert -1e-9 <= rec.log2_ratio <= math.log2(27) + 1e-9, (name, rec)
        lo, hi = verify_sandwich(trace, g, BARY)
        assert 2**-7 <= lo <= hi <= 2**7


def test_single_block_trace():
    g = preset_growth("pow:0.9")
    trace = synthesize_omega(g, BARY, 3)
    assert trace.syllables() == [(1, 0)]
    lo, hi = verify_sandwich(trace, g, BARY)
    assert lo == hi == pytest.approx(g(float(eta_word(BARY, "012"))) / 8)


def test_stall_on_violating_target():
    with pytest.raises(SynthesisStall):
        synthesize_omega(preset_growth("pow:1/2"), BARY, 600)
    with pytest.raises(ValueError):
        synthesize_omega(preset_growth("linear"), BARY, 2)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.78, 1.0), st.integers(3, 300))
def test_synthesized_prefix_in_syllable_form(alpha, n):
    trace = synthesize_omega(preset_growth(f"pow:{alpha!r}"), BARY, n)
    text = "".join(map(str, trace.prefix.data))
    assert len(text) >= n
    assert "".join("012" * i + "2" * j for i, j in trace.syllables()) == text
    assert all(i >= 1 for i, _ in trace.syllables())
    assert all(j >= 1 for _, j in trace.syllables()[:-1])


def test_trace_json():
    trace = synthesize_omega(preset_growth("pow:0.9"), BARY, 60)
    data = json.loads(json.dumps(trace.as_dict()))
    assert data["syllables"] == [list(s) for s in trace.syllables()]
    assert isinstance(trace, SynthesisTrace)


def test_majorand():
    pts = [(r, math.sqrt(r)) for r in range(1, 50)]
    h = concave_majorand(pts)
    assert all(abs(h(r) - v) < 1e-12 for r, v in pts)
    chord = concave_majorand([(1, 1), (3, 5)])
    assert chord(2) == 3
    rnd = random.Random(4)
    for _ in range(20):
        a = rnd.uniform(0.2, 1)
        # subadditive increasing: a concave part plus a bounded staircase
        g = lambda r: r**a + (r % 7 > 3)
        samples = [(r, g(r)) for r in (1 + 999 * (i / 400) ** 2 for i in range(401))]
        h = concave_majorand(samples)
        assert all(h(r) >= v - 1e-9 for r, v in samples)
        assert all(h(r) <= 2 * v + 1e-9 for r, v in samples)


def test_growth_report_small():
    rows = growth_report(PER012, BARY, 3, budget=2000, with_w=False)
    assert [r["k"] for r in rows] == [0, 1, 2, 3]
    etas = [eta(v, x) for v, x in zip(orbit(BARY, "012"), (0, 1, 2))]
    mus = [mu(v) for v in orbit(BARY, "012")]
    expected = [mus[0], mus[1] * etas[0], mus[2] * etas[0] * etas[1],
                mus[3] * etas[0] * etas[1] * etas[2]]
    assert [r["R_k"] for r in rows] == expected == [F(1, 3), F(2, 3), F(4, 3), F(4)]
    assert rows[0]["v_G"] == 20
    assert rows[3]["v_G"] == SKIPPED and rows[0]["v_W"] == SKIPPED
    for a, b in zip(rows, rows[1:]):
        q = b["mu_k"] / a["mu_k"]
        assert 2 * q <= b["R_k"] / a["R_k"] <= 3 * q
        assert b["R_k"] > a["R_k"]
    assert [r["delta_zeta"] for r in rows] == [2, 3, 5, 9]
    with pytest.raises(ValueError):
        growth_report(PER012, BARY, 0)


def test_mu_bounded_on_syllable_sequences():
    rnd = random.Random(10)
    for _ in range(20):
        text = "".join("012" * rnd.randint(1, 4) + "2" * rnd.randint(1, 6) for _ in range(12))
        v = random_point(rnd)
        first = text.index("2", 2) + 1
        for k, p in enumerate(orbit(v, text[:120])):
            if k >= first:
                assert F(1, 5) < mu(p) < F(1, 3)


def test_expconv_running_max_settles():
    rnd = random.Random(5)
    log_plus = math.log(ETA_PLUS)
    for _ in range(100):
        v = random_point(rnd)
        for block, rate in (("012", 3 * log_plus), ("2", math.log(2))):
            dev = [abs(math.log(eta_word(v, block * n)) - n * rate) for n in range(1, 51)]
            run = [max(dev[: i + 1]) for i in range(len(dev))]
            assert run[-1] < 1
            assert run[-1] - run[39] < 1e-6


def test_mu_decays_like_one_over_m():
    # constants observed over these instances: K ~ 0.33, L ~ 0.73
    rnd = random.Random(1)
    scaled = []
    for _ in range(50):
        v = random_point(rnd, 1, 100)
        prefix = "".join(rnd.choice("012") for _ in range(rnd.randint(0, 6)))
        x, y = rnd.sample("012", 2)
        for m in (5, 10, 20, 40):
            scaled.append(float(mu(orbit(v, prefix + (x + y) * m)[-1])) * m)
    assert 0.25 < min(scaled) and max(scaled) < 1
