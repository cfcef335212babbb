from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import omegas

from grigrowth.sequences import (OmegaParseError, OmegaSeq, bernoulli_distance, format_omega,
                                 letter_at, parse_omega_spec, shift, vanish)


def test_letter_at_examples():
    assert letter_at(OmegaSeq.periodic("012"), 5) == 2
    assert letter_at(OmegaSeq.syllable([(1, 2)]), 4) == 2
    assert OmegaSeq.syllable([(1, 2)]).prefix(5) == "01222"
    with pytest.raises(IndexError):
        letter_at(OmegaSeq.explicit([0, 2]), 7)


def test_shift_examples():
    assert shift(OmegaSeq.periodic("012"), 1).prefix(3) == "120"
    assert shift(OmegaSeq.explicit([0, 1, 2]), 2) == OmegaSeq.explicit([2])
    om = OmegaSeq.syllable([(2, 1), (1, 3)])
    assert shift(shift(om, 1), 2).prefix(40) == shift(om, 3).prefix(40)


def test_vanish():
    assert vanish(0, "b") == "1"
    assert vanish(1, "c") == "1"
    assert vanish(2, "b") == "a"
    for x in (0, 1, 2):
        images = [vanish(x, g) for g in "bcd"]
        assert images.count("1") == 1 and images.count("a") == 2


def test_bernoulli_distance():
    om = OmegaSeq.periodic("012")
    assert bernoulli_distance(om, om, 10) == 0
    assert bernoulli_distance(OmegaSeq.periodic("0"), OmegaSeq.explicit("1" + "0" * 20), 10) == 1
    d = bernoulli_distance(om, OmegaSeq.periodic("112"), 20)
    assert d == sum(Fraction(1, 2**i) for i in range(0, 20, 3))
    assert abs(float(d) - 8 / 7) < 1e-5


def test_parse_examples():
    assert parse_omega_spec("per:012") == OmegaSeq.periodic("012")
    assert parse_omega_spec("syll:1,1;1,2") == OmegaSeq.syllable([(1, 1), (1, 2)])
    with pytest.raises(OmegaParseError) as err:
        parse_omega_spec("per:013")
    assert err.value.position == 6
    for bad in ("012", "foo:1", "syll:0,1", "syll:1", "prog:nope", "exp:"):
        with pytest.raises(OmegaParseError):
            parse_omega_spec(bad)


def test_parse_shift_and_round_trip():
    om = parse_omega_spec("syll:2,1;1,3@4")
    assert om.prefix(10) == OmegaSeq.syllable([(2, 1), (1, 3)]).prefix(14)[4:]
    for text in ("per:012", "exp:0120", "syll:1,2;3,1@5", "prog:sqrt@2"):
        assert format_omega(parse_omega_spec(text)) == text
    assert format_omega(parse_omega_spec("per:012@1")) == "per:120"


def test_programmatic_presets():
    assert OmegaSeq.programmatic("sqrt").prefix(11) == "0122012220"[:10] + "1"
    assert OmegaSeq.programmatic("geom").prefix(8) == "01220122"
    acker = OmegaSeq.programmatic("ackermann")
    # blocks 012 2^A(m,m): A(0,0)=1, A(1,1)=3, A(2,2)=7, A(3,3)=61
    assert acker.prefix(4 + 6 + 10) == "0122" + "012222" + "0122222222"
    assert acker[10**9] == 2


def test_function_backed():
    om = OmegaSeq.programmatic(lambda i: i % 3)
    assert om.prefix(6) == "012012"
    with pytest.raises(ValueError):
        OmegaSeq.programmatic(lambda i: 5)[0]


def test_invalid_variants():
    with pytest.raises(ValueError):
        OmegaSeq.periodic("")
    with pytest.raises(ValueError):
        OmegaSeq.syllable([(0, 1)])
    with pytest.raises(ValueError):
        OmegaSeq.explicit([3])


@given(omegas, st.integers(0, 1000))
def test_shift_reads_one_ahead(om, i):
    assert letter_at(shift(om, 1), i) == letter_at(om, i + 1)


@settings(max_examples=50)
@given(st.text("012", min_size=30, max_size=30), st.text("012", min_size=30, max_size=30),
       st.integers(1, 25))
def test_shift_doubles_bernoulli_distance(a, b, h):
    b = a[0] + b[1:]
    om, other = OmegaSeq.explicit(a), OmegaSeq.explicit(b)
    assert (bernoulli_distance(shift(om, 1), shift(other, 1), h)
            == 2 * bernoulli_distance(om, other, h + 1))
