import math
import random
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algebra.errors import ParseError, PreconditionError
from algebra.series import RingSpec, format_series, random_series
from algebra.witnesses import monomial_witness_family
from lab.parse import parse_ideal, parse_module, parse_poly, parse_system, parse_vector


def test_parse_terms(ring3):
    series = parse_poly("T1^2*T2 + 3*T3", ring3)
    assert dict(series.terms) == {(2, 1, 0): 1, (0, 0, 1): 3}


def test_parse_matches_witness_element(ring3):
    family = monomial_witness_family(2, ring3)
    assert parse_poly("(T1*T2 - T3^2)", ring3) == family.x3


@pytest.mark.parametrize(
    "text, expected",
    [
        ("T1 - T1", "0"),
        ("-T1 + 2^3*T2", "-T1 + 8*T2"),
        ("(T1 + T2)^2", "T1^2 + 2*T1*T2 + T2^2"),
        ("-(T1 - 1)", "1 - T1"),
        ("T1^(2) * T3", "T1^2*T3"),
        ("T1^9 + T2", "T2"),
        ("  T1  *  T2 ", "T1*T2"),
    ],
)
def test_parse_canonical_text(ring3, text, expected):
    assert format_series(parse_poly(text, ring3)) == expected


@pytest.mark.parametrize(
    "text, message, position",
    [
        ("T1 + T4", "unknown variable 'T4'", 5),
        ("T1 +", "ends with an operator", 4),
        ("T1 T2", "missing operator", 3),
        ("(T1 + T2", "unbalanced '('", 8),
        ("T1 + T2)", "unbalanced ')'", 7),
        ("T1 $ T2", "unexpected character", 3),
        ("T1^-2", "negative exponent", 2),
        ("T1^(-2)", "negative exponent", 2),
        ("T1^T2", "non-negative integer literal", 2),
        ("T1/2", "only allowed between integer literals", 2),
        ("1/0*T1", "division by zero", 2),
        ("", "empty expression", 0),
    ],
)
def test_parse_errors_report_position(ring3, text, message, position):
    with pytest.raises(ParseError, match=re.escape(message)) as info:
        parse_poly(text, ring3)
    assert info.value.position == position
    assert info.value.exit_code == 2


def test_rational_coefficients():
    assert format_series(parse_poly("1/2*T1", RingSpec(2, 0, 4))) == "1/2*T1"
    # 1/2 = 2 in GF(3)
    assert format_series(parse_poly("1/2*T1", RingSpec(2, 3, 4))) == "2*T1"
    with pytest.raises(PreconditionError, match="vanishes"):
        parse_poly("1/3*T1", RingSpec(2, 3, 4))


def test_coefficients_reduce_mod_p():
    assert format_series(parse_poly("7*T1 - T2", RingSpec(2, 5, 4))) == "2*T1 + 4*T2"


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10**6), char=st.sampled_from([0, 2, 5]))
def test_print_parse_round_trip(seed, char):
    ring = RingSpec(3, char, 4)
    series = random_series(ring, random.Random(seed), 0, 4)
    assert parse_poly(format_series(series), ring) == series


def test_parse_ideal(ring2):
    ideal = parse_ideal("T1, T2^2 + T1^3", ring2)
    assert len(ideal.generators) == 2
    assert ideal.generators[1] == parse_poly("T2^2 + T1^3", ring2)


def test_parse_ideal_error_offset(ring2):
    with pytest.raises(ParseError) as info:
        parse_ideal("T1, T4", ring2)
    assert info.value.position == 4


def test_parse_vector_and_module(ring2):
    assert parse_vector("(T1, T2)", ring2) == parse_vector("T1, T2", ring2)
    assert parse_vector("(T1 + T2)*T1", ring2) == (parse_poly("T1^2 + T1*T2", ring2),)
    module = parse_module("(T1,0);(0,T2)", ring2)
    assert module.arity == 2
    assert module.generators[1] == (ring2.zero(), ring2.variable(1))
    with pytest.raises(PreconditionError, match="arity mismatch"):
        parse_module("(T1,0);(T2)", ring2)


def test_parse_system(ring3):
    system = parse_system("T1*X1 + T2*X2; X1^2 - T3", ring3)
    assert system.num_unknowns == 2
    assert system.unknown_names == ("X1", "X2")
    assert dict(system.equations[0]) == {(1, 0): ring3.variable(0), (0, 1): ring3.variable(1)}
    assert dict(system.equations[1]) == {(2, 0): ring3.one(), (0, 0): -ring3.variable(2)}
    assert not system.is_linear()


def test_parse_system_errors(ring3):
    with pytest.raises(ParseError, match="at least one unknown"):
        parse_system("T1 + T2", ring3)
    with pytest.raises(ParseError, match="unknown variable 'Y1'"):
        parse_system("X1 + Y1", ring3)
    clashing = RingSpec.from_names(["X1", "T2"], 0, 4)
    with pytest.raises(ParseError, match="collide"):
        parse_system("X1", clashing, num_unknowns=1)


def test_large_powers_stay_within_the_truncation():
    ring = RingSpec(3, 0, 4)
    series = parse_poly("(1 + T1 + T2 + T3)^60", ring)
    assert len(series.terms) == 35
    assert series.coefficient((4, 0, 0)) == math.comb(60, 4)
    assert series.coefficient((1, 1, 1)) == 60 * 59 * 58
    huge = parse_poly("(1 + T1)^1000000000 - T2^1000000000", RingSpec(2, 0, 2))
    assert dict(huge.terms) == {(0, 0): 1, (1, 0): 10**9, (2, 0): math.comb(10**9, 2)}


def test_powers_reduce_mod_p_at_every_step():
    # (1 + T1)^7 = 1 + T1^7 over GF(7)
    assert format_series(parse_poly("(1 + T1)^7", RingSpec(2, 7, 4))) == "1"
    assert format_series(parse_poly("(1 + T1)^7", RingSpec(2, 0, 1))) == "1 + 7*T1"


def test_parse_system_with_powers_of_unknowns(ring2):
    system = parse_system("(X1 + T1)^2", ring2)
    assert dict(system.equations[0]) == {
        (0,): ring2.variable(0) ** 2,
        (1,): ring2.variable(0).scale(2),
        (2,): ring2.one(),
    }
