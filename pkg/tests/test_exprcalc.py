"""Expression parser and second-order jet evaluation."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from greenlab import DomainError, ParseError, eval_jet2, parse_expression, to_source

# (source, reference callable); derivatives are checked by finite differences
CASES = [
    ("r", lambda r: r),
    ("r^2", lambda r: r**2),
    ("r^2.5", lambda r: r**2.5),
    ("2^r", lambda r: 2.0**r),
    ("sqrt(1+r^2)", lambda r: np.sqrt(1 + r**2)),
    ("r/sqrt(1+r)", lambda r: r / np.sqrt(1 + r)),
    ("1-sqrt(1+r^2)", lambda r: 1 - np.sqrt(1 + r**2)),
    ("exp(-0.3*r)*sin(r)", lambda r: np.exp(-0.3 * r) * np.sin(r)),
    ("log(1+r) + cos(2*r)", lambda r: np.log(1 + r) + np.cos(2 * r)),
    ("tanh(r)/(1+r^2)", lambda r: np.tanh(r) / (1 + r**2)),
    ("atan(r)*pi + e", lambda r: np.arctan(r) * math.pi + math.e),
    ("-(r - 3)*(r + 0.5)", lambda r: -(r - 3) * (r + 0.5)),
    ("sinh(0.2*r) - cosh(0.1*r)", lambda r: np.sinh(0.2 * r) - np.cosh(0.1 * r)),
    ("r^r", lambda r: r**r),
]


@pytest.mark.parametrize("source,ref", CASES, ids=[c[0] for c in CASES])
def test_value_and_derivatives_match_reference(source, ref):
    expr = parse_expression(source)
    r = np.linspace(0.3, 3.0, 17)
    jet = eval_jet2(expr, r)
    assert_allclose(jet.value, ref(r), rtol=1e-12)
    h = 1e-6
    d1_fd = (ref(r + h) - ref(r - h)) / (2 * h)
    assert_allclose(jet.d1, d1_fd, rtol=2e-8, atol=1e-8)
    h2 = 1e-4
    d2_fd = (ref(r + h2) - 2 * ref(r) + ref(r - h2)) / (h2 * h2)
    assert_allclose(jet.d2, d2_fd, rtol=5e-6, atol=5e-6)


@pytest.mark.parametrize("source,ref", CASES, ids=[c[0] for c in CASES])
def test_to_source_round_trip(source, ref):
    expr = parse_expression(source)
    again = parse_expression(to_source(expr))
    r = np.linspace(0.5, 2.0, 7)
    assert_allclose(eval_jet2(again, r).value, eval_jet2(expr, r).value, rtol=1e-15)


def test_scalar_matches_vector():
    expr = parse_expression("exp(-r)*r^3")
    jet_s = eval_jet2(expr, 1.7)
    jet_v = eval_jet2(expr, np.asarray([1.7]))
    assert jet_s.value == pytest.approx(float(jet_v.value[0]), rel=0, abs=0)
    assert jet_s.d1 == pytest.approx(float(jet_v.d1[0]), rel=0, abs=0)
    assert jet_s.d2 == pytest.approx(float(jet_v.d2[0]), rel=0, abs=0)


def test_sqrt_warping_jet_at_origin():
    # r/sqrt(1+r) has value 0, slope 1, curvature -1 at r = 0
    jet = eval_jet2(parse_expression("r/sqrt(1+r)"), 0.0)
    assert jet.value == pytest.approx(0.0, abs=1e-15)
    assert jet.d1 == pytest.approx(1.0, rel=1e-12)
    assert jet.d2 == pytest.approx(-1.0, rel=1e-12)


def test_integer_power_of_negative_base():
    jet = eval_jet2(parse_expression("r^3"), -2.0)
    assert jet.value == pytest.approx(-8.0)
    assert jet.d1 == pytest.approx(12.0)
    assert jet.d2 == pytest.approx(-12.0)


@pytest.mark.parametrize(
    "bad,pos",
    [
        ("", 0),
        ("r +", 3),
        ("(1+r", 4),
        ("sin()", 4),
        ("2 ** r", 3),
        ("bogus(r)", 0),
        ("1 + q", 4),
    ],
)
def test_parse_errors_carry_positions(bad, pos):
    with pytest.raises(ParseError) as err:
        parse_expression(bad)
    assert err.value.position == pos


@pytest.mark.parametrize(
    "source,r",
    [
        ("sqrt(r-2)", 1.0),
        ("log(r-5)", 2.0),
        ("1/(r-1)", 1.0),
        ("(r-2)^0.5", 1.0),
    ],
)
def test_domain_errors_name_the_operation(source, r):
    expr = parse_expression(source)
    with pytest.raises(DomainError):
        eval_jet2(expr, r)


@settings(max_examples=50, deadline=None)
@given(
    a=st.floats(min_value=-2.0, max_value=2.0),
    b=st.floats(min_value=0.1, max_value=3.0),
    r=st.floats(min_value=0.05, max_value=5.0),
)
def test_product_rule_holds(a, b, r):
    # d(fg) = f'g + fg' for f = exp(a r), g = (1 + r)^b
    f = parse_expression(f"exp({a!r}*r)")
    g = parse_expression(f"(1+r)^{b!r}")
    prod = parse_expression(f"exp({a!r}*r) * (1+r)^{b!r}")
    jf, jg, jp = (eval_jet2(e, r) for e in (f, g, prod))
    assert jp.d1 == pytest.approx(jf.d1 * jg.value + jf.value * jg.d1, rel=1e-10, abs=1e-12)
