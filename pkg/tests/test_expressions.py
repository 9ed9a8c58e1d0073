import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from submersion_chen.errors import (ArityError, DomainViolation, ExpressionSyntaxError,
                                    UnknownIdentifier)
from submersion_chen.expressions import parse_expression


@pytest.mark.parametrize("text, x, expected", [
    ("exp(2*x4)", [0, 0, 0, 0], 1.0),
    ("x1^2", [2], 4.0),
    ("2^3^2", [], 512.0),          # right-associative
    ("-x1^2", [3], -9.0),          # unary minus binds looser than ^
    ("2^-1", [], 0.5),
    ("pi/4 - e + 1.5e1", [], np.pi / 4 - np.e + 15),
    ("sinh(x1) + cosh(x1) - exp(x1)", [0.7], 0.0),
    ("sqrt(x1)*log(x2)/tan(x1)", [0.3, 2.0], np.sqrt(0.3) * np.log(2) / np.tan(0.3)),
])
def test_evaluation(text, x, expected):
    assert parse_expression(text)(np.array(x, float)) == pytest.approx(expected, abs=1e-14)


def test_syntax_error_offset():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression("exp(")
    assert info.value.offset == 4
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression("x1 + * x2")
    assert info.value.offset == 5


def test_unknown_and_arity():
    with pytest.raises(UnknownIdentifier):
        parse_expression("foo(x1)")
    with pytest.raises(UnknownIdentifier):
        parse_expression("x7", n=6)
    with pytest.raises(UnknownIdentifier):
        parse_expression("y1")
    with pytest.raises(ArityError):
        parse_expression("sin(x1, x2)")


def test_parameters():
    e = parse_expression("x1*sin(alpha)", parameters={"alpha": np.pi / 2})
    assert e(np.array([3.0])) == pytest.approx(3.0)


@pytest.mark.parametrize("text, x", [("log(x1)", [0.0]), ("sqrt(x1)", [-1.0]), ("1/x1", [0.0]),
                                     ("x1^0.5", [-2.0])])
def test_domain_violation(text, x):
    with pytest.raises(DomainViolation):
        parse_expression(text)(np.array(x))


def test_canonical_is_whitespace_insensitive():
    a = parse_expression("exp( 2 * x4 )").canonical()
    b = parse_expression("exp(2*x4)").canonical()
    assert a == b


EXPRS = ["exp(2*x1)*x2^2", "sin(x1*x2)/(1+x3^2)", "sqrt(1+x1^2+x2^2)*cosh(x3)",
         "log(2+sin(x1))*tan(x2/3)", "x1^3*x2 - 4*x3/(2+cos(x1*x3))"]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(EXPRS), st.lists(st.floats(-1, 1), min_size=3, max_size=3))
def test_jet_matches_finite_differences(text, pt):
    e = parse_expression(text, n=3)
    x = np.array(pt)
    v, g, H = e.jet(x)
    h = 1e-5
    for k in range(3):
        d = np.zeros(3)
        d[k] = h
        assert g[k] == pytest.approx((e(x + d) - e(x - d)) / (2 * h), rel=1e-6, abs=1e-6)
        gp, gm = e.jet(x + d)[1], e.jet(x - d)[1]
        np.testing.assert_allclose(H[k], (gp - gm) / (2 * h), rtol=1e-5, atol=1e-5)
    np.testing.assert_allclose(H, H.T, atol=1e-12)


@pytest.mark.parametrize("text", EXPRS)
def test_symbolic_derivative_matches_jet(text):
    e = parse_expression(text, n=3)
    x = np.array([0.3, -0.4, 0.5])
    _, g, H = e.jet(x)
    for k in range(3):
        dk = e.diff(k)
        assert dk(x) == pytest.approx(g[k], rel=1e-12, abs=1e-12)
        for m in range(3):
            assert dk.diff(m)(x) == pytest.approx(H[k, m], rel=1e-10, abs=1e-10)
