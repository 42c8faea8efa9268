import cmath
from math import pi

import numpy as np
import pytest
import sympy

from periodlab.errors import ParseError
from periodlab.polynomial import BivariatePolynomial, parse_polynomial

RHO = cmath.exp(2j * pi / 3)


def sympy_expand_terms(text, varnames):
    """Independent expansion oracle: expand with sympy, return {(i,j): complex}."""
    u, v = sympy.symbols(" ".join(varnames))
    rho = sympy.exp(2 * sympy.pi * sympy.I / 3)
    zeta = sympy.exp(2 * sympy.pi * sympy.I / 7)
    expr = sympy.sympify(text.replace("^", "**"),
                         locals={"rho": rho, "rho2": rho**2, "zeta": zeta,
                                 varnames[0]: u, varnames[1]: v})
    poly = sympy.Poly(sympy.expand(expr), u, v)
    out = {}
    for (i, j), coeff in zip(poly.monoms(), poly.coeffs()):
        c = complex(sympy.N(coeff, 30))
        if abs(c) > 1e-20:
            out[(i, j)] = c
    return out


def assert_term_maps_close(actual, expected, tol=1e-12):
    keys = set(actual) | set(expected)
    scale = max(abs(c) for c in expected.values())
    for k in keys:
        assert abs(actual.get(k, 0) - expected.get(k, 0)) <= tol * scale, (
            f"term {k}: {actual.get(k, 0)} vs {expected.get(k, 0)}")


def test_klein_quartic_affine_model_terms():
    p = parse_polynomial("x^3*y + y^3 + x")
    assert p.varnames == ("x", "y")
    assert p.terms == {(3, 1): 1 + 0j, (0, 3): 1 + 0j, (1, 0): 1 + 0j}


def test_single_monomial():
    p = parse_polynomial("y")
    assert p.terms == {(0, 1): 1 + 0j}
    assert p.varnames == ("x", "y")


def test_seven_sheet_model_expansion_matches_sympy():
    text = "w^7 - (z-1)*(z-rho)^2*(z-rho2)^4"
    p = parse_polynomial(text)
    assert p.varnames == ("z", "w")
    assert p.degree(1) == 7
    assert p.degree(0) == 7
    assert_term_maps_close(p.terms, sympy_expand_terms(text, ("z", "w")))


def test_constant_term_of_seven_sheet_model():
    p = parse_polynomial("w^7 - (z-1)*(z-rho)^2*(z-rho2)^4")
    # at z = w = 0 the product contributes -(-1)(-rho)^2(-rho2)^4 = rho^2 * rho^8 = rho
    assert abs(p.terms[(0, 0)] - RHO) < 1e-14


@pytest.mark.parametrize("text,varnames", [
    ("s^7 - t*(t-1)^2", ("t", "s")),
    ("(x + 2*y - 3)^3 - (x - y)^2*(x + 1)", ("x", "y")),
    ("(z - i)^2*(w + 2i)^3 + zeta*z*w", ("z", "w")),
    ("u^2*v^2 - (u - v)^4 + 0.5*u - 1e-2*v", ("u", "v")),
])
def test_expansion_matches_sympy(text, varnames):
    p = parse_polynomial(text)
    assert p.varnames == varnames
    oracle = sympy_expand_terms(
        text.replace("2i", "2*I").replace(" i)", " I)"), varnames)
    assert_term_maps_close(p.terms, oracle)


def test_imaginary_literals():
    p = parse_polynomial("2i*x + y*j - 1.5i", varnames=("x", "y"))
    assert p.terms == {(1, 0): 2j, (0, 1): 1j, (0, 0): -1.5j}


def test_unary_minus_binds_looser_than_power():
    p = parse_polynomial("-x^2", varnames=("x", "y"))
    assert p.terms == {(2, 0): -1 + 0j}


def test_explicit_constants_table():
    p = parse_polynomial("c*x + y", constants={"c": 3 - 4j}, varnames=("x", "y"))
    assert p.terms == {(1, 0): 3 - 4j, (0, 1): 1 + 0j}


def test_variable_shadows_constant_when_explicit():
    p = parse_polynomial("i^2 + t", varnames=("t", "i"))
    assert p.terms == {(0, 2): 1 + 0j, (1, 0): 1 + 0j}


@pytest.mark.parametrize("bad", [
    "x/y",
    "x^y",
    "x^1.5",
    "x^-2",
    "x + ",
    "(x + y",
    "x + q + r",
    "2 @ 3",
])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_polynomial(bad, varnames=("x", "y") if "q" not in bad else None)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as info:
        parse_polynomial("x + $", varnames=("x", "y"))
    assert info.value.position == 4


def test_unknown_single_variable_needs_explicit_names():
    with pytest.raises(ParseError):
        parse_polynomial("q^2 + 1")
    p = parse_polynomial("q^2 + 1", varnames=("q", "r"))
    assert p.terms == {(2, 0): 1 + 0j, (0, 0): 1 + 0j}


def test_render_parse_round_trip_random():
    rng = np.random.default_rng(7)
    for _ in range(20):
        nterms = rng.integers(1, 8)
        terms = {}
        for _ in range(nterms):
            key = (int(rng.integers(0, 5)), int(rng.integers(0, 5)))
            terms[key] = complex(round(rng.normal(), 3), round(rng.normal(), 3))
        p = BivariatePolynomial(terms, ("z", "w"))
        q = parse_polynomial(str(p), varnames=("z", "w"))
        assert q.almost_equal(p, 1e-12), f"round trip failed for {p}"


def test_arithmetic_matches_pointwise_evaluation():
    rng = np.random.default_rng(11)
    a = parse_polynomial("x^2*y - 3*y + 1", varnames=("x", "y"))
    b = parse_polynomial("y^2 + (2 - i)*x", varnames=("x", "y"))
    for _ in range(10):
        u = complex(rng.normal(), rng.normal())
        v = complex(rng.normal(), rng.normal())
        assert abs((a + b).evaluate(u, v) - (a.evaluate(u, v) + b.evaluate(u, v))) < 1e-10
        assert abs((a * b).evaluate(u, v) - a.evaluate(u, v) * b.evaluate(u, v)) < 1e-9
        assert abs((a ** 3).evaluate(u, v) - a.evaluate(u, v) ** 3) < 1e-7 * (1 + abs(a.evaluate(u, v))) ** 3


def test_partial_derivative():
    p = parse_polynomial("x^3*y + y^3 + x")
    assert p.partial(1).terms == {(3, 0): 1 + 0j, (0, 2): 3 + 0j}
    assert p.partial(0).terms == {(2, 1): 3 + 0j, (0, 0): 1 + 0j}


def test_coefficients_in_second():
    p = parse_polynomial("x^3*y + y^3 + x")
    cs = p.coefficients_in_second()
    assert len(cs) == 4
    assert cs[0] == {1: 1 + 0j}
    assert cs[1] == {3: 1 + 0j}
    assert cs[2] == {}
    assert cs[3] == {0: 1 + 0j}


def test_tiny_coefficients_are_dropped():
    p = BivariatePolynomial({(0, 0): 1.0, (1, 1): 1e-16}, ("x", "y"))
    assert (1, 1) not in p.terms


def test_immutability():
    p = parse_polynomial("x + y")
    with pytest.raises(AttributeError):
        p.terms = {}
