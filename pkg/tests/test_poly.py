import random
from fractions import Fraction

import pytest

from poishom.poly import (
    WEIGHT_INHOMOGENEOUS,
    WEIGHT_ZERO,
    ContextMismatchError,
    Polynomial,
    PolyParseError,
    parse_poly,
)
from util import random_poly

XY = ("x", "y")


def P(text, vars=XY):
    return parse_poly(text, vars)


class TestParse:
    def test_literal_reading(self):
        p = P("x*y + 2")
        assert p.terms == {(1, 1): Fraction(1), (0, 0): Fraction(2)}

    def test_cancellation(self):
        assert P("x^2 - x^2").is_zero()

    def test_binomial_expansion(self):
        assert P("(x+y)^2") == P("x^2 + 2*x*y + y^2")

    def test_rational_coefficients(self):
        assert P("3/2*x").terms == {(1, 0): Fraction(3, 2)}
        assert P("2/4") == Polynomial.constant(XY, Fraction(1, 2))

    def test_whitespace_insignificant(self):
        assert P("  x *y\t+ 2 ") == P("x*y+2")

    def test_unknown_variable(self):
        with pytest.raises(PolyParseError) as exc:
            P("x + z")
        assert "unknown variable" in str(exc.value)
        assert exc.value.position == 4

    def test_syntax_error_position(self):
        with pytest.raises(PolyParseError) as exc:
            P("x + ")
        assert exc.value.position == 4

    def test_negative_exponent(self):
        with pytest.raises(PolyParseError) as exc:
            P("x^-2")
        assert "negative exponent" in str(exc.value)

    def test_implicit_multiplication_rejected(self):
        with pytest.raises(PolyParseError):
            P("2x")
        with pytest.raises(PolyParseError):
            P("x y")

    def test_leading_minus_rejected(self):
        with pytest.raises(PolyParseError):
            P("-x")

    def test_zero_denominator(self):
        with pytest.raises(PolyParseError) as exc:
            P("1/0")
        assert "zero denominator" in str(exc.value)

    def test_nested_parens_and_powers(self):
        assert P("((x+1))^3") == P("x^3 + 3*x^2 + 3*x + 1")
        assert P("2^3") == Polynomial.constant(XY, 8)


class TestPrint:
    def test_canonical_order(self):
        assert str(P("y^2 + x^2 + 2*x*y")) == "x^2 + 2*x*y + y^2"
        assert str(P("2 + x*y")) == "x*y + 2"

    def test_zero(self):
        assert str(Polynomial.zero(XY)) == "0"

    def test_negative_leading_term(self):
        p = P("x - 2*x")
        assert str(p) == "0 - x"
        assert parse_poly(str(p), XY) == p

    def test_roundtrip_random(self):
        rng = random.Random(20240811)
        for _ in range(300):
            p = random_poly(rng, XY)
            assert parse_poly(str(p), XY) == p

    def test_parse_print_parse_fixed_point(self):
        rng = random.Random(7)
        for _ in range(100):
            p = random_poly(rng, ("x", "y", "z"), max_degree=2)
            text = str(p)
            assert str(parse_poly(text, ("x", "y", "z"))) == text


class TestArithmetic:
    def test_additive_inverse(self):
        x = Polynomial.variable(XY, 0)
        assert (x + (-x)).is_zero()

    def test_expansion(self):
        assert P("x+y") * P("x-y") == P("x^2 - y^2")

    def test_multiplicative_identity(self):
        rng = random.Random(3)
        for _ in range(20):
            f = random_poly(rng, XY)
            assert f * Polynomial.constant(XY, 1) == f

    def test_context_mismatch(self):
        with pytest.raises(ContextMismatchError):
            Polynomial.variable(XY, 0) + Polynomial.variable(("x", "z"), 0)

    def test_ring_axioms_random(self):
        rng = random.Random(99)
        for _ in range(120):
            f = random_poly(rng, XY, max_degree=2)
            g = random_poly(rng, XY, max_degree=2)
            h = random_poly(rng, XY, max_degree=2)
            assert (f + g) + h == f + (g + h)
            assert f + g == g + f
            assert (f * g) * h == f * (g * h)
            assert f * g == g * f
            assert f * (g + h) == f * g + f * h

    def test_scalar_ops(self):
        f = P("x + 2")
        assert 2 * f == P("2*x + 4")
        assert f * Fraction(1, 2) == P("1/2*x + 1")
        assert f - 2 == P("x")


class TestDiff:
    def test_power_rule(self):
        assert P("x^2*y").diff(0) == P("2*x*y")

    def test_constant(self):
        assert Polynomial.constant(XY, 7).diff(0).is_zero()

    def test_linear(self):
        assert P("x^3 + y").diff(1) == Polynomial.constant(XY, 1)

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            P("x").diff(5)

    def test_leibniz_random(self):
        rng = random.Random(1234)
        for _ in range(100):
            f = random_poly(rng, XY, max_degree=3)
            g = random_poly(rng, XY, max_degree=3)
            for i in range(2):
                assert (f * g).diff(i) == f * g.diff(i) + g * f.diff(i)


class TestWeight:
    def test_examples(self):
        assert P("x^2*y").weight((1, 1)) == 3
        assert P("x + y^2").weight((2, 1)) == 2
        assert P("x + y").weight((1, 2)) == WEIGHT_INHOMOGENEOUS

    def test_zero(self):
        assert Polynomial.zero(XY).weight((1, 1)) == WEIGHT_ZERO

    def test_nonpositive_weights_rejected(self):
        with pytest.raises(ValueError):
            P("x").weight((0, 1))

    def test_multiplicativity_random(self):
        rng = random.Random(55)
        weights = (2, 3)
        for _ in range(100):
            wf = rng.randint(0, 6)
            wg = rng.randint(0, 6)
            from util import random_homogeneous_poly

            f = random_homogeneous_poly(rng, XY, weights, wf, allow_zero=False)
            g = random_homogeneous_poly(rng, XY, weights, wg, allow_zero=False)
            if f.is_zero() or g.is_zero():
                continue
            assert (f * g).weight(weights) == f.weight(weights) + g.weight(weights)
