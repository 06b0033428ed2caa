import random
from fractions import Fraction

import pytest

from poishom.poisson import (
    PDerivation,
    PoissonStructure,
    hamiltonian_derivation,
    is_poisson_derivation,
    is_unimodular,
    modular_derivation,
)
from poishom.poly import parse_poly
from poishom.uea import (
    LETTER_H,
    LETTER_M,
    AutomorphismError,
    UEAElement,
    ext_module_check,
    ext_top_reduce,
    gr_leading,
    gr_multiply,
    make_automorphism,
    multiply,
    nakayama,
    normal_form,
    parse_word,
)
from util import random_poly

XY = ("x", "y")
XYZ = ("x", "y", "z")


def sympl():
    return PoissonStructure.build(XY, (1, 1), {(0, 1): "1"})


def logc():
    return PoissonStructure.build(XY, (1, 1), {(0, 1): "x*y"})


def jacobian_xyz():
    phi = parse_poly("x*y*z", XYZ)
    return PoissonStructure.build(
        XYZ,
        (1, 1, 1),
        {(0, 1): phi.diff(2), (1, 2): phi.diff(0), (0, 2): -phi.diff(1)},
    )


def random_word(rng, n, max_len=5):
    return tuple(
        (rng.choice((LETTER_M, LETTER_H)), rng.randrange(n))
        for _ in range(rng.randint(0, max_len))
    )


class TestNormalForm:
    def test_commutation_with_constant_bracket(self):
        P = sympl()
        el = normal_form(P, ((LETTER_H, 0), (LETTER_M, 1)))
        assert el.terms == {
            ((0, 1), (1, 0)): Fraction(1),
            ((0, 0), (0, 0)): Fraction(1),
        }
        assert str(el) == "y*h_x + 1"

    def test_h_commutator_constant_bracket(self):
        P = sympl()
        a = normal_form(P, ((LETTER_H, 0), (LETTER_H, 1)))
        b = normal_form(P, ((LETTER_H, 1), (LETTER_H, 0)))
        assert (a - b).is_zero()

    def test_h_commutator_log_canonical(self):
        P = logc()
        a = normal_form(P, ((LETTER_H, 0), (LETTER_H, 1)))
        b = normal_form(P, ((LETTER_H, 1), (LETTER_H, 0)))
        expected = UEAElement.hamiltonian_of(P, parse_poly("x*y", XY))
        assert a - b == expected
        assert str(a - b) == "y*h_x + x*h_y"

    def test_strategy_independence_random(self):
        rng = random.Random(31)
        for P in (sympl(), logc(), jacobian_xyz()):
            for _ in range(80):
                w = random_word(rng, P.n)
                assert normal_form(P, w, "leftmost") == normal_form(
                    P, w, "rightmost"
                )

    def test_invalid_letter_rejected(self):
        with pytest.raises(ValueError):
            normal_form(sympl(), ((7, 0),))


class TestMultiply:
    def test_identity(self):
        P = logc()
        rng = random.Random(32)
        one = UEAElement.one(P)
        for _ in range(20):
            u = normal_form(P, random_word(rng, 2))
            assert multiply(u, one) == u
            assert multiply(one, u) == u

    def test_commutative_subalgebra(self):
        P = logc()
        f = UEAElement.from_polynomial(P, parse_poly("x^2 + y", XY))
        g = UEAElement.from_polynomial(P, parse_poly("x*y - 3", XY))
        prod = multiply(f, g)
        assert prod == UEAElement.from_polynomial(
            P, parse_poly("x^2 + y", XY) * parse_poly("x*y - 3", XY)
        )

    def test_associativity_random(self):
        rng = random.Random(33)
        for P in (sympl(), logc()):
            for _ in range(60):
                a = normal_form(P, random_word(rng, 2, 4))
                b = normal_form(P, random_word(rng, 2, 4))
                c = normal_form(P, random_word(rng, 2, 4))
                assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))

    def test_word_concatenation_agrees(self):
        rng = random.Random(34)
        P = logc()
        for _ in range(40):
            w1 = random_word(rng, 2, 3)
            w2 = random_word(rng, 2, 3)
            assert multiply(normal_form(P, w1), normal_form(P, w2)) == normal_form(
                P, w1 + w2
            )


class TestGr:
    def test_leading_example(self):
        P = sympl()
        el = normal_form(P, ((LETTER_H, 0), (LETTER_M, 1)))  # y*h_x + 1
        lead = gr_leading(el)
        assert lead.terms == {((0, 1), (1, 0)): Fraction(1)}

    def test_polynomial_is_its_own_leading(self):
        P = logc()
        f = UEAElement.from_polynomial(P, parse_poly("x^2 - y", XY))
        assert gr_leading(f) == f

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            gr_leading(UEAElement.zero(sympl()))

    def test_gr_multiplicativity_random(self):
        rng = random.Random(35)
        for P in (sympl(), logc()):
            count = 0
            while count < 60:
                u = normal_form(P, random_word(rng, 2, 4))
                v = normal_form(P, random_word(rng, 2, 4))
                if u.is_zero() or v.is_zero():
                    continue
                count += 1
                prod = multiply(u, v)
                # cancellation-free check: top degrees must add (they
                # always do; the associated graded is a domain)
                assert prod.h_degree() == u.h_degree() + v.h_degree()
                assert gr_leading(prod) == gr_multiply(gr_leading(u), gr_leading(v))


class TestAutomorphisms:
    def test_zero_is_identity(self):
        P = logc()
        phi = make_automorphism(P, PDerivation.zero(XY))
        assert phi.is_identity()
        rng = random.Random(36)
        for _ in range(10):
            u = normal_form(P, random_word(rng, 2))
            assert phi.apply(u) == u

    def test_modular_derivation_accepted(self):
        P = logc()
        phi = make_automorphism(P, modular_derivation(P))
        assert not phi.is_identity()

    def test_non_poisson_rejected_with_witness(self):
        P = logc()
        bad = PDerivation.from_values(P, ["y", "0"])  # not a Poisson derivation
        assert not is_poisson_derivation(P, bad)
        with pytest.raises(AutomorphismError) as exc:
            make_automorphism(P, bad)
        assert not exc.value.residual.is_zero()

    def test_acceptance_matches_poisson_property(self):
        rng = random.Random(37)
        P = logc()
        for _ in range(40):
            f = random_poly(rng, XY, max_degree=2, max_terms=2)
            sigma = hamiltonian_derivation(P, f)
            make_automorphism(P, sigma)  # must not raise

    def test_composition_is_additive(self):
        rng = random.Random(38)
        P = logc()
        s1 = modular_derivation(P)
        s2 = PDerivation.from_values(P, ["x", "y"])  # Euler, Poisson since d=0
        phi1 = make_automorphism(P, s1)
        phi2 = make_automorphism(P, s2)
        phi12 = make_automorphism(P, s1 + s2)
        for _ in range(15):
            u = normal_form(P, random_word(rng, 2, 4))
            assert phi1.apply(phi2.apply(u)) == phi12.apply(u)

    def test_apply_is_algebra_map(self):
        rng = random.Random(39)
        P = logc()
        phi = make_automorphism(P, modular_derivation(P))
        for _ in range(20):
            u = normal_form(P, random_word(rng, 2, 3))
            v = normal_form(P, random_word(rng, 2, 3))
            assert phi.apply(multiply(u, v)) == multiply(phi.apply(u), phi.apply(v))


class TestNakayama:
    def test_symplectic_identity_cy(self):
        P = sympl()
        assert nakayama(P).is_identity()
        assert is_unimodular(P)

    def test_log_canonical_shift(self):
        P = logc()
        phi = nakayama(P)
        assert not phi.is_identity()
        h_x = UEAElement.h_generator(P, 0)
        expected = h_x + UEAElement.from_polynomial(P, parse_poly("2*x", XY))
        assert phi.apply(h_x) == expected
        h_y = UEAElement.h_generator(P, 1)
        expected_y = h_y + UEAElement.from_polynomial(P, parse_poly("0 - 2*y", XY))
        assert phi.apply(h_y) == expected_y

    def test_jacobian_identity(self):
        P = jacobian_xyz()
        assert nakayama(P).is_identity()

    def test_identity_iff_unimodular(self):
        for P in (sympl(), logc(), jacobian_xyz()):
            assert nakayama(P).is_identity() == is_unimodular(P)


class TestExtReduction:
    def test_generator_reduces_to_modular_value(self):
        P = logc()
        delta = modular_derivation(P)
        for i in range(2):
            h = UEAElement.h_generator(P, i)
            assert ext_top_reduce(P, h) == delta.values[i]

    def test_polynomial_fixed(self):
        P = logc()
        rng = random.Random(40)
        for _ in range(20):
            f = random_poly(rng, XY)
            el = UEAElement.from_polynomial(P, f)
            assert ext_top_reduce(P, el) == f

    def test_single_step_example(self):
        # {x,y}=xy: x*h_x reduces to delta(x)*x - {x,x} = x^2
        P = logc()
        el = UEAElement(P, {((1, 0), (1, 0)): Fraction(1)})
        assert ext_top_reduce(P, el) == parse_poly("x^2", XY)

    def test_induced_bracket_example(self):
        # {x,y}=xy: x*h_y reduces to x*delta(y) + {x,y} = -xy + xy = 0
        P = logc()
        el = UEAElement(P, {((1, 0), (0, 1)): Fraction(1)})
        assert ext_top_reduce(P, el).is_zero()

    def test_reduction_is_right_linear(self):
        # the quotient is a right module: reduce(u * f) = reduce(u) * f
        # (left multiplication does NOT descend; {f, x_j} obstructs it)
        rng = random.Random(41)
        P = logc()
        from poishom.uea import _random_element

        for _ in range(20):
            f = random_poly(rng, XY, max_degree=2, max_terms=2)
            u = _random_element(rng, P)
            lhs = ext_top_reduce(P, multiply(u, UEAElement.from_polynomial(P, f)))
            rhs = ext_top_reduce(P, u) * f
            assert lhs == rhs

    def test_left_multiplication_does_not_descend(self):
        # witness: y * h_x = (h_x - delta(x)) * y lies in the image, so its
        # class is 0, while y * class(h_x) = x*y is not
        P = logc()
        el = UEAElement(P, {((0, 1), (1, 0)): Fraction(1)})
        assert ext_top_reduce(P, el).is_zero()

    def test_ext_module_check_passes(self):
        for P in (sympl(), logc(), jacobian_xyz()):
            result = ext_module_check(P, image_samples=40, module_samples=40)
            assert result.passed, result.failures[:2]


class TestWordParsing:
    def test_cli_word_syntax(self):
        word = parse_word("H(x) M(y)", XY)
        assert word == ((LETTER_H, 0), (LETTER_M, 1))

    def test_bad_token(self):
        with pytest.raises(ValueError):
            parse_word("Q(x)", XY)
        with pytest.raises(ValueError):
            parse_word("M(w)", XY)
