"""Shared helpers for the test suite: seeded random generators."""

from __future__ import annotations

import random
from fractions import Fraction

from poishom.poly import Polynomial


def random_poly(
    rng: random.Random,
    vars,
    max_degree: int = 3,
    coeff_bound: int = 5,
    max_terms: int = 4,
    allow_zero: bool = True,
) -> Polynomial:
    """A random sparse polynomial with small integer coefficients."""
    vars = tuple(vars)
    terms = {}
    n_terms = rng.randint(0 if allow_zero else 1, max_terms)
    for _ in range(n_terms):
        exps = tuple(rng.randint(0, max_degree) for _ in vars)
        coeff = rng.randint(-coeff_bound, coeff_bound)
        if coeff:
            terms[exps] = terms.get(exps, 0) + coeff
    return Polynomial(vars, terms)


def random_homogeneous_poly(
    rng: random.Random,
    vars,
    weights,
    target_weight: int,
    coeff_bound: int = 5,
    density: float = 0.6,
    allow_zero: bool = True,
) -> Polynomial:
    """A random weight-homogeneous polynomial of the given weight."""
    from poishom.complexes import monomials_of_weight

    vars = tuple(vars)
    if target_weight < 0:
        return Polynomial.zero(vars)
    monos = monomials_of_weight(tuple(weights), target_weight)
    terms = {}
    for exps in monos:
        if rng.random() < density:
            c = rng.randint(1, coeff_bound) * rng.choice((1, -1))
            terms[exps] = Fraction(c)
    if not terms and not allow_zero and monos:
        exps = rng.choice(monos)
        terms[exps] = Fraction(rng.randint(1, coeff_bound))
    return Polynomial(vars, terms)
