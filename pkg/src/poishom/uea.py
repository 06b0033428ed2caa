"""PBW normal forms in the Poisson enveloping algebra.

The enveloping algebra of a polynomial Poisson structure is generated by
multiplication operators (one per variable, written M or x) and
Hamiltonian operators (written H or h), subject to commutation rules
derived from the bracket.  Words in these generators rewrite to a unique
normal form with all multiplication letters on the left and each block
sorted by variable index; elements are stored as maps

    (x-exponents alpha, h-exponents beta) -> coefficient

representing  sum c * x^alpha * h^beta.  The rewriting rules are

    X(j) X(i) -> X(i) X(j)                                      (j > i)
    Y(i) X(j) -> X(j) Y(i) + {x_i, x_j}                         (any i, j)
    Y(j) Y(i) -> Y(i) Y(j) - sum_k (d{x_i,x_j}/dx_k) Y(k)       (j > i)

where polynomial coefficients expand into x-letter prefixes.  The third
rule uses the expansion H_f = sum_k (df/dx_k) H_(x_k) for polynomial f,
which follows by induction from H_(ab) = M_a H_b + M_b H_a together with
H_1 = 0 (itself forced by H_(1*1) = 2 H_1).  Confluence is not proved
here; it is validated operationally by strategy-independence and
associativity tests.

The module also provides the filtered-algebra leading part (top total
h-degree, read in the commutative associated graded), the automorphisms
x -> x, h_i -> h_i + sigma(x_i) induced by Poisson derivations sigma
(construction verifies the defining relations and fails precisely when
sigma is not a Poisson derivation), the distinguished automorphism
attached to twice the modular derivation, and the reduction of elements
modulo sum_i (h_i - delta(x_i)) * U, whose cokernel is the rank-one
twist of the ring by the modular derivation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .poisson import PDerivation, PoissonStructure, modular_derivation
from .poly import ContextMismatchError, Monomial, Polynomial

LETTER_M = 0  # multiplication operator for a variable
LETTER_H = 1  # Hamiltonian operator for a variable

Letter = tuple[int, int]
Word = tuple[Letter, ...]

_WORD_TOKEN = re.compile(r"^([MH])\((\w+)\)$")


class AutomorphismError(ValueError):
    """The generator substitution breaks a defining relation.

    Carries the failing generator pair, which relation broke, and the
    nonzero residual element as a witness.
    """

    def __init__(self, pair, relation, residual):
        self.pair = pair
        self.relation = relation
        self.residual = residual
        super().__init__(
            f"substitution violates relation {relation} on generator pair "
            f"{pair}: residual {residual}"
        )


def parse_word(text: str, vars: tuple[str, ...]) -> Word:
    """Parse whitespace-separated M(<var>) / H(<var>) tokens."""
    index = {name: i for i, name in enumerate(vars)}
    letters = []
    for token in text.split():
        match = _WORD_TOKEN.match(token)
        if not match:
            raise ValueError(
                f"bad word token {token!r}: expected M(<var>) or H(<var>)"
            )
        kind, name = match.groups()
        if name not in index:
            raise ValueError(f"unknown variable {name!r} in word token {token!r}")
        letters.append((LETTER_M if kind == "M" else LETTER_H, index[name]))
    return tuple(letters)


def _x_letters(exps: Monomial) -> Word:
    out = []
    for i, e in enumerate(exps):
        out.extend(((LETTER_M, i),) * e)
    return tuple(out)


def _reducible_positions(word: Word):
    for t in range(len(word) - 1):
        (ka, ia), (kb, ib) = word[t], word[t + 1]
        if ka == LETTER_M and kb == LETTER_M and ia > ib:
            yield t
        elif ka == LETTER_H and kb == LETTER_M:
            yield t
        elif ka == LETTER_H and kb == LETTER_H and ia > ib:
            yield t


def _rewrite_at(structure: PoissonStructure, word: Word, t: int):
    """Expand one rewriting step; yields (word, coefficient) pairs."""
    (ka, ia), (kb, ib) = word[t], word[t + 1]
    head, tail = word[:t], word[t + 2 :]
    if ka == LETTER_M:  # X X swap
        yield head + ((LETTER_M, ib), (LETTER_M, ia)) + tail, Fraction(1)
        return
    if kb == LETTER_M:  # Y(i) X(j) -> X(j) Y(i) + {x_i, x_j}
        yield head + ((LETTER_M, ib), (LETTER_H, ia)) + tail, Fraction(1)
        entry = structure.pi(ia, ib)
        for exps, coeff in entry.terms.items():
            yield head + _x_letters(exps) + tail, coeff
        return
    # Y(j) Y(i) -> Y(i) Y(j) - sum_k (d{x_i,x_j}/dx_k) Y(k), with j > i
    yield head + ((LETTER_H, ib), (LETTER_H, ia)) + tail, Fraction(1)
    entry = structure.pi(ib, ia)
    for k in range(structure.n):
        partial = entry.diff(k)
        for exps, coeff in partial.terms.items():
            yield head + _x_letters(exps) + ((LETTER_H, k),) + tail, -coeff


def _normalize_words(
    structure: PoissonStructure,
    words: dict[Word, Fraction],
    strategy: str = "leftmost",
) -> dict[tuple[Monomial, Monomial], Fraction]:
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError("strategy must be 'leftmost' or 'rightmost'")
    n = structure.n
    pending = dict(words)
    result: dict[tuple[Monomial, Monomial], Fraction] = {}
    while pending:
        word, coeff = pending.popitem()
        if not coeff:
            continue
        positions = list(_reducible_positions(word))
        if not positions:
            alpha = [0] * n
            beta = [0] * n
            for kind, idx in word:
                (alpha if kind == LETTER_M else beta)[idx] += 1
            key = (tuple(alpha), tuple(beta))
            s = result.get(key, Fraction(0)) + coeff
            if s:
                result[key] = s
            else:
                result.pop(key, None)
            continue
        t = positions[0] if strategy == "leftmost" else positions[-1]
        for new_word, factor in _rewrite_at(structure, word, t):
            if not factor:
                continue
            s = pending.get(new_word, Fraction(0)) + coeff * factor
            if s:
                pending[new_word] = s
            else:
                pending.pop(new_word, None)
    return result


class UEAElement:
    """An enveloping-algebra element in PBW normal form."""

    __slots__ = ("structure", "terms", "_hash")

    def __init__(self, structure: PoissonStructure, terms=()):
        self.structure = structure
        clean: dict[tuple[Monomial, Monomial], Fraction] = {}
        items = terms.items() if hasattr(terms, "items") else terms
        for (alpha, beta), coeff in items:
            key = (tuple(alpha), tuple(beta))
            c = clean.get(key, Fraction(0)) + Fraction(coeff)
            if c:
                clean[key] = c
            else:
                clean.pop(key, None)
        self.terms = clean
        self._hash: int | None = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, structure: PoissonStructure) -> "UEAElement":
        return cls(structure)

    @classmethod
    def one(cls, structure: PoissonStructure) -> "UEAElement":
        n = structure.n
        return cls(structure, {((0,) * n, (0,) * n): Fraction(1)})

    @classmethod
    def from_polynomial(
        cls, structure: PoissonStructure, poly: Polynomial
    ) -> "UEAElement":
        if poly.vars != structure.vars:
            raise ContextMismatchError("polynomial context does not match structure")
        zero = (0,) * structure.n
        return cls(
            structure, {(exps, zero): c for exps, c in poly.terms.items()}
        )

    @classmethod
    def h_generator(cls, structure: PoissonStructure, index: int) -> "UEAElement":
        n = structure.n
        beta = [0] * n
        beta[index] = 1
        return cls(structure, {((0,) * n, tuple(beta)): Fraction(1)})

    @classmethod
    def hamiltonian_of(
        cls, structure: PoissonStructure, poly: Polynomial
    ) -> "UEAElement":
        """The element playing H_f: sum_k (df/dx_k) h_k."""
        terms: dict[tuple[Monomial, Monomial], Fraction] = {}
        n = structure.n
        for k in range(n):
            partial = poly.diff(k)
            beta = [0] * n
            beta[k] = 1
            beta = tuple(beta)
            for exps, c in partial.terms.items():
                key = (exps, beta)
                s = terms.get(key, Fraction(0)) + c
                if s:
                    terms[key] = s
                else:
                    terms.pop(key, None)
        return cls(structure, terms)

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def _check_context(self, other: "UEAElement"):
        if self.structure != other.structure:
            raise ContextMismatchError("elements live over different structures")

    def __add__(self, other: "UEAElement") -> "UEAElement":
        self._check_context(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key, Fraction(0)) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return UEAElement(self.structure, out)

    def __sub__(self, other: "UEAElement") -> "UEAElement":
        return self + (-other)

    def __neg__(self) -> "UEAElement":
        return UEAElement(
            self.structure, {k: -c for k, c in self.terms.items()}
        )

    def scaled(self, factor) -> "UEAElement":
        factor = Fraction(factor)
        if not factor:
            return UEAElement.zero(self.structure)
        return UEAElement(
            self.structure, {k: c * factor for k, c in self.terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, UEAElement):
            return multiply(self, other)
        if isinstance(other, Polynomial):
            return multiply(self, UEAElement.from_polynomial(self.structure, other))
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Polynomial):
            return multiply(UEAElement.from_polynomial(self.structure, other), self)
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        return NotImplemented

    def polynomial_part(self) -> Polynomial:
        """The terms with no h-letters, as a polynomial."""
        return Polynomial(
            self.structure.vars,
            {alpha: c for (alpha, beta), c in self.terms.items() if not any(beta)},
        )

    def is_polynomial(self) -> bool:
        return all(not any(beta) for (_, beta) in self.terms)

    def h_degree(self) -> int:
        """Top total h-degree (filtration degree); -1 for zero."""
        return max((sum(beta) for (_, beta) in self.terms), default=-1)

    def __eq__(self, other):
        if not isinstance(other, UEAElement):
            return NotImplemented
        return self.structure == other.structure and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                (self.structure, frozenset(self.terms.items()))
            )
        return self._hash

    def __str__(self):
        if not self.terms:
            return "0"
        vars = self.structure.vars
        ordered = sorted(
            self.terms.items(),
            key=lambda kv: (
                sum(kv[0][0]) + sum(kv[0][1]),
                kv[0][1],
                kv[0][0],
            ),
            reverse=True,
        )
        parts = []
        for pos, ((alpha, beta), coeff) in enumerate(ordered):
            pieces = []
            if abs(coeff) != 1 or (not any(alpha) and not any(beta)):
                pieces.append(str(abs(coeff)))
            for name, e in zip(vars, alpha):
                if e == 1:
                    pieces.append(name)
                elif e > 1:
                    pieces.append(f"{name}^{e}")
            for name, e in zip(vars, beta):
                if e == 1:
                    pieces.append(f"h_{name}")
                elif e > 1:
                    pieces.append(f"h_{name}^{e}")
            frag = "*".join(pieces)
            if pos == 0:
                parts.append(frag if coeff > 0 else f"-{frag}")
            else:
                parts.append(f" {'+' if coeff > 0 else '-'} {frag}")
        return "".join(parts)

    def __repr__(self):
        return f"UEAElement({self})"


def normal_form(
    structure: PoissonStructure, word: Iterable, strategy: str = "leftmost"
) -> UEAElement:
    """Rewrite a word in the generators to PBW normal form.

    The result is independent of ``strategy`` (leftmost or rightmost
    reduction); this invariance is part of the test suite.
    """
    word = tuple(tuple(letter) for letter in word)
    for kind, idx in word:
        if kind not in (LETTER_M, LETTER_H) or not 0 <= idx < structure.n:
            raise ValueError(f"invalid letter ({kind}, {idx})")
    terms = _normalize_words(structure, {word: Fraction(1)}, strategy)
    return UEAElement(structure, terms)


_F0 = Fraction(0)


@lru_cache(maxsize=None)
def _bracket_var_mono(structure: PoissonStructure, i: int, alpha: Monomial) -> Polynomial:
    return structure.bracket(
        structure.var_poly(i), Polynomial.monomial(structure.vars, alpha)
    )


@lru_cache(maxsize=None)
def _h_into_beta(structure: PoissonStructure, i: int, beta: Monomial):
    """Normal form of h_i * h^beta (beta sorted), as term items.

    If every index supporting beta is >= i the letter slots in directly;
    otherwise commuting past the smallest index j costs a correction by
    the Hamiltonian of {x_j, x_i}, handled recursively.  Memoized per
    structure; together with :func:`_lmul_letter_h` this evaluates
    products without materializing intermediate words.
    """
    n = structure.n
    j = next((k for k, e in enumerate(beta) if e), None)
    if j is None or j >= i:
        new_beta = beta[:i] + (beta[i] + 1,) + beta[i + 1 :]
        return (((((0,) * n), new_beta), Fraction(1)),)
    beta2 = beta[:j] + (beta[j] - 1,) + beta[j + 1 :]
    # h_i h^beta = h_j (h_i h^beta2) - H_{pi(j,i)} h^beta2
    out = _lmul_letter_h(structure, j, dict(_h_into_beta(structure, i, beta2)))
    entry = structure.pi(j, i)
    for k in range(n):
        partial = entry.diff(k)
        if partial.is_zero():
            continue
        for (a, b), c in _h_into_beta(structure, k, beta2):
            for exps, cq in partial.terms.items():
                key = (tuple(x + y for x, y in zip(exps, a)), b)
                s = out.get(key, _F0) - cq * c
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
    return tuple(out.items())


def _lmul_letter_h(structure: PoissonStructure, i: int, terms: dict) -> dict:
    """Left-multiply a normal-form term dict by the generator h_i."""
    out: dict[tuple[Monomial, Monomial], Fraction] = {}
    for (alpha, beta), c in terms.items():
        # h_i x^alpha = x^alpha h_i + {x_i, x^alpha}
        for (a2, b2), c2 in _h_into_beta(structure, i, beta):
            key = (tuple(x + y for x, y in zip(alpha, a2)), b2)
            s = out.get(key, _F0) + c * c2
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        moved = _bracket_var_mono(structure, i, alpha)
        for exps, c3 in moved.terms.items():
            key = (exps, beta)
            s = out.get(key, _F0) + c * c3
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def multiply(u: UEAElement, v: UEAElement) -> UEAElement:
    """Product in the enveloping algebra.

    Each left term x^alpha h^beta acts on the right factor letter by
    letter (h letters right to left, then the commutative x shift);
    agreement with word concatenation plus rewriting is property-tested.
    """
    u._check_context(v)
    structure = u.structure
    n = structure.n
    out: dict[tuple[Monomial, Monomial], Fraction] = {}
    for (alpha, beta), c in u.terms.items():
        cur = dict(v.terms)
        for i in range(n - 1, -1, -1):
            for _ in range(beta[i]):
                cur = _lmul_letter_h(structure, i, cur)
        for (a, b), c2 in cur.items():
            key = (tuple(x + y for x, y in zip(alpha, a)), b)
            s = out.get(key, _F0) + c * c2
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return UEAElement(structure, out)


def gr_leading(u: UEAElement) -> UEAElement:
    """Terms of maximal total h-degree, read in the associated graded.

    The associated graded algebra is the commutative polynomial ring on
    the x and h symbols, so the returned element multiplies
    exponent-wise (see :func:`gr_multiply`).  Zero input is an error.
    """
    if u.is_zero():
        raise ValueError("zero element has no leading part")
    top = u.h_degree()
    return UEAElement(
        u.structure,
        {key: c for key, c in u.terms.items() if sum(key[1]) == top},
    )


def gr_multiply(a: UEAElement, b: UEAElement) -> UEAElement:
    """Commutative product in the associated graded algebra."""
    a._check_context(b)
    out: dict[tuple[Monomial, Monomial], Fraction] = {}
    for (a1, b1), c1 in a.terms.items():
        for (a2, b2), c2 in b.terms.items():
            key = (
                tuple(x + y for x, y in zip(a1, a2)),
                tuple(x + y for x, y in zip(b1, b2)),
            )
            s = out.get(key, Fraction(0)) + c1 * c2
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return UEAElement(a.structure, out)


# -- automorphisms ---------------------------------------------------------------


@dataclass(frozen=True)
class UEAAutomorphism:
    """The filtered automorphism x_i -> x_i, h_i -> h_i + sigma(x_i)."""

    structure: PoissonStructure
    sigma: PDerivation

    def is_identity(self) -> bool:
        return self.sigma.is_zero()

    def apply(self, element: UEAElement) -> UEAElement:
        if element.structure != self.structure:
            raise ContextMismatchError("element does not match automorphism context")
        structure = self.structure
        shifted = [
            UEAElement.h_generator(structure, i)
            + UEAElement.from_polynomial(structure, self.sigma.values[i])
            for i in range(structure.n)
        ]
        total = UEAElement.zero(structure)
        for (alpha, beta), coeff in element.terms.items():
            part = UEAElement.from_polynomial(
                structure, Polynomial.monomial(structure.vars, alpha)
            )
            for i, e in enumerate(beta):
                for _ in range(e):
                    part = multiply(part, shifted[i])
            total = total + part.scaled(coeff)
        return total


def make_automorphism(
    structure: PoissonStructure, sigma: PDerivation
) -> UEAAutomorphism:
    """Build the automorphism induced by sigma, verifying the relations.

    The substitution preserves all defining relations exactly when sigma
    is a Poisson derivation; otherwise an :class:`AutomorphismError` is
    raised naming a broken relation with its nonzero residual.
    """
    if sigma.vars != structure.vars:
        raise ContextMismatchError("derivation context does not match structure")
    phi_h = [
        UEAElement.h_generator(structure, i)
        + UEAElement.from_polynomial(structure, sigma.values[i])
        for i in range(structure.n)
    ]
    for i in range(structure.n):
        for j in range(structure.n):
            if i == j:
                continue
            x_j = UEAElement.from_polynomial(structure, structure.var_poly(j))
            commutator = multiply(phi_h[i], x_j) - multiply(x_j, phi_h[i])
            residual = commutator - UEAElement.from_polynomial(
                structure, structure.pi(i, j)
            )
            if not residual.is_zero():
                raise AutomorphismError((i, j), "[H_i, M_j] = M_{pi_ij}", residual)
    for i in range(structure.n):
        for j in range(i + 1, structure.n):
            entry = structure.pi(i, j)
            commutator = multiply(phi_h[i], phi_h[j]) - multiply(phi_h[j], phi_h[i])
            image_h = UEAElement.hamiltonian_of(
                structure, entry
            ) + UEAElement.from_polynomial(structure, sigma.apply(entry))
            residual = commutator - image_h
            if not residual.is_zero():
                raise AutomorphismError((i, j), "[H_i, H_j] = H_{pi_ij}", residual)
    return UEAAutomorphism(structure, sigma)


def nakayama(structure: PoissonStructure) -> UEAAutomorphism:
    """The distinguished automorphism: twist by twice the modular
    derivation.  It is the identity exactly when the structure is
    unimodular, which is also exactly when the enveloping algebra is
    Calabi-Yau rather than merely twisted Calabi-Yau."""
    delta2 = modular_derivation(structure).scaled(2)
    return make_automorphism(structure, delta2)


# -- top Ext reduction -------------------------------------------------------------


def ext_top_reduce(structure: PoissonStructure, element: UEAElement) -> Polynomial:
    """Reduce modulo the right submodule sum_i (h_i - delta(x_i)) * U.

    For a term x^alpha h^beta with beta != 0, pull the smallest h_i to
    the front (x^alpha h^beta = h_i x^alpha h^(beta-e_i)
    - {x_i, x^alpha} h^(beta-e_i)) and use h_i v = delta(x_i) v modulo
    the submodule.  Total h-degree drops each step, so the rewriting
    terminates in a plain polynomial: the class of the element in the
    cokernel, which carries the twisted module structure of the ring.
    """
    if element.structure != structure:
        raise ContextMismatchError("element does not match structure")
    delta = modular_derivation(structure)
    work = dict(element.terms)
    result: dict[Monomial, Fraction] = {}
    while work:
        (alpha, beta), coeff = work.popitem()
        if not any(beta):
            s = result.get(alpha, Fraction(0)) + coeff
            if s:
                result[alpha] = s
            else:
                result.pop(alpha, None)
            continue
        i = next(k for k, e in enumerate(beta) if e)
        beta2 = beta[:i] + (beta[i] - 1,) + beta[i + 1 :]
        mono = Polynomial.monomial(structure.vars, alpha)
        replacement = delta.values[i] * mono - structure.bracket(
            structure.var_poly(i), mono
        )
        for exps, c in replacement.terms.items():
            key = (exps, beta2)
            s = work.get(key, Fraction(0)) + coeff * c
            if s:
                work[key] = s
            else:
                work.pop(key, None)
    return Polynomial(structure.vars, result)


@dataclass
class ExtCheckResult:
    """Outcome of the cokernel identification check."""

    passed: bool
    image_samples: int
    module_samples: int
    failures: list[dict] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "image_samples": self.image_samples,
            "module_samples": self.module_samples,
            "failures": [
                {k: str(v) for k, v in f.items()} for f in self.failures
            ],
        }


def _random_element(rng, structure, max_terms=3, max_exp=2, coeff_bound=3):
    n = structure.n
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        alpha = tuple(rng.randint(0, max_exp) for _ in range(n))
        beta = tuple(rng.randint(0, max_exp) for _ in range(n))
        c = rng.randint(1, coeff_bound) * rng.choice((1, -1))
        terms[(alpha, beta)] = terms.get((alpha, beta), 0) + c
    return UEAElement(structure, terms)


def ext_module_check(
    structure: PoissonStructure,
    image_samples: int = 200,
    module_samples: int = 200,
    seed: int = 20240101,
) -> ExtCheckResult:
    """Verify the cokernel of the top differential is the twisted ring.

    (i) Reduction kills the generated submodule: for random elements v
    and every i, (h_i - delta(x_i)) * v reduces to zero.  (ii) The right
    bracket induced on the cokernel is the twisted one: for random
    polynomials f and every j, the class of f * h_j equals
    {f, x_j} + f * delta(x_j).
    """
    import random as _random

    rng = _random.Random(seed)
    delta = modular_derivation(structure)
    failures: list[dict] = []

    generators = [
        UEAElement.h_generator(structure, i)
        - UEAElement.from_polynomial(structure, delta.values[i])
        for i in range(structure.n)
    ]
    for sample in range(image_samples):
        v = _random_element(rng, structure)
        i = rng.randrange(structure.n)
        reduced = ext_top_reduce(structure, multiply(generators[i], v))
        if not reduced.is_zero():
            failures.append(
                {"kind": "image", "index": i, "witness": v, "reduced": reduced}
            )
    for sample in range(module_samples):
        terms = {}
        for _ in range(rng.randint(1, 3)):
            exps = tuple(rng.randint(0, 3) for _ in range(structure.n))
            c = rng.randint(1, 3) * rng.choice((1, -1))
            terms[exps] = terms.get(exps, 0) + c
        f = Polynomial(structure.vars, terms)
        for j in range(structure.n):
            lhs = ext_top_reduce(
                structure,
                multiply(
                    UEAElement.from_polynomial(structure, f),
                    UEAElement.h_generator(structure, j),
                ),
            )
            rhs = structure.bracket(f, structure.var_poly(j)) + f * delta.values[j]
            if lhs != rhs:
                failures.append(
                    {"kind": "bracket", "index": j, "witness": f, "reduced": lhs}
                )
    return ExtCheckResult(
        passed=not failures,
        image_samples=image_samples,
        module_samples=module_samples,
        failures=failures,
    )
