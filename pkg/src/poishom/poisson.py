"""Poisson structures on weighted polynomial rings.

A structure stores the ordered variables, their strictly positive integer
weights, and the bracket values {x_i, x_j} for i < j; the full bracket is
recovered by antisymmetry.  Every nonzero bracket entry must be
weight-homogeneous with weight(entry) = w_i + w_j + degree for a common
integer ``degree`` (inferred at construction, 0 for the zero bracket).

The module also houses weighted derivations given by their values on the
generators, the modular derivation (divergence of the bracket against the
standard volume element built from the coordinate differentials), the
unimodularity test, and the abelian group of twist classes that such
derivations represent.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .poly import (
    WEIGHT_INHOMOGENEOUS,
    WEIGHT_ZERO,
    ContextMismatchError,
    Polynomial,
    parse_poly,
)


class StructureError(ValueError):
    """Invalid structure data: bad weights, entries, or homogeneity."""


class JacobiError(StructureError):
    """Jacobi identity fails; ``violations`` lists (triple, jacobiator)."""

    def __init__(self, violations):
        self.violations = list(violations)
        (i, j, k), poly = self.violations[0]
        super().__init__(
            f"Jacobi identity fails on generator triple ({i},{j},{k}): "
            f"jacobiator = {poly}"
        )


class PoissonStructure:
    """A weight-homogeneous Poisson bracket on k[x_1, ..., x_n].

    Build with :meth:`build`, which infers the bracket degree and (by
    default) verifies the Jacobi identity on all generator triples.
    Instances are immutable and hashable.
    """

    __slots__ = ("vars", "weights", "degree", "entries", "_vars_polys", "_hash")

    def __init__(self, vars, weights, degree, entries):
        self.vars: tuple[str, ...] = tuple(vars)
        self.weights: tuple[int, ...] = tuple(weights)
        self.degree: int = degree
        self.entries: dict[tuple[int, int], Polynomial] = dict(entries)
        self._vars_polys = tuple(
            Polynomial.variable(self.vars, i) for i in range(len(self.vars))
        )
        self._hash: int | None = None

    @classmethod
    def build(
        cls,
        vars: Sequence[str],
        weights: Sequence[int],
        entries: Mapping,
        validate: bool = True,
    ) -> "PoissonStructure":
        """Create a structure from bracket entries keyed by (i, j), i < j.

        Entry values may be Polynomial, grammar strings, or scalars.
        Raises :class:`StructureError` for malformed data and
        :class:`JacobiError` when ``validate`` and the Jacobi identity
        fails (the error carries every failing triple with its
        jacobiator).
        """
        vars = tuple(vars)
        weights = tuple(int(w) for w in weights)
        n = len(vars)
        if len(set(vars)) != n or n == 0:
            raise StructureError("variables must be distinct and non-empty")
        if len(weights) != n:
            raise StructureError("weights length does not match variables")
        if any(w <= 0 for w in weights):
            raise StructureError("weights must be strictly positive integers")

        clean: dict[tuple[int, int], Polynomial] = {}
        degree: Optional[int] = None
        for key, value in entries.items():
            i, j = key
            if not (0 <= i < j < n):
                raise StructureError(f"bracket entries must be keyed i < j, got {key}")
            if isinstance(value, str):
                value = parse_poly(value, vars)
            elif isinstance(value, (int, Fraction)):
                value = Polynomial.constant(vars, value)
            elif value.vars != vars:
                raise StructureError(f"bracket entry {key} has a foreign context")
            if value.is_zero():
                continue
            w = value.weight(weights)
            if w == WEIGHT_INHOMOGENEOUS:
                raise StructureError(
                    f"bracket entry {{{vars[i]},{vars[j]}}} = {value} is not "
                    "weight-homogeneous"
                )
            d = w - weights[i] - weights[j]
            if degree is None:
                degree = d
            elif degree != d:
                raise StructureError(
                    f"inconsistent bracket degree: entry {{{vars[i]},{vars[j]}}} "
                    f"gives {d}, earlier entries gave {degree}"
                )
            clean[(i, j)] = value
        structure = cls(vars, weights, 0 if degree is None else degree, clean)
        if validate:
            violations = check_jacobi(structure)
            if violations:
                raise JacobiError(violations)
        return structure

    # -- bracket -------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vars)

    def var_poly(self, i: int) -> Polynomial:
        return self._vars_polys[i]

    def zero_poly(self) -> Polynomial:
        return Polynomial.zero(self.vars)

    def pi(self, i: int, j: int) -> Polynomial:
        """{x_i, x_j} for arbitrary indices, via antisymmetry."""
        if i == j:
            return Polynomial.zero(self.vars)
        if i < j:
            entry = self.entries.get((i, j))
            return entry if entry is not None else Polynomial.zero(self.vars)
        entry = self.entries.get((j, i))
        return -entry if entry is not None else Polynomial.zero(self.vars)

    def bracket(self, f: Polynomial, g: Polynomial) -> Polynomial:
        """Extend the bracket to polynomials: the unique biderivation with
        the given generator values."""
        if f.vars != self.vars or g.vars != self.vars:
            raise ContextMismatchError("polynomial context does not match structure")
        out = Polynomial.zero(self.vars)
        for (i, j), entry in self.entries.items():
            fi, fj = f.diff(i), f.diff(j)
            gi, gj = g.diff(i), g.diff(j)
            if fi and gj:
                out = out + entry * fi * gj
            if fj and gi:
                out = out - entry * fj * gi
        return out

    def jacobiator(self, i: int, j: int, k: int) -> Polynomial:
        """{x_i,{x_j,x_k}} + {x_j,{x_k,x_i}} + {x_k,{x_i,x_j}}."""
        return (
            self.bracket(self.var_poly(i), self.pi(j, k))
            + self.bracket(self.var_poly(j), self.pi(k, i))
            + self.bracket(self.var_poly(k), self.pi(i, j))
        )

    # -- identity and hashing --------------------------------------------------

    def _key(self):
        return (
            self.vars,
            self.weights,
            self.degree,
            tuple(sorted((k, v) for k, v in self.entries.items())),
        )

    def __eq__(self, other):
        if not isinstance(other, PoissonStructure):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def digest(self) -> str:
        """Short stable identifier for reports."""
        text = ";".join(
            [
                ",".join(self.vars),
                ",".join(map(str, self.weights)),
                str(self.degree),
            ]
            + [
                f"{i},{j}:{self.entries[(i, j)]}"
                for (i, j) in sorted(self.entries)
            ]
        )
        return hashlib.sha256(text.encode()).hexdigest()[:12]

    def __repr__(self):
        pairs = ", ".join(
            f"{{{self.vars[i]},{self.vars[j]}}}={v}" for (i, j), v in sorted(self.entries.items())
        )
        return f"PoissonStructure(vars={self.vars}, weights={self.weights}, {pairs or 'zero bracket'})"


def check_jacobi(structure: PoissonStructure):
    """All generator triples violating the Jacobi identity.

    Returns a list of ((i, j, k), jacobiator) pairs; empty means the
    identity holds.  Checking generator triples suffices: the jacobiator
    of an antisymmetric biderivation bracket is a derivation in each
    slot, so it vanishes identically once it vanishes on generators.
    """
    violations = []
    n = structure.n
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                jac = structure.jacobiator(i, j, k)
                if not jac.is_zero():
                    violations.append(((i, j, k), jac))
    return violations


# -- derivations -------------------------------------------------------------


class PDerivation:
    """A derivation given by its values on the generators.

    Each nonzero value must be weight-homogeneous of weight
    ``weights[i] + degree`` for a common integer ``degree``; the zero
    derivation has ``degree is None`` (it qualifies as any degree).
    """

    __slots__ = ("vars", "values", "degree", "_hash")

    def __init__(self, vars, values, degree):
        self.vars: tuple[str, ...] = tuple(vars)
        self.values: tuple[Polynomial, ...] = tuple(values)
        self.degree: Optional[int] = degree
        self._hash: int | None = None

    @classmethod
    def from_values(
        cls, structure: PoissonStructure, values: Iterable
    ) -> "PDerivation":
        """Validate homogeneity against the structure's weights."""
        vals = []
        for v in values:
            if isinstance(v, str):
                v = parse_poly(v, structure.vars)
            elif isinstance(v, (int, Fraction)):
                v = Polynomial.constant(structure.vars, v)
            elif v.vars != structure.vars:
                raise StructureError("derivation value has a foreign context")
            vals.append(v)
        if len(vals) != structure.n:
            raise StructureError("derivation needs one value per variable")
        degree: Optional[int] = None
        for i, v in enumerate(vals):
            w = v.weight(structure.weights)
            if w == WEIGHT_ZERO:
                continue
            if w == WEIGHT_INHOMOGENEOUS:
                raise StructureError(
                    f"derivation value for {structure.vars[i]} is not homogeneous"
                )
            d = w - structure.weights[i]
            if degree is None:
                degree = d
            elif degree != d:
                raise StructureError(
                    "derivation values have inconsistent weight degrees"
                )
        return cls(structure.vars, vals, degree)

    @classmethod
    def zero(cls, vars: Iterable[str]) -> "PDerivation":
        vars = tuple(vars)
        return cls(vars, (Polynomial.zero(vars),) * len(vars), None)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def apply(self, f: Polynomial) -> Polynomial:
        """Extend to polynomials by the Leibniz rule."""
        if f.vars != self.vars:
            raise ContextMismatchError("polynomial context does not match derivation")
        out = Polynomial.zero(self.vars)
        for i, value in enumerate(self.values):
            if value:
                df = f.diff(i)
                if df:
                    out = out + df * value
        return out

    def _combine_degree(self, other: "PDerivation") -> Optional[int]:
        if self.degree is None:
            return other.degree
        if other.degree is None or other.degree == self.degree:
            return self.degree
        raise StructureError("cannot combine derivations of different degrees")

    def __add__(self, other: "PDerivation") -> "PDerivation":
        if self.vars != other.vars:
            raise ContextMismatchError("derivation contexts differ")
        degree = self._combine_degree(other)
        values = tuple(a + b for a, b in zip(self.values, other.values))
        if all(v.is_zero() for v in values):
            degree = None
        return PDerivation(self.vars, values, degree)

    def __neg__(self) -> "PDerivation":
        return PDerivation(self.vars, tuple(-v for v in self.values), self.degree)

    def __sub__(self, other: "PDerivation") -> "PDerivation":
        return self + (-other)

    def scaled(self, factor) -> "PDerivation":
        factor = Fraction(factor)
        if not factor:
            return PDerivation.zero(self.vars)
        return PDerivation(
            self.vars, tuple(v * factor for v in self.values), self.degree
        )

    def __eq__(self, other):
        if not isinstance(other, PDerivation):
            return NotImplemented
        return self.vars == other.vars and self.values == other.values

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, self.values))
        return self._hash

    def __repr__(self):
        body = ", ".join(
            f"{name} -> {value}" for name, value in zip(self.vars, self.values)
        )
        return f"PDerivation({body}; degree={self.degree})"


def modular_derivation(structure: PoissonStructure) -> PDerivation:
    """Divergence of the bracket: values[i] = sum_j d{x_i,x_j}/dx_j.

    Computed against the standard volume element dx_1 ^ ... ^ dx_n, which
    generates the top differential forms of a polynomial ring.  The
    result is always a Poisson derivation of degree equal to the bracket
    degree (None when zero).
    """
    values = []
    for i in range(structure.n):
        total = Polynomial.zero(structure.vars)
        for j in range(structure.n):
            if i == j:
                continue
            entry = structure.pi(i, j)
            if entry:
                total = total + entry.diff(j)
        values.append(total)
    degree = None if all(v.is_zero() for v in values) else structure.degree
    return PDerivation(structure.vars, tuple(values), degree)


def is_poisson_derivation(structure: PoissonStructure, sigma: PDerivation) -> bool:
    """Whether sigma{a,b} = {sigma a, b} + {a, sigma b} holds.

    Checked on generator pairs only; the defect is a biderivation, so
    generator vanishing implies identical vanishing (property-tested on
    random polynomial pairs elsewhere).
    """
    if sigma.vars != structure.vars:
        raise ContextMismatchError("derivation context does not match structure")
    for i in range(structure.n):
        for j in range(i + 1, structure.n):
            lhs = sigma.apply(structure.pi(i, j))
            rhs = structure.bracket(
                sigma.values[i], structure.var_poly(j)
            ) + structure.bracket(structure.var_poly(i), sigma.values[j])
            if lhs != rhs:
                return False
    return True


def is_unimodular(structure: PoissonStructure) -> bool:
    """True when the modular derivation vanishes identically.

    For a polynomial ring the only log-Hamiltonian derivation is zero
    (units are scalars), so the modular class is zero exactly when the
    modular derivation is.
    """
    return modular_derivation(structure).is_zero()


def hamiltonian_derivation(structure: PoissonStructure, f: Polynomial) -> PDerivation:
    """The inner derivation {f, -}; always a Poisson derivation."""
    values = tuple(
        structure.bracket(f, structure.var_poly(i)) for i in range(structure.n)
    )
    degree = None
    for i, v in enumerate(values):
        w = v.weight(structure.weights)
        if isinstance(w, int):
            degree = w - structure.weights[i]
            break
    return PDerivation(structure.vars, values, degree)


# -- twist classes -------------------------------------------------------------


@dataclass(frozen=True)
class TwistClass:
    """An element of the group of rank-one twist classes.

    Over a polynomial ring every log-Hamiltonian derivation is zero, so a
    class is faithfully represented by its derivation; the group law is
    addition of representatives.
    """

    rep: PDerivation

    def __add__(self, other: "TwistClass") -> "TwistClass":
        return TwistClass(self.rep + other.rep)

    def __neg__(self) -> "TwistClass":
        return TwistClass(-self.rep)

    def __sub__(self, other: "TwistClass") -> "TwistClass":
        return TwistClass(self.rep - other.rep)

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    @staticmethod
    def zero(structure: PoissonStructure) -> "TwistClass":
        return TwistClass(PDerivation.zero(structure.vars))


def modular_class(structure: PoissonStructure) -> TwistClass:
    """Class of the top-forms module: represented by the modular derivation."""
    return TwistClass(modular_derivation(structure))


def dual_modular_class(structure: PoissonStructure) -> TwistClass:
    """Class of the dual of the top-forms module: the negated representative."""
    return -modular_class(structure)


def double_modular_class(structure: PoissonStructure) -> TwistClass:
    """Class of the square of the top-forms module: twice the modular
    derivation.  This is the twist datum of the distinguished
    enveloping-algebra automorphism."""
    return TwistClass(modular_derivation(structure).scaled(2))


def dual_double_modular_class(structure: PoissonStructure) -> TwistClass:
    return -double_modular_class(structure)
