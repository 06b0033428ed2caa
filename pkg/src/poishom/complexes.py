"""Weight-graded chain and cochain complexes with twisted coefficients.

Homology side: degree-p chains live in M tensor (p-forms), with basis elements
m tensor dx_S for a monomial m and a p-element index subset S.  Cohomology
side: degree-p cochains are alternating p-multiderivations, stored by
their generator components f_T (one polynomial per p-element subset T);
values on non-generator arguments are recovered from the derivation
property in each slot.  Coefficients are the rank-one twists A^sigma of
the ring by a derivation sigma with the same weight degree as the
bracket, acting by {m, a}_sigma = {m, a} + sigma(a) * m.

Both differentials preserve a weight slicing.  Writing W for the
intrinsic weight of a basis element (weight of the polynomial part plus
the weights of its subset indices on the homology side; weight of the
component minus the subset weights on the cohomology side adds up the
same way), each differential shifts W by the bracket degree d.  Slices
are therefore labelled so that the label is constant along a complex:

    homology:    weight(m) + sum(weights[S]) = u - p * d
    cohomology:  weight(f_T)                 = u + p * d + sum(weights[T])

In both conventions the label u equals the intrinsic weight of the
degree-0 end of the slice subcomplex.  Every slice is finite dimensional
because the weights are strictly positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Optional

from .linalg import SparseMatrix
from .poisson import PDerivation, PoissonStructure
from .poly import ContextMismatchError, Monomial, Polynomial

HOMOLOGY = "hom"
COHOMOLOGY = "coh"

Subset = tuple[int, ...]


class WeightBookkeepingError(RuntimeError):
    """A differential left its weight slice: internal invariant broken.

    Raised by :func:`assemble_matrix` instead of silently dropping the
    stray term; a raise here means either a twist of the wrong degree or
    a genuine bug in the slice bookkeeping.
    """


@lru_cache(maxsize=None)
def monomials_of_weight(weights: tuple[int, ...], target: int) -> tuple[Monomial, ...]:
    """All exponent tuples of the given weighted degree, in lexicographic
    order.  Empty for negative targets; finite since weights are positive."""
    if target < 0:
        return ()
    n = len(weights)

    def rec(i: int, remaining: int):
        if i == n - 1:
            if remaining % weights[i] == 0:
                yield (remaining // weights[i],)
            return
        for e in range(remaining // weights[i], -1, -1):
            for tail in rec(i + 1, remaining - e * weights[i]):
                yield (e,) + tail

    result = sorted(rec(0, target))
    return tuple(result)


def _mono_key(exps: Monomial):
    return (sum(exps), exps)


def _zero_derivation_values(structure: PoissonStructure) -> tuple[Polynomial, ...]:
    zero = Polynomial.zero(structure.vars)
    return (zero,) * structure.n


def _twist_values(
    structure: PoissonStructure, sigma: Optional[PDerivation]
) -> tuple[Polynomial, ...]:
    if sigma is None:
        return _zero_derivation_values(structure)
    if sigma.vars != structure.vars:
        raise ContextMismatchError("twist context does not match structure")
    return sigma.values


@dataclass
class ChainElement:
    """A finite combination of m tensor dx_S basis chains of one degree."""

    nvars: int
    degree: int
    terms: dict[tuple[Monomial, Subset], Fraction] = field(default_factory=dict)

    def is_zero(self) -> bool:
        return not self.terms

    def add_term(self, exps: Monomial, subset: Subset, coeff: Fraction) -> None:
        key = (exps, subset)
        s = self.terms.get(key, Fraction(0)) + coeff
        if s:
            self.terms[key] = s
        else:
            self.terms.pop(key, None)

    @classmethod
    def basis(cls, nvars: int, exps: Monomial, subset: Subset) -> "ChainElement":
        return cls(nvars, len(subset), {(tuple(exps), tuple(subset)): Fraction(1)})


@dataclass
class CochainElement:
    """An alternating multiderivation, stored by generator components."""

    nvars: int
    degree: int
    components: dict[Subset, Polynomial] = field(default_factory=dict)

    def is_zero(self) -> bool:
        return not self.components

    def component(self, subset: Subset, vars: tuple[str, ...]) -> Polynomial:
        got = self.components.get(tuple(subset))
        return got if got is not None else Polynomial.zero(vars)

    def add_component(self, subset: Subset, poly: Polynomial) -> None:
        subset = tuple(subset)
        got = self.components.get(subset)
        total = poly if got is None else got + poly
        if total.is_zero():
            self.components.pop(subset, None)
        else:
            self.components[subset] = total

    @classmethod
    def from_poly(cls, nvars: int, poly: Polynomial) -> "CochainElement":
        comp = {} if poly.is_zero() else {(): poly}
        return cls(nvars, 0, comp)


def homology_boundary(
    structure: PoissonStructure,
    sigma: Optional[PDerivation],
    chain: ChainElement,
) -> ChainElement:
    """Boundary of a twisted chain.

    On a basis element m tensor dx_S with S = {i_1 < ... < i_p}:

        sum_t (-1)^(t+1) ({m, x_t} + sigma(x_t) m) tensor dx_(S\\{i_t})
      + sum_{s<t} (-1)^(s+t) sum_k (d pi[i_s][i_t] / dx_k) m tensor dx_k ^ dx_(S\\{i_s,i_t})

    where the dx_k wedge is dropped when k repeats an index and otherwise
    sorted into place with the corresponding sign.  Degree-0 chains map
    to zero.
    """
    n = structure.n
    if chain.nvars != n:
        raise ContextMismatchError("chain context does not match structure")
    twist = _twist_values(structure, sigma)
    out = ChainElement(n, max(chain.degree - 1, 0))
    if chain.degree == 0:
        return out
    for (exps, subset), coeff in chain.terms.items():
        mono = Polynomial.monomial(structure.vars, exps)
        for t_pos, i in enumerate(subset):
            moved = structure.bracket(mono, structure.var_poly(i))
            if twist[i]:
                moved = moved + twist[i] * mono
            if moved.is_zero():
                continue
            sign = 1 if t_pos % 2 == 0 else -1
            rest = subset[:t_pos] + subset[t_pos + 1 :]
            for e2, c2 in moved.terms.items():
                out.add_term(e2, rest, coeff * c2 * sign)
        for s_pos in range(len(subset)):
            for t_pos in range(s_pos + 1, len(subset)):
                i, j = subset[s_pos], subset[t_pos]
                pair_sign = 1 if (s_pos + t_pos) % 2 == 0 else -1
                rest = tuple(
                    idx for q, idx in enumerate(subset) if q not in (s_pos, t_pos)
                )
                entry = structure.pi(i, j)
                for k in range(n):
                    if k in rest:
                        continue
                    partial = entry.diff(k)
                    if partial.is_zero():
                        continue
                    below = sum(1 for r in rest if r < k)
                    sort_sign = 1 if below % 2 == 0 else -1
                    new_subset = tuple(sorted(rest + (k,)))
                    total_sign = pair_sign * sort_sign
                    for e2, c2 in (partial * mono).terms.items():
                        out.add_term(e2, new_subset, coeff * c2 * total_sign)
    return out


def cohomology_coboundary(
    structure: PoissonStructure,
    sigma: Optional[PDerivation],
    cochain: CochainElement,
) -> CochainElement:
    """Coboundary of a twisted cochain, by components.

    For T = {j_0 < ... < j_p} (0-based positions r, s):

        (df)_T = sum_r (-1)^(r+1) ({f_(T\\{j_r}), x_(j_r)} + sigma(x_(j_r)) f_(T\\{j_r}))
               + sum_{r<s} (-1)^(r+s) sum_k (d pi[j_r][j_s] / dx_k)
                           sign(k, T\\{j_r,j_s}) f_(sorted({k} u T\\{j_r,j_s}))

    with the k-term dropped when k repeats.  Degree-n cochains map to
    zero (there are no larger subsets).
    """
    n = structure.n
    if cochain.nvars != n:
        raise ContextMismatchError("cochain context does not match structure")
    twist = _twist_values(structure, sigma)
    p = cochain.degree
    out = CochainElement(n, p + 1)
    if p >= n:
        return out
    for T in combinations(range(n), p + 1):
        acc = Polynomial.zero(structure.vars)
        for r_pos, j in enumerate(T):
            sub = T[:r_pos] + T[r_pos + 1 :]
            f_sub = cochain.components.get(sub)
            if f_sub is None:
                continue
            term = structure.bracket(f_sub, structure.var_poly(j))
            if twist[j]:
                term = term + twist[j] * f_sub
            if term.is_zero():
                continue
            acc = acc - term if r_pos % 2 == 0 else acc + term
        for r_pos in range(len(T)):
            for s_pos in range(r_pos + 1, len(T)):
                i, j = T[r_pos], T[s_pos]
                pair_sign = 1 if (r_pos + s_pos) % 2 == 0 else -1
                rest = tuple(
                    idx for q, idx in enumerate(T) if q not in (r_pos, s_pos)
                )
                entry = structure.pi(i, j)
                for k in range(n):
                    if k in rest:
                        continue
                    partial = entry.diff(k)
                    if partial.is_zero():
                        continue
                    target = tuple(sorted(rest + (k,)))
                    f_target = cochain.components.get(target)
                    if f_target is None:
                        continue
                    below = sum(1 for r in rest if r < k)
                    sign = pair_sign * (1 if below % 2 == 0 else -1)
                    acc = acc + partial * f_target * sign
        if not acc.is_zero():
            out.components[T] = acc
    return out


@dataclass(frozen=True)
class SliceBasis:
    """Ordered basis of one weight slice of one (co)chain degree."""

    side: str
    degree: int
    label: int
    elements: tuple[tuple[Monomial, Subset], ...]

    def __len__(self) -> int:
        return len(self.elements)

    def index_map(self) -> dict[tuple[Monomial, Subset], int]:
        return {elem: i for i, elem in enumerate(self.elements)}


@lru_cache(maxsize=None)
def slice_basis(
    structure: PoissonStructure, side: str, p: int, label: int
) -> SliceBasis:
    """Basis of the (degree p, label u) slice, deterministically ordered
    by graded-lex monomial and then subset.

    Degrees outside [0, n] and labels forcing a negative polynomial
    weight give the empty basis.
    """
    if side not in (HOMOLOGY, COHOMOLOGY):
        raise ValueError(f"side must be {HOMOLOGY!r} or {COHOMOLOGY!r}")
    n = structure.n
    elements: list[tuple[Monomial, Subset]] = []
    if 0 <= p <= n:
        for subset in combinations(range(n), p):
            subset_weight = sum(structure.weights[i] for i in subset)
            if side == HOMOLOGY:
                mono_weight = label - p * structure.degree - subset_weight
            else:
                mono_weight = label + p * structure.degree + subset_weight
            for exps in monomials_of_weight(structure.weights, mono_weight):
                elements.append((exps, subset))
    elements.sort(key=lambda pair: (_mono_key(pair[0]), pair[1]))
    return SliceBasis(side, p, label, tuple(elements))


def assemble_matrix(
    structure: PoissonStructure,
    sigma: Optional[PDerivation],
    side: str,
    p: int,
    label: int,
) -> SparseMatrix:
    """Matrix of the differential leaving degree p inside one slice.

    Homology: boundary from (p, u) to (p-1, u); cohomology: coboundary
    from (p, u) to (p+1, u).  Columns follow the source basis order,
    rows the target basis order.  A differential term falling outside
    the target slice raises :class:`WeightBookkeepingError`.
    """
    source = slice_basis(structure, side, p, label)
    target_degree = p - 1 if side == HOMOLOGY else p + 1
    target = slice_basis(structure, side, target_degree, label)
    index = target.index_map()
    entries: dict[tuple[int, int], Fraction] = {}
    for col, (exps, subset) in enumerate(source.elements):
        if side == HOMOLOGY:
            image = homology_boundary(
                structure, sigma, ChainElement.basis(structure.n, exps, subset)
            )
            produced = image.terms.items()
        else:
            cochain = CochainElement(
                structure.n,
                p,
                {tuple(subset): Polynomial.monomial(structure.vars, exps)},
            )
            image = cohomology_coboundary(structure, sigma, cochain)
            produced = (
                ((e2, sub), c2)
                for sub, poly in image.components.items()
                for e2, c2 in poly.terms.items()
            )
        for (e2, sub2), c2 in produced:
            row = index.get((e2, sub2))
            if row is None:
                raise WeightBookkeepingError(
                    f"differential output {(e2, sub2)} escaped slice "
                    f"(side={side}, p={p}, u={label}); "
                    "twist degree mismatch or slice bookkeeping bug"
                )
            entries[(row, col)] = c2
    return SparseMatrix(len(target), len(source), entries)
