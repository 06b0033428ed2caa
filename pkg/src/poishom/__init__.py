"""Exact computations for weighted-homogeneous polynomial Poisson algebras.

The package computes Poisson homology and cohomology with twisted
coefficients over exact rationals, modular derivations and unimodularity,
graded Betti tables, a Poincare-duality cross-check between the two
theories, and a PBW normal-form model of the Poisson enveloping algebra
together with its distinguished automorphism and top-Ext reduction.
"""

__version__ = "0.1.0"

from .poly import (  # noqa: F401
    ContextMismatchError,
    Polynomial,
    PolyParseError,
    parse_poly,
)
from .poisson import (  # noqa: F401
    JacobiError,
    PDerivation,
    PoissonStructure,
    StructureError,
    TwistClass,
    check_jacobi,
    hamiltonian_derivation,
    is_poisson_derivation,
    is_unimodular,
    modular_derivation,
)
