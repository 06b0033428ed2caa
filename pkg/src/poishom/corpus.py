"""Access to the bundled example structures.

The corpus spans unimodular and non-unimodular structures, bracket
degrees -2 and 0, and two and three variables: the constant symplectic
plane, the log-canonical plane, a diagonal quadratic 3-variable bracket,
and potential-derived brackets for x*y*z and the elliptic potentials
(x^3+y^3+z^3)/3 + lambda*x*y*z, plus zero brackets in 2 and 3 variables.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .poisson import PoissonStructure
from .structfile import StructureFile


def corpus_names() -> list[str]:
    """Names of the bundled structures, sorted."""
    root = resources.files("poishom") / "corpus"
    return sorted(p.name.removesuffix(".pstruct") for p in root.iterdir() if p.name.endswith(".pstruct"))


def corpus_text(name: str) -> str:
    path = resources.files("poishom") / "corpus" / f"{name}.pstruct"
    if not path.is_file():
        raise KeyError(f"no bundled structure named {name!r}; see corpus_names()")
    return path.read_text()


def corpus_path(name: str) -> Path:
    """Filesystem path of a bundled structure file."""
    path = resources.files("poishom") / "corpus" / f"{name}.pstruct"
    if not path.is_file():
        raise KeyError(f"no bundled structure named {name!r}; see corpus_names()")
    return Path(str(path))


def load_structure(name: str) -> PoissonStructure:
    """Build (and validate) one bundled structure."""
    return StructureFile.from_text(corpus_text(name)).build_structure()


def load_all() -> dict[str, PoissonStructure]:
    return {name: load_structure(name) for name in corpus_names()}
