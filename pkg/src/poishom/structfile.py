"""Sectioned key-value files describing Poisson structures.

Format (parsed with configparser; ``#`` and ``;`` start comments):

    [algebra]
    vars = x, y, z
    weights = 1, 1, 1

    [bracket]
    x,y = x*y          ; polynomial values use the expression grammar
    y,z = y*z          ; keys pair variables in declaration order

    [twist]            ; optional: a derivation given on the generators
    x = x
    y = 0 - y

Bracket keys must list the two variables in declaration order; the other
orientation is recovered by antisymmetry.  A twist section must define a
weight-homogeneous Poisson derivation whose degree matches the bracket
degree, since only those preserve the slicing.
"""

from __future__ import annotations

import configparser
import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .poisson import (
    PDerivation,
    PoissonStructure,
    StructureError,
    is_poisson_derivation,
)
from .poly import Polynomial, PolyParseError, parse_poly


class StructureFileError(ValueError):
    """Malformed structure file (sections, keys, or polynomial text)."""


@dataclass
class StructureFile:
    """Parsed contents of a structure file."""

    vars: tuple[str, ...]
    weights: tuple[int, ...]
    bracket: dict[tuple[int, int], Polynomial]
    twist_values: Optional[tuple[Polynomial, ...]]
    source_text: str

    @classmethod
    def from_text(cls, text: str) -> "StructureFile":
        parser = configparser.ConfigParser(
            delimiters=("=",),
            comment_prefixes=("#", ";"),
            inline_comment_prefixes=("#", ";"),
            interpolation=None,
        )
        parser.optionxform = str
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise StructureFileError(f"bad structure file: {exc}") from exc
        if "algebra" not in parser:
            raise StructureFileError("missing [algebra] section")
        algebra = parser["algebra"]
        if "vars" not in algebra or "weights" not in algebra:
            raise StructureFileError("[algebra] needs 'vars' and 'weights'")
        vars = tuple(v.strip() for v in algebra["vars"].split(",") if v.strip())
        try:
            weights = tuple(
                int(w.strip()) for w in algebra["weights"].split(",") if w.strip()
            )
        except ValueError as exc:
            raise StructureFileError(f"bad weights: {exc}") from exc
        if len(weights) != len(vars):
            raise StructureFileError("vars and weights have different lengths")
        index = {name: i for i, name in enumerate(vars)}

        bracket: dict[tuple[int, int], Polynomial] = {}
        if "bracket" in parser:
            for key, value in parser["bracket"].items():
                names = [n.strip() for n in key.split(",")]
                if len(names) != 2:
                    raise StructureFileError(
                        f"bracket key {key!r} must pair two variables"
                    )
                missing = [n for n in names if n not in index]
                if missing:
                    raise StructureFileError(
                        f"bracket key {key!r} uses unknown variable {missing[0]!r}"
                    )
                i, j = index[names[0]], index[names[1]]
                if i >= j:
                    raise StructureFileError(
                        f"bracket key {key!r} must list variables in declaration "
                        "order (the other orientation follows by antisymmetry)"
                    )
                if (i, j) in bracket:
                    raise StructureFileError(f"duplicate bracket key {key!r}")
                try:
                    bracket[(i, j)] = parse_poly(value, vars)
                except PolyParseError as exc:
                    raise StructureFileError(
                        f"bad polynomial for bracket {key!r}: {exc}"
                    ) from exc

        twist_values = None
        if "twist" in parser:
            values = [Polynomial.zero(vars)] * len(vars)
            for key, value in parser["twist"].items():
                name = key.strip()
                if name not in index:
                    raise StructureFileError(f"twist key {name!r} is not a variable")
                try:
                    values[index[name]] = parse_poly(value, vars)
                except PolyParseError as exc:
                    raise StructureFileError(
                        f"bad polynomial for twist {name!r}: {exc}"
                    ) from exc
            twist_values = tuple(values)

        return cls(vars, weights, bracket, twist_values, text)

    @classmethod
    def from_path(cls, path: str | Path) -> "StructureFile":
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise StructureFileError(f"cannot read {path}: {exc}") from exc
        return cls.from_text(text)

    def build_structure(self, validate: bool = True) -> PoissonStructure:
        return PoissonStructure.build(
            self.vars, self.weights, self.bracket, validate=validate
        )

    def build_twist(self, structure: PoissonStructure) -> Optional[PDerivation]:
        """Validate and return the optional twist derivation."""
        if self.twist_values is None:
            return None
        sigma = PDerivation.from_values(structure, self.twist_values)
        if sigma.degree is not None and sigma.degree != structure.degree:
            raise StructureError(
                f"twist degree {sigma.degree} does not match bracket degree "
                f"{structure.degree}"
            )
        if not is_poisson_derivation(structure, sigma):
            raise StructureError("twist section is not a Poisson derivation")
        return sigma

    def digest(self) -> str:
        return hashlib.sha256(self.source_text.encode()).hexdigest()[:16]


def dump_structure(structure: PoissonStructure) -> str:
    """Render a structure in the file format (canonical section order)."""
    lines = ["[algebra]"]
    lines.append(f"vars = {', '.join(structure.vars)}")
    lines.append(f"weights = {', '.join(map(str, structure.weights))}")
    lines.append("")
    lines.append("[bracket]")
    for (i, j) in sorted(structure.entries):
        lines.append(
            f"{structure.vars[i]},{structure.vars[j]} = {structure.entries[(i, j)]}"
        )
    return "\n".join(lines) + "\n"
