"""Exact sparse linear algebra over the rationals and Betti tables.

Ranks are computed by fraction-free elimination: each row is scaled to
integer entries, elimination steps use the cross-multiplication update
row_q := p * row_q - v * row_r (no division, arbitrary-precision ints),
and rows are reduced by their content gcd after every update to keep
entries small.  Pivots are chosen in the sparsest eligible column, then
the sparsest row, which keeps fill-in low on the very sparse
differential matrices this package produces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Mapping, Optional


class SparseMatrix:
    """Immutable sparse matrix over Q: (row, col) -> nonzero Fraction."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Mapping | Iterable = ()):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.rows = rows
        self.cols = cols
        clean: dict[tuple[int, int], Fraction] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for (r, c), value in items:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry ({r},{c}) outside {rows}x{cols} matrix")
            v = Fraction(value)
            if v:
                clean[(r, c)] = v
        self.entries = clean

    @classmethod
    def from_dense(cls, data: Iterable[Iterable]) -> "SparseMatrix":
        data = [list(row) for row in data]
        rows = len(data)
        cols = len(data[0]) if data else 0
        entries = {
            (r, c): Fraction(v)
            for r, row in enumerate(data)
            for c, v in enumerate(row)
            if v
        }
        return cls(rows, cols, entries)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols, {})

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(
            self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def is_zero(self) -> bool:
        return not self.entries

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError("matrix shapes do not compose")
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                key = (i, j)
                s = acc.get(key, Fraction(0)) + a * b
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        return SparseMatrix(self.rows, other.cols, acc)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    def rank(self) -> int:
        """Exact rank over Q."""
        working: list[dict[int, int]] = []
        for row in _group_rows(self.entries):
            lcm = 1
            for v in row.values():
                lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
            scaled = {c: int(v * lcm) for c, v in row.items()}
            working.append(_strip_content(scaled))
        rank = 0
        while working:
            col_count: dict[int, int] = {}
            for row in working:
                for c in row:
                    col_count[c] = col_count.get(c, 0) + 1
            if not col_count:
                break
            pivot_col = min(col_count, key=lambda c: (col_count[c], c))
            candidates = [row for row in working if pivot_col in row]
            pivot_row = min(candidates, key=len)
            p = pivot_row[pivot_col]
            next_rows: list[dict[int, int]] = []
            for row in working:
                if row is pivot_row:
                    continue
                v = row.get(pivot_col)
                if v is None:
                    next_rows.append(row)
                    continue
                new_row: dict[int, int] = {}
                for c, val in row.items():
                    new_row[c] = val * p
                for c, val in pivot_row.items():
                    s = new_row.get(c, 0) - v * val
                    if s:
                        new_row[c] = s
                    else:
                        new_row.pop(c, None)
                if new_row:
                    next_rows.append(_strip_content(new_row))
            working = next_rows
            rank += 1
        return rank


def _group_rows(entries: Mapping) -> list[dict[int, Fraction]]:
    rows: dict[int, dict[int, Fraction]] = {}
    for (r, c), v in entries.items():
        rows.setdefault(r, {})[c] = v
    return [row for _, row in sorted(rows.items())]


def _strip_content(row: dict[int, int]) -> dict[int, int]:
    g = reduce(math.gcd, (abs(v) for v in row.values()), 0)
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def rank(matrix: SparseMatrix) -> int:
    return matrix.rank()


# -- Betti tables ---------------------------------------------------------------


@dataclass(frozen=True)
class BettiTable:
    """Homology dimensions of computed weight slices.

    ``cells`` maps (degree p, slice label u) to the exact dimension of
    the slice homology.  Every cell inside ``degrees`` x ``labels`` is
    present, including zero cells.
    """

    side: str
    cells: Mapping[tuple[int, int], int]
    degrees: tuple[int, int]
    labels: tuple[int, int]
    twist: str
    structure_digest: str

    def covers(self, p: int, u: int) -> bool:
        return (
            self.degrees[0] <= p <= self.degrees[1]
            and self.labels[0] <= u <= self.labels[1]
        )

    def dim(self, p: int, u: int) -> int:
        return self.cells.get((p, u), 0)

    def total(self, p: int) -> int:
        """Dimension at degree p summed over all computed labels."""
        return sum(d for (q, _), d in self.cells.items() if q == p)

    def nonzero_cells(self) -> list[tuple[int, int, int]]:
        return sorted(
            (p, u, d) for (p, u), d in self.cells.items() if d
        )

    def to_json_dict(self) -> dict:
        return {
            "side": self.side,
            "cells": [
                {"p": p, "u": u, "dim": d}
                for (p, u), d in sorted(self.cells.items())
            ],
            "window": {
                "degrees": list(self.degrees),
                "labels": list(self.labels),
            },
            "twist": self.twist,
            "structure_digest": self.structure_digest,
        }

    def render_grid(self) -> str:
        """Aligned text grid: rows are degrees, columns slice labels."""
        lo_p, hi_p = self.degrees
        lo_u, hi_u = self.labels
        headers = [str(u) for u in range(lo_u, hi_u + 1)]
        width = max([3] + [len(h) for h in headers]) + 1
        lines = [
            "p\\u".rjust(4) + "".join(h.rjust(width) for h in headers)
        ]
        for p in range(lo_p, hi_p + 1):
            cells = []
            for u in range(lo_u, hi_u + 1):
                d = self.dim(p, u)
                cells.append((str(d) if d else ".").rjust(width))
            lines.append(str(p).rjust(4) + "".join(cells))
        return "\n".join(lines)


@lru_cache(maxsize=None)
def _differential_rank(structure, sigma, side: str, p: int, label: int) -> int:
    from . import complexes

    return complexes.assemble_matrix(structure, sigma, side, p, label).rank()


@lru_cache(maxsize=None)
def _slice_size(structure, side: str, p: int, label: int) -> int:
    from . import complexes

    return len(complexes.slice_basis(structure, side, p, label))


def betti(
    structure,
    sigma=None,
    side: str = "hom",
    degrees: Optional[tuple[int, int]] = None,
    labels: int | tuple[int, int] = 8,
    twist_label: Optional[str] = None,
) -> BettiTable:
    """Exact slice-by-slice homology dimensions.

    ``labels`` is either a bound L (labels -L..L) or an explicit (lo, hi)
    range.  Dimensions are computed as

        dim H(p, u) = dim slice(p, u) - rank(out of p) - rank(into p)

    with all three terms taken inside the same label, so no truncation
    error can occur.  The twist must be weight-compatible: its degree has
    to equal the bracket degree.
    """
    from . import complexes

    n = structure.n
    if sigma is not None and sigma.degree is not None and sigma.degree != structure.degree:
        raise ValueError(
            f"twist degree {sigma.degree} does not match bracket degree "
            f"{structure.degree}; slices would not be preserved"
        )
    if degrees is None:
        degrees = (0, n)
    lo_p, hi_p = degrees
    if isinstance(labels, int):
        labels = (-labels, labels)
    lo_u, hi_u = labels
    cells: dict[tuple[int, int], int] = {}
    for u in range(lo_u, hi_u + 1):
        for p in range(lo_p, hi_p + 1):
            size = _slice_size(structure, side, p, u)
            if side == "hom":
                rank_out = _differential_rank(structure, sigma, side, p, u) if p >= 1 else 0
                rank_in = (
                    _differential_rank(structure, sigma, side, p + 1, u)
                    if p + 1 <= n
                    else 0
                )
            else:
                rank_out = _differential_rank(structure, sigma, side, p, u) if p <= n - 1 else 0
                rank_in = (
                    _differential_rank(structure, sigma, side, p - 1, u)
                    if p - 1 >= 0
                    else 0
                )
            dim = size - rank_out - rank_in
            if dim < 0:
                raise RuntimeError(
                    f"negative dimension at (p={p}, u={u}): rank accounting bug"
                )
            cells[(p, u)] = dim
    if twist_label is None:
        twist_label = "none" if sigma is None or sigma.is_zero() else repr(sigma)
    return BettiTable(
        side=side,
        cells=cells,
        degrees=(lo_p, hi_p),
        labels=(lo_u, hi_u),
        twist=twist_label,
        structure_digest=structure.digest(),
    )
