import random
from fractions import Fraction

import pytest

from poishom.linalg import SparseMatrix, betti, rank
from poishom.poisson import PDerivation, PoissonStructure, modular_derivation

XY = ("x", "y")


def dense_gaussian_rank(data):
    """Independent oracle: plain Gaussian elimination on Fractions."""
    m = [[Fraction(v) for v in row] for row in data]
    if not m:
        return 0
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def random_sparse(rng, rows, cols, density=0.3, bound=6):
    entries = {}
    for r in range(rows):
        for c in range(cols):
            if rng.random() < density:
                num = rng.randint(-bound, bound)
                den = rng.choice((1, 1, 1, 2, 3))
                if num:
                    entries[(r, c)] = Fraction(num, den)
    return SparseMatrix(rows, cols, entries)


class TestSparseMatrix:
    def test_identity_rank(self):
        assert SparseMatrix.identity(3).rank() == 3

    def test_zero_rank(self):
        assert SparseMatrix.zero(4, 5).rank() == 0

    def test_proportional_rows(self):
        m = SparseMatrix.from_dense([[1, 2], [2, 4]])
        assert m.rank() == 1
        assert rank(m) == 1

    def test_entry_validation(self):
        with pytest.raises(ValueError):
            SparseMatrix(2, 2, {(2, 0): 1})

    def test_explicit_zero_dropped(self):
        m = SparseMatrix(2, 2, {(0, 0): 0, (1, 1): 3})
        assert (0, 0) not in m.entries

    def test_matmul(self):
        a = SparseMatrix.from_dense([[1, 2], [0, 1]])
        b = SparseMatrix.from_dense([[1, 0], [3, 1]])
        assert (a @ b) == SparseMatrix.from_dense([[7, 2], [3, 1]])

    def test_rank_against_dense_oracle(self):
        rng = random.Random(2024)
        for _ in range(60):
            rows = rng.randint(0, 8)
            cols = rng.randint(1, 8)
            m = random_sparse(rng, rows, cols)
            assert m.rank() == dense_gaussian_rank(m.to_dense())

    def test_rank_transpose(self):
        rng = random.Random(77)
        for _ in range(40):
            m = random_sparse(rng, rng.randint(1, 7), rng.randint(1, 7))
            assert m.rank() == m.transpose().rank()

    def test_rank_row_scaling_and_swaps(self):
        rng = random.Random(88)
        for _ in range(40):
            m = random_sparse(rng, 5, 5)
            dense = m.to_dense()
            i, j = rng.sample(range(5), 2)
            dense[i], dense[j] = dense[j], dense[i]
            scale = Fraction(rng.randint(1, 5), rng.randint(1, 5))
            dense[i] = [scale * v for v in dense[i]]
            assert SparseMatrix.from_dense(dense).rank() == m.rank()


class TestBetti:
    def test_zero_bracket_full_dims(self):
        P = PoissonStructure.build(XY, (1, 1), {})
        from poishom.complexes import slice_basis

        table = betti(P, None, "hom", labels=4)
        for (p, u), d in table.cells.items():
            assert d == len(slice_basis(P, "hom", p, u))

    def test_symplectic_homology_oracle(self):
        P = PoissonStructure.build(XY, (1, 1), {(0, 1): "1"})
        table = betti(P, None, "hom", labels=8)
        assert table.total(0) == 0
        assert table.total(1) == 0
        assert table.total(2) == 1
        assert table.dim(2, -2) == 1

    def test_symplectic_cohomology_oracle(self):
        P = PoissonStructure.build(XY, (1, 1), {(0, 1): "1"})
        table = betti(P, None, "coh", labels=8)
        assert table.total(0) == 1
        assert table.total(1) == 0
        assert table.total(2) == 0
        assert table.dim(0, 0) == 1

    def test_euler_characteristic_per_slice(self):
        from poishom.complexes import slice_basis

        P = PoissonStructure.build(XY, (1, 1), {(0, 1): "x*y"})
        delta = modular_derivation(P)
        for sigma in (None, delta):
            for side in ("hom", "coh"):
                table = betti(P, sigma, side, labels=6)
                for u in range(-6, 7):
                    sizes = sum(
                        (-1) ** p * len(slice_basis(P, side, p, u)) for p in range(3)
                    )
                    dims = sum((-1) ** p * table.dim(p, u) for p in range(3))
                    assert sizes == dims

    def test_incompatible_twist_rejected(self):
        P = PoissonStructure.build(XY, (1, 1), {(0, 1): "1"})
        euler = PDerivation.from_values(P, ["x", "y"])
        with pytest.raises(ValueError):
            betti(P, euler, "hom", labels=2)

    def test_json_shape(self):
        P = PoissonStructure.build(XY, (1, 1), {(0, 1): "1"})
        table = betti(P, None, "hom", labels=2)
        blob = table.to_json_dict()
        assert blob["side"] == "hom"
        assert blob["window"]["labels"] == [-2, 2]
        assert all(set(c) == {"p", "u", "dim"} for c in blob["cells"])

    def test_render_grid(self):
        P = PoissonStructure.build(XY, (1, 1), {(0, 1): "1"})
        grid = betti(P, None, "hom", labels=3).render_grid()
        lines = grid.splitlines()
        assert lines[0].lstrip().startswith("p\\u")
        assert len(lines) == 4  # header + degrees 0..2
