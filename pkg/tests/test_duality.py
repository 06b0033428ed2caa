import json
import random

from poishom.duality import (
    SHIFT_MATCHED,
    SweepConfig,
    duality_check,
    random_valid_structure,
    sweep,
)
from poishom.poisson import PoissonStructure, is_unimodular

XY = ("x", "y")
XYZ = ("x", "y", "z")


def sympl():
    return PoissonStructure.build(XY, (1, 1), {(0, 1): "1"})


def logc():
    return PoissonStructure.build(XY, (1, 1), {(0, 1): "x*y"})


class TestDualityCheck:
    def test_symplectic_plane(self):
        report = duality_check(sympl(), max_label=8)
        assert report.passed
        assert report.shift_status == SHIFT_MATCHED
        assert report.shift == -2  # sum(weights) + n*degree = 2 - 4
        assert report.unimodular
        assert not report.mismatches()

    def test_zero_bracket_shift_is_total_weight(self):
        for vars, weights in ((XY, (1, 1)), (XYZ, (1, 2, 1))):
            P = PoissonStructure.build(vars, weights, {})
            report = duality_check(P, max_label=4)
            assert report.passed
            assert report.shift == sum(weights)

    def test_log_canonical_twisted(self):
        report = duality_check(logc(), max_label=8)
        assert report.passed
        assert report.shift == 2
        assert not report.unimodular
        assert report.matched_nonzero > 0

    def test_untwisted_for_unimodular(self):
        report = duality_check(sympl(), max_label=8, twist_by_modular=False)
        assert report.passed

    def test_shift_uniform_across_degrees(self):
        report = duality_check(logc(), max_label=6)
        # every nonzero matched pair used the single reported shift
        shift = report.shift
        for cell in report.cells:
            if cell["dim_coh"]:
                assert (
                    report.homology.dim(
                        logc().n - cell["i"], cell["u"] + shift
                    )
                    == cell["dim_coh"]
                )

    def test_report_json_roundtrip(self):
        report = duality_check(sympl(), max_label=4)
        blob = report.to_json_dict()
        assert json.loads(json.dumps(blob)) == blob

    def test_diagonal_three_variables(self):
        P = PoissonStructure.build(
            XYZ, (1, 1, 1), {(0, 1): "x*y", (0, 2): "2*x*z", (1, 2): "3*y*z"}
        )
        report = duality_check(P, max_label=5)
        assert report.passed
        assert report.shift == 3


class TestSweep:
    def test_count_zero(self):
        result = sweep(SweepConfig(), 0, seed=1)
        assert result.reports == []
        assert result.generated == 0

    def test_deterministic_byte_identical(self):
        config = SweepConfig(n_vars=3, family="mixed", max_label=3)
        a = sweep(config, 8, seed=20240301)
        b = sweep(config, 8, seed=20240301)
        assert json.dumps(a.to_json_dict()) == json.dumps(b.to_json_dict())

    def test_diagonal_survivors_all_pass(self):
        config = SweepConfig(n_vars=3, family="diagonal", max_label=3)
        result = sweep(config, 6, seed=7)
        assert result.jacobi_rejected == 0
        assert len(result.reports) == 6
        assert result.all_passed()

    def test_dense_candidates_filtered(self):
        config = SweepConfig(n_vars=3, family="dense", max_label=3)
        result = sweep(config, 10, seed=99)
        assert result.generated == 10
        assert result.jacobi_rejected + len(result.reports) == 10
        assert result.all_passed()


class TestRandomValidStructures:
    def test_variety_and_validity(self):
        rng = random.Random(4242)
        seen_nonuni = 0
        seen_uni = 0
        for _ in range(30):
            P = random_valid_structure(rng)
            if is_unimodular(P):
                seen_uni += 1
            else:
                seen_nonuni += 1
        assert seen_uni > 0 and seen_nonuni > 0

    def test_duality_on_random_structures(self):
        rng = random.Random(515)
        for _ in range(5):
            P = random_valid_structure(rng)
            report = duality_check(P, max_label=3)
            assert report.passed, (P, report.shift_status, report.mismatches()[:3])
