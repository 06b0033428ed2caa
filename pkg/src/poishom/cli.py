"""Command-line front end.

Subcommands: ``check`` (Jacobi, bracket degree, modular derivation,
unimodularity), ``betti`` (graded dimension tables for one side),
``duality`` (cross-check of cohomology against twisted homology),
``sweep`` (randomized duality validation), ``uea`` (normal forms, the
distinguished automorphism, and the top-Ext reduction check), and
``corpus`` (the bundled example structures).

Reports print as text tables; ``--json`` writes a machine-readable
report, ``--csv`` writes the cells as delimited rows, and ``--figure``
renders the table(s) to an image file.  JSON reports are byte-identical
across reruns with the same inputs (timing is shown only in the text
output), and every command is deterministic given its file, flags, and
seed.

Exit codes: 0 success; 1 unreadable input or parse/structure error;
2 Jacobi failure; 3 internal weight-bookkeeping abort; 4 theorem
violation (duality mismatch or failed top-Ext identification).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__, corpus
from .complexes import WeightBookkeepingError
from .duality import SweepConfig, duality_check, sweep as run_sweep
from .linalg import betti
from .poisson import (
    JacobiError,
    PDerivation,
    PoissonStructure,
    StructureError,
    check_jacobi,
    is_poisson_derivation,
    modular_derivation,
)
from .poly import PolyParseError, parse_poly
from .structfile import StructureFile, StructureFileError
from .uea import ext_module_check, nakayama, normal_form, parse_word

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_JACOBI = 2
EXIT_BOOKKEEPING = 3
EXIT_THEOREM = 4


@dataclass
class Report:
    """One command's outcome; JSON form excludes the timing field so
    that reports are byte-stable across reruns."""

    command: str
    input_digest: str
    structure: dict
    result: dict
    version: str
    timing: float

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "input_digest": self.input_digest,
            "structure": self.structure,
            "result": self.result,
            "version": self.version,
        }


def _structure_summary(structure: PoissonStructure) -> dict:
    return {
        "vars": list(structure.vars),
        "weights": list(structure.weights),
        "degree_d": structure.degree,
        "bracket": {
            f"{structure.vars[i]},{structure.vars[j]}": str(poly)
            for (i, j), poly in sorted(structure.entries.items())
        },
    }


def _write_json(report: Report, path: str) -> None:
    Path(path).write_text(json.dumps(report.to_json_dict(), indent=2) + "\n")


def _load_file(path: str) -> StructureFile:
    return StructureFile.from_path(path)


def _resolve_twist(spec: str, structure: PoissonStructure, sf: StructureFile):
    """Map a --twist option to a derivation (None for the zero twist)."""
    if spec == "none":
        return None, "none"
    delta = modular_derivation(structure)
    if spec == "modular":
        return delta, "modular"
    if spec == "2modular":
        return delta.scaled(2), "2*modular"
    if spec == "file":
        sigma = sf.build_twist(structure)
        if sigma is None:
            raise StructureError("--twist file requires a [twist] section")
        return sigma, "file"
    values = [parse_poly(part, structure.vars) for part in spec.split(";")]
    sigma = PDerivation.from_values(structure, values)
    if sigma.degree is not None and sigma.degree != structure.degree:
        raise StructureError(
            f"explicit twist degree {sigma.degree} does not match bracket "
            f"degree {structure.degree}"
        )
    if not is_poisson_derivation(structure, sigma):
        raise StructureError("explicit twist is not a Poisson derivation")
    return sigma, spec


def _parse_degrees(spec: str | None, n: int) -> tuple[int, int]:
    if spec is None:
        return (0, n)
    try:
        lo, hi = spec.split("..")
        return (int(lo), int(hi))
    except ValueError as exc:
        raise StructureFileError(f"bad --degrees {spec!r}: expected a..b") from exc


def cmd_check(args) -> int:
    start = time.perf_counter()
    sf = _load_file(args.file)
    structure = sf.build_structure(validate=False)
    violations = check_jacobi(structure)
    delta = modular_derivation(structure)
    result = {
        "jacobi": "ok" if not violations else "violated",
        "violations": [
            {
                "triple": [structure.vars[i] for i in triple],
                "jacobiator": str(poly),
            }
            for triple, poly in violations
        ],
        "degree_d": structure.degree,
        "modular_derivation": [str(v) for v in delta.values],
        "unimodular": not violations and delta.is_zero(),
    }
    report = Report(
        "check",
        sf.digest(),
        _structure_summary(structure),
        result,
        __version__,
        time.perf_counter() - start,
    )
    print(f"structure: {args.file} (digest {report.input_digest})")
    print(f"vars: {', '.join(structure.vars)}  weights: {', '.join(map(str, structure.weights))}")
    print(f"jacobi: {result['jacobi']}")
    for item in result["violations"]:
        print(f"  triple ({', '.join(item['triple'])}): jacobiator = {item['jacobiator']}")
    print(f"degree_d: {result['degree_d']}")
    derivation = ", ".join(
        f"{name} -> {value}" for name, value in zip(structure.vars, result["modular_derivation"])
    )
    print(f"modular derivation: {derivation}")
    print(f"unimodular: {'yes' if result['unimodular'] else 'no'}")
    print(f"time: {report.timing:.3f}s")
    if args.json:
        _write_json(report, args.json)
    return EXIT_JACOBI if violations else EXIT_OK


def cmd_betti(args) -> int:
    start = time.perf_counter()
    sf = _load_file(args.file)
    structure = sf.build_structure()
    sigma, twist_name = _resolve_twist(args.twist, structure, sf)
    degrees = _parse_degrees(args.degrees, structure.n)
    table = betti(
        structure,
        sigma,
        args.side,
        degrees=degrees,
        labels=args.max_label,
        twist_label=twist_name,
    )
    result = table.to_json_dict()
    report = Report(
        "betti",
        sf.digest(),
        _structure_summary(structure),
        result,
        __version__,
        time.perf_counter() - start,
    )
    side_name = "homology" if args.side == "hom" else "cohomology"
    print(f"{side_name} of {args.file}, twist={twist_name}, |u| <= {args.max_label}")
    print(table.render_grid())
    totals = ", ".join(
        f"p={p}: {table.total(p)}" for p in range(degrees[0], degrees[1] + 1)
    )
    print(f"totals over labels: {totals}")
    print(f"time: {report.timing:.3f}s")
    if args.json:
        _write_json(report, args.json)
    if args.csv:
        with open(args.csv, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["side", "p", "u", "dim"])
            for (p, u), d in sorted(table.cells.items()):
                writer.writerow([table.side, p, u, d])
    if args.figure:
        from .figures import save_betti_figure

        save_betti_figure(table, args.figure)
    return EXIT_OK


def cmd_duality(args) -> int:
    start = time.perf_counter()
    sf = _load_file(args.file)
    structure = sf.build_structure()
    tau, tau_name = _resolve_twist(args.twist, structure, sf)
    degrees = _parse_degrees(args.degrees, structure.n)
    report_obj = duality_check(
        structure,
        tau,
        max_label=args.max_label,
        degrees=degrees,
        twist_by_modular=not args.untwisted,
        structure_id=f"{args.file}:{sf.digest()}",
    )
    result = report_obj.to_json_dict()
    report = Report(
        "duality",
        sf.digest(),
        _structure_summary(structure),
        result,
        __version__,
        time.perf_counter() - start,
    )
    mode = "untwisted" if args.untwisted else "twisted by the modular derivation"
    print(f"duality check ({mode}) on {args.file}, tau={tau_name}")
    print(f"unimodular: {'yes' if report_obj.unimodular else 'no'}")
    if report_obj.passed:
        shift = report_obj.shift if report_obj.shift is not None else "n/a"
        print(f"verdict: PASS ({report_obj.shift_status}, shift {shift})")
        print(f"matched nonzero cells: {report_obj.matched_nonzero}")
    else:
        print("verdict: DUALITY MISMATCH (theorem violation witness)")
        for cell in report_obj.mismatches()[:10]:
            print(
                f"  degree {cell['i']}, label {cell['u']}: "
                f"cohomology {cell['dim_coh']} vs homology {cell['dim_hom']}"
            )
    print(f"time: {report.timing:.3f}s")
    if args.json:
        _write_json(report, args.json)
    if args.csv:
        with open(args.csv, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["i", "u", "dim_coh", "dim_hom", "match"])
            for cell in report_obj.cells:
                writer.writerow(
                    [cell["i"], cell["u"], cell["dim_coh"], cell["dim_hom"], cell["match"]]
                )
    if args.figure:
        from .figures import save_duality_figure

        save_duality_figure(report_obj, args.figure)
    return EXIT_OK if report_obj.passed else EXIT_THEOREM


def cmd_sweep(args) -> int:
    start = time.perf_counter()
    config = SweepConfig(
        n_vars=args.vars,
        family=args.family,
        max_weight=args.max_weight,
        coeff_bound=args.coeff_bound,
        density=args.density,
        max_label=args.max_label,
    )
    result_obj = run_sweep(config, args.count, args.seed)
    result = result_obj.to_json_dict()
    digest = f"sweep:{args.family}:{args.vars}:{args.count}:{args.seed}"
    report = Report(
        "sweep",
        digest,
        {"generator": {
            "n_vars": args.vars,
            "family": args.family,
            "max_weight": args.max_weight,
            "coeff_bound": args.coeff_bound,
            "density": args.density,
            "max_label": args.max_label,
        }},
        result,
        __version__,
        time.perf_counter() - start,
    )
    print(
        f"sweep: {result['generated']} generated, "
        f"{result['jacobi_rejected']} rejected by Jacobi, "
        f"{result['checked']} checked"
    )
    for rep in result_obj.reports:
        status = "pass" if rep.passed else "MISMATCH"
        shift = rep.shift if rep.shift is not None else "-"
        print(f"  {rep.structure_id}: {status} (shift {shift})")
    print(f"all passed: {'yes' if result_obj.all_passed() else 'NO'}")
    print(f"time: {report.timing:.3f}s")
    if args.json:
        _write_json(report, args.json)
    return EXIT_OK if result_obj.all_passed() else EXIT_THEOREM


def cmd_uea(args) -> int:
    start = time.perf_counter()
    sf = _load_file(args.file)
    structure = sf.build_structure()
    if args.subcommand == "nf":
        word = parse_word(args.word, structure.vars)
        element = normal_form(structure, word)
        result = {"word": args.word, "normal_form": str(element)}
        print(result["normal_form"])
        exit_code = EXIT_OK
    elif args.subcommand == "nakayama":
        phi = nakayama(structure)
        twist = ", ".join(
            f"h_{name} -> h_{name} + ({value})"
            for name, value in zip(structure.vars, phi.sigma.values)
        )
        cy = phi.is_identity()
        result = {
            "twist": [str(v) for v in phi.sigma.values],
            "identity": cy,
            "calabi_yau": cy,
        }
        print(f"distinguished automorphism: x fixed; {twist}")
        print(f"identity: {'yes' if cy else 'no'}")
        print(f"enveloping algebra Calabi-Yau: {'yes' if cy else 'no'}")
        exit_code = EXIT_OK
    else:  # ext-check
        check = ext_module_check(
            structure,
            image_samples=args.samples,
            module_samples=args.samples,
            seed=args.seed,
        )
        result = check.to_json_dict()
        print(
            f"top-Ext identification: {'pass' if check.passed else 'FAIL'} "
            f"({check.image_samples} image witnesses, "
            f"{check.module_samples} bracket samples)"
        )
        for failure in check.failures[:5]:
            print(f"  witness: {failure}")
        exit_code = EXIT_OK if check.passed else EXIT_THEOREM
    report = Report(
        f"uea {args.subcommand}",
        sf.digest(),
        _structure_summary(structure),
        result,
        __version__,
        time.perf_counter() - start,
    )
    print(f"time: {report.timing:.3f}s")
    if args.json:
        _write_json(report, args.json)
    return exit_code


def cmd_corpus(args) -> int:
    if args.action == "list":
        for name in corpus.corpus_names():
            print(name)
        return EXIT_OK
    if args.action == "show":
        try:
            print(corpus.corpus_text(args.name), end="")
        except KeyError as exc:
            print(f"error: {exc.args[0]}", file=sys.stderr)
            return EXIT_PARSE
        return EXIT_OK
    # copy
    try:
        text = corpus.corpus_text(args.name)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_PARSE
    dest = Path(args.dest)
    if dest.is_dir():
        dest = dest / f"{args.name}.pstruct"
    dest.write_text(text)
    print(f"wrote {dest}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poishom",
        description="Exact Poisson (co)homology and enveloping-algebra checks "
        "for weighted-homogeneous polynomial Poisson structures.",
    )
    parser.add_argument("--version", action="version", version=f"poishom {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="Jacobi, degree, modular derivation")
    p_check.add_argument("file")
    p_check.add_argument("--json", metavar="PATH")
    p_check.set_defaults(func=cmd_check)

    p_betti = sub.add_parser("betti", help="graded dimension table for one side")
    p_betti.add_argument("file")
    p_betti.add_argument("--side", choices=("hom", "coh"), default="hom")
    p_betti.add_argument(
        "--twist",
        default="none",
        help="none | modular | 2modular | file | 'v1;v2;...'",
    )
    p_betti.add_argument("--max-label", type=int, default=8)
    p_betti.add_argument("--degrees", metavar="a..b")
    p_betti.add_argument("--json", metavar="PATH")
    p_betti.add_argument("--csv", metavar="PATH")
    p_betti.add_argument("--figure", metavar="PATH")
    p_betti.set_defaults(func=cmd_betti)

    p_dual = sub.add_parser("duality", help="cross-check cohomology vs homology")
    p_dual.add_argument("file")
    p_dual.add_argument("--twist", default="none", help="tau (default none)")
    p_dual.add_argument("--untwisted", action="store_true",
                        help="compare against homology of A^tau itself")
    p_dual.add_argument("--max-label", type=int, default=8)
    p_dual.add_argument("--degrees", metavar="a..b")
    p_dual.add_argument("--json", metavar="PATH")
    p_dual.add_argument("--csv", metavar="PATH")
    p_dual.add_argument("--figure", metavar="PATH")
    p_dual.set_defaults(func=cmd_duality)

    p_sweep = sub.add_parser("sweep", help="randomized duality validation")
    p_sweep.add_argument("--vars", type=int, default=3)
    p_sweep.add_argument(
        "--family", choices=("dense", "diagonal", "jacobian", "mixed"), default="mixed"
    )
    p_sweep.add_argument("--count", type=int, default=10)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--max-weight", type=int, default=2)
    p_sweep.add_argument("--coeff-bound", type=int, default=3)
    p_sweep.add_argument("--density", type=float, default=0.7)
    p_sweep.add_argument("--max-label", type=int, default=4)
    p_sweep.add_argument("--json", metavar="PATH")
    p_sweep.set_defaults(func=cmd_sweep)

    p_uea = sub.add_parser("uea", help="enveloping-algebra computations")
    p_uea.add_argument("file")
    uea_sub = p_uea.add_subparsers(dest="subcommand", required=True)
    p_nf = uea_sub.add_parser("nf", help="normal form of a word")
    p_nf.add_argument("word", help="e.g. 'H(x) M(y)'")
    p_nf.add_argument("--json", metavar="PATH")
    p_nf.set_defaults(func=cmd_uea)
    p_nak = uea_sub.add_parser("nakayama", help="the distinguished automorphism")
    p_nak.add_argument("--json", metavar="PATH")
    p_nak.set_defaults(func=cmd_uea)
    p_ext = uea_sub.add_parser("ext-check", help="top-Ext identification check")
    p_ext.add_argument("--samples", type=int, default=100)
    p_ext.add_argument("--seed", type=int, default=20240101)
    p_ext.add_argument("--json", metavar="PATH")
    p_ext.set_defaults(func=cmd_uea)

    p_corpus = sub.add_parser("corpus", help="bundled example structures")
    corpus_sub = p_corpus.add_subparsers(dest="action", required=True)
    corpus_sub.add_parser("list", help="list bundled names").set_defaults(
        func=cmd_corpus
    )
    p_show = corpus_sub.add_parser("show", help="print one bundled file")
    p_show.add_argument("name")
    p_show.set_defaults(func=cmd_corpus)
    p_copy = corpus_sub.add_parser("copy", help="copy one bundled file out")
    p_copy.add_argument("name")
    p_copy.add_argument("dest")
    p_copy.set_defaults(func=cmd_corpus)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except JacobiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_JACOBI
    except (StructureFileError, StructureError, PolyParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except WeightBookkeepingError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_BOOKKEEPING


if __name__ == "__main__":
    sys.exit(main())
