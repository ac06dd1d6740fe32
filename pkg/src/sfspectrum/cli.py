"""File-based front end: parse system files, run the decisions, emit reports.

System files are JSON with exact rational coefficients ("num" or "num/den"
strings, no decimals).  Reports are JSON with a stable field layout, byte
identical for identical inputs and settings.  Exit codes: 0 success or
agreement, 1 usage/parse error, 2 analysis inconsistency, 3 enumeration
budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys as _sys
from fractions import Fraction
from pathlib import Path

from .fixedmodes import (
    DEFAULT_CLUSTER_TOL,
    DEFAULT_RANK_TOL,
    NumericSystem,
    fixed_spectrum,
    random_feedback_oracle,
)
from .graph import (
    DEFAULT_BUDGET,
    EnumerationBudgetExceeded,
    NonBinaryParameterization,
    build_graph,
    decide_graphical,
    export_dot,
    similarity_classes,
    enumerate_cycle_subgraphs,
)
from .polymatrix import ParamMatrix, ParamPoint, ParamPoly
from .structural import closed_loop_generic_rank, decide_linear, decide_polynomial
from .system import (
    ChannelSubset,
    MultiChannelSystem,
    NotLinearlyParameterized,
    classify,
)

__all__ = [
    "SystemFileError",
    "parse_system",
    "parse_system_dict",
    "serialize_system",
    "cmd_analyze",
    "cmd_fixed_modes",
    "cmd_graph",
    "cmd_crosscheck",
    "main",
]

SCHEMA_VERSION = 1
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCONSISTENT = 2
EXIT_BUDGET = 3

_COEFF_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


class SystemFileError(ValueError):
    """A system file failed to parse; the message names the offending field."""


def _require_keys(obj: dict, allowed: set[str], required: set[str], where: str):
    unknown = set(obj) - allowed
    if unknown:
        raise SystemFileError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise SystemFileError(f"{where}: missing field(s) {sorted(missing)}")


def _parse_coeff(text, where: str) -> Fraction:
    if not isinstance(text, str) or not _COEFF_RE.match(text):
        raise SystemFileError(
            f"{where}: coefficient must be a decimal-free 'num' or 'num/den' string, got {text!r}"
        )
    return Fraction(text)


def _parse_entries(
    raw, rows: int, cols: int, param_index: dict[str, int], where: str
) -> dict[tuple[int, int], ParamPoly]:
    if not isinstance(raw, list):
        raise SystemFileError(f"{where}: expected a list of entries")
    entries: dict[tuple[int, int], ParamPoly] = {}
    for pos, item in enumerate(raw):
        spot = f"{where}, entry {pos}"
        if not isinstance(item, dict):
            raise SystemFileError(f"{spot}: expected an object")
        _require_keys(item, {"row", "col", "terms"}, {"row", "col", "terms"}, spot)
        row, col = item["row"], item["col"]
        if not (isinstance(row, int) and 0 <= row < rows):
            raise SystemFileError(f"{spot}: row {row!r} outside 0..{rows - 1}")
        if not (isinstance(col, int) and 0 <= col < cols):
            raise SystemFileError(f"{spot}: col {col!r} outside 0..{cols - 1}")
        if (row, col) in entries:
            raise SystemFileError(f"{spot}: duplicate entry for ({row}, {col})")
        terms: dict = {}
        if not isinstance(item["terms"], list):
            raise SystemFileError(f"{spot}: terms must be a list")
        for tpos, term in enumerate(item["terms"]):
            tspot = f"{spot}, term {tpos}"
            if not isinstance(term, dict):
                raise SystemFileError(f"{tspot}: expected an object")
            _require_keys(term, {"coeff", "monomial"}, {"coeff", "monomial"}, tspot)
            coeff = _parse_coeff(term["coeff"], tspot)
            monomial = term["monomial"]
            if not isinstance(monomial, dict):
                raise SystemFileError(f"{tspot}: monomial must be an object")
            factors = []
            for name, exp in monomial.items():
                if name not in param_index:
                    raise SystemFileError(f"{tspot}: unknown parameter {name!r}")
                if not isinstance(exp, int) or exp < 1:
                    raise SystemFileError(
                        f"{tspot}: exponent of {name!r} must be an integer >= 1"
                    )
                factors.append((param_index[name], exp))
            key = tuple(sorted(factors))
            if key in terms:
                raise SystemFileError(f"{tspot}: duplicate monomial")
            terms[key] = coeff
        entries[(row, col)] = ParamPoly(terms)
    return entries


def parse_system_dict(doc: dict, where: str = "system") -> tuple[MultiChannelSystem, list[str]]:
    """Parse an in-memory system description; returns (system, parameter names)."""
    if not isinstance(doc, dict):
        raise SystemFileError(f"{where}: expected a JSON object")
    _require_keys(
        doc,
        {"schema_version", "n", "parameters", "channels", "A", "B", "C"},
        {"schema_version", "n", "parameters", "channels", "A", "B", "C"},
        where,
    )
    if doc["schema_version"] != SCHEMA_VERSION:
        raise SystemFileError(
            f"{where}: unsupported schema_version {doc['schema_version']!r}"
        )
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise SystemFileError(f"{where}: n must be a positive integer")
    names = doc["parameters"]
    if not isinstance(names, list) or not all(isinstance(s, str) and s for s in names):
        raise SystemFileError(f"{where}: parameters must be a list of nonempty names")
    if len(set(names)) != len(names):
        raise SystemFileError(f"{where}: parameter names must be unique")
    param_index = {name: i for i, name in enumerate(names)}
    q = len(names)
    channels = []
    if not isinstance(doc["channels"], list) or not doc["channels"]:
        raise SystemFileError(f"{where}: channels must be a nonempty list")
    for pos, ch in enumerate(doc["channels"]):
        spot = f"{where}, channel {pos + 1}"
        if not isinstance(ch, dict):
            raise SystemFileError(f"{spot}: expected an object")
        _require_keys(ch, {"m", "l"}, {"m", "l"}, spot)
        if not all(isinstance(ch[x], int) and ch[x] >= 0 for x in ("m", "l")):
            raise SystemFileError(f"{spot}: m and l must be nonnegative integers")
        channels.append((ch["m"], ch["l"]))
    k = len(channels)
    A = ParamMatrix(n, n, _parse_entries(doc["A"], n, n, param_index, f"{where}.A"), q)
    for block_name, count in (("B", k), ("C", k)):
        if not isinstance(doc[block_name], list) or len(doc[block_name]) != count:
            raise SystemFileError(f"{where}.{block_name}: expected one entry list per channel")
    B_blocks = tuple(
        ParamMatrix(
            n,
            channels[i][0],
            _parse_entries(doc["B"][i], n, channels[i][0], param_index, f"{where}.B[{i + 1}]"),
            q,
        )
        for i in range(k)
    )
    C_blocks = tuple(
        ParamMatrix(
            channels[i][1],
            n,
            _parse_entries(doc["C"][i], channels[i][1], n, param_index, f"{where}.C[{i + 1}]"),
            q,
        )
        for i in range(k)
    )
    system = MultiChannelSystem(
        n=n, channels=tuple(channels), A=A, B_blocks=B_blocks, C_blocks=C_blocks, q=q
    )
    return system, list(names)


def parse_system(path: str | Path) -> tuple[MultiChannelSystem, list[str]]:
    """Parse a system file; raises SystemFileError with field context."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as err:
        raise SystemFileError(f"{path}: {err}") from err
    except json.JSONDecodeError as err:
        raise SystemFileError(f"{path}: invalid JSON at line {err.lineno}: {err.msg}") from err
    return parse_system_dict(doc, where=str(path))


def _entries_doc(mat: ParamMatrix, names: list[str]) -> list[dict]:
    out = []
    for (i, j), poly in mat.items():
        terms = []
        for mono, coeff in sorted(poly.terms.items()):
            terms.append(
                {
                    "coeff": str(coeff),
                    "monomial": {names[idx]: exp for idx, exp in mono},
                }
            )
        out.append({"row": i, "col": j, "terms": terms})
    return out


def serialize_system(sys: MultiChannelSystem, names: list[str]) -> dict:
    """Round-trippable JSON document for a system."""
    return {
        "schema_version": SCHEMA_VERSION,
        "n": sys.n,
        "parameters": list(names),
        "channels": [{"m": m_i, "l": l_i} for m_i, l_i in sys.channels],
        "A": _entries_doc(sys.A, names),
        "B": [_entries_doc(B, names) for B in sys.B_blocks],
        "C": [_entries_doc(C, names) for C in sys.C_blocks],
    }


# -- report helpers --------------------------------------------------------------


def _complex_doc(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def _subset_doc(s: ChannelSubset | None):
    return None if s is None else [i + 1 for i in s.members]


def _verdict_doc(verdict) -> dict:
    return {
        "has_sfs": verdict.has_sfs,
        "route": verdict.route,
        "reason": verdict.reason,
        "witness": _subset_doc(verdict.witness),
        "diagnostics": verdict.diagnostics,
    }


def _fixed_spectrum_doc(result) -> list[dict]:
    return [
        {
            "eigenvalue": _complex_doc(fe.value),
            "witnesses": [_subset_doc(w) for w in fe.witnesses],
        }
        for fe in result.fixed_eigenvalues
    ]


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# -- subcommands ---------------------------------------------------------------


def cmd_analyze(
    path: str | Path,
    seed: int = 0,
    trials: int = 10,
    tol: float = DEFAULT_RANK_TOL,
    budget: int = DEFAULT_BUDGET,
    sample_points: int = 3,
) -> tuple[dict, int]:
    """Classify, run every applicable decision route, and cross-check them."""
    system, names = parse_system(path)
    cls = classify(system)
    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "input": str(path),
        "settings": {
            "seed": seed,
            "trials": trials,
            "tol": tol,
            "budget": budget,
        },
        "classification": cls.as_dict(),
    }
    verdicts: dict = {"pencil_sampling": None, "algebraic": None, "graphical": None}
    exit_code = EXIT_OK
    v1 = decide_polynomial(system, trials=trials, seed=seed)
    verdicts["pencil_sampling"] = _verdict_doc(v1)
    computed = [v1.has_sfs]
    if cls.linear:
        v2 = decide_linear(system, cls.decomposition, trials=trials, seed=seed)
        verdicts["algebraic"] = _verdict_doc(v2)
        computed.append(v2.has_sfs)
    if cls.binary:
        v3 = decide_graphical(system, cls.decomposition, budget=budget)
        verdicts["graphical"] = _verdict_doc(v3)
        computed.append(v3.has_sfs)
    report["verdicts"] = verdicts
    agree = len(set(computed)) == 1
    report["consistency"] = {
        "agree": agree,
        "has_sfs_values": computed,
    }
    if not agree:
        report["consistency"]["error"] = "decision routes disagree; see diagnostics"
        exit_code = EXIT_INCONSISTENT
    samples = []
    for i in range(sample_points):
        rng_seed = seed + 7919 * (i + 1)
        rng = random.Random(rng_seed)
        values = tuple(Fraction(rng.randint(-30, 30)) for _ in range(system.q))
        point = ParamPoint(values=values, seed=rng_seed)
        numeric = NumericSystem.from_system(system, point)
        result = fixed_spectrum(numeric, tol=tol)
        samples.append(
            {
                "point": {names[idx]: str(v) for idx, v in enumerate(values)},
                "seed": rng_seed,
                "fixed_eigenvalues": _fixed_spectrum_doc(result),
            }
        )
    report["fixed_spectrum_samples"] = samples
    return report, exit_code


def cmd_fixed_modes(
    path: str | Path,
    assignments: dict[str, Fraction],
    tol: float = DEFAULT_RANK_TOL,
    samples: int = 1000,
    seed: int = 0,
) -> tuple[dict, int]:
    """Numeric fixed spectrum at one parameter point, pencil route and oracle."""
    system, names = parse_system(path)
    missing = [name for name in names if name not in assignments]
    if missing:
        raise SystemFileError(f"missing parameter assignment(s): {', '.join(missing)}")
    unknown = [name for name in assignments if name not in names]
    if unknown:
        raise SystemFileError(f"unknown parameter(s) assigned: {', '.join(unknown)}")
    values = tuple(assignments[name] for name in names)
    numeric = NumericSystem.from_system(system, ParamPoint(values=values, seed=seed))
    result = fixed_spectrum(numeric, tol=tol)
    oracle = random_feedback_oracle(numeric, samples=samples, seed=seed)
    pencil_values = result.values()
    matched = len(pencil_values) == len(oracle) and all(
        min((abs(z - w) for w in oracle), default=float("inf")) <= DEFAULT_CLUSTER_TOL
        for z in pencil_values
    )
    report = {
        "schema_version": SCHEMA_VERSION,
        "input": str(path),
        "point": {name: str(assignments[name]) for name in names},
        "settings": {"tol": tol, "samples": samples, "seed": seed},
        "pencil_route": _fixed_spectrum_doc(result),
        "oracle_route": [_complex_doc(z) for z in oracle],
        "agree": matched,
    }
    return report, EXIT_OK if matched else EXIT_INCONSISTENT


def cmd_graph(path: str | Path, out: str | Path | None = None) -> tuple[str, int]:
    """DOT rendering of the colored graph; rejects non-binary systems."""
    system, _ = parse_system(path)
    dot = export_dot(build_graph(system))
    if out is not None:
        Path(out).write_text(dot, encoding="utf-8", newline="\n")
    return dot, EXIT_OK


def cmd_crosscheck(
    path: str | Path,
    seed: int = 0,
    trials: int = 10,
    budget: int = DEFAULT_BUDGET,
) -> tuple[dict, int]:
    """Independent rank and graph routes for the closed-loop rank criterion.

    Exit 0 iff the generic-rank computation and the cycle-subgraph balance
    computation give the same verdict.
    """
    system, _ = parse_system(path)
    g = closed_loop_generic_rank(system, trials=trials, seed=seed)
    rank_deficient = g < system.n
    graph = build_graph(system)
    subs = enumerate_cycle_subgraphs(graph, budget=budget)
    classes = similarity_classes(subs)
    unbalanced = [sorted(c.color_set) for c in classes if not c.balanced]
    no_unbalanced = not unbalanced
    agree = rank_deficient == no_unbalanced
    report = {
        "schema_version": SCHEMA_VERSION,
        "input": str(path),
        "settings": {"seed": seed, "trials": trials, "budget": budget},
        "rank_route": {"closed_loop_grank": g, "n": system.n, "deficient": rank_deficient},
        "graph_route": {
            "subgraph_count": len(subs),
            "class_count": len(classes),
            "unbalanced_classes": unbalanced,
            "no_unbalanced_class": no_unbalanced,
        },
        "agree": agree,
    }
    return report, EXIT_OK if agree else EXIT_INCONSISTENT


# -- entry point ----------------------------------------------------------------


def _format_analyze_text(report: dict) -> str:
    lines = [f"system: {report['input']}"]
    cls = report["classification"]
    flags = ", ".join(
        name for name in ("polynomial", "linear", "binary", "unitary") if cls[name]
    )
    lines.append(f"classification: {flags or 'none'}")
    if cls["linear_failure"]:
        lines.append(f"  not linear: {cls['linear_failure']}")
    for key, label in (
        ("pencil_sampling", "pencil sampling"),
        ("algebraic", "algebraic"),
        ("graphical", "graphical"),
    ):
        verdict = report["verdicts"][key]
        if verdict is None:
            lines.append(f"{label}: not applicable")
            continue
        out = f"{label}: structurally fixed spectrum = {verdict['has_sfs']}"
        if verdict["reason"]:
            out += f" ({verdict['reason']}"
            if verdict["witness"] is not None:
                out += f", witness channels {verdict['witness']}"
            out += ")"
        lines.append(out)
    lines.append(f"routes agree: {report['consistency']['agree']}")
    for sample in report["fixed_spectrum_samples"]:
        eigs = sample["fixed_eigenvalues"]
        shown = (
            ", ".join(
                f"{e['eigenvalue']['re']:.6g}{e['eigenvalue']['im']:+.6g}j" for e in eigs
            )
            or "empty"
        )
        lines.append(f"fixed spectrum at sample (seed {sample['seed']}): {shown}")
    return "\n".join(lines) + "\n"


def _format_fixed_modes_text(report: dict) -> str:
    lines = [f"system: {report['input']}", f"point: {report['point']}"]
    pencil = report["pencil_route"]
    if pencil:
        for item in pencil:
            z = item["eigenvalue"]
            lines.append(
                f"fixed eigenvalue {z['re']:.6g}{z['im']:+.6g}j "
                f"(witness channel subsets: {item['witnesses']})"
            )
    else:
        lines.append("fixed spectrum: empty")
    oracle = ", ".join(f"{z['re']:.6g}{z['im']:+.6g}j" for z in report["oracle_route"])
    lines.append(f"oracle spectrum: {oracle or 'empty'}")
    lines.append(f"routes agree: {report['agree']}")
    return "\n".join(lines) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sfspectrum",
        description="Decide structurally fixed spectra of parameterized multi-channel systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("path", help="system file (JSON)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=10)
        p.add_argument("--tol", type=float, default=DEFAULT_RANK_TOL)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        p.add_argument("--format", choices=("text", "json"), default="text")

    p_analyze = sub.add_parser("analyze", help="classify and run every decision route")
    common(p_analyze)
    p_analyze.add_argument("--dot", metavar="PATH", help="also write the colored graph as DOT")
    p_analyze.add_argument("--out", metavar="PATH", help="write the JSON report to a file")

    p_fixed = sub.add_parser("fixed-modes", help="numeric fixed spectrum at a parameter point")
    p_fixed.add_argument("path", help="system file (JSON)")
    p_fixed.add_argument(
        "--set",
        dest="assignments",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="assign a parameter an exact rational value (repeatable)",
    )
    p_fixed.add_argument("--tol", type=float, default=DEFAULT_RANK_TOL)
    p_fixed.add_argument("--samples", type=int, default=1000)
    p_fixed.add_argument("--seed", type=int, default=0)
    p_fixed.add_argument("--format", choices=("text", "json"), default="text")

    p_graph = sub.add_parser("graph", help="export the colored graph as DOT")
    p_graph.add_argument("path", help="system file (JSON)")
    p_graph.add_argument("--dot", metavar="PATH", help="output path (stdout when omitted)")

    p_cross = sub.add_parser(
        "crosscheck", help="compare the rank route and the graph route independently"
    )
    common(p_cross)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "analyze":
            report, code = cmd_analyze(
                args.path, seed=args.seed, trials=args.trials, tol=args.tol, budget=args.budget
            )
            if args.dot is not None:
                system, _ = parse_system(args.path)
                Path(args.dot).write_text(
                    export_dot(build_graph(system)), encoding="utf-8", newline="\n"
                )
            text = report_json(report) if args.format == "json" else _format_analyze_text(report)
            if args.out:
                Path(args.out).write_text(report_json(report), encoding="utf-8", newline="\n")
            _sys.stdout.write(text)
            return code
        if args.command == "fixed-modes":
            assignments = {}
            for item in args.assignments:
                name, sep, value = item.partition("=")
                if not sep or not _COEFF_RE.match(value):
                    raise SystemFileError(
                        f"--set expects NAME=NUM or NAME=NUM/DEN, got {item!r}"
                    )
                assignments[name] = Fraction(value)
            report, code = cmd_fixed_modes(
                args.path,
                assignments,
                tol=args.tol,
                samples=args.samples,
                seed=args.seed,
            )
            text = (
                report_json(report)
                if args.format == "json"
                else _format_fixed_modes_text(report)
            )
            _sys.stdout.write(text)
            return code
        if args.command == "graph":
            dot, code = cmd_graph(args.path, out=args.dot)
            if args.dot is None:
                _sys.stdout.write(dot)
            return code
        if args.command == "crosscheck":
            report, code = cmd_crosscheck(
                args.path, seed=args.seed, trials=args.trials, budget=args.budget
            )
            if args.format == "json":
                _sys.stdout.write(report_json(report))
            else:
                rank = report["rank_route"]
                graph = report["graph_route"]
                _sys.stdout.write(
                    f"rank route: closed-loop generic rank {rank['closed_loop_grank']}"
                    f" of n = {rank['n']} (deficient: {rank['deficient']})\n"
                    f"graph route: {graph['subgraph_count']} cycle subgraphs in "
                    f"{graph['class_count']} classes; no unbalanced class: "
                    f"{graph['no_unbalanced_class']}\n"
                    f"routes agree: {report['agree']}\n"
                )
            return code
        raise AssertionError(f"unhandled command {args.command}")
    except (SystemFileError, NonBinaryParameterization, NotLinearlyParameterized) as err:
        print(f"error: {err}", file=_sys.stderr)
        return EXIT_USAGE
    except EnumerationBudgetExceeded as err:
        print(f"error: {err}", file=_sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    raise SystemExit(main())
