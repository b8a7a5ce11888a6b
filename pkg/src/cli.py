"""
Command-Line Interface
======================
Subcommands:
    spectrum   spectrum tables by formula, enumeration or both
    verify     full identity suite per n (exit 1 on any failed check)
    orbits     pair orbits, their kernel lines and the 25 prototype lines
    scan       exploratory mu histograms over an n-range, any arithmetic class
    graph      edge list of the literal Cayley graph

Exit codes: 0 pass, 1 failed check, 2 bad regime or arguments, 3 budget.
Reports go to stdout (or --out); logs go to stderr.
"""

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from src import TOOL_NAME, __version__
from src.core_lattice import REGIME_GENERIC, is_generic_odd, regime_of
from src.exceptions import BudgetExceeded, InvalidModulus, NonGenericModulus, QueenSpectraError
from src.graph_oracle import (
    build_adjacency,
    character_residual,
    generator_set,
    geometric_sum_check,
    residual_bound,
    residual_sample,
    trace_power,
    translation_invariant,
    write_edge_list,
)
from src.orbits import (
    coverage_check,
    kernel_checks,
    orbit_of,
    pair_orbits,
    prototype_lines,
    reference_pairs,
    solve_pair_kernel,
)
from src.reporting import FORMATS, FORMAT_TEXT, IdentityCheck, ReportEnvelope, ReportSection
from src.spectrum import (
    extremes_checks,
    spectrum_by_enumeration,
    spectrum_by_formula,
    tables_match,
    trace_moment,
    verify_identities,
)
from utils.config_loader import ConfigurationError, load_config
from utils.logging_setup import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_BUDGET = 3

METHOD_CHOICES = ("formula", "enumerate", "both")


# ============================================================================
# RUN CONFIGURATION
# ============================================================================

@dataclass(frozen=True)
class RunConfig:
    command: str
    n_values: List[int]
    method: str
    output_format: str
    out: Optional[str]
    enumeration_budget: int
    oracle_budget: int
    oracle_check_budget: int
    workers: int
    seed: int
    residual_sample_size: int
    trace_powers: List[int]
    translation_samples: int

    def echo(self) -> str:
        """Canonical command echo; flags that cannot change results are left out."""
        parts = [self.command]
        if self.command in ("scan",) and self.n_values:
            parts.append(f"--range {self.n_values[0]}..{self.n_values[-1]}")
        else:
            parts.extend(f"--n {n}" for n in self.n_values)
        if self.command == "spectrum":
            parts.append(f"--method {self.method}")
        if self.command == "verify":
            parts.append(f"--seed {self.seed}")
        return " ".join(parts)


def parse_range(text: str) -> List[int]:
    """'a..b' (inclusive) or a single integer."""
    try:
        if ".." in text:
            lo, hi = (int(part) for part in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}")
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"range must satisfy 1 <= a <= b, got {text!r}")
    return list(range(lo, hi + 1))


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=FORMAT_TEXT, help="Report format")
    common.add_argument("--out", help="Output path (default: stdout)")
    common.add_argument("--budget", type=positive_int, help="Enumeration budget in points (n^3)")
    common.add_argument("--oracle-budget", type=positive_int, help="Vertex budget for graph construction")
    common.add_argument("--workers", type=positive_int, help="Worker threads for enumeration kernels")
    common.add_argument("--seed", type=int, help="Seed for residual sampling")
    common.add_argument("--log-level", help="Logging level (DEBUG, INFO, WARNING, ...)")

    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Spectrum of the toroidal 3D queen graph on (Z_n)^3",
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (("spectrum", "Spectrum tables"), ("verify", "Run the identity suite")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--n", type=positive_int, nargs="+", help="One or more moduli")
        group.add_argument("--range", type=parse_range, dest="n_range", help="Inclusive range a..b")
        if name == "spectrum":
            p.add_argument("--method", choices=METHOD_CHOICES, default="formula")

    p = sub.add_parser("orbits", parents=[common], help="Pair orbits and prototype lines")
    p.add_argument("--n", type=positive_int, required=True)

    p = sub.add_parser("scan", parents=[common], help="Exploratory mu histograms")
    p.add_argument("--range", type=parse_range, dest="n_range", required=True)

    p = sub.add_parser("graph", parents=[common], help="Edge list export")
    p.add_argument("--n", type=positive_int, required=True)

    return parser


def make_run_config(args: argparse.Namespace, config: Dict[str, Any]) -> RunConfig:
    n_range = getattr(args, "n_range", None)
    n_arg = getattr(args, "n", None)
    if n_range:
        n_values = n_range
    elif isinstance(n_arg, list):
        n_values = n_arg
    else:
        n_values = [n_arg]
    return RunConfig(
        command=args.command,
        n_values=n_values,
        method=getattr(args, "method", "formula"),
        output_format=args.format,
        out=args.out,
        enumeration_budget=args.budget or config["enumeration_budget"],
        oracle_budget=args.oracle_budget or config["oracle_budget"],
        oracle_check_budget=config["oracle_check_budget"],
        workers=args.workers or config["workers"],
        seed=config["seed"] if args.seed is None else args.seed,
        residual_sample_size=config["residual_sample_size"],
        trace_powers=list(config.get("verify", {}).get("trace_powers", [1, 2, 3, 4])),
        translation_samples=config.get("verify", {}).get("translation_samples", 16),
    )


# ============================================================================
# COMMANDS
# ============================================================================

def cmd_spectrum(run: RunConfig) -> ReportEnvelope:
    envelope = ReportEnvelope(run.echo())
    for n in run.n_values:
        section = envelope.add(ReportSection(n, regime_of(n)))
        tables = []
        if run.method in ("formula", "both"):
            tables.append(spectrum_by_formula(n))
        if run.method in ("enumerate", "both"):
            tables.append(spectrum_by_enumeration(n, run.enumeration_budget, run.workers))
        reports = [verify_identities(t) for t in tables]
        section.payload["tables"] = [t.to_dict(r.checks) for t, r in zip(tables, reports)]
        for report in reports:
            section.checks.extend(report.checks)
        if len(tables) == 2:
            section.checks.append(IdentityCheck(
                "formula = enumeration", tables[1].pairs(), tables[0].pairs(), tables_match(*tables),
            ))
    return envelope


def _oracle_checks(n: int, run: RunConfig, formula_table) -> List[IdentityCheck]:
    """Trace powers, character residuals and translation invariance on the literal graph."""
    names = [f"trace(A^{k}) = sum lambda^{k} M" for k in run.trace_powers]
    names += ["max character residual < 1e-8|S|", "translation invariance"]
    work = n ** 3 * 13 * (n - 1)
    if n ** 3 > run.oracle_budget or work > run.oracle_check_budget:
        reason = f"graph size {n ** 3} vertices x {13 * (n - 1)} exceeds oracle check budget"
        return [IdentityCheck.skipped(name, reason) for name in names]

    adjacency = build_adjacency(n, run.oracle_budget)
    checks = [
        IdentityCheck.equal(
            f"trace(A^{k}) = sum lambda^{k} M",
            trace_power(k, n, adjacency=adjacency, workers=run.workers),
            trace_moment(formula_table, k),
        )
        for k in run.trace_powers
    ]
    sample = residual_sample(n, run.residual_sample_size, run.seed)
    worst = max(character_residual(a, n, adjacency=adjacency) for a in sample)
    checks.append(IdentityCheck.below(
        "max character residual < 1e-8|S|", worst, residual_bound(n), detail=f"{len(sample)} characters",
    ))
    step = max(1, n ** 3 // run.translation_samples)
    checks.append(IdentityCheck.equal(
        "translation invariance", translation_invariant(adjacency, range(0, n ** 3, step)), True,
    ))
    return checks


def verify_n(n: int, run: RunConfig) -> ReportSection:
    section = ReportSection(n, regime_of(n))
    enumerated = spectrum_by_enumeration(n, run.enumeration_budget, run.workers)
    section.checks.extend(verify_identities(enumerated).checks)

    if n >= 2:
        s = generator_set(n)
        section.checks.append(IdentityCheck.equal("S = -S", s.closed_under_negation, True))
        if is_generic_odd(n):
            section.checks.append(IdentityCheck.equal("|S| = 13(n-1)", s.size, s.expected_size))
        else:
            section.payload["connection_set_size"] = s.size

    if not is_generic_odd(n):
        section.payload["note"] = "non-generic modulus: only universal identities are asserted"
        return section

    formula = spectrum_by_formula(n)
    section.checks.append(IdentityCheck(
        "formula = enumeration", enumerated.pairs(), formula.pairs(), tables_match(formula, enumerated),
    ))
    section.checks.extend(extremes_checks(n))
    sums = [geometric_sum_check(e, n) for e in range(n)]
    section.checks.append(IdentityCheck.equal(
        "geometric sums S_u(a) in {n-1, -1}", sum(1 for g in sums if g.agrees), n,
    ))
    coverage = coverage_check(n, run.enumeration_budget, run.workers)
    section.checks.extend(coverage.checks)
    section.checks.extend(_oracle_checks(n, run, formula))
    return section


def cmd_verify(run: RunConfig) -> ReportEnvelope:
    envelope = ReportEnvelope(run.echo())
    orbit_section = envelope.add(ReportSection(None, None))
    orbits = pair_orbits()
    orbit_section.payload["pair_orbits"] = len(orbits)
    orbit_section.payload["reference_rows"] = len(reference_pairs())
    # Kernel checks are n-independent in the generic regime; use the first generic n (or 5)
    kernel_n = next((n for n in run.n_values if is_generic_odd(n)), 5)
    orbit_section.checks.extend(kernel_checks(kernel_n))
    for n in run.n_values:
        envelope.add(verify_n(n, run))
    return envelope


def cmd_orbits(run: RunConfig) -> ReportEnvelope:
    n = run.n_values[0]
    if not is_generic_odd(n):
        raise NonGenericModulus(n, "orbits")
    envelope = ReportEnvelope(run.echo())
    section = envelope.add(ReportSection(n, REGIME_GENERIC))
    orbits = pair_orbits()
    references = reference_pairs()

    lines = []
    for i, orbit in enumerate(orbits):
        rep = orbit.representative
        kernel = solve_pair_kernel(rep.first, rep.second, n, validate=True, budget=run.enumeration_budget)
        matching = [f"{p}" for p, _ in references if orbit_of(p, orbits) == i]
        lines.append(
            f"orbit {i + 1:>2}: size {orbit.size:>2}  rep {rep}  kernel {kernel}"
            + (f"  reference {', '.join(matching)}" if matching else "")
        )
    section.payload["orbits"] = lines
    section.payload["orbit_sizes"] = [o.size for o in orbits]
    section.payload["prototype_lines"] = [f"{line.family:<13} {line.generator}" for line in prototype_lines()]
    section.checks.extend(kernel_checks(n))
    return envelope


def cmd_scan(run: RunConfig) -> ReportEnvelope:
    envelope = ReportEnvelope(run.echo())
    for n in run.n_values:
        section = envelope.add(ReportSection(n, regime_of(n)))
        table = spectrum_by_enumeration(n, run.enumeration_budget, run.workers)
        section.payload["tables"] = [table.to_dict()]
        section.payload["mu_values"] = [r.mu_value for r in table.rows]
        section.payload["connection_set_size"] = generator_set(n).size if n >= 2 else 0
        report = verify_identities(table)
        section.checks.extend(c for c in report.checks if c.passed is not None)
        if is_generic_odd(n):
            formula = spectrum_by_formula(n)
            section.checks.append(IdentityCheck(
                "formula = enumeration", table.pairs(), formula.pairs(), tables_match(formula, table),
            ))
    return envelope


def cmd_graph(run: RunConfig, stream) -> ReportEnvelope:
    n = run.n_values[0]
    adjacency = build_adjacency(n, run.oracle_budget)
    written = write_edge_list(adjacency, stream)
    envelope = ReportEnvelope(run.echo())
    section = envelope.add(ReportSection(n, regime_of(n)))
    section.payload["vertices"] = adjacency.vertex_count
    section.payload["degree"] = adjacency.degree
    section.payload["edges"] = written
    section.checks.append(IdentityCheck.equal("edges = n^3 |S| / 2", written, adjacency.edge_count))
    if is_generic_odd(n):
        section.checks.append(IdentityCheck.equal("degree = 13(n-1)", adjacency.degree, 13 * (n - 1)))
    return envelope


# ============================================================================
# MAIN
# ============================================================================

def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def run_command(run: RunConfig) -> ReportEnvelope:
    if run.command == "spectrum":
        return cmd_spectrum(run)
    if run.command == "verify":
        return cmd_verify(run)
    if run.command == "orbits":
        return cmd_orbits(run)
    if run.command == "scan":
        return cmd_scan(run)
    raise ValueError(f"Unknown command: {run.command}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code else EXIT_OK

    try:
        config = load_config()
    except ConfigurationError as e:
        print(f"✗ Configuration Error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT

    setup_logging(config, args.log_level)
    run = make_run_config(args, config)
    logger.info(f"Running {run.echo()} with {run.workers} worker(s)")

    try:
        if run.command == "graph":
            if run.out:
                with open(run.out, "w", encoding="utf-8", newline="") as f:
                    envelope = cmd_graph(run, f)
                sys.stdout.write(envelope.render(run.output_format))
            else:
                envelope = cmd_graph(run, sys.stdout)
                sys.stderr.write(envelope.to_text())
        else:
            envelope = run_command(run)
            _emit(envelope.render(run.output_format), run.out)
    except (NonGenericModulus, InvalidModulus) as e:
        print(f"✗ {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except BudgetExceeded as e:
        print(f"✗ Budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except QueenSpectraError as e:
        logger.error(f"Check aborted: {e}")
        print(f"✗ {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED

    if envelope.failed:
        failed = [c.name for c in envelope.checks if c.passed is False]
        logger.error(f"{len(failed)} check(s) failed: {failed}")
        return EXIT_CHECK_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
