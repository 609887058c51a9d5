"""CLI entry point for supmech.

Usage:
    supmech verify TARGET [--algebra A] [--trials N] [--seed S] [--json out.json]
    supmech tensor classify --left spec.json --right spec.json
    supmech tensor jacobi --bracket eq81|eq82|eq86 (or product|symmetrized|mixed) --case commutative|quantum|mixed
    supmech dynamics run --spec sys.json --out traj.csv

Targets:
    calculus, symplectic, tensor, dynamics

Common options:
    --config PATH       Path to supmech.yaml
    --seed S            Top-level seed (default from config)
    --trials N          Random trials per case
    --tolerance T       Element equality tolerance (also SUPMECH_TOLERANCE)
    --hbar H            Planck constant of quantum structures
    --output DIR        Also write the report into DIR in every configured format
    --format LIST       Comma-separated formats: json,text; the first is printed
    --json PATH         Write the JSON report to PATH
    --quiet / -q        Suppress progress output (progress goes to stderr)

Exit codes:
    0  every case as expected
    1  an unexpected failure or another error
    2  a coupling or product bracket refused by the world classification
       (ForbiddenCoupling or UnclassifiedWorld, JSON error on stdout).  Suites
       whose cases fail where the classification requires it exit 0: those
       cases carry expected_failure and count as expected.
    3  malformed spec or configuration
"""

from __future__ import annotations

import argparse
import sys

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_FORBIDDEN = 2
EXIT_SPEC = 3

EXIT_CODES_HELP = """exit codes:
  0  every case as expected, including cases that must fail
  1  an unexpected failure or another error
  2  a coupling or product bracket refused by the world classification
  3  malformed spec or configuration"""


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config",
        type=str,
        default=None,
        help="Path to supmech.yaml configuration file",
    )
    parser.add_argument("--seed", type=int, default=None, help="Top-level seed")
    parser.add_argument("--trials", type=int, default=None, help="Random trials per case")
    parser.add_argument("--tolerance", type=float, default=None, help="Element equality tolerance")
    parser.add_argument("--hbar", type=float, default=None, help="Planck constant of quantum structures")
    parser.add_argument(
        "--output",
        type=str,
        default=None,
        help="Output directory for report files",
    )
    parser.add_argument(
        "--format",
        type=str,
        default=None,
        help="Comma-separated report formats (json,text); the first is printed",
    )
    parser.add_argument("--json", type=str, default=None, help="Write the JSON report to this path")
    parser.add_argument(
        "-q", "--quiet",
        action="store_true",
        default=False,
        help="Suppress progress output",
    )


def _build_parser() -> argparse.ArgumentParser:
    from .suites import TARGETS
    from .tensor.witness import BRACKET_CHOICES, CASES

    parser = argparse.ArgumentParser(
        prog="supmech",
        description="Verify noncommutative symplectic mechanics and run Hamiltonian dynamics",
        epilog=EXIT_CODES_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    verify = verbs.add_parser("verify", help="Run a verification suite")
    verify.add_argument("target", choices=TARGETS, help="Suite to run")
    verify.add_argument(
        "--algebra",
        type=str,
        default=None,
        help="Algebra labels (matrix:2,poly:1); a L,R pair for the tensor suite",
    )
    verify.add_argument(
        "--hbar-right",
        type=float,
        default=None,
        help="Planck constant of the right factor in the tensor suite",
    )
    _common(verify)

    tensor = verbs.add_parser("tensor", help="Tensor-product classification and Jacobi witnesses")
    tensor_verbs = tensor.add_subparsers(dest="action", required=True)
    classify = tensor_verbs.add_parser("classify", help="Classify two single-factor specs")
    classify.add_argument("--left", required=True, help="Left factor spec (JSON)")
    classify.add_argument("--right", required=True, help="Right factor spec (JSON)")
    _common(classify)
    jacobi = tensor_verbs.add_parser("jacobi", help="Jacobiator of a bracket on a witness triple")
    jacobi.add_argument("--bracket", required=True, choices=BRACKET_CHOICES)
    jacobi.add_argument("--case", required=True, choices=CASES)
    _common(jacobi)

    dynamics = verbs.add_parser("dynamics", help="Time evolution of a system spec")
    dynamics_verbs = dynamics.add_subparsers(dest="action", required=True)
    run = dynamics_verbs.add_parser("run", help="Evolve a system and write a trajectory CSV")
    run.add_argument("--spec", required=True, help="System spec (JSON)")
    run.add_argument("--out", required=True, help="Trajectory CSV path")
    _common(run)
    return parser


def _apply_overrides(config, args) -> None:
    if args.seed is not None:
        config.suites.seed = args.seed
    if args.trials is not None:
        config.suites.trials = args.trials
    if args.tolerance is not None:
        config.numerics.tolerance = args.tolerance
    if args.hbar is not None:
        config.physics.hbar = args.hbar
    if args.output:
        config.output.directory = args.output
    if args.format:
        config.output.formats = [f.strip() for f in args.format.split(",") if f.strip()]
    config.validate()


def _dispatch(args, config, verbose: bool):
    from . import runner

    if args.verb == "verify":
        return runner.run_verify(
            args.target,
            args.algebra,
            config,
            hbar_right=args.hbar_right,
            verbose=verbose,
        )
    if args.verb == "tensor" and args.action == "classify":
        return runner.tensor_classify(args.left, args.right, config, verbose=verbose)
    if args.verb == "tensor":
        return runner.tensor_jacobi(args.bracket, args.case, config, verbose=verbose)
    return runner.run_dynamics(args.spec, args.out, config, verbose=verbose)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    verbose = not args.quiet

    from .config import load_config
    from .errors import ConfigError, ForbiddenCoupling, SpecParseError, SupmechError, UnclassifiedWorld
    from .output import json_writer
    from .runner import emit_report, write_output

    try:
        config = load_config(config_path=args.config)
        _apply_overrides(config, args)
        report = _dispatch(args, config, verbose)
    except (ForbiddenCoupling, UnclassifiedWorld) as exc:
        sys.stdout.write(json_writer.dumps(exc.to_dict()))
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_FORBIDDEN
    except (SpecParseError, ConfigError) as exc:
        print(f"Error: {exc}", file=sys.stderr)
        if exc.details:
            print(f"  {', '.join(f'{k}={v}' for k, v in sorted(exc.details.items()))}", file=sys.stderr)
        return EXIT_SPEC
    except SupmechError as exc:
        print(f"Error: [{exc.code}] {exc}", file=sys.stderr)
        return EXIT_FAILURE

    if args.json:
        json_writer.write_report(report, args.json)
        if verbose:
            print(f"[output] JSON report: {args.json}", file=sys.stderr)
    if args.output:
        write_output(report, config, verbose=verbose)

    fmt = config.output.formats[0] if config.output.formats else "text"
    if fmt not in ("json", "text"):
        fmt = "text"
    sys.stdout.write(emit_report(report, fmt).decode("utf-8"))

    return EXIT_OK if report.all_passed else EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
