"""Runner: orchestrates suites, system specs and report output."""

from __future__ import annotations

import os
import sys
import time
from typing import List, Optional, Tuple

import numpy as np

from . import __version__
from .algebra.descriptors import AlgebraDescriptor, parse_algebra_label
from .config import SupmechConfig
from .dynamics.evolution import drift_per_unit_time, evolve_state, is_conserved
from .dynamics.states import DensityMatrix, is_state
from .errors import SpecParseError
from .models import CaseResult, SuiteReport
from .output import csv_writer, json_writer, text_writer
from .spec_schema import build_evolution, build_state, build_structure, build_system, build_track, load_spec
from .suites import DEFAULT_ALGEBRAS, SUITES, TARGETS, TENSOR
from .suites.base import sub_seed
from .suites.dynamics import DRIFT_TOLERANCE
from .suites.tensor import expected_verdict, product_hamiltonian_case, run_tensor
from .tensor.witness import canonical_bracket, run_jacobi
from .tensor.worlds import BOTH_QUANTUM, INCONSISTENT, classify_worlds

JSON = "json"
TEXT = "text"
FORMATS = (JSON, TEXT)


def _elapsed_ms(start: float) -> float:
    return (time.time() - start) * 1000.0


def _finish(report: SuiteReport, start: float) -> SuiteReport:
    report.sort_cases()
    report.wall_time_ms = _elapsed_ms(start)
    return report


def _label(text: str, config: SupmechConfig) -> AlgebraDescriptor:
    try:
        return parse_algebra_label(text, config.numerics.tolerance)
    except ValueError as exc:
        raise SpecParseError(str(exc), field="algebra") from exc


def parse_algebra_pair(text: str, config: SupmechConfig) -> Tuple[AlgebraDescriptor, AlgebraDescriptor]:
    """``L,R`` for the tensor suite; ``matrix:2*poly:1`` is accepted too."""
    sep = "," if "," in text else "*"
    parts = [p for p in text.split(sep) if p.strip()]
    if len(parts) != 2:
        raise SpecParseError(f"tensor suites need two factors, got {text!r}", field="algebra")
    return _label(parts[0], config), _label(parts[1], config)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def run_verify(
    target: str,
    algebra_spec: Optional[str],
    config: SupmechConfig,
    trials: Optional[int] = None,
    seed: Optional[int] = None,
    hbar_right: Optional[float] = None,
    verbose: bool = True,
) -> SuiteReport:
    """Run one suite and assemble its report.

    Non-tensor targets accept a comma-separated list of algebras and run the
    suite on each; the tensor target takes one ``L,R`` pair.
    """
    if target not in TARGETS:
        raise SpecParseError(f"unknown suite {target!r}; choose from {', '.join(TARGETS)}", field="target")
    trials = config.suites.trials if trials is None else trials
    seed = config.suites.seed if seed is None else seed
    algebra_spec = algebra_spec or DEFAULT_ALGEBRAS[target]
    start = time.time()

    if verbose:
        print(f"[verify] Suite: {target} on {algebra_spec}", file=sys.stderr)
        print(f"[verify] Trials: {trials}, seed: {seed}", file=sys.stderr)

    report = SuiteReport(target, seed, __version__, target=algebra_spec)
    if target == TENSOR:
        left, right = parse_algebra_pair(algebra_spec, config)
        cases, details = run_tensor(left, right, trials, seed, config, hbar_right)
        report.cases.extend(cases)
        report.details.update(details)
    else:
        suite = SUITES[target]
        for text in algebra_spec.split(","):
            algebra = _label(text, config)
            if verbose:
                print(f"  Processing: {algebra.label}...", file=sys.stderr)
            report.cases.extend(suite(algebra, trials, seed, config))

    _finish(report, start)
    if verbose:
        failed = report.failed
        print(f"[verify] {len(report.cases) - len(failed)}/{len(report.cases)} cases as expected", file=sys.stderr)
        for c in failed:
            print(f"  [!] {c.name}: {c.status} (residual {c.residual:.3e}, tolerance {c.tolerance:.3e})", file=sys.stderr)
    return report


# ---------------------------------------------------------------------------
# tensor classify / jacobi
# ---------------------------------------------------------------------------

def _load_factor(path: str, config: SupmechConfig):
    spec = load_spec(path)
    structure = build_structure(spec, config)
    if "hamiltonian" in spec:
        return structure, build_system(spec, config).hamiltonian
    return structure, None


def tensor_classify(
    left_path: str,
    right_path: str,
    config: SupmechConfig,
    seed: Optional[int] = None,
    verbose: bool = True,
) -> SuiteReport:
    """Classify the pair of worlds described by two single-factor specs."""
    seed = config.suites.seed if seed is None else seed
    start = time.time()
    left, h_left = _load_factor(left_path, config)
    right, h_right = _load_factor(right_path, config)
    target = f"{left.algebra.label},{right.algebra.label}"
    if verbose:
        print(f"[tensor] Classifying {target}", file=sys.stderr)

    samples = config.suites.lambda_samples
    rel_tol = config.numerics.lambda_relative_tolerance
    classification = classify_worlds(left, right, seed=sub_seed(seed, "classification"), samples=samples, relative_tolerance=rel_tol)
    expected = expected_verdict(left, right)
    report = SuiteReport("tensor-classify", seed, __version__, target=target)
    report.details["classification"] = classification.to_dict()
    report.cases.append(CaseResult.measure(
        "classification",
        0.0 if classification.verdict == expected else 1.0,
        0.0,
        witness=classification.to_dict(),
        details={"verdict": classification.verdict, "expected": expected},
    ))
    if classification.verdict == BOTH_QUANTUM:
        report.details["lambda"] = [classification.lam.real, classification.lam.imag]
    if h_left is not None and h_right is not None:
        report.cases.append(product_hamiltonian_case(left, right, expected != INCONSISTENT, seed, samples, rel_tol))

    if verbose:
        print(f"[tensor] Verdict: {classification.verdict}", file=sys.stderr)
    return _finish(report, start)


def tensor_jacobi(
    bracket: str,
    case: str,
    config: SupmechConfig,
    seed: Optional[int] = None,
    verbose: bool = True,
) -> SuiteReport:
    """Jacobiator of a named bracket on a named witness triple."""
    bracket = canonical_bracket(bracket)
    seed = config.suites.seed if seed is None else seed
    start = time.time()
    hbar = config.physics.hbar
    if verbose:
        print(f"[tensor] Jacobi: {bracket} bracket, {case} case, hbar = {hbar:g}", file=sys.stderr)
    outcome = run_jacobi(bracket, case, hbar, seed=sub_seed(seed, f"{bracket}/{case}"))
    report = SuiteReport("tensor-jacobi", seed, __version__, target=outcome.details.get("algebra", ""))
    report.cases.append(CaseResult.measure(
        f"{bracket}/{case}",
        outcome.norm,
        1e3 * outcome.jacobiator.algebra.tolerance,
        witness=outcome.to_dict(),
        details={"bracket": bracket, "case": case, "hbar": hbar},
        expected_failure=not outcome.expect_zero,
    ))
    return _finish(report, start)


# ---------------------------------------------------------------------------
# dynamics run
# ---------------------------------------------------------------------------

def _conservation_cases(system, trajectory, track) -> List[CaseResult]:
    times = trajectory.times
    cases = [
        CaseResult.measure(
            "energy-drift",
            drift_per_unit_time(trajectory.expectations(system.hamiltonian), times),
            DRIFT_TOLERANCE,
        )
    ]
    if isinstance(trajectory.final, DensityMatrix):
        rhos = [s.rho for s in trajectory.values]
        traces = np.array([np.trace(r) for r in rhos])
        cases.append(CaseResult.measure(
            "trace-drift", drift_per_unit_time(traces, times), DRIFT_TOLERANCE,
        ))
        herm = max(float(np.linalg.norm(r - r.conj().T)) for r in rhos)
        cases.append(CaseResult.measure(
            "hermiticity", herm / max(1.0, float(times[-1])), DRIFT_TOLERANCE,
        ))
    for name, a in track:
        if is_conserved(system, a):
            cases.append(CaseResult.measure(
                f"conserved/{name}",
                drift_per_unit_time(trajectory.expectations(a), times),
                DRIFT_TOLERANCE,
            ))
    return cases


def run_dynamics(
    spec_path: str,
    out_path: str,
    config: SupmechConfig,
    seed: Optional[int] = None,
    verbose: bool = True,
) -> SuiteReport:
    """Evolve the spec's state, write the tracked expectations as CSV.

    ForbiddenCoupling from the coupling gate propagates to the caller.
    """
    seed = config.suites.seed if seed is None else seed
    start = time.time()
    spec = load_spec(spec_path)
    name = spec.get("name", os.path.splitext(os.path.basename(spec_path))[0])
    system = build_system(spec, config, seed=sub_seed(seed, "coupling"))
    state = build_state(spec, config)
    if state is None:
        raise SpecParseError("a dynamics run needs an initial state", field="state")
    report_state = is_state(state)
    track = build_track(spec, config) or [("energy", system.hamiltonian)]
    cfg = build_evolution(spec, config)

    if verbose:
        print(f"[dynamics] System: {name} on {system.algebra.label}", file=sys.stderr)
        print(f"[dynamics] {cfg.steps} steps, dt = {cfg.step:g}, method = {cfg.method}", file=sys.stderr)

    trajectory = evolve_state(system, state, cfg)
    columns = [(label, trajectory.expectations(a)) for label, a in track]
    csv_writer.write_trajectory_csv(out_path, trajectory.times, columns, config.numerics.tolerance)
    if verbose:
        print(f"[dynamics] Wrote {len(trajectory)} rows to {out_path}", file=sys.stderr)

    report = SuiteReport("dynamics-run", seed, __version__, target=name)
    report.cases.append(CaseResult.measure(
        "initial-state", 0.0 if report_state.is_state else 1.0, 0.0,
        witness=report_state.to_dict(), details=report_state.diagnostics,
    ))
    report.cases.extend(_conservation_cases(system, trajectory, track))
    report.details.update({
        "algebra": system.algebra.label,
        "t_end": cfg.t_end,
        "dt": cfg.step,
        "steps": cfg.steps,
        "method": cfg.method,
        "rows": len(trajectory),
        "columns": [label for label, _ in track],
        "csv": out_path,
    })
    return _finish(report, start)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def emit_report(report: SuiteReport, fmt: str = JSON) -> bytes:
    if fmt == JSON:
        return json_writer.dumps_report(report).encode("utf-8")
    if fmt == TEXT:
        return text_writer.render_report(report).encode("utf-8")
    raise ValueError(f"unknown report format {fmt!r}; choose from {', '.join(FORMATS)}")


def write_output(
    report: SuiteReport,
    config: SupmechConfig,
    verbose: bool = True,
) -> List[str]:
    """Write the report in every configured format under the output directory."""
    output_dir = config.output.directory
    os.makedirs(output_dir, exist_ok=True)
    stem = report.suite_name

    written: List[str] = []
    if verbose:
        print(f"\n[output] Writing results to {output_dir}...", file=sys.stderr)

    if "json" in config.output.formats:
        written.append(json_writer.write_report(report, os.path.join(output_dir, f"{stem}.json")))
    if "text" in config.output.formats:
        written.append(text_writer.write_report_md(report, os.path.join(output_dir, f"{stem}.md")))

    if verbose:
        for path in written:
            print(f"  {path}", file=sys.stderr)
    return written
