"""Command-line interface.

Subcommands
-----------
classify   locate the Hopf point, check assumptions, emit coefficients + type
verify     classify, then shoot for the periodic orbit at one mu and test it
continue   track the orbit branch over a mu grid
eco-sweep  classify random admissible predator-prey parameter sets
truncated  integrate the truncated reduced dynamics, optionally vs. the model

Exit codes: 0 success; 1 numerical failure (lost branch, no convergence,
validity exit, requested mu on the orbit-free side); 2 assumption violation;
3 degenerate classification; 64 configuration or usage errors.

Model configuration files are JSON documents of one of two shapes::

    {"builtin": "predator_prey", "params": {...}, "seed_state": [...]}
    {"polynomial": {"y1": [[coef, i, j, k, m], ...], "y2": [...], "z": [...]}}

All file outputs are deterministic: identical configuration and seed produce
byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__, classifier, eco, frame as frame_mod, models, verify
from .coefficients import compute_coefficients
from .errors import (
    AssumptionViolation,
    Degenerate,
    HybridHopfError,
    InvalidBounds,
    InvalidParams,
    LeftDomain,
    NoConvergence,
    NonFinite,
    NotAdmissible,
    NotHopf,
    SingularShooting,
    StepFailure,
    SymmetryDefect,
    UnknownModel,
    WrongDirection,
)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_ASSUMPTIONS = 2
EXIT_DEGENERATE = 3
EXIT_USAGE = 64

_USAGE_ERRORS = (
    InvalidParams,
    InvalidBounds,
    UnknownModel,
    NotAdmissible,
)
_NUMERICAL_ERRORS = (
    NoConvergence,
    SingularShooting,
    StepFailure,
    NonFinite,
    LeftDomain,
    NotHopf,
    SymmetryDefect,
    WrongDirection,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _out_dir(args: argparse.Namespace) -> Path:
    out = args.out or os.environ.get("HYBRIDHOPF_OUT", ".")
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _write_table(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    lines = ["\t".join(header)]
    for row in rows:
        lines.append("\t".join(cell if isinstance(cell, str) else _fmt(cell) for cell in row))
    path.write_text("\n".join(lines) + "\n")


def _load_config(path: str) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InvalidParams(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidParams(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidParams("config must be a JSON object")
    return doc


def _parse_vector(text: str, n: int, what: str) -> list[float]:
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != n:
        raise InvalidParams(f"{what} needs {n} comma-separated numbers, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise InvalidParams(f"{what} must be numeric: {text!r}") from exc


def _parse_grid(text: str) -> list[float]:
    parts = [p for p in text.replace(",", " ").split() if p]
    if not parts:
        raise InvalidParams("empty mu grid")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise InvalidParams(f"mu grid must be numeric: {text!r}") from exc


# ---------------------------------------------------------------------------
# shared pipeline
# ---------------------------------------------------------------------------


def _pipeline(config: dict):
    """Model -> Hopf point -> assumptions -> frame -> coefficients."""
    model = models.from_config(config)
    seed = config.get("seed_state") or model.metadata.get("hopf_seed") or (0.1, 0.1, 0.1)
    X_H = frame_mod.locate_hopf_point(model, np.asarray(seed, dtype=float))
    report = frame_mod.check_assumptions(model, X_H)
    frame = coeffs = None
    if report.all_pass():
        jet = models.jet(model, X_H, 0.0)
        frame = frame_mod.build_standard_frame(jet)
        coeffs = compute_coefficients(frame_mod.standard_jet(jet, frame))
    return model, X_H, report, frame, coeffs


def _print_assumptions(report: frame_mod.AssumptionReport) -> None:
    doc = report.to_document()
    rows = [
        ("a1_line", doc["a1_line_residual"], f"< {frame_mod.A1_THRESHOLD:g}"),
        ("a2_spectrum", doc["a2_defect"], f"< {frame_mod.A2_THRESHOLD:g}"),
        ("a3_crossing", doc["a3_crossing"], f"|.| > {frame_mod.NONZERO_THRESHOLD:g}"),
        ("a4_nondegeneracy", doc["a4_nondegeneracy"], f"|.| > {frame_mod.NONZERO_THRESHOLD:g}"),
        ("a5_drift", doc["a5_drift"], f"|.| > {frame_mod.NONZERO_THRESHOLD:g}"),
    ]
    print(f"{'assumption':<18}{'value':>16}  {'requirement':<14}verdict")
    for name, value, req in rows:
        verdict = "pass" if report.verdicts[name] else "FAIL"
        print(f"{name:<18}{_fmt(value):>16}  {req:<14}{verdict}")


def _assumption_doc(model, X_H, report) -> dict:
    return {
        "model": model.name,
        "point": [float(v) for v in X_H],
        "all_pass": report.all_pass(),
        "report": report.to_document(),
    }


def _classification_doc(classification, coeffs) -> dict:
    doc = classification.to_document()
    doc["predicted_period"] = 2.0 * float(np.pi) / classification.omega
    doc["amplitude_coefficient"] = float(
        np.sqrt(abs(coeffs.gamma5 / coeffs.beta5))
    )
    return doc


def _describe(classification) -> str:
    names = {
        "H": "hyperbolic: orbit with a two-dimensional unstable manifold",
        "ES": "elliptic, stable: orbit attracts",
        "EU": "elliptic, unstable: orbit with a three-dimensional unstable manifold",
    }
    return (
        f"type {classification.label} ({names[classification.label]}); "
        f"branch on {classifier.direction_label(classification.direction)}; "
        f"sigma = {_fmt(classification.sigma)}; "
        f"|mu| validity hint {_fmt(classification.mu_validity_hint)}"
    )


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_classify(args: argparse.Namespace) -> int:
    out = _out_dir(args)
    model, X_H, report, frame, coeffs = _pipeline(_load_config(args.config))
    _write_json(out / "assumptions.json", _assumption_doc(model, X_H, report))
    _print_assumptions(report)
    if not report.all_pass():
        print(f"assumption check failed: {', '.join(report.failed())}")
        return EXIT_ASSUMPTIONS
    _write_json(out / "coefficients.json", coeffs.to_document())
    try:
        classification = classifier.classify(coeffs)
    except Degenerate as exc:
        _write_json(
            out / "classification.json",
            {"label": "degenerate", "detail": str(exc)},
        )
        print(f"degenerate: {exc}")
        return EXIT_DEGENERATE
    _write_json(out / "classification.json", _classification_doc(classification, coeffs))
    print(_describe(classification))
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    out = _out_dir(args)
    model, X_H, report, frame, coeffs = _pipeline(_load_config(args.config))
    _write_json(out / "assumptions.json", _assumption_doc(model, X_H, report))
    if not report.all_pass():
        print(f"assumption check failed: {', '.join(report.failed())}")
        return EXIT_ASSUMPTIONS
    classification = classifier.classify(coeffs)
    prediction = classifier.predict_orbit(coeffs, args.mu, frame)
    tol = args.tol if args.tol is not None else 1e-11
    guard = eco.interior_guard() if model.name == "predator_prey" else None
    orbit = verify.find_periodic_orbit(
        model,
        args.mu,
        prediction,
        rtol=min(tol, verify.ORBIT_RTOL * 100),
        newton_tol=tol,
        guard=guard,
        n_samples=args.samples,
    )
    stability = verify.floquet_stability(orbit)
    doc = {
        "mu": args.mu,
        "classification": classification.label,
        "period": orbit.period,
        "predicted_period": prediction.period,
        "anchor": [float(v) for v in orbit.anchor],
        "residual": orbit.residual,
        "liouville_defect": orbit.liouville_defect,
        "multipliers": [[z.real, z.imag] for z in orbit.multipliers],
        "stability": stability.to_document(),
        "prediction": {"r0": prediction.r0, "amplitude_scale": prediction.amplitude_scale},
        "stability_consistent": stability.stable == classification.orbit_stable,
    }
    _write_json(out / "verify.json", doc)
    rows = np.column_stack([orbit.times, orbit.states])
    _write_table(out / "orbit.tsv", ("t", "x1", "x2", "s"), rows)
    print(
        f"orbit at mu = {_fmt(args.mu)}: period {_fmt(orbit.period)} "
        f"(predicted {_fmt(prediction.period)}), residual {orbit.residual:.2e}, "
        f"{'stable' if stability.stable else 'unstable'} "
        f"(classification says {'stable' if classification.orbit_stable else 'unstable'})"
    )
    return EXIT_OK


def _cmd_continue(args: argparse.Namespace) -> int:
    out = _out_dir(args)
    config = _load_config(args.config)
    if args.mu_grid:
        grid = _parse_grid(args.mu_grid)
    elif "mu_grid" in config:
        grid = [float(m) for m in config["mu_grid"]]
    else:
        raise InvalidParams("continue needs --mu-grid or a mu_grid config entry")
    model, X_H, report, frame, coeffs = _pipeline(config)
    _write_json(out / "assumptions.json", _assumption_doc(model, X_H, report))
    if not report.all_pass():
        print(f"assumption check failed: {', '.join(report.failed())}")
        return EXIT_ASSUMPTIONS
    seed_state = None
    if args.seed_state:
        seed_state = _parse_vector(args.seed_state, 3, "--seed-state")
    guard = eco.interior_guard() if model.name == "predator_prey" else None
    try:
        branch = verify.continue_branch(
            model,
            grid,
            coeffs=coeffs,
            frame=frame,
            seed_strategy=args.seed_strategy,
            seed_state=seed_state,
            guard=guard,
            n_samples=args.samples,
        )
    except WrongDirection as exc:
        # The whole grid sits on the orbit-free side: report an empty branch.
        branch = verify.Branch(points=(), lost_at=grid[0], fit=None)
        print(exc)

    rows = []
    for i, pt in enumerate(branch.points):
        mults = list(pt.orbit.multipliers)
        rows.append(
            [pt.mu, pt.orbit.period, pt.amplitude, pt.orbit.residual]
            + [v for z in mults for v in (z.real, z.imag)]
        )
        orbit_rows = np.column_stack([pt.orbit.times, pt.orbit.states])
        _write_table(
            out / f"orbit_{i:03d}.tsv", ("t", "x1", "x2", "s"), orbit_rows
        )
    _write_table(
        out / "branch.tsv",
        (
            "mu",
            "period",
            "amplitude",
            "residual",
            "m1_re",
            "m1_im",
            "m2_re",
            "m2_im",
            "m3_re",
            "m3_im",
        ),
        rows,
    )
    summary = {
        "mu_grid": grid,
        "n_converged": len(branch.points),
        "lost_at": branch.lost_at,
        "fit": (
            None
            if branch.fit is None
            else {
                "exponent": branch.fit.exponent,
                "prefactor": branch.fit.prefactor,
                "n_points": branch.fit.n_points,
            }
        ),
        "points": [
            {
                "mu": pt.mu,
                "period": pt.orbit.period,
                "amplitude": pt.amplitude,
                "residual": pt.orbit.residual,
            }
            for pt in branch.points
        ],
    }
    _write_json(out / "summary.json", summary)
    if branch.fit is not None:
        print(
            f"tracked {len(branch.points)}/{len(grid)} points; amplitude ~ "
            f"{_fmt(branch.fit.prefactor)} * |mu|^{_fmt(branch.fit.exponent)}"
        )
    else:
        print(f"tracked {len(branch.points)}/{len(grid)} points")
    if not branch.complete():
        print(f"branch lost at mu = {_fmt(branch.lost_at)}")
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_eco_sweep(args: argparse.Namespace) -> int:
    out = _out_dir(args)
    bounds = (0.05, 20.0)
    if args.delta_bounds:
        lo, hi = _parse_vector(args.delta_bounds, 2, "--delta-bounds")
        bounds = (lo, hi)
    samples = eco.sample_region(args.samples, args.seed, delta_bounds=bounds)
    rows = []
    labels: dict[str, int] = {}
    negative_margin = 0
    for p in samples:
        cf = eco.closed_form_coefficients(p)
        record = eco.classification_record(p)
        labels[record.label] = labels.get(record.label, 0) + 1
        if cf["margin"] < 0:
            negative_margin += 1
        rows.append(
            [
                p.delta1,
                p.delta2,
                p.lam,
                p.alpha1,
                p.alpha2,
                p.l1,
                p.l2,
                cf["omega"],
                cf["beta2"],
                cf["beta5"],
                cf["gamma5"],
                cf["gamma7"],
                cf["sigma"],
                cf["margin"],
                record.label,
            ]
        )
    _write_table(
        out / "sweep.tsv",
        (
            "delta1",
            "delta2",
            "lambda",
            "alpha1",
            "alpha2",
            "l1",
            "l2",
            "omega",
            "beta2",
            "beta5",
            "gamma5",
            "gamma7",
            "sigma",
            "margin",
            "type",
        ),
        rows,
    )
    n = len(samples)
    non_es = n - labels.get("ES", 0)
    print(
        f"{n} samples: types {labels}; non-ES rows: {non_es}/{n}; "
        f"negative margin: {negative_margin}/{n}"
    )
    return EXIT_OK if non_es == 0 else EXIT_NUMERICAL


def _cmd_truncated(args: argparse.Namespace) -> int:
    out = _out_dir(args)
    model, X_H, report, frame, coeffs = _pipeline(_load_config(args.config))
    if not report.all_pass():
        print(f"assumption check failed: {', '.join(report.failed())}")
        return EXIT_ASSUMPTIONS
    run = verify.simulate_truncated(
        coeffs,
        args.epsilon,
        args.mu_tilde,
        (args.r0, args.z0),
        t_final=args.t_final,
    )
    doc = {
        "epsilon": run.epsilon,
        "mu_tilde": run.mu_tilde,
        "r0": run.r0,
        "equilibrium_residual": run.equilibrium_residual,
    }
    if args.compare:
        comparison = verify.compare_with_full_model(model, frame, run)
        doc["deviation"] = comparison.deviation
        doc["tau_covered"] = comparison.tau_covered
    _write_json(out / "truncated.json", doc)
    _write_table(
        out / "truncated.tsv",
        ("tau", "r", "z"),
        np.column_stack([run.tau, run.r, run.z]),
    )
    line = f"truncated run to tau = {_fmt(run.tau[-1])}"
    if run.equilibrium_residual is not None:
        line += f"; first-order equilibrium residual {run.equilibrium_residual:.2e}"
    print(line)
    if args.compare:
        print(f"sup deviation from full model: {_fmt(doc['deviation'])}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="hybridhopf",
        description="Detect, classify, and verify periodic orbits born from a "
        "destroyed line of equilibria.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, config: bool = True) -> None:
        if config:
            p.add_argument("--config", required=True, help="JSON model configuration")
        p.add_argument("--out", default=None, help="output directory (default: $HYBRIDHOPF_OUT or .)")

    p = sub.add_parser("classify", help="assumptions, coefficients, and type")
    add_common(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("verify", help="shoot for the orbit at one mu and test stability")
    add_common(p)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--tol", type=float, default=None, help="shooting tolerance")
    p.add_argument("--samples", type=int, default=256, help="orbit sample count")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("continue", help="track the orbit branch over a mu grid")
    add_common(p)
    p.add_argument("--mu-grid", default=None, help="comma-separated mu values")
    p.add_argument(
        "--seed-strategy",
        choices=("predict", "simulate"),
        default="predict",
        help="first-point seeding",
    )
    p.add_argument("--seed-state", default=None, help="start state for simulate seeding")
    p.add_argument("--samples", type=int, default=256, help="orbit sample count")
    p.set_defaults(func=_cmd_continue)

    p = sub.add_parser("eco-sweep", help="classify random admissible predator-prey samples")
    add_common(p, config=False)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta-bounds", default=None, help="lo,hi bounds for the deltas")
    p.set_defaults(func=_cmd_eco_sweep)

    p = sub.add_parser("truncated", help="integrate the truncated reduced dynamics")
    add_common(p)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--mu-tilde", type=float, required=True)
    p.add_argument("--r0", type=float, required=True, help="initial scaled radius")
    p.add_argument("--z0", type=float, default=0.0, help="initial scaled drift coordinate")
    p.add_argument("--t-final", type=float, default=None, help="slow-time horizon (default 10/epsilon)")
    p.add_argument(
        "--compare",
        action=argparse.BooleanOptionalAction,
        default=False,
        help="also integrate the full model and report the deviation",
    )
    p.set_defaults(func=_cmd_truncated)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Degenerate as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except AssumptionViolation as exc:
        print(f"assumption violation: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTIONS
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except HybridHopfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
