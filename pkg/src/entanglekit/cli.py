"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 internal numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import families, geometry, locc, measures, sampling
from . import io as state_io
from .errors import EntangleKitError
from .separability import DEFAULT_CRITERIA, DEFAULT_ENTROPY_ORDERS, VIOLATION_TOL, aggregate_report
from .states import PureState

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3
SEED_ENV = "ENTANGLEKIT_SEED"


class InputError(EntangleKitError):
    pass


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _parse_dims(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must look like 2x3, got {text!r}") from None


def _parse_orders(text: str) -> list[float]:
    return [float("inf") if t.strip() in ("inf", "infinity") else float(t) for t in text.split(",")]


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _csv_text(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def _require_format(args, allowed: Sequence[str]) -> None:
    if args.format not in allowed:
        raise InputError(f"--format {args.format} is not supported by '{args.command}' (use {', '.join(allowed)})")


# ---------------------------------------------------------------------------


def analyze_document(state, criteria=DEFAULT_CRITERIA, entropy_orders=DEFAULT_ENTROPY_ORDERS, tol=VIOLATION_TOL) -> dict:
    """Everything ``analyze`` prints, as a JSON-ready dict."""
    report = aggregate_report(state, criteria, entropy_orders, tol)
    return {
        "kind": "pure" if isinstance(state, PureState) else "density",
        "dims": [state.dims.n_a, state.dims.n_b],
        "separability": report.to_dict(),
        "measures": measures.measure_report(state).to_dict(),
    }


def _analyze_text(doc: dict) -> str:
    sep = doc["separability"]
    lines = [f"state: {doc['kind']} {doc['dims'][0]}x{doc['dims'][1]}", "", "criterion            outcome               evidence"]
    for v in sep["verdicts"]:
        lines.append(f"{v['criterion']:<20} {v['outcome']:<21} {v['evidence']: .6e}")
    decided = f" ({sep['decided_by']})" if sep["decided_by"] else ""
    lines += [f"aggregate: {sep['aggregate']}{decided}", "", "measure                       value"]
    for k, v in doc["measures"]["values"].items():
        lines.append(f"{k:<29} {v:.10g}")
    for k, v in doc["measures"]["flags"].items():
        lines.append(f"note: {k}: {v}")
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    _require_format(args, ("json", "text"))
    state = state_io.read_state(args.state)
    criteria = [c.strip() for c in args.criteria.split(",")] if args.criteria else DEFAULT_CRITERIA
    orders = _parse_orders(args.entropy_orders) if args.entropy_orders else DEFAULT_ENTROPY_ORDERS
    try:
        doc = analyze_document(state, criteria, orders, args.tolerance)
    except ValueError as exc:
        if isinstance(exc, EntangleKitError):
            raise
        raise InputError(str(exc)) from None
    _emit(json.dumps(doc, indent=2) if args.format == "json" else _analyze_text(doc), args.output)
    return EXIT_OK


def cmd_generate(args) -> int:
    fam = args.family
    if fam == "bell":
        state = families.bell(args.kind)
    elif fam == "werner":
        state = families.werner(args.n, args.x)
    elif fam == "sigma_h":
        state = families.sigma_h(args.a)
    elif fam == "sigma_b":
        state = families.sigma_b(args.b)
    elif fam == "rho_m":
        state = families.rho_m(args.y)
    elif fam == "rho_xtheta":
        state = families.rho_xtheta(args.x, args.theta)
    elif fam == "tiles":
        state = families.tiles_upb_state()
    elif fam == "maximally_entangled":
        state = families.maximally_entangled(args.n)
    elif fam == "pseudo_pure":
        state = families.pseudo_pure((args.n, args.n), families.maximally_entangled(args.n), args.eps)
    else:  # argparse restricts the choices
        raise InputError(f"unknown family {fam!r}")
    _emit(json.dumps(state_io.state_to_dict(state)), args.output)
    return EXIT_OK


def _schmidt_arg(text: str) -> np.ndarray:
    path = Path(text)
    if path.exists():
        state = state_io.read_state(path)
        if not isinstance(state, PureState):
            raise InputError(f"{text}: LOCC conversion needs a pure state")
        return locc.schmidt_vector(state)
    try:
        values = json.loads(text) if text.lstrip().startswith("[") else [float(t) for t in text.split(",")]
    except ValueError:
        raise InputError(f"{text!r} is neither a state file nor a Schmidt vector") from None
    return locc.schmidt_vector(values)


def cmd_convert(args) -> int:
    _require_format(args, ("json", "text"))
    src, dst = _schmidt_arg(args.source), _schmidt_arg(args.target)
    if src.size != dst.size:
        raise InputError(f"Schmidt vectors of length {src.size} and {dst.size} do not match")
    report = locc.conversion_report(src, dst, args.tolerance)
    if args.format == "json":
        text = report.to_json()
    else:
        text = f"relation: {report.relation.value}\np_c: {report.p_c:.12g}"
    _emit(text, args.output)
    return EXIT_OK


def cmd_sample(args) -> int:
    _require_format(args, ("json", "text"))
    if bool(args.measure) == bool(args.scatter):
        raise InputError("give exactly one of --measure or --scatter")
    names = [args.measure] if args.measure else args.scatter.split(":")
    if len(names) not in (1, 2):
        raise InputError("--scatter expects two measures joined by ':'")
    seed = args.seed if args.seed is not None else _default_seed()
    values = sampling.sample_measures(names, args.dims, args.n, seed, args.ensemble, args.workers)
    estimates = {name: sampling.McEstimate.from_samples(values[:, j]) for j, name in enumerate(names)}
    summary = {
        "seed": seed,
        "n": args.n,
        "generator": sampling.GENERATOR_ID,
        "dims": list(args.dims),
        "ensemble": args.ensemble,
        "estimates": {k: {"mean": e.mean, "standard_error": e.standard_error, "n": e.n} for k, e in estimates.items()},
    }
    if args.output:
        sampling.write_csv(args.output, names, values.tolist())
        sampling.write_metadata(
            args.output + ".meta.json",
            seed=seed,
            n=args.n,
            dims=args.dims,
            ensemble=args.ensemble,
            measures=names,
            estimates=summary["estimates"],
        )
    if args.format == "json":
        text = json.dumps(summary, indent=2)
    else:
        text = "\n".join(
            f"{k}: mean {e.mean:.8g} +- {e.standard_error:.3g} (n={e.n}, seed={seed})" for k, e in estimates.items()
        )
    sys.stdout.write(text + "\n")
    return EXIT_OK


def cmd_bounds(args) -> int:
    rows = measures.bound_curve(args.pair, args.grid)
    param, value = args.pair.split(":")
    _emit(_csv_text([param, value], rows), args.output)
    return EXIT_OK


def cmd_geometry(args) -> int:
    chosen = [args.segre_sweep, args.cross_section is not None, args.input is not None]
    if sum(chosen) != 1:
        raise InputError("give exactly one of --segre-sweep, --cross-section N or --input STATE")
    if args.segre_sweep:
        rows = geometry.segre_sweep_rows(args.lines, args.points)
        text = _csv_text(["family", "line", "x", "y", "z", "quadric"], rows)
    elif args.cross_section is not None:
        seed = args.seed if args.seed is not None else _default_seed()
        phases = _parse_orders(args.phases) if args.phases else (0.0, 0.0, 0.0)
        if len(phases) != 3:
            raise InputError("--phases needs three comma-separated values")
        rows = geometry.cross_section_rows(args.cross_section, sampling.make_rng(seed), phases)
        text = _csv_text(["x", "y", "z", "E1"], rows)
    else:
        state = state_io.read_state(args.input)
        if not isinstance(state, PureState):
            raise InputError("octant coordinates need a pure two-qubit state")
        oc = geometry.octant_coords(state)
        quadric, mod_eq, phase_eq = geometry.segre_residuals(state)
        header = ["n0", "n1", "n2", "n3", "nu1", "nu2", "nu3", "x", "y", "z", "quadric", "modulus_eq", "phase_eq"]
        row = [*oc.moduli, *oc.phases, *oc.gnomonic, quadric, mod_eq, phase_eq]
        text = _csv_text(header, [[float(v) for v in row]])
    _emit(text, args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text", "csv"), default="json", help="output format (default: json)")
    common.add_argument(
        "--tolerance", type=float, default=VIOLATION_TOL, help=f"violation threshold (default: {VIOLATION_TOL:g})"
    )
    common.add_argument("--output", "-o", help="write the result to this path instead of stdout")

    parser = argparse.ArgumentParser(prog="entanglekit", description="Entanglement analysis of bipartite states")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="separability criteria and measures for a state file")
    p.add_argument("state", help="state JSON file")
    p.add_argument("--criteria", help=f"comma-separated subset of {','.join(DEFAULT_CRITERIA)}")
    p.add_argument("--entropy-orders", help="comma-separated Renyi orders (default: 0.5,1,2,inf)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("generate", parents=[common], help="write a named state to a file")
    p.add_argument(
        "family",
        choices=("bell", "werner", "sigma_h", "sigma_b", "rho_m", "rho_xtheta", "tiles", "maximally_entangled", "pseudo_pure"),
    )
    p.add_argument("--kind", default="phi+", help="Bell state: phi+, phi-, psi+, psi-")
    p.add_argument("--n", type=int, default=2, help="local dimension N")
    for name in ("x", "a", "b", "y", "eps"):
        p.add_argument(f"--{name}", type=float, default=0.0)
    p.add_argument("--theta", type=float, default=0.0)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("convert", parents=[common], help="LOCC relation and conversion probability")
    p.add_argument("source", help="pure-state file, JSON array or comma list of Schmidt coefficients")
    p.add_argument("target", help="same forms as source")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("sample", parents=[common], help="Monte Carlo averages and scatter data")
    p.add_argument("--measure", help=f"one of {','.join(sorted(sampling.MEASURES))}")
    p.add_argument("--scatter", help="two measures joined by ':'")
    p.add_argument("--dims", type=_parse_dims, default=(2, 2))
    p.add_argument("--ensemble", choices=sampling.ENSEMBLES, default="pure")
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--seed", type=int, help=f"RNG seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("bounds", parents=[common], help="bound curves between two-qubit measures (CSV)")
    p.add_argument("--pair", required=True, help=f"one of {','.join(measures.BOUND_CURVES)}")
    p.add_argument("--grid", type=int, default=101)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("geometry", parents=[common], help="octant-picture figure data (CSV)")
    p.add_argument("--segre-sweep", action="store_true", help="rulings of the separable surface")
    p.add_argument("--lines", type=int, default=5)
    p.add_argument("--points", type=int, default=21)
    p.add_argument("--cross-section", type=int, metavar="N", help="N random octant points with E_1")
    p.add_argument("--phases", help="three fixed phases for --cross-section")
    p.add_argument("--seed", type=int)
    p.add_argument("--input", help="pure two-qubit state file: print its octant coordinates")
    p.set_defaults(func=cmd_geometry)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EntangleKitError as exc:
        sys.stderr.write(f"entanglekit {args.command}: error: {exc}\n")
        return EXIT_INPUT
    except (np.linalg.LinAlgError, FloatingPointError, ArithmeticError) as exc:
        sys.stderr.write(f"entanglekit {args.command}: numeric failure: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
