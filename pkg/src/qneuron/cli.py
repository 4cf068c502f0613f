"""Command-line surface.

Subcommands: rescale, synth, mesh, run-qubit, run-optical, compare, cost.
All vector inputs are JSON arrays of finite doubles (file path or inline
JSON; angles in radians once rescaled).  Outputs are deterministic for
identical inputs and seed: JSON is written with sorted keys, CSV with a
fixed column order, and the report subcommands also render a PNG histogram
next to --out unless --no-figure is given.  Validation failures exit with
code 2 and a machine-readable {"error": ...} line on stderr.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from .circuits import cost_metrics, export_text, parse_text
from .diagonal import GRAY, HADAMARD, solve_alpha, synth_alg1, synth_alg2
from .encoding import analytic_fidelity, pad_to_qubit_dim, qubit_dim, rescale
from .neuron import BACKENDS, evaluate
from .optical import (
    build_neuron_optical_circuit,
    mesh_synthesize,
    mesh_to_dict,
    neuron_optical,
    optical_cost_metrics,
)
from .simulator import ANCILLA, MEASURE_ALL, build_neuron_circuit, neuron_qubit, sample

#: seed used when neither --seed nor QNEURON_SEED is given
DEFAULT_SEED = 1729

_VECTOR_HELP = "JSON array of finite doubles (file path or inline JSON)"


class CliError(ValueError):
    """Validation failure that should exit with code 2."""


def _resolve_seed(value) -> int:
    if value is not None:
        return int(value)
    env = os.environ.get("QNEURON_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise CliError(f"QNEURON_SEED must be an integer, got {env!r}") from exc
    return DEFAULT_SEED


def _load_json_arg(arg: str):
    """Read JSON from a file path, or parse the argument itself as JSON."""
    path = Path(arg)
    try:
        if path.is_file():
            text = path.read_text(encoding="utf-8")
        else:
            text = arg
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed JSON in {arg!r}: {exc}") from exc


def _load_vector(arg: str, name: str) -> np.ndarray:
    data = _load_json_arg(arg)
    try:
        vector = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise CliError(f"{name} must be a JSON array of numbers") from exc
    if vector.ndim != 1 or vector.size == 0:
        raise CliError(f"{name} must be a nonempty flat JSON array")
    if not np.all(np.isfinite(vector)):
        raise CliError(f"{name} entries must be finite")
    return vector


def _angles(args, which: str, name: str) -> np.ndarray:
    vector = _load_vector(getattr(args, which), name)
    if args.rescaled:
        return vector
    return rescale(vector).angles


def _write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _emit_json(args, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)


def _emit_csv(args, header: list[str], rows: list[list]) -> None:
    def render(stream):
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)

    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as stream:
            render(stream)
    else:
        render(sys.stdout)


def _figure_path(out: str) -> Path:
    return Path(out).with_suffix(".png")


# --- subcommand handlers -----------------------------------------------------


def cmd_rescale(args) -> int:
    vector = _load_vector(args.input, "--input")
    result = rescale(vector)
    if args.format == "csv":
        rows = [[k, f"{v:.17g}"] for k, v in enumerate(result.angles)]
        _emit_csv(args, ["index", "angle"], rows)
    else:
        _emit_json(
            args,
            {"angles": [float(v) for v in result.angles], "degenerate": result.degenerate},
        )
    return 0


def cmd_synth(args) -> int:
    beta = _load_vector(args.beta, "--beta")
    try:
        if args.algorithm == GRAY:
            circuit = synth_alg1(beta)
        else:
            circuit = synth_alg2(beta, optimize=args.optimize, mean_phase=not args.neuron_mode)
        alpha = solve_alpha(beta, args.algorithm).alpha
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    text = export_text(circuit)
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    counts: dict[str, int] = {}
    for gate in circuit.gates:
        counts[gate.kind] = counts.get(gate.kind, 0) + 1
    sidecar = {
        "algorithm": args.algorithm,
        "alpha": [float(v) for v in alpha],
        "gate_counts": counts,
        "num_wires": circuit.num_wires,
        "metrics": cost_metrics(circuit, paper_count=args.paper_count).to_dict(),
    }
    if args.out:
        _write_text(str(args.out) + ".json", json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_mesh(args) -> int:
    amplitudes = _load_vector(args.amplitudes, "--amplitudes")
    try:
        plan = mesh_synthesize(amplitudes)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    _emit_json(args, mesh_to_dict(plan))
    return 0


def _require_pair(args) -> None:
    if not args.input or not args.weight:
        raise CliError("--input and --weight are required")


def cmd_run_qubit(args) -> int:
    _require_pair(args)
    raw_x = _load_vector(args.input, "--input")
    raw_w = _load_vector(args.weight, "--weight")
    theta = _angles(args, "input", "--input")
    phi = _angles(args, "weight", "--weight")
    if len(theta) != len(phi):
        raise CliError(f"dimension mismatch: {len(theta)} vs {len(phi)}")
    if len(theta) < 2:
        raise CliError("need at least 2 components")
    padded = qubit_dim(len(theta)) != len(theta)
    if padded:
        theta, phi = pad_to_qubit_dim(theta), pad_to_qubit_dim(phi)
    try:
        outcome = neuron_qubit(theta, phi, args.algorithm, args.strategy)
        circuit = build_neuron_circuit(theta, phi, args.algorithm, args.strategy)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    report = {
        "command": "run-qubit",
        "algorithm": args.algorithm,
        "strategy": args.strategy,
        "input": [float(v) for v in raw_x],
        "weight": [float(v) for v in raw_w],
        "theta": [float(v) for v in theta],
        "phi": [float(v) for v in phi],
        "dimension": len(theta),
        "padded": padded,
        "analytic": analytic_fidelity(theta, phi),
        "p0": outcome.p0,
        "p1": outcome.p1,
        "cost": cost_metrics(circuit, paper_count=args.paper_count).to_dict(),
        "histogram": None,
    }
    if args.shots:
        histogram = sample(outcome, args.shots, _resolve_seed(args.seed))
        report["histogram"] = histogram.to_dict()
    _emit_json(args, report)
    if args.out and not args.no_figure:
        from .plotting import save_outcome_figure

        counts = report["histogram"]["counts"] if report["histogram"] else None
        save_outcome_figure(
            _figure_path(args.out),
            [outcome.p0, outcome.p1],
            counts=counts,
            title=f"qubit backend ({args.algorithm}, {args.strategy})",
        )
    return 0


def cmd_run_optical(args) -> int:
    _require_pair(args)
    raw_x = _load_vector(args.input, "--input")
    raw_w = _load_vector(args.weight, "--weight")
    theta = _angles(args, "input", "--input")
    phi = _angles(args, "weight", "--weight")
    try:
        probability, stages = neuron_optical(theta, phi, trace=True)
        circuit = build_neuron_optical_circuit(theta, phi)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    per_mode = np.abs(stages[-1]) ** 2
    report = {
        "command": "run-optical",
        "input": [float(v) for v in raw_x],
        "weight": [float(v) for v in raw_w],
        "theta": [float(v) for v in theta],
        "phi": [float(v) for v in phi],
        "dimension": len(theta),
        "analytic": analytic_fidelity(theta, phi),
        "probability": probability,
        "mode_probabilities": [float(v) for v in per_mode],
        "cost": optical_cost_metrics(circuit).to_dict(),
        "phase_shifters": circuit.num_phase_shifters,
        "histogram": None,
    }
    if args.shots:
        rng = np.random.default_rng(_resolve_seed(args.seed))
        weights = per_mode / per_mode.sum()
        counts = rng.multinomial(args.shots, weights)
        report["histogram"] = {
            "labels": [str(k) for k in range(len(per_mode))],
            "probabilities": [float(v) for v in per_mode],
            "counts": [int(c) for c in counts],
            "shots": args.shots,
            "seed": _resolve_seed(args.seed),
        }
    _emit_json(args, report)
    if args.out and not args.no_figure:
        from .plotting import save_mode_figure

        save_mode_figure(
            _figure_path(args.out), per_mode, title="optical backend, photon per qmode"
        )
    return 0


_CSV_HEADER = [
    "n",
    "analytic",
    "p_qubit_gray",
    "p_qubit_hadamard",
    "p_optical",
    "size_qubit_gray",
    "depth_qubit_gray",
    "width_qubit_gray",
    "size_qubit_hadamard",
    "depth_qubit_hadamard",
    "width_qubit_hadamard",
    "size_optical",
    "depth_optical",
    "width_optical",
]


def _csv_row(report: dict) -> list:
    row = [report["dimension"], f"{report['analytic']:.17g}"]
    for name in BACKENDS:
        res = report["results"].get(name)
        row.append(f"{res['probability']:.17g}" if res else "")
    for name in BACKENDS:
        res = report["results"].get(name)
        if res:
            row.extend([res["cost"]["size"], res["cost"]["depth"], res["cost"]["width"]])
        else:
            row.extend(["", "", ""])
    return row


def _evaluate_pair(x, w, args) -> dict:
    theta = x if args.rescaled else rescale(x).angles
    phi = w if args.rescaled else rescale(w).angles
    try:
        report = evaluate(theta, phi, strategy=args.strategy, paper_count=args.paper_count)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    return report.to_dict()


def cmd_compare(args) -> int:
    if args.batch:
        pairs = _load_json_arg(args.batch)
        if not isinstance(pairs, list) or not pairs:
            raise CliError("--batch expects a nonempty JSON array of pairs")
        reports = []
        for k, pair in enumerate(pairs):
            if isinstance(pair, dict):
                x, w = pair.get("input"), pair.get("weight")
            elif isinstance(pair, list) and len(pair) == 2:
                x, w = pair
            else:
                raise CliError(f"pair {k} must be [x, w] or {{'input':…,'weight':…}}")
            vx = np.asarray(x, dtype=float)
            vw = np.asarray(w, dtype=float)
            reports.append(_evaluate_pair(vx, vw, args))
        if args.format == "json":
            _emit_json(args, {"command": "compare", "reports": reports})
        else:
            _emit_csv(args, _CSV_HEADER, [_csv_row(rep) for rep in reports])
        if args.out and not args.no_figure:
            from .plotting import save_comparison_figure

            save_comparison_figure(_figure_path(args.out), reports)
        return 0

    if not args.input or not args.weight:
        raise CliError("compare needs --input and --weight (or --batch)")
    x = _load_vector(args.input, "--input")
    w = _load_vector(args.weight, "--weight")
    report = _evaluate_pair(x, w, args)
    if args.format == "csv":
        _emit_csv(args, _CSV_HEADER, [_csv_row(report)])
    else:
        _emit_json(args, {"command": "compare", **report})
    if args.out and not args.no_figure:
        from .plotting import save_comparison_figure

        save_comparison_figure(_figure_path(args.out), report)
    return 0


def cmd_cost(args) -> int:
    path = Path(args.circuit)
    if not path.is_file():
        raise CliError(f"circuit file not found: {args.circuit}")
    try:
        circuit = parse_text(path.read_text(encoding="utf-8"))
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    _emit_json(args, cost_metrics(circuit, paper_count=args.paper_count).to_dict())
    return 0


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qneuron",
        description="Phase-encoded quantum neuron: synthesis, simulation, and cost reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (stdout when omitted)")
    common.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"sampling seed (default: QNEURON_SEED or {DEFAULT_SEED})",
    )
    common.add_argument(
        "--format", choices=("json", "csv"), default="json", help="output format"
    )
    common.add_argument(
        "--paper-count",
        action="store_true",
        help="closed-form gate counting: global phases count, multi-controlled gates do not",
    )

    vectors = argparse.ArgumentParser(add_help=False)
    vectors.add_argument("--input", help=f"input vector x: {_VECTOR_HELP}")
    vectors.add_argument("--weight", help=f"weight vector w: {_VECTOR_HELP}")
    vectors.add_argument(
        "--rescaled",
        action="store_true",
        help="inputs are already phases in radians; skip the [0, pi] rescale",
    )

    figures = argparse.ArgumentParser(add_help=False)
    figures.add_argument(
        "--no-figure", action="store_true", help="skip the PNG rendered next to --out"
    )

    p = sub.add_parser(
        "rescale", parents=[common], help="map a raw vector onto phases in [0, pi] radians"
    )
    p.add_argument("--input", required=True, help=f"raw vector: {_VECTOR_HELP}")
    p.set_defaults(handler=cmd_rescale)

    p = sub.add_parser(
        "synth", parents=[common], help="synthesize a diagonal phase circuit from beta"
    )
    p.add_argument("--algorithm", choices=(GRAY, HADAMARD), required=True)
    p.add_argument("--beta", required=True, help=f"target phases (radians): {_VECTOR_HELP}")
    p.add_argument(
        "--optimize",
        action="store_true",
        help="hadamard only: Gray-ordered terms with CNOT cancellation",
    )
    p.add_argument(
        "--neuron-mode",
        action="store_true",
        help="hadamard only: drop the constant-phase term (correct up to global phase)",
    )
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser(
        "mesh", parents=[common], help="beam-splitter pyramid for a real amplitude vector"
    )
    p.add_argument(
        "--amplitudes", required=True, help=f"unit-norm nonnegative vector: {_VECTOR_HELP}"
    )
    p.set_defaults(handler=cmd_mesh)

    p = sub.add_parser(
        "run-qubit", parents=[common, vectors, figures], help="simulate the qubit neuron"
    )
    p.add_argument("--algorithm", choices=(GRAY, HADAMARD), default=GRAY)
    p.add_argument("--strategy", choices=(ANCILLA, MEASURE_ALL), default=ANCILLA)
    p.add_argument("--shots", type=int, default=None, help="optional binomial sampling")
    p.set_defaults(handler=cmd_run_qubit)

    p = sub.add_parser(
        "run-optical",
        parents=[common, vectors, figures],
        help="simulate the single-photon optical neuron",
    )
    p.add_argument("--shots", type=int, default=None, help="optional multinomial sampling")
    p.set_defaults(handler=cmd_run_optical)

    p = sub.add_parser(
        "compare",
        parents=[common, vectors, figures],
        help="analytic oracle vs all backends for one pair or a batch",
    )
    p.add_argument("--strategy", choices=(ANCILLA, MEASURE_ALL), default=ANCILLA)
    p.add_argument(
        "--batch", help="JSON array of pairs ([x, w] or {'input':…,'weight':…}); CSV summary"
    )
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("cost", parents=[common], help="cost metrics of an exported circuit")
    p.add_argument("--circuit", required=True, help="circuit text file (export format)")
    p.set_defaults(handler=cmd_cost)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CliError as exc:
        _print_error(str(exc))
        return 2
    except ValueError as exc:
        _print_error(str(exc))
        return 2
    except OSError as exc:
        _print_error(str(exc))
        return 2


def _print_error(message: str) -> None:
    sys.stderr.write(json.dumps({"error": message}) + "\n")


if __name__ == "__main__":
    raise SystemExit(main())
