"""Command-line front end.

Verbs: ``bounds`` (single constant bounds as JSON), ``table`` (reference
value grids as CSV), ``experiment`` (the refinement study), ``oracle``
(spectral verification).  Table output prints 5 decimals, JSON prints 12
significant digits; identical command lines produce byte-identical output.

Exit codes: 0 success, 1 usage error, 2 computational failure.
"""

import argparse
import json
import os
import sys

from . import friedrichs, majorant, maxwell, oracle
from .fem import SolverError
from .mesh import MeshError, build_lshape, build_unit_square
from .weights import (
    DiagonalWeight,
    DInterval,
    FullWeight,
    WeightError,
    parse_weight,
    tilde_reduction,
)


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_lengths(text):
    try:
        values = [float(v) for v in text.split(",") if v != ""]
    except ValueError as exc:
        raise UsageError(f"--lengths: {exc}") from None
    try:
        return DInterval(tuple(values))
    except WeightError as exc:
        raise UsageError(f"--lengths: {exc}") from None


def _parse_levels(text):
    lo, sep, hi = text.partition(":")
    try:
        if sep:
            return list(range(int(lo), int(hi) + 1))
        return [int(lo)]
    except ValueError:
        raise UsageError(f"--levels must be N or LO:HI, got {text!r}") from None


def _weight_flag(text, flag):
    try:
        return parse_weight(text)
    except WeightError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _json_float(x):
    return float(f"{x:.12g}")


def _jsonify(obj):
    if isinstance(obj, float):
        return _json_float(obj)
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    return obj


def _emit(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _csv_table(deltas, rows):
    lines = ["delta," + ",".join(f"{d:.0e}" for d in deltas)]
    for name, values in rows:
        lines.append(name + "," + ",".join(f"{v:.5f}" for v in values))
    return "\n".join(lines) + "\n"


def _cmd_bounds_friedrichs(args):
    box = _parse_lengths(args.lengths)
    weight = _weight_flag(args.weight, "--weight") if args.weight else DiagonalWeight((1.0,) * box.d)
    if box.d != weight.d:
        raise UsageError(
            f"--lengths is {box.d}-dimensional but --weight is {weight.d}-dimensional"
        )
    method = args.method
    if method == "auto":
        report = friedrichs.best_bound(box, weight)
    elif method == "mikhlin":
        report = friedrichs.mikhlin_bound(box)
    elif method == "coarse":
        report = friedrichs.coarse_bound(box, weight)
    elif method == "thmA":
        if isinstance(weight, FullWeight) and weight.is_diagonal:
            weight = weight.diagonal_part()
        report = friedrichs.diagonal_bound(box, weight)
    elif method == "thmA2":
        report = friedrichs.full_bound(box, weight)
    else:
        diag = tilde_reduction(weight) if isinstance(weight, FullWeight) else weight
        report = friedrichs.semidef_bound(box, diag)
        if diag is not weight:
            inputs = dict(box.digest(), weight=weight.digest())
            report = friedrichs.BoundReport(report.value, "semidef", inputs, seminorm=True)
    payload = {"method": report.method, "value": report.value, "inputs": report.inputs}
    if report.seminorm:
        payload["seminorm"] = True
    return json.dumps(_jsonify(payload)) + "\n"


def _cmd_bounds_maxwell(args):
    box = _parse_lengths(args.lengths)
    eps = _weight_flag(args.eps, "--eps") if args.eps else DiagonalWeight((1.0, 1.0, 1.0))
    try:
        inp = maxwell.MaxwellInput(box, eps, diam=args.diam, eps_max=args.eps_max)
    except WeightError as exc:
        raise UsageError(str(exc)) from None
    if args.method == "coarse":
        report = maxwell.maxwell_coarse(inp)
    elif isinstance(eps, DiagonalWeight):
        report = maxwell.maxwell_diagonal(inp)
    else:
        report = maxwell.maxwell_full(inp)
    payload = {"method": report.method, "value": report.value, "inputs": report.inputs}
    if report.seminorm:
        payload["seminorm"] = True
    return json.dumps(_jsonify(payload)) + "\n"


def _cmd_table(args):
    if args.number == 1:
        return _csv_table(friedrichs.TABLE1_DELTAS, friedrichs.table1_rows())
    return _csv_table(maxwell.TABLE3_DELTAS, maxwell.table3_rows())


def _experiment_columns(constants):
    if len(constants) == 2:
        return ["M_coarse", "M_thmA"]
    return [f"M_{i + 1}" for i in range(len(constants))]


def _solution_writer(directory):
    os.makedirs(directory, exist_ok=True)

    def sink(level, solution):
        path = os.path.join(directory, f"solution_level{level}.csv")
        with open(path, "w") as fh:
            fh.write("vertex,value\n")
            for i, v in enumerate(solution.values):
                fh.write(f"{i},{v:.12g}\n")

    return sink


def _cmd_experiment(args):
    levels = _parse_levels(args.levels)
    alpha = _weight_flag(args.alpha, "--alpha")
    if alpha.d != 2:
        raise UsageError("--alpha must be 2-dimensional for the experiment")
    constants = [float(c) for c in args.constants.split(",") if c != ""]
    if not constants or any(c <= 0.0 for c in constants):
        raise UsageError("--constants needs a comma-separated list of positive reals")
    sink = _solution_writer(args.solutions) if args.solutions else None
    rows = majorant.run_refinement_experiment(levels, alpha, args.f, constants, sink=sink)
    columns = _experiment_columns(constants)
    if args.fmt == "json":
        payload = [
            dict(
                {"level": r.level, "elements": r.elements},
                **{c: _json_float(v) for c, v in zip(columns, r.majorants)},
            )
            for r in rows
        ]
        return json.dumps(payload) + "\n"
    lines = ["level,elements," + ",".join(columns)]
    for r in rows:
        lines.append(
            f"{r.level},{r.elements}," + ",".join(f"{v:.5f}" for v in r.majorants)
        )
    return "\n".join(lines) + "\n"


def _cmd_oracle(args):
    alpha = _weight_flag(args.alpha, "--alpha")
    if args.domain == "square":
        mesh = build_unit_square(args.n)
    else:
        mesh = build_lshape(args.level)
    if alpha.d != 2:
        raise UsageError("--alpha must be 2-dimensional")
    estimate = oracle.estimate_cfa(mesh, alpha)
    box = DInterval((1.0, 1.0))
    if isinstance(alpha, DiagonalWeight):
        bound = friedrichs.diagonal_bound(box, alpha).value
    else:
        bound = friedrichs.best_bound(box, alpha).value
    payload = {
        "lambda_min": estimate.lambda_min,
        "c_estimate": estimate.c_estimate,
        "bound_thmA": bound,
        "margin": bound - estimate.c_estimate,
    }
    return json.dumps(_jsonify(payload)) + "\n"


def _split_out(value, default_fmt):
    """--out takes the literal 'csv'/'json' (stdout) or a file path."""
    if value is None:
        return default_fmt, None
    if value in ("csv", "json"):
        return value, None
    return ("json" if value.endswith(".json") else "csv"), value


def build_parser():
    parser = _Parser(prog="fria", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    bounds = sub.add_parser("bounds", help="single constant bound as JSON")
    bsub = bounds.add_subparsers(dest="kind", required=True)
    bf = bsub.add_parser("friedrichs")
    bf.add_argument("--lengths", required=True, help="box side lengths, e.g. 1,1")
    bf.add_argument("--weight", help="diag:a,b[,c] or full:upper-triangle (default identity)")
    bf.add_argument(
        "--method",
        default="auto",
        choices=["auto", "mikhlin", "coarse", "thmA", "thmA2", "semidef"],
    )
    bf.add_argument("--out", help="output path (default stdout)")
    bm = bsub.add_parser("maxwell")
    bm.add_argument("--lengths", required=True, help="box side lengths, e.g. 1,1,1")
    bm.add_argument("--eps", help="permittivity matrix (default identity)")
    bm.add_argument("--diam", type=float, help="domain diameter (default box diagonal)")
    bm.add_argument("--eps-max", type=float, dest="eps_max", help="largest eigenvalue override")
    bm.add_argument("--method", default="auto", choices=["auto", "coarse"])
    bm.add_argument("--convex", action="store_true", help="assert the domain is convex")
    bm.add_argument("--out", help="output path (default stdout)")

    table = sub.add_parser("table", help="reference value grid as CSV")
    table.add_argument("number", type=int, choices=[1, 3])
    table.add_argument("--out", help="output path (default stdout)")

    experiment = sub.add_parser("experiment", help="L-shape refinement study")
    esub = experiment.add_subparsers(dest="kind", required=True)
    e2 = esub.add_parser("table2")
    e2.add_argument("--levels", default="0:4", help="level range LO:HI (default 0:4)")
    e2.add_argument("--alpha", default="diag:1,1e-4")
    e2.add_argument("--f", type=float, default=1.0)
    e2.add_argument(
        "--constants",
        default=",".join(str(c) for c in majorant.TABLE2_CONSTANTS),
        help="comma-separated constant bounds fed to the majorant",
    )
    e2.add_argument("--out", help="'csv', 'json', or an output path")
    e2.add_argument(
        "--solutions",
        metavar="DIR",
        help="also export each level's nodal solution as vertex,value CSV",
    )

    orc = sub.add_parser("oracle", help="spectral verification run")
    osub = orc.add_subparsers(dest="kind", required=True)
    cfa = osub.add_parser("cfa")
    cfa.add_argument("--domain", default="square", choices=["square", "lshape"])
    cfa.add_argument("--n", type=int, default=64, help="square grid resolution")
    cfa.add_argument("--level", type=int, default=0, help="lshape refinement level")
    cfa.add_argument("--alpha", default="diag:1,1")
    cfa.add_argument("--out", help="output path (default stdout)")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verb == "bounds":
            text = (
                _cmd_bounds_friedrichs(args)
                if args.kind == "friedrichs"
                else _cmd_bounds_maxwell(args)
            )
            _, path = _split_out(args.out, "json")
        elif args.verb == "table":
            text = _cmd_table(args)
            _, path = _split_out(args.out, "csv")
        elif args.verb == "experiment":
            args.fmt, path = _split_out(args.out, "csv")
            text = _cmd_experiment(args)
        else:
            text = _cmd_oracle(args)
            _, path = _split_out(args.out, "json")
    except UsageError as exc:
        sys.stderr.write(f"fria: {exc}\n")
        return 1
    except (WeightError, ValueError, MeshError, SolverError) as exc:
        sys.stderr.write(f"fria: {exc}\n")
        return 2
    _emit(text, path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
