"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (a single-line JSON error
object is written to stderr), 2 on a usage error.  Exact table values
are always serialized as decimal strings, never floats.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from . import asymptotics, derivatives, kernels, sequences, transform, verification
from .errors import SphereKernelError

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    # usage errors must also be single-line machine-readable objects
    def error(self, message):
        sys.stderr.write(to_json({"error": "UsageError", "message": message}) + "\n")
        raise SystemExit(EXIT_USAGE)


def default_tol() -> float:
    return float(os.environ.get("SPHEREKERNEL_TOL", "1e-10"))


def to_json(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load_model(parser: argparse.ArgumentParser, raw: str) -> sequences.SequenceModel:
    text = raw.strip()
    if not text.startswith("{"):
        try:
            text = Path(text).read_text()
        except OSError as exc:
            parser.error(f"--model: cannot read file {raw!r}: {exc}")
    try:
        return sequences.model_from_json(text)
    except (ValueError, TypeError) as exc:
        parser.error(f"--model: {exc}")


def _parse_sphere(parser: argparse.ArgumentParser, raw: str) -> int | None:
    if raw == "inf":
        return None
    try:
        d = int(raw)
    except ValueError:
        parser.error(f"--sphere: expected 'inf' or a positive integer, got {raw!r}")
    if d < 1:
        parser.error(f"--sphere: dimension must be >= 1, got {d}")
    return d


def _check_tol(parser: argparse.ArgumentParser, tol: float) -> float:
    if tol <= 0.0:
        parser.error(f"--tol: must be positive, got {tol}")
    return tol


def cmd_eval(parser, args) -> int:
    model = _load_model(parser, args.model)
    dim = _parse_sphere(parser, args.sphere)
    tol = _check_tol(parser, args.tol)
    for theta in args.theta:
        if not 0.0 <= theta <= math.pi + 1e-12:
            parser.error(f"--theta: values must lie in [0, pi], got {theta}")
    spec = kernels.KernelSpec(dim, model)
    values = [kernels.phi_eval(spec, theta, tol) for theta in args.theta]
    if args.format == "csv":
        lines = ["theta,phi"] + [f"{t!r},{v!r}" for t, v in zip(args.theta, values)]
        _emit("\n".join(lines) + "\n", args.output)
    else:
        _emit(
            to_json(
                {
                    "sphere": "inf" if dim is None else dim,
                    "theta": list(args.theta),
                    "phi": values,
                    "tol": tol,
                }
            ),
            args.output,
        )
    return EXIT_OK


def cmd_btable(parser, args) -> int:
    table = derivatives.build_deriv_table(args.j, args.order)
    if args.format == "csv":
        _emit(derivatives.table_to_csv(table), args.output)
    else:
        cells = [
            {"n1": n1, "n2": n2, "value": str(value)}
            for (n1, n2), value in sorted(
                table.cells.items(), key=lambda it: (it[0][0] + it[0][1], it[0][1])
            )
        ]
        _emit(
            to_json({"j": table.power, "max_order": table.max_order, "cells": cells}),
            args.output,
        )
    return EXIT_OK


def cmd_ctable(parser, args) -> int:
    table = asymptotics.build_leading_table(args.max_n)
    if args.format == "csv":
        _emit(asymptotics.leading_table_to_csv(table), args.output)
    else:
        cells = [
            {"n1": n1, "n2": n2, "value": str(value)}
            for (n1, n2), value in sorted(table.cells.items())
        ]
        _emit(to_json({"max_n": table.max_n, "cells": cells}), args.output)
    return EXIT_OK


def cmd_asymptotics(parser, args) -> int:
    if args.ell < 1:
        parser.error(f"--ell: must be positive, got {args.ell}")
    if args.js:
        js = sorted(set(args.js))
    else:
        if args.max_j < 8:
            parser.error(f"--max-j: must be at least 8, got {args.max_j}")
        js = [args.max_j // 8, args.max_j // 4, args.max_j // 2, args.max_j]
    parities = ("even", "odd") if args.parity == "both" else (args.parity,)
    traces = [asymptotics.trace_convergence(args.ell, p, js) for p in parities]
    if args.format == "csv":
        _emit(asymptotics.traces_to_csv(traces), args.output)
    else:
        payload = {
            "ell": args.ell,
            "traces": [
                {
                    "parity": tr.parity,
                    "js": list(tr.sample_js),
                    "scaled_values": list(tr.scaled_values),
                    "estimated_constant": tr.estimated_constant,
                }
                for tr in traces
            ],
        }
        if args.parity == "both":
            report = asymptotics.limit_constant_report(args.ell, tuple(js))
            payload["even_over_odd"] = report["even_over_odd"]
            payload["even_over_diagonal_growth"] = report["even_over_diagonal_growth"]
        _emit(to_json(payload), args.output)
    return EXIT_OK


def cmd_transform(parser, args) -> int:
    model = _load_model(parser, args.model)
    tol = _check_tol(parser, args.tol)
    if args.max_index is None:
        seq = transform.circle_sequence(model, tol)
    else:
        if args.max_index < 0:
            parser.error(f"--max-index: must be nonnegative, got {args.max_index}")
        per_tol = tol / (4.0 * (args.max_index + 1))
        seq = transform.CircleSequence(
            tuple(
                transform.circle_coefficient(model, n, per_tol)
                for n in range(args.max_index + 1)
            ),
            args.max_index,
            per_tol,
        )
    if args.format == "csv":
        lines = ["n,value"] + [f"{n},{v!r}" for n, v in enumerate(seq.terms)]
        _emit("\n".join(lines) + "\n", args.output)
    else:
        _emit(
            to_json(
                {
                    "coefficients": list(seq.terms),
                    "max_index": seq.max_index,
                    "per_term_tol": seq.per_term_tol,
                }
            ),
            args.output,
        )
    return EXIT_OK


def cmd_classify(parser, args) -> int:
    model = _load_model(parser, args.model)
    if args.ell_max < 0:
        parser.error(f"--ell-max: must be nonnegative, got {args.ell_max}")
    dim = _parse_sphere(parser, args.sphere)
    if dim is None:
        report = transform.classify_inf(model, args.ell_max)
    else:
        report = transform.classify_d(model, args.ell_max)
    if args.format == "csv":
        lines = ["ell,converges,value"] + [
            f"{v.ell},{str(v.converges).lower()},{'' if v.value is None else repr(v.value)}"
            for v in report.per_ell
        ]
        _emit("\n".join(lines) + "\n", args.output)
    else:
        _emit(to_json(report.to_dict()), args.output)
    return EXIT_OK


def cmd_verify(parser, args) -> int:
    results = verification.run_suite(args.suite)
    failures = 0
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        failures += 0 if result.passed else 1
        sys.stdout.write(
            f"[{status}] {result.name} ({result.seconds:.2f}s) {result.detail}\n"
        )
    sys.stdout.write(
        f"{len(results) - failures}/{len(results)} checks passed\n"
    )
    return EXIT_OK if failures == 0 else EXIT_DOMAIN_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="spherekernel",
        description=(
            "Isotropic positive definite functions on spheres: series "
            "evaluation, exact derivative coefficient tables, circle "
            "transforms and smoothness classification."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common_output(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", default=None, help="write to this path instead of stdout")

    p = sub.add_parser("eval", help="evaluate a kernel series at angles")
    p.add_argument("--sphere", required=True, help="'inf' or a dimension d >= 1")
    p.add_argument("--model", required=True, help="sequence model JSON or a file path")
    p.add_argument("--theta", type=float, nargs="+", required=True)
    p.add_argument("--tol", type=float, default=default_tol())
    common_output(p)
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("btable", help="derivative coefficient table for one power")
    p.add_argument("--j", type=int, required=True, help="cosine power")
    p.add_argument("--order", type=int, required=True, help="highest derivative order")
    common_output(p)
    p.set_defaults(handler=cmd_btable)

    p = sub.add_parser("ctable", help="leading growth coefficient table")
    p.add_argument("--max-n", type=int, required=True)
    common_output(p)
    p.set_defaults(handler=cmd_ctable)

    p = sub.add_parser("asymptotics", help="scaled-sum convergence traces")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--parity", choices=("even", "odd", "both"), default="both")
    p.add_argument("--js", type=int, nargs="+", default=None)
    p.add_argument("--max-j", type=int, default=2048)
    common_output(p)
    p.set_defaults(handler=cmd_asymptotics)

    p = sub.add_parser("transform", help="circle sequence from a Hilbert-sphere model")
    p.add_argument("--model", required=True)
    p.add_argument("--max-index", type=int, default=None,
                   help="fixed top index; omitted means mass-based automatic choice")
    p.add_argument("--tol", type=float, default=default_tol())
    common_output(p)
    p.set_defaults(handler=cmd_transform)

    p = sub.add_parser("classify", help="smoothness classification from decay")
    p.add_argument("--model", required=True)
    p.add_argument("--ell-max", type=int, default=6)
    p.add_argument("--sphere", default="inf", help="'inf' (default) or a dimension")
    common_output(p)
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("verify", help="run the verification suites")
    p.add_argument(
        "suite",
        nargs="?",
        default="all",
        choices=tuple(verification.SUITES) + ("all",),
    )
    p.set_defaults(handler=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(parser, args)
    except SphereKernelError as exc:
        sys.stderr.write(
            to_json({"error": type(exc).__name__, "message": str(exc)}) + "\n"
        )
        return EXIT_DOMAIN_ERROR


def main_entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
