"""Command-line front end: ``leafcycle <subcommand> --input doc.json``."""

import argparse
import csv
import sys

from . import schema
from .errors import FoliationError, SchemaError
from .foliation import (
    alpha_form,
    dual_one_form,
    invariant_cofactor,
    lie_derivative,
    verify_integrability,
)
from .holonomy import (
    DEFAULT_SAMPLES,
    build_frame,
    holonomy_derivative_fd,
    holonomy_derivative_variational,
    lift_loop,
)
from .loops import CROSS_CHECK_TOL, alpha_integral
from .realgeom import conic_real_points, sample_real_zeros
from .report import DEFAULT_EPS, run_report


def _orientations(value):
    return ("ccw", "cw") if value == "both" else (value,)


def cmd_check_invariant(doc, args):
    V = schema.decode_field(doc)
    F = schema.decode_curve(doc)
    if F is None:
        raise SchemaError("'curve' is required for this command")
    K = invariant_cofactor(V, F)
    return {
        "lie_derivative": lie_derivative(V, F).to_json(),
        "cofactor": None if K is None else K.to_json(),
        "is_invariant": K is not None,
    }


def cmd_alpha(doc, args):
    V = schema.decode_field(doc)
    omega = dual_one_form(V)
    return {
        "omega": {"dz": omega.A.to_json(), "dw": omega.B.to_json()},
        "alpha": alpha_form(V).to_json(),
        "divergence": V.divergence.to_json(),
        "integrable": verify_integrability(V),
    }


def _loop(doc, args, orientation=None):
    loop = schema.decode_loop(doc, radius=args.radius, orientation=orientation)
    if loop is None:
        raise SchemaError("'loop' is required for this command")
    return loop


def cmd_integrate(doc, args):
    V = schema.decode_field(doc)
    F = schema.decode_curve(doc)
    tol = args.tol if args.tol is not None else CROSS_CHECK_TOL
    out = {}
    for orient in _orientations(args.orientation or "both"):
        out[orient] = alpha_integral(V, _loop(doc, args, orient), F, tol).to_json()
    return out


def cmd_holonomy(doc, args):
    V = schema.decode_field(doc)
    opts = doc.get("options", {})
    method = args.method or doc.get("method") or opts.get("method") or "variational"
    if method not in ("variational", "fd", "both"):
        raise SchemaError(f"unknown holonomy method {method!r}", "/method")
    eps = args.eps or doc.get("eps") or opts.get("eps") or DEFAULT_EPS
    samples = args.samples or doc.get("samples") or opts.get("samples") or DEFAULT_SAMPLES
    out = {}
    for orient in _orientations(args.orientation or "both"):
        frame = build_frame(V, _loop(doc, args, orient), samples)
        entry = {}
        if method in ("variational", "both"):
            entry["variational"] = holonomy_derivative_variational(V, frame).to_json()
        if method in ("fd", "both"):
            entry["finite_difference"] = holonomy_derivative_fd(V, frame, eps).to_json()
        out[orient] = entry
        if args.trace:
            _, stats = lift_loop(V, frame, eps, full_output=True)
            _write_trace(args.trace, stats.trace)
    return out


def _write_trace(path, trace):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["s", "c_re", "c_im"])
        for s, c in trace:
            c = complex(c)
            writer.writerow([repr(float(s)), repr(c.real), repr(c.imag)])


def cmd_real_points(doc, args):
    F = schema.decode_curve(doc)
    if F is None:
        raise SchemaError("'curve' (or 'F') is required for this command")
    opts = doc.get("options", {})
    method = args.method or doc.get("method") or opts.get("real_method")
    method = method or ("conic" if F.degree <= 2 else "sample")
    if method == "conic":
        return conic_real_points(F).to_json()
    if method == "sample":
        half_width = doc.get("half_width") or opts.get("half_width") or 10.0
        grid = doc.get("grid") or opts.get("grid") or 200
        return sample_real_zeros(F, half_width, grid).to_json()
    raise SchemaError(f"unknown real-points method {method!r}", "/method")


def cmd_report(doc, args):
    overrides = {"tol": args.tol, "radius": args.radius, "orientation": args.orientation}
    if args.method:
        overrides["real_method"] = args.method
    report = run_report(doc, overrides)
    if args.trace and "loop" in doc:
        _report_trace(doc, args)
    return report.to_json(), report.exit_code


def _report_trace(doc, args):
    V = schema.decode_field(doc)
    opts = doc.get("options", {})
    loop = _loop(doc, args, "cw")
    frame = build_frame(V, loop, opts.get("samples", DEFAULT_SAMPLES))
    _, stats = lift_loop(V, frame, opts.get("eps", DEFAULT_EPS), full_output=True)
    _write_trace(args.trace, stats.trace)


COMMANDS = {
    "check-invariant": cmd_check_invariant,
    "alpha": cmd_alpha,
    "integrate": cmd_integrate,
    "holonomy": cmd_holonomy,
    "real-points": cmd_real_points,
    "report": cmd_report,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="leafcycle",
        description="Invariant curves, integrability forms and holonomy of polynomial foliations of C^2.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, metavar="PATH", help="input JSON document ('-' for stdin)")
        p.add_argument("--tol", type=float, help="cross-check tolerance")
        p.add_argument("--orientation", choices=["ccw", "cw", "both"])
        p.add_argument("--radius", type=float, help="override the loop radius")
        p.add_argument("--method", help="method name for the subcommand")
        p.add_argument("--output", metavar="PATH", help="write JSON here instead of stdout")
        p.add_argument("--trace", metavar="PATH", help="CSV of lifted path samples (s, Re c, Im c)")
        p.add_argument("--eps", type=float, help="finite-difference offset")
        p.add_argument("--samples", type=int, help="transversal frame samples")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        doc = schema.load_document(text)
        result = COMMANDS[args.command](doc, args)
        code = 0
        if isinstance(result, tuple):
            result, code = result
        body = {"schema": schema.SCHEMA_VERSION, "command": args.command, "result": result} \
            if args.command != "report" else result
    except OSError as exc:
        print(f"leafcycle: {exc}", file=sys.stderr)
        return 2
    except FoliationError as exc:
        print(f"leafcycle: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    text = schema.dumps(body)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
