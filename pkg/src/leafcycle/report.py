"""End-to-end analysis: invariance, alpha, loop integrals, holonomy and real
points, folded into one verdict."""

import cmath
import math
from dataclasses import dataclass, field

from . import schema
from .errors import FoliationError, InconsistencyError
from .foliation import alpha_form, invariant_cofactor, lie_derivative, verify_integrability
from .holonomy import (
    build_frame,
    holonomy_derivative_fd,
    holonomy_derivative_variational,
    DEFAULT_SAMPLES,
)
from .loops import CROSS_CHECK_TOL, alpha_integral
from .realgeom import conic_real_points, sample_real_zeros

VERDICTS = (
    "complex_limit_cycle_disjoint_from_real_plane",
    "limit_cycle_meets_real_plane",
    "not_a_limit_cycle",
    "inconclusive",
)
NONTRIVIAL_LOG_TOL = 1e-3
THEOREM_RTOL = 1e-6
FD_AGREEMENT_RTOL = 1e-4
DEFAULT_EPS = 1e-4


@dataclass
class AnalysisReport:
    field_echo: dict
    invariant: dict = None
    alpha: dict = None
    alpha_integral: dict = field(default_factory=dict)
    holonomy: dict = field(default_factory=dict)
    real_points: dict = None
    verdict: str = "inconclusive"
    verdict_reason: str = ""
    errors: list = field(default_factory=list)

    def to_json(self):
        return {
            "schema": schema.SCHEMA_VERSION,
            "kind": "analysis_report",
            "field": self.field_echo,
            "invariant": self.invariant,
            "alpha": self.alpha,
            "alpha_integral": self.alpha_integral,
            "holonomy": self.holonomy,
            "real_points": self.real_points,
            "verdict": self.verdict,
            "verdict_reason": self.verdict_reason,
            "errors": self.errors,
        }

    @property
    def exit_code(self):
        return max((e["exit_code"] for e in self.errors), default=0)


def _error_entry(stage, exc):
    return {
        "stage": stage,
        "type": type(exc).__name__,
        "message": str(exc),
        "exit_code": getattr(exc, "exit_code", 3),
    }


def _options(doc, overrides):
    opts = dict(doc.get("options", {}))
    opts.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return opts


def _orientations(opt):
    return ("ccw", "cw") if opt in (None, "both") else (opt,)


def _is_nontrivial(h):
    return abs(cmath.log(h)) > NONTRIVIAL_LOG_TOL


def run_report(doc, overrides=None):
    """Run every stage on a validated input document.

    Stage failures are recorded in ``report.errors`` and force the verdict to
    ``inconclusive``; they never propagate.
    """
    opts = _options(doc, overrides)
    V = schema.decode_field(doc)
    F = schema.decode_curve(doc)
    base_loop = schema.decode_loop(doc, radius=opts.get("radius"))
    tol = opts.get("tol", CROSS_CHECK_TOL)
    report = AnalysisReport(field_echo=V.to_json())

    cofactor = None
    if F is not None:
        try:
            cofactor = invariant_cofactor(V, F)
            report.invariant = {
                "curve": F.to_json(),
                "lie_derivative": lie_derivative(V, F).to_json(),
                "cofactor": None if cofactor is None else cofactor.to_json(),
                "is_invariant": cofactor is not None,
                "method": "exact_divide",
            }
        except FoliationError as exc:
            report.errors.append(_error_entry("check-invariant", exc))

    try:
        report.alpha = {"form": alpha_form(V).to_json(),
                        "integrable": verify_integrability(V)}
    except FoliationError as exc:
        report.errors.append(_error_entry("alpha", exc))

    integrals = {}
    if base_loop is not None and report.alpha is not None:
        for orient in _orientations(opts.get("orientation")):
            loop = base_loop if orient == base_loop.orientation else base_loop.reversed()
            try:
                integrals[orient] = alpha_integral(V, loop, F if cofactor is not None else None, tol)
                report.alpha_integral[orient] = integrals[orient].to_json()
            except FoliationError as exc:
                report.errors.append(_error_entry(f"integrate/{orient}", exc))
        if len(integrals) == 2:
            report.alpha_integral["antisymmetry_delta"] = abs(
                integrals["ccw"].value + integrals["cw"].value)
        ref = opts.get("reference_alpha_integral")
        if ref is not None and integrals:
            ref_value = schema.complex_from_json(ref)
            deltas = {o: abs(a.value - ref_value) for o, a in integrals.items()}
            report.alpha_integral["reference"] = {
                "value": schema.complex_to_json(ref_value),
                "note": opts.get("reference_note", ""),
                "delta": deltas,
                "differs": all(d > tol for d in deltas.values()),
            }

    holo = {}
    if base_loop is not None:
        holo = _holonomy_stage(V, base_loop, integrals, opts, report)

    if F is not None:
        try:
            report.real_points = _real_points_stage(F, opts)
        except (FoliationError, ValueError) as exc:
            report.errors.append(_error_entry("real-points", exc))

    report.verdict, report.verdict_reason = _verdict(report, cofactor, holo)
    return report


def _holonomy_stage(V, base_loop, integrals, opts, report):
    samples = opts.get("samples", DEFAULT_SAMPLES)
    eps = opts.get("eps", DEFAULT_EPS)
    variational = {}
    for orient in ("ccw", "cw"):
        loop = base_loop if orient == base_loop.orientation else base_loop.reversed()
        try:
            frame = build_frame(V, loop, samples)
            variational[orient] = holonomy_derivative_variational(V, frame)
        except FoliationError as exc:
            report.errors.append(_error_entry(f"holonomy/variational/{orient}", exc))
    if not variational:
        return {}

    # nonlinear lifts are only well conditioned along the contracting orientation
    if len(variational) == 2:
        fd_orient = min(variational, key=lambda o: (abs(variational[o].derivative), o))
    else:
        fd_orient = next(iter(variational))
    other = "cw" if fd_orient == "ccw" else "ccw"
    fd = {}
    try:
        loop = base_loop if fd_orient == base_loop.orientation else base_loop.reversed()
        frame = build_frame(V, loop, samples)
        fd[fd_orient] = holonomy_derivative_fd(V, frame, eps)
        fd[other] = 1 / fd[fd_orient].derivative
    except FoliationError as exc:
        report.errors.append(_error_entry(f"holonomy/finite_difference/{fd_orient}", exc))

    out = {}
    for orient in _orientations(opts.get("orientation")):
        entry = {}
        if orient in variational:
            entry["variational"] = variational[orient].to_json()
        if orient in fd:
            if orient == fd_orient:
                entry["finite_difference"] = fd[orient].to_json()
            else:
                h = fd[orient]
                entry["finite_difference"] = {
                    "derivative": schema.complex_to_json(h),
                    "abs": abs(h),
                    "log_abs": math.log(abs(h)),
                    "method": "finite_difference+reciprocity",
                    "source_orientation": fd_orient,
                }
        if orient in variational and orient in fd:
            hv = variational[orient].derivative
            hf = fd[orient] if orient != fd_orient else fd[orient].derivative
            rel = abs(hv - hf) / abs(hv)
            entry["fd_vs_variational_rel_delta"] = rel
            if rel > FD_AGREEMENT_RTOL:
                report.errors.append(_error_entry(
                    f"holonomy/{orient}",
                    InconsistencyError(f"variational and finite-difference h'(0) differ by {rel:.3g}")))
        if orient in variational and orient in integrals:
            expected = cmath.exp(integrals[orient].value)
            rel = abs(variational[orient].derivative - expected) / abs(expected)
            entry["exp_alpha_integral"] = schema.complex_to_json(expected)
            entry["variational_vs_exp_alpha_rel_delta"] = rel
            if rel > THEOREM_RTOL:
                report.errors.append(_error_entry(
                    f"holonomy/{orient}",
                    InconsistencyError(f"h'(0) differs from exp(integral of alpha) by {rel:.3g}")))
        out[orient] = entry
    if len(variational) == 2:
        out["reciprocity_rel_delta"] = abs(
            variational["ccw"].derivative * variational["cw"].derivative - 1)
    report.holonomy = out
    return {o: r.derivative for o, r in variational.items()}


def _real_points_stage(F, opts):
    method = opts.get("real_method")
    if method is None:
        method = "conic" if F.degree <= 2 else "sample"
    if method == "conic":
        return conic_real_points(F).to_json()
    res = sample_real_zeros(F, opts.get("half_width", 10.0), opts.get("grid", 200))
    out = res.to_json()
    out.update({"method": "sample", "empty": None if not res.found else False,
                "certified": False})
    return out


def _verdict(report, cofactor, holo):
    if report.errors:
        stages = ", ".join(sorted({e["stage"] for e in report.errors}))
        return "inconclusive", f"stage errors: {stages}"
    if report.invariant is None:
        return "inconclusive", "no candidate curve supplied"
    if cofactor is None:
        return "not_a_limit_cycle", "candidate curve is not invariant under the field"
    if not holo:
        return "inconclusive", "no loop supplied; holonomy not computed"
    if not any(_is_nontrivial(h) for h in holo.values()):
        return "not_a_limit_cycle", "holonomy first variation equals 1 along the loop"
    rp = report.real_points
    if rp is None or rp.get("empty") is None:
        return "inconclusive", "real-plane intersection not decided"
    if rp["empty"]:
        return ("complex_limit_cycle_disjoint_from_real_plane",
                "invariant curve with nontrivial holonomy and no real points")
    return "limit_cycle_meets_real_plane", "invariant curve with nontrivial holonomy meets R^2"
