"""Invariant curves, integrability forms and holonomy of polynomial
foliations of C^2."""

import json
from importlib import resources

from .algebra import (
    BivarPoly,
    LaurentPoly,
    RationalFunc1,
    exact_divide,
    laurent_residue,
    partial_derivative,
    rational_residues_in_disk,
)
from .foliation import (
    PolyOneForm,
    RationalOneForm,
    VectorFieldC2,
    alpha_form,
    dual_one_form,
    invariant_cofactor,
    lie_derivative,
    verify_integrability,
)
from .holonomy import (
    HolonomyResult,
    TransversalFrame,
    build_frame,
    holonomy_derivative_fd,
    holonomy_derivative_variational,
    lift_loop,
)
from .loops import (
    LoopSpec,
    RationalMapC2,
    integrate_circle_quadrature,
    integrate_circle_residues,
    loop_integral_alpha,
    on_curve_check,
    pullback,
)
from .realgeom import RealCurve, conic_real_points, sample_real_zeros
from .report import AnalysisReport, run_report

__version__ = "0.1.0"

FIXTURES = ("cycle_fixture", "real_circle_fixture", "rotation_fixture", "linear_fixture")


def load_fixture(name):
    """Bundled input document by name (see ``FIXTURES``)."""
    text = resources.files(__package__).joinpath("fixtures", f"{name}.json").read_text("utf-8")
    return json.loads(text)
