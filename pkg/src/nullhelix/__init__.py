"""Cartan frames, curvatures and eikonal-helix classification for null curves in Minkowski 4-space."""

__version__ = "0.1.0"

# the classifier itself lives at nullhelix.classify.classify; re-exporting the
# name here would shadow the submodule

from .classify import (  # noqa: E402
    ClassificationReport,
    Corollary3Params,
    corollary3_axis,
    helix_axis,
    theorem1_check,
    theorem2_condition,
    theorem3_det,
    theorem4_residuals,
)
from .eikonal import FieldSpec, chain_rule_residual, eikonal_deviation, gradient, hessian_zero_along  # noqa: E402
from .expr import eval_field, eval_jet, parse_expr  # noqa: E402
from .frame import (  # noqa: E402
    CartanFrameSample,
    CurveSpec,
    FramePath,
    SyntheticCurve,
    cartan_frame_at,
    frame_path,
    frenet_residuals,
    integrate_frenet,
    reparametrize_pseudo_arc,
    verify_curve,
)
from .minkowski import causal_character, complete_orthonormal, det4, inner, raise_index  # noqa: E402
