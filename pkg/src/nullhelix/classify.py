"""Helix / slant-helix classification and executable theorem checks.

A null curve is an f-eikonal helix when g(grad f, xi) is a non-zero constant
along it, and an f-eikonal slant helix when g(grad f, N) is.  The remaining
functions turn the structural results about such curves into numerical
identities that can be checked on sampled frame paths.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import expr as ex
from .eikonal import CONVENTIONS, METRIC, PARTIALS_TUPLE, EikonalResult, eikonal_deviation, gradient, hessian_zero_along
from .errors import CurvatureDegenerate, CurvatureNotZero, HessianNotZero, PreconditionError
from .frame import DEFAULT_FRAME_TOL, JET_ORDER, FramePath, frame_jets, frame_path, verify_curve
from .minkowski import det4, inner

DEFAULT_CONST_TOL = 1e-6
DEFAULT_ODE_TOL = 1e-4


class Constancy(str, enum.Enum):
    NONZERO = "nonzero-constant"
    ZERO = "constant-but-zero"
    VARYING = "non-constant"


def constancy(values, tol):
    values = np.asarray(values, dtype=float)
    spread = float(values.max() - values.min())
    c = float(values.mean())
    if spread > tol:
        return Constancy.VARYING, c, spread
    return (Constancy.NONZERO if abs(c) > tol else Constancy.ZERO), c, spread


@dataclass
class Verdict:
    verdict: bool
    status: Constancy
    c: float
    deviation: float


@dataclass
class Theorem1Result:
    linear_along: bool
    derivative_profile: np.ndarray
    helix_constant: bool
    equivalence_holds: bool
    zero_constant: bool


@dataclass
class ClassificationReport:
    is_null: bool
    is_pseudo_arc: bool
    is_cartan: bool
    curve_deviations: dict
    eikonal: EikonalResult
    helix: Verdict
    slant: Verdict
    hessian_zero: bool
    hessian_max_entry: float
    theorem1: Theorem1Result
    consistency_violation: bool
    gradient_convention: str
    alternate: dict
    profiles: dict
    warnings: list = field(default_factory=list)

    @property
    def is_eikonal(self):
        return self.eikonal.is_eikonal


def as_path(curve, frame_tol=DEFAULT_FRAME_TOL):
    if isinstance(curve, FramePath):
        return curve
    return frame_path(curve, frame_tol)


def _positions(path):
    pos = path.positions
    if pos is None:
        raise PreconditionError("frame path carries no curve positions")
    return pos


def frame_projections(path, field, convention=METRIC):
    """g(grad f, .) against each frame vector along the path."""
    rows = []
    for s, p in zip(path.samples, _positions(path)):
        grad = gradient(field, p, convention)
        rows.append([inner(grad, s.xi), inner(grad, s.N), inner(grad, s.W1), inner(grad, s.W2)])
    rows = np.array(rows)
    return {"xi": rows[:, 0], "N": rows[:, 1], "W1": rows[:, 2], "W2": rows[:, 3]}


def _verdicts(proj, tol, eikonal):
    hs, hc, hd = constancy(proj["xi"], tol)
    ss, sc, sd = constancy(proj["N"], tol)
    helix = Verdict(hs is Constancy.NONZERO and eikonal, hs, hc, hd)
    slant = Verdict(ss is Constancy.NONZERO and eikonal, ss, sc, sd)
    return helix, slant


def theorem1_check(curve, field, tol=DEFAULT_CONST_TOL):
    """f is linear along the curve iff g(grad f, xi) is constant (metric gradient)."""
    deriv, gxi = [], []
    for t in curve.grid():
        A = curve.jet(t, 2)
        deriv.append(ex.compose_jet(field.ast, A).derivatives()[1])
        gxi.append(inner(gradient(field, A.value), A.derivative().value))
    deriv = np.array(deriv)
    lin_status, lin_c, _ = constancy(deriv, tol)
    helix_status, _, _ = constancy(np.array(gxi), tol)
    linear = lin_status is not Constancy.VARYING
    helix_const = helix_status is not Constancy.VARYING
    return Theorem1Result(
        linear_along=linear,
        derivative_profile=deriv,
        helix_constant=helix_const,
        equivalence_holds=linear == helix_const,
        zero_constant=lin_status is Constancy.ZERO,
    )


def classify(curve, field, tol=DEFAULT_CONST_TOL, convention=METRIC, frame_tol=DEFAULT_FRAME_TOL, path=None):
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown gradient convention {convention!r}")
    check = verify_curve(curve, frame_tol)
    path = path if path is not None else frame_path(curve, frame_tol)
    eik = eikonal_deviation(field, curve, tol, convention)
    hess = hessian_zero_along(field, curve)
    proj = frame_projections(path, field, convention)
    helix, slant = _verdicts(proj, tol, eik.is_eikonal)

    other = PARTIALS_TUPLE if convention == METRIC else METRIC
    other_eik = eikonal_deviation(field, curve, tol, other)
    other_helix, other_slant = _verdicts(frame_projections(path, field, other), tol, other_eik.is_eikonal)
    warnings = []
    for name, mine, theirs in (("helix", helix, other_helix), ("slant", slant, other_slant)):
        if mine.status is not theirs.status:
            warnings.append(
                f"{name} status depends on the gradient convention: {convention} gives {mine.status.value} "
                f"(mean {mine.c:.12g}), {other} gives {theirs.status.value} (mean {theirs.c:.12g}); "
                f"the {PARTIALS_TUPLE} result omits index raising and is diagnostic only"
            )
    if eik.null_gradient:
        warnings.append("gradient is null along the curve (norm 0 is trivially constant)")

    sigma1, sigma2 = path.column("sigma1"), path.column("sigma2")
    violation = False
    if helix.verdict and hess.holds and np.min(np.abs(sigma1)) > tol and np.min(np.abs(sigma2)) > tol:
        violation = bool(slant.verdict)
    if violation:
        warnings.append("ConsistencyViolation: curve reported as both helix and slant helix with parallel axis")

    return ClassificationReport(
        is_null=check.is_null,
        is_pseudo_arc=check.is_pseudo_arc,
        is_cartan=check.is_cartan,
        curve_deviations=check.max_deviations,
        eikonal=eik,
        helix=helix,
        slant=slant,
        hessian_zero=hess.holds,
        hessian_max_entry=hess.max_entry,
        theorem1=theorem1_check(curve, field, tol),
        consistency_violation=violation,
        gradient_convention=convention,
        alternate={"convention": other, "helix": other_helix, "slant": other_slant},
        profiles={
            "t": path.t,
            "sigma1": sigma1,
            "sigma2": sigma2,
            "g_grad_xi": proj["xi"],
            "g_grad_N": proj["N"],
            "grad_norm": eik.norms,
        },
        warnings=warnings,
    )


# curvature identities ------------------------------------------------------------


@dataclass
class Theorem2Result:
    residual_profile: np.ndarray
    max_residual: float
    holds: bool
    sigma1_nonconstant: bool


def _require_sigma2(path, tol):
    s2 = path.column("sigma2")
    if np.min(np.abs(s2)) <= tol:
        raise CurvatureDegenerate(
            f"sigma2 vanishes (min |sigma2| = {np.min(np.abs(s2)):.3e}); "
            "for sigma1 = sigma2 = 0 use corollary3_axis"
        )
    return s2


def theorem2_condition(curve, tol=DEFAULT_CONST_TOL, frame_tol=DEFAULT_FRAME_TOL):
    """Residual of (sigma1'/sigma2)' - sigma2 along the path.

    This is the derivative of "int sigma2 dt - sigma1'/sigma2 is constant",
    which sidesteps the free integration constant.
    """
    path = as_path(curve, frame_tol)
    s2 = _require_sigma2(path, tol)
    s1 = path.column("sigma1")
    s1d, s1dd, s2d = path.column("sigma1_d"), path.column("sigma1_dd"), path.column("sigma2_d")
    residual = (s1dd * s2 - s1d * s2d) / s2**2 - s2
    max_res = float(np.max(np.abs(residual)))
    return Theorem2Result(residual, max_res, max_res <= tol, float(s1.max() - s1.min()) > tol)


@dataclass
class AxisResult:
    axis_samples: np.ndarray
    drift: float
    constant_axis: bool
    g_axis_xi: np.ndarray
    g_axis_xi_spread: float


def helix_axis(curve, c, tol=1e-5, phi_offset=0.0, frame_tol=DEFAULT_FRAME_TOL):
    """Candidate axis c[-sigma1 xi + N - phi W2] with phi = sigma1'/sigma2.

    ``phi_offset`` shifts the antiderivative; any non-zero shift breaks
    parallelism and serves as a negative control.
    """
    if c == 0:
        raise PreconditionError("helix constant c must be non-zero")
    path = as_path(curve, frame_tol)
    s2 = _require_sigma2(path, frame_tol)
    axes, gx = [], []
    for s, sig2 in zip(path.samples, s2):
        phi = s.sigma1_d / sig2 + phi_offset
        v = c * (-s.sigma1 * s.xi + s.N - phi * s.W2)
        axes.append(v)
        gx.append(inner(v, s.xi))
    axes = np.array(axes)
    gx = np.array(gx)
    drift = float(np.max(np.linalg.norm(axes - axes[0], axis=1)))
    return AxisResult(axes, drift, drift <= tol, gx, float(gx.max() - gx.min()))


@dataclass
class Theorem3Result:
    t: float
    det_numeric: float
    det_formula: float
    orientation: float
    match: bool


def theorem3_det(curve, t, rtol=1e-6, atol=1e-10, frame_tol=DEFAULT_FRAME_TOL):
    """det(a'', a''', a'''', a^(5)) against sigma2^3 - (sigma1'' sigma2 - sigma2' sigma1').

    The two agree in absolute value for every Cartan curve; the sign is the
    frame orientation det(xi, N, W1, W2).
    """
    A = curve.jet(t, JET_ORDER)
    d = A.derivatives()
    det_numeric = float(det4(d[:, 2], d[:, 3], d[:, 4], d[:, 5]))
    s = frame_jets(A, frame_tol).sample()
    det_formula = s.sigma2**3 - (s.sigma1_dd * s.sigma2 - s.sigma2_d * s.sigma1_d)
    gap = abs(abs(det_numeric) - abs(det_formula))
    match = gap <= rtol * max(abs(det_numeric), abs(det_formula)) + atol
    return Theorem3Result(float(t), det_numeric, float(det_formula), s.orientation(), bool(match))


def theorem3_profile(curve, rtol=1e-6, atol=1e-10, frame_tol=DEFAULT_FRAME_TOL):
    return [theorem3_det(curve, t, rtol, atol, frame_tol) for t in curve.grid()]


# slant helix ------------------------------------------------------------------------


def grid_derivative(values, t):
    """Fourth-order finite differences on a uniform grid (one-sided at the ends)."""
    values = np.asarray(values, dtype=float)
    t = np.asarray(t, dtype=float)
    n = len(values)
    if n < 5:
        raise PreconditionError("grid derivative needs at least 5 samples")
    h = (t[-1] - t[0]) / (n - 1)
    if np.max(np.abs(np.diff(t) - h)) > 1e-9 * max(1.0, abs(h)):
        raise PreconditionError("grid derivative needs a uniform grid")
    f = values
    d = np.empty(n)
    d[2:-2] = (-f[4:] + 8 * f[3:-1] - 8 * f[1:-3] + f[:-4]) / (12 * h)
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
    d[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h)
    d[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * h)
    return d


@dataclass
class Theorem4Result:
    a1: np.ndarray
    a2: np.ndarray
    a3: np.ndarray
    c: np.ndarray
    residuals: dict
    c_status: Constancy
    warnings: list


def theorem4_residuals(curve, field, tol=DEFAULT_CONST_TOL, hessian_tol=1e-8, frame_tol=DEFAULT_FRAME_TOL):
    """Residuals of the parallel-axis system in slant-helix coordinates.

    With a1 = g(grad f, xi), a2 = g(grad f, W1), a3 = g(grad f, W2) and
    c = g(grad f, N), a parallel gradient satisfies
    a2 s1 + a3 s2 = 0, a1' = a2, a2' + a1 s1 + c = 0, a3' + a1 s2 = 0.
    """
    path = as_path(curve, frame_tol)
    pos = _positions(path)
    worst = max(float(np.max(np.abs(field.probe(p).second_partials))) for p in pos)
    if worst > hessian_tol:
        raise HessianNotZero(f"Hessian of the field is not zero along the curve (max entry {worst:.3e})")
    proj = frame_projections(path, field)
    a1, c, a2, a3 = proj["xi"], proj["N"], proj["W1"], proj["W2"]
    t = path.t
    s1, s2 = path.column("sigma1"), path.column("sigma2")
    d1, d2, d3 = grid_derivative(a1, t), grid_derivative(a2, t), grid_derivative(a3, t)
    residuals = {
        "a2*s1 + a3*s2": float(np.max(np.abs(a2 * s1 + a3 * s2))),
        "a1' - a2": float(np.max(np.abs(d1 - a2))),
        "a2' + a1*s1 + c": float(np.max(np.abs(d2 + a1 * s1 + c))),
        "a3' + a1*s2": float(np.max(np.abs(d3 + a1 * s2))),
    }
    status, cmean, _ = constancy(c, tol)
    warnings = []
    if status is not Constancy.NONZERO:
        warnings.append(f"g(grad f, N) is {status.value} (mean {cmean:.6g}); the slant-helix hypothesis c != 0 fails")
    return Theorem4Result(a1, a2, a3, c, residuals, status, warnings)


@dataclass(frozen=True)
class Corollary3Params:
    c: float
    m: float = 0.0
    n: float = 0.0
    k: float = 0.0

    def __post_init__(self):
        if self.c == 0:
            raise PreconditionError("Corollary3Params.c must be non-zero")


def corollary3_axis(params, sample, tol=DEFAULT_FRAME_TOL):
    """Axis c xi + (-c t^2/2 + m t + n) N + (-c t + m) W1 + k W2 of a flat slant helix."""
    if abs(sample.sigma1) > tol or abs(sample.sigma2) > tol:
        raise CurvatureNotZero(
            f"needs sigma1 = sigma2 = 0, got sigma1={sample.sigma1:.3e}, sigma2={sample.sigma2:.3e} at t={sample.t:.6g}"
        )
    c, m, n, k, t = params.c, params.m, params.n, params.k, sample.t
    return c * sample.xi + (-0.5 * c * t**2 + m * t + n) * sample.N + (-c * t + m) * sample.W1 + k * sample.W2


def fit_corollary3_params(path, field):
    """Constants (c, m, n, k) read off the gradient's frame coordinates at the first sample."""
    proj = frame_projections(path, field)
    t0 = path.t[0]
    c = float(np.mean(proj["N"]))
    m = proj["W1"][0] + c * t0
    n = proj["xi"][0] + 0.5 * c * t0**2 - m * t0
    return Corollary3Params(c, float(m), float(n), float(proj["W2"][0]))
