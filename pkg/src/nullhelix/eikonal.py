"""Lorentzian gradients and Hessians of scalar fields along curves."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import expr as ex
from .minkowski import inner, raise_index

METRIC = "metric"
PARTIALS_TUPLE = "partials-tuple"
CONVENTIONS = (METRIC, PARTIALS_TUPLE)


@dataclass(frozen=True)
class FieldSpec:
    ast: object
    text: Optional[str] = None

    def __post_init__(self):
        extra = ex.free_variables(self.ast) - set(ex.FIELD_VARIABLES)
        if extra:
            raise ValueError(f"field uses non-coordinate variables {sorted(extra)}")

    @classmethod
    def from_string(cls, text):
        return cls(ex.parse_field(text), text)

    def probe(self, p):
        return ex.eval_field(self.ast, p)

    def value(self, p):
        return self.probe(p).value


@dataclass(frozen=True)
class GradientSample:
    t: float
    grad: np.ndarray
    norm: float
    hessian_max_abs: float


def _check_convention(convention):
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown gradient convention {convention!r}; expected one of {CONVENTIONS}")


def gradient(field, p, convention=METRIC):
    """Metric gradient: g(grad f, X) = X(f).

    ``partials-tuple`` returns the bare tuple of partial derivatives instead.
    It exists only to reproduce reference numbers that skip index raising and
    must not feed theorem checks.
    """
    _check_convention(convention)
    partials = field.probe(p).partials
    return raise_index(partials) if convention == METRIC else np.array(partials, dtype=float)


def gradient_samples(field, curve, convention=METRIC):
    out = []
    for t in curve.grid():
        p = curve.position(t)
        probe = field.probe(p)
        grad = raise_index(probe.partials) if convention == METRIC else np.array(probe.partials)
        out.append(GradientSample(float(t), grad, float(np.sqrt(abs(inner(grad, grad)))), float(np.max(np.abs(probe.second_partials)))))
    return out


@dataclass
class EikonalResult:
    is_eikonal: bool
    norm_value: float
    max_deviation: float
    null_gradient: bool
    norms: np.ndarray


def eikonal_deviation(field, curve, tol=1e-6, convention=METRIC):
    _check_convention(convention)
    norms = np.array([s.norm for s in gradient_samples(field, curve, convention)])
    spread = float(norms.max() - norms.min())
    return EikonalResult(
        is_eikonal=spread <= tol,
        norm_value=float(norms.mean()),
        max_deviation=spread,
        null_gradient=bool(np.all(norms <= tol)),
        norms=norms,
    )


@dataclass
class HessianResult:
    holds: bool
    max_entry: float
    transport_max: float


def hessian_zero_along(field, curve, tol=1e-8):
    """Does H^f vanish along the curve?

    In flat space the Hessian is the matrix of second partials.  As a cross
    check, d/dt grad f(a(t)) is estimated by central differences on the grid
    (``transport_max``); it vanishes whenever the Hessian does.
    """
    samples = gradient_samples(field, curve)
    max_entry = max(s.hessian_max_abs for s in samples)
    G = np.array([s.grad for s in samples])
    ts = np.array([s.t for s in samples])
    dG = np.gradient(G, ts, axis=0)
    return HessianResult(max_entry <= tol, float(max_entry), float(np.max(np.abs(dG))))


def chain_rule_profile(field, curve, convention=METRIC):
    """Pairs (g(grad f, xi), d(f o a)/dt) along the grid, computed independently.

    The left side uses the metric gradient at a(t) paired with the tangent;
    the right side differentiates the Taylor jet of the composition.
    """
    lhs, rhs = [], []
    for t in curve.grid():
        A = curve.jet(t, 2)
        xi = A.derivative().value
        grad = gradient(field, A.value, convention)
        lhs.append(inner(grad, xi))
        rhs.append(ex.compose_jet(field.ast, A).derivatives()[1])
    return np.array(lhs), np.array(rhs)


def chain_rule_residual(field, curve):
    lhs, rhs = chain_rule_profile(field, curve)
    return float(np.max(np.abs(lhs - rhs)))
