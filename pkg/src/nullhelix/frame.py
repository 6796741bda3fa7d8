"""Cartan frames of null curves in Minkowski 4-space.

For a null curve with pseudo-arc parameter (g(a', a') = 0, g(a'', a'') = 1)
the frame {xi, N, W1, W2} and curvatures sigma1, sigma2 follow from the
derivatives of the curve:

    xi = a',  W1 = a'',  sigma1 = g(a''', a''') / 2,  N = -a''' - sigma1 xi,
    u  = N' - sigma1 W1 = sigma2 W2,  sigma2 = sqrt(g(u, u)) >= 0.

All of this is computed on Taylor jets, so frame derivatives (and the
curvature derivatives) are exact up to rounding.  See docs/frame_derivation.md.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import PchipInterpolator

from . import expr as ex
from .errors import BadInitialFrame, DegeneratePseudoArc, NotNull, NotPseudoArc, PreconditionError
from .jet import Jet
from .minkowski import complete_orthonormal, det4, gram_det3, inner, lorentz_cross

JET_ORDER = 6
DEFAULT_FRAME_TOL = 1e-9
CARTAN_REL_THRESHOLD = 1e-10


@dataclass(frozen=True)
class CurveSpec:
    """A curve alpha(t) given by four closed-form components on [t_min, t_max]."""

    components: tuple
    t_min: float
    t_max: float
    sample_count: int = 201
    texts: Optional[tuple] = None
    _jets: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.components) != 4:
            raise PreconditionError("a curve needs exactly four components")
        if not self.t_min < self.t_max:
            raise PreconditionError(f"empty domain [{self.t_min}, {self.t_max}]")
        if self.sample_count < 2:
            raise PreconditionError(f"sample_count must be >= 2, got {self.sample_count}")
        for c in self.components:
            extra = ex.free_variables(c) - ex.CURVE_VARIABLES
            if extra:
                raise PreconditionError(f"curve component uses variables {sorted(extra)}")

    @classmethod
    def from_strings(cls, texts, domain, sample_count=201):
        comps = tuple(ex.parse_curve_component(s) for s in texts)
        return cls(comps, float(domain[0]), float(domain[1]), int(sample_count), tuple(texts))

    def grid(self):
        return np.linspace(self.t_min, self.t_max, self.sample_count)

    def jet(self, t, order=JET_ORDER):
        t = float(t)
        cached = self._jets.get(t)
        if cached is None or cached.order < order:
            if len(self._jets) > 8192:
                self._jets.clear()
            cached = Jet.stack([ex.eval_jet(c, t, max(order, JET_ORDER)) for c in self.components])
            self._jets[t] = cached
        return cached.truncate(order)

    def position(self, t):
        return np.array([ex.evaluate(c, {"t": float(t)}) for c in self.components], dtype=float)


@dataclass
class CartanFrameSample:
    t: float
    xi: np.ndarray
    N: np.ndarray
    W1: np.ndarray
    W2: np.ndarray
    sigma1: float
    sigma2: float
    sigma1_d: float = 0.0
    sigma1_dd: float = 0.0
    sigma2_d: float = 0.0
    position: Optional[np.ndarray] = None

    def vectors(self):
        return self.xi, self.N, self.W1, self.W2

    def gram_deviation(self):
        """Largest violation of the ten null-frame Gram conditions."""
        return frame_gram_deviation(self.xi, self.N, self.W1, self.W2)

    def orientation(self):
        return float(det4(*self.vectors()))


def frame_gram_deviation(xi, N, W1, W2):
    vs = (xi, N, W1, W2)
    target = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], dtype=float)
    G = np.array([[inner(a, b) for b in vs] for a in vs])
    return float(np.max(np.abs(G - target)))


@dataclass
class FramePath:
    samples: list = field(default_factory=list)

    def __post_init__(self):
        ts = self.t
        if len(ts) > 1 and np.any(np.diff(ts) <= 0):
            raise PreconditionError("frame path grid must be strictly increasing")

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    @property
    def t(self):
        return np.array([s.t for s in self.samples])

    def column(self, name):
        return np.array([getattr(s, name) for s in self.samples])

    @property
    def positions(self):
        if any(s.position is None for s in self.samples):
            return None
        return np.array([s.position for s in self.samples])


@dataclass
class FrameJets:
    """Frame vectors and curvatures as jets about one parameter value."""

    xi: Jet
    N: Jet
    W1: Jet
    W2: Jet
    sigma1: Jet
    sigma2: Jet
    degenerate_sigma2: bool

    def sample(self, position=None):
        s1 = self.sigma1.derivatives()
        s2 = self.sigma2.derivatives()
        return CartanFrameSample(
            t=self.xi.t0,
            xi=self.xi.value.copy(),
            N=self.N.value.copy(),
            W1=self.W1.value.copy(),
            W2=self.W2.value.copy(),
            sigma1=float(s1[0]),
            sigma2=float(s2[0]),
            sigma1_d=float(s1[1]),
            sigma1_dd=float(s1[2]),
            sigma2_d=float(s2[1]) if not self.degenerate_sigma2 else 0.0,
            position=position,
        )


# curve verification ---------------------------------------------------------


@dataclass
class CurveCheck:
    t: np.ndarray
    null_dev: np.ndarray
    pseudo_arc_dev: np.ndarray
    cartan_gram: np.ndarray
    tangent_norm: np.ndarray
    tol: float

    @property
    def is_null(self):
        return bool(np.all(np.abs(self.null_dev) <= self.tol) and np.all(self.tangent_norm > self.tol))

    @property
    def is_pseudo_arc(self):
        return bool(np.all(np.abs(self.pseudo_arc_dev) <= self.tol))

    @property
    def is_cartan(self):
        return bool(np.all(np.abs(self.cartan_gram) > CARTAN_REL_THRESHOLD))

    @property
    def max_deviations(self):
        return {
            "null": float(np.max(np.abs(self.null_dev))),
            "pseudo_arc": float(np.max(np.abs(self.pseudo_arc_dev))),
            "cartan_min_rel_gram": float(np.min(np.abs(self.cartan_gram))),
        }


def verify_curve(curve, tol=DEFAULT_FRAME_TOL):
    ts = curve.grid()
    null_dev, pa_dev, cartan, tnorm = [], [], [], []
    for t in ts:
        d = curve.jet(t, 3).derivatives()
        a1, a2, a3 = d[:, 1], d[:, 2], d[:, 3]
        null_dev.append(inner(a1, a1))
        pa_dev.append(inner(a2, a2) - 1.0)
        scale = (np.linalg.norm(a1) * np.linalg.norm(a2) * np.linalg.norm(a3)) ** 2
        cartan.append(gram_det3(a1, a2, a3) / scale if scale > 0 else 0.0)
        tnorm.append(np.linalg.norm(a1))
    return CurveCheck(ts, np.array(null_dev), np.array(pa_dev), np.array(cartan), np.array(tnorm), tol)


# pseudo-arc reparametrization -----------------------------------------------


@dataclass
class PseudoArcMap:
    """Sampled map s(t) = int g(a'', a'')^(1/4) dt with a monotone inverse."""

    t: np.ndarray
    s: np.ndarray
    curve: object

    def __post_init__(self):
        self._s_of_t = PchipInterpolator(self.t, self.s)
        self._t_of_s = PchipInterpolator(self.s, self.t)

    def s_of_t(self, t):
        return self._s_of_t(t)

    def t_of_s(self, s):
        return self._t_of_s(s)

    def second_derivative_gram(self, s):
        """g(d2b/ds2, d2b/ds2) for b(s) = a(t(s)), using the interpolated inverse.

        Only the interpolant supplies dt/ds and d2t/ds2, so this measures the
        quality of the numerical reparametrization.
        """
        t = float(self._t_of_s(s))
        ts = float(self._t_of_s.derivative(1)(s))
        tss = float(self._t_of_s.derivative(2)(s))
        d = self.curve.jet(t, 2).derivatives()
        b2 = d[:, 2] * ts**2 + d[:, 1] * tss
        return float(inner(b2, b2))


def reparametrize_pseudo_arc(curve, tol=DEFAULT_FRAME_TOL):
    ts = curve.grid()
    speed4 = []
    for t in ts:
        d = curve.jet(t, 2).derivatives()
        a1, a2 = d[:, 1], d[:, 2]
        if abs(inner(a1, a1)) > tol or np.linalg.norm(a1) <= tol:
            raise NotNull(f"curve is not null at t={t:.6g}: g(a', a') = {inner(a1, a1):.3e}")
        q = inner(a2, a2)
        if q <= tol:
            raise DegeneratePseudoArc(f"g(a'', a'') = {q:.3e} <= {tol:g} at t={t:.6g}")
        speed4.append(q)
    speed = np.array(speed4) ** 0.25
    s = cumulative_simpson(speed, x=ts, initial=0.0)
    return PseudoArcMap(ts, s, curve)


# frame construction -----------------------------------------------------------


def frame_jets(A, tol=DEFAULT_FRAME_TOL):
    """Cartan frame jets from the Taylor jet A of a null pseudo-arc curve.

    A needs order >= 5 for sigma1'' and sigma2'.  Raises NotPseudoArc when the
    null or pseudo-arc identities fail at the base point.
    """
    if A.order < 5:
        raise ValueError("curve jet must have order >= 5")
    d1 = A.derivative(1)
    d2 = d1.derivative()
    d3 = d2.derivative()
    g11 = inner(d1, d1)
    g22 = inner(d2, d2) - 1.0
    # jets of the defining identities must vanish, not just their values
    dev_null = float(np.max(np.abs(g11.coeffs[:3])))
    dev_pa = float(np.max(np.abs(g22.coeffs[:3])))
    if dev_null > tol or dev_pa > tol or np.linalg.norm(d1.value) <= tol:
        raise NotPseudoArc(
            f"curve is not null pseudo-arc at t={A.t0:.6g}: |g(a',a')| jet dev {dev_null:.3e}, "
            f"|g(a'',a'')-1| jet dev {dev_pa:.3e}"
        )
    xi, W1 = d1, d2
    sigma1 = inner(d3, d3) * 0.5
    N = -d3 - sigma1 * xi
    u = N.derivative() - sigma1 * W1
    guu = inner(u, u)
    if math.sqrt(abs(guu.value)) > tol:
        sigma2 = guu.sqrt()
        W2 = u / sigma2
        degenerate = False
    else:
        sigma2 = Jet(np.zeros(guu.coeffs.shape), A.t0)
        w = Jet.stack(lorentz_cross(xi, N, W1))
        W2 = w / inner(w, w).sqrt()  # det4(xi, N, W1, W2) = -1
        degenerate = True
    return FrameJets(xi, N, W1, W2, sigma1, sigma2, degenerate)


def frame_from_jet(A, tol=DEFAULT_FRAME_TOL):
    return frame_jets(A, tol).sample(position=A.value.copy())


def cartan_frame_at(curve, t, tol=DEFAULT_FRAME_TOL):
    return frame_from_jet(curve.jet(t, JET_ORDER), tol)


def frame_path(curve, tol=DEFAULT_FRAME_TOL):
    if curve.sample_count < 2:
        raise PreconditionError("frame_path needs at least two samples")
    return FramePath([cartan_frame_at(curve, t, tol) for t in curve.grid()])


def frenet_residuals(curve, t, tol=DEFAULT_FRAME_TOL):
    """Euclidean norms of the four Frenet-equation residuals at t."""
    fj = frame_jets(curve.jet(t, JET_ORDER), tol)
    s1, s2 = fj.sigma1.value, fj.sigma2.value
    xi, N, W1, W2 = (v.value for v in (fj.xi, fj.N, fj.W1, fj.W2))
    dxi, dN, dW1, dW2 = (v.derivative().value for v in (fj.xi, fj.N, fj.W1, fj.W2))
    return (
        float(np.linalg.norm(dxi - W1)),
        float(np.linalg.norm(dN - s1 * W1 - s2 * W2)),
        float(np.linalg.norm(dW1 + s1 * xi + N)),
        float(np.linalg.norm(dW2 + s2 * xi)),
    )


# Frenet integration ---------------------------------------------------------------


def canonical_frame(t=0.0):
    r = 1.0 / math.sqrt(2.0)
    return CartanFrameSample(
        t=t,
        xi=np.array([r, r, 0.0, 0.0]),
        N=np.array([-r, r, 0.0, 0.0]),
        W1=np.array([0.0, 0.0, 1.0, 0.0]),
        W2=np.array([0.0, 0.0, 0.0, 1.0]),
        sigma1=0.0,
        sigma2=0.0,
        position=np.zeros(4),
    )


def _coupling(s1, s2):
    # acts on the stacked state rows (xi, N, W1, W2, position)
    return np.array(
        [
            [0.0, 0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, s1, s2, 0.0],
            [-s1, -1.0, 0.0, 0.0, 0.0],
            [-s2, 0.0, 0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0, 0.0],
        ]
    )


def _as_ast(sigma):
    if isinstance(sigma, str):
        return ex.parse_curve_component(sigma)
    if isinstance(sigma, (int, float)):
        return ex.Num(float(sigma))
    return sigma


def _rk4_march(sigma1, sigma2, F, pos, t, t_end, nsteps):
    h = (t_end - t) / nsteps
    Y = np.vstack([F, pos])
    f1, f2 = ex.compile_float(sigma1), ex.compile_float(sigma2)

    def rhs(tt, Y):
        return _coupling(f1(tt), f2(tt)) @ Y

    for i in range(nsteps):
        ti = t + i * h
        k1 = rhs(ti, Y)
        k2 = rhs(ti + 0.5 * h, Y + 0.5 * h * k1)
        k3 = rhs(ti + 0.5 * h, Y + 0.5 * h * k2)
        k4 = rhs(ti + h, Y + h * k3)
        Y = Y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return Y[:4], Y[4]


def _sample_from_state(sigma1, sigma2, t, F, pos):
    j1 = ex.eval_jet(sigma1, t, 2).derivatives()
    j2 = ex.eval_jet(sigma2, t, 2).derivatives()
    return CartanFrameSample(
        t=float(t),
        xi=F[0].copy(),
        N=F[1].copy(),
        W1=F[2].copy(),
        W2=F[3].copy(),
        sigma1=float(j1[0]),
        sigma2=float(j2[0]),
        sigma1_d=float(j1[1]),
        sigma1_dd=float(j1[2]),
        sigma2_d=float(j2[1]),
        position=pos.copy(),
    )


def default_step(t_min, t_max, sample_count):
    return (t_max - t_min) / max(sample_count * 10, 1000)


def integrate_frenet(sigma1, sigma2, init, grid, step=None):
    """Classical RK4 integration of the Frenet system plus the position a' = xi.

    ``grid`` holds the output parameters (strictly increasing, starting at
    ``init.t``); the internal step never exceeds ``step``.
    """
    sigma1, sigma2 = _as_ast(sigma1), _as_ast(sigma2)
    dev = init.gram_deviation()
    if dev > 1e-10:
        raise BadInitialFrame(f"initial frame violates the null-frame Gram conditions by {dev:.3e}")
    grid = np.asarray(grid, dtype=float)
    if len(grid) < 1 or np.any(np.diff(grid) <= 0):
        raise PreconditionError("integration grid must be non-empty and strictly increasing")
    if grid[0] < init.t - 1e-14:
        raise PreconditionError("integration grid starts before the initial frame")
    if step is None:
        step = default_step(grid[0], grid[-1], len(grid)) if len(grid) > 1 else 1e-3
    F = np.array(init.vectors(), dtype=float)
    pos = np.zeros(4) if init.position is None else np.asarray(init.position, dtype=float)
    t = init.t
    samples = []
    for tg in grid:
        if tg > t:
            F, pos = _rk4_march(sigma1, sigma2, F, pos, t, tg, max(1, math.ceil((tg - t) / step - 1e-9)))
            t = tg
        samples.append(_sample_from_state(sigma1, sigma2, tg, F, pos))
    return FramePath(samples)


def frenet_taylor(sigma1_jet, sigma2_jet, F0, pos0, order):
    """Taylor jet of the curve generated by the Frenet system from state F0.

    Taylor-mode solution of the linear ODE: F_{k+1} = (C F)_k / (k + 1).
    """
    s1 = sigma1_jet.coeffs
    s2 = sigma2_jet.coeffs
    F = np.zeros((order, 4, 4))
    F[0] = F0
    for k in range(order - 1):
        acc = np.zeros((4, 4))
        for j in range(k + 1):
            c1 = s1[j] if j < len(s1) else 0.0
            c2 = s2[j] if j < len(s2) else 0.0
            C = np.array([[0, 0, 0, 0], [0, 0, c1, c2], [-c1, 0, 0, 0], [-c2, 0, 0, 0]], dtype=float)
            if j == 0:
                C[0, 2] = 1.0
                C[2, 1] = -1.0
            acc += C @ F[k - j]
        F[k + 1] = acc / (k + 1)
    coeffs = np.zeros((4, order + 1))
    coeffs[:, 0] = pos0
    for k in range(order):
        coeffs[:, k + 1] = F[k, 0] / (k + 1)
    return Jet(coeffs, sigma1_jet.t0)


class SyntheticCurve:
    """Null curve generated from prescribed curvatures by Frenet integration.

    Offers the same ``grid``/``jet``/``position`` interface as CurveSpec, so the
    frame and theorem machinery applies to it unchanged.
    """

    def __init__(self, sigma1, sigma2, init=None, domain=None, sample_count=201, step=None):
        self.sigma1 = _as_ast(sigma1)
        self.sigma2 = _as_ast(sigma2)
        self.init = init if init is not None else canonical_frame(0.0 if domain is None else domain[0])
        if domain is None:
            domain = (self.init.t, self.init.t + 1.0)
        self.t_min, self.t_max = float(domain[0]), float(domain[1])
        if not self.t_min < self.t_max:
            raise PreconditionError(f"empty domain [{self.t_min}, {self.t_max}]")
        if sample_count < 2:
            raise PreconditionError(f"sample_count must be >= 2, got {sample_count}")
        self.sample_count = int(sample_count)
        self.step = step if step is not None else default_step(self.t_min, self.t_max, self.sample_count)
        self.path = integrate_frenet(self.sigma1, self.sigma2, self.init, self.grid(), self.step)

    def grid(self):
        return np.linspace(self.t_min, self.t_max, self.sample_count)

    def _state(self, t):
        ts = self.path.t
        i = int(np.clip(np.searchsorted(ts, t, side="right") - 1, 0, len(ts) - 1))
        s = self.path.samples[i]
        F = np.array(s.vectors())
        pos = s.position
        if t != s.t:
            n = max(1, math.ceil(abs(t - s.t) / self.step))
            F, pos = _rk4_march(self.sigma1, self.sigma2, F, pos, s.t, float(t), n)
        return F, pos

    def jet(self, t, order=JET_ORDER):
        F, pos = self._state(float(t))
        s1 = ex.eval_jet(self.sigma1, float(t), order)
        s2 = ex.eval_jet(self.sigma2, float(t), order)
        return frenet_taylor(s1, s2, F, pos, order)

    def position(self, t):
        return self._state(float(t))[1]
