"""Golden checks over the shipped example corpus (``nullhelix/data/examples``)."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from importlib import resources

import numpy as np
from scipy.linalg import expm

from . import classify as cl
from . import eikonal as ek
from . import expr as ex
from . import frame as fr
from .errors import CurvatureDegenerate, HessianNotZero, NullHelixError
from .minkowski import ETA


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark}  {self.name}: {self.detail} [value {self.value:.3e}, tol {self.tolerance:.1e}]"


def load_corpus():
    base = resources.files("nullhelix") / "data" / "examples"
    corpus = {}
    for entry in sorted(base.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            corpus[entry.name[:-5]] = json.loads(entry.read_text(encoding="utf-8"))
    return corpus


def curve_of(job):
    c = job["curve"]
    return fr.CurveSpec.from_strings(c["components"], c["domain"], c.get("sample_count", 201))


def _expr_vec(texts, t):
    return np.array([ex.evaluate(ex.parse_curve_component(s), {"t": t}) for s in texts])


def random_lorentz(rng, scale=0.5):
    """Random proper orthochronous Lorentz matrix exp(eta S), S antisymmetric."""
    S = rng.normal(scale=scale, size=(4, 4))
    S = S - S.T
    return expm(ETA @ S)


def random_sigma(rng):
    a, b, c = (float(x) for x in rng.uniform(-1.0, 1.0, size=3))
    if rng.random() < 0.5:
        return f"{a!r} + {b!r}*t + {c!r}*t^2"
    return f"{a!r} + {b!r}*sin({2 * c + 0.5!r}*t)"


def random_null_paths(count=20, seed=20240611, sample_count=11, domain=(0.0, 1.0)):
    """Synthetic Cartan curves with random polynomial/trig curvatures and random initial frames."""
    rng = np.random.default_rng(seed)
    curves = []
    for _ in range(count):
        L = random_lorentz(rng)
        base = fr.canonical_frame(domain[0])
        init = fr.CartanFrameSample(
            t=domain[0],
            xi=L @ base.xi,
            N=L @ base.N,
            W1=L @ base.W1,
            W2=L @ base.W2,
            sigma1=0.0,
            sigma2=0.0,
            position=rng.normal(size=4),
        )
        curves.append(fr.SyntheticCurve(random_sigma(rng), random_sigma(rng), init, domain, sample_count))
    return curves


def _tol(stated, override):
    return stated if override is None else min(stated, override)


def _check(name, value, tol, detail="", ok=None):
    passed = bool(value <= tol) if ok is None else bool(ok and value <= tol)
    return Check(name, passed, float(value), float(tol), detail)


def verify_paper_suite(tol=None):
    """Run every golden check; ``tol`` tightens each check's tolerance to at most that value."""
    corpus = load_corpus()
    checks = []
    checks += _example1(corpus["example1"], tol)
    checks += _example2(corpus["example2"], tol)
    checks += _example3(corpus["example3"], tol)
    checks += _helix_witness(corpus["example2_helix"], tol)
    checks += _synthetic(corpus["synthetic_theorem2"], tol)
    checks += _theorem3(corpus, tol)
    checks += _properties(corpus, tol)
    return checks


def _example1(job, tol):
    e = job["expect"]
    curve = curve_of(job)
    field = ek.FieldSpec.from_string(job["field"])
    vc = fr.verify_curve(curve)
    out = [
        _check("example1.null", np.max(np.abs(vc.null_dev)), _tol(e["null_tol"], tol), "max |g(a',a')|"),
        _check("example1.pseudo_arc", np.max(np.abs(vc.pseudo_arc_dev)), _tol(e["pseudo_arc_tol"], tol), "max |g(a'',a'') - 1|"),
    ]
    rep = cl.classify(curve, field)
    out.append(
        _check("example1.grad_norm", np.max(np.abs(rep.eikonal.norms - e["grad_norm"])), _tol(e["grad_norm_tol"], tol), "|grad f| = 1/sqrt(2)")
    )
    alt = cl.classify(curve, field, convention=ek.PARTIALS_TUPLE)
    gap = np.max(np.abs(alt.profiles["g_grad_xi"] - e["partials_tuple_helix_c"]))
    out.append(
        _check("example1.partials_tuple_helix", gap, _tol(e["partials_tuple_tol"], tol), "g(grad f, xi) = -1/2 under partials-tuple", alt.helix.verdict)
    )
    prof = ex.parse_curve_component(e["metric_helix_profile"])
    expected = np.array([ex.evaluate(prof, {"t": t}) for t in rep.profiles["t"]])
    gap = np.max(np.abs(rep.profiles["g_grad_xi"] - expected))
    warned = any("gradient convention" in w for w in rep.warnings)
    ok = (not rep.helix.verdict) and rep.helix.status is cl.Constancy.VARYING and warned
    out.append(_check("example1.metric_profile", gap, _tol(e["metric_profile_tol"], tol), "metric g(grad f, xi) = cosh(2t)/2, non-constant, warning emitted", ok))
    return out


def _example2(job, tol):
    e = job["expect"]
    curve = curve_of(job)
    field = ek.FieldSpec.from_string(job["field"])
    path = fr.frame_path(curve)
    worst = 0.0
    for s in path:
        for key in ("N", "W1", "W2"):
            worst = max(worst, float(np.max(np.abs(getattr(s, key) - _expr_vec(e[key], s.t)))))
    out = [_check("example2.frame", worst, _tol(e["frame_tol"], tol), "N, W1, W2 match the reference frame")]
    sig = max(np.max(np.abs(path.column("sigma1"))), np.max(np.abs(path.column("sigma2"))))
    out.append(_check("example2.curvatures", sig, _tol(e["sigma_tol"], tol), "sigma1 = sigma2 = 0"))
    rep = cl.classify(curve, field, path=path)
    gap = max(abs(rep.slant.c - e["slant_c"]), rep.slant.deviation, abs(rep.eikonal.norm_value - e["grad_norm"]))
    ok = rep.slant.verdict and rep.eikonal.is_eikonal
    out.append(_check("example2.slant", gap, _tol(e["slant_tol"], tol), "x4 eikonal with norm 1, slant helix with c = 1", ok))
    t4 = cl.theorem4_residuals(path, field)
    out.append(_check("example2.theorem4", max(t4.residuals.values()), _tol(e["theorem4_tol"], tol), "slant-helix system residuals"))
    return out


def _example3(job, tol):
    e = job["expect"]
    path = fr.frame_path(curve_of(job))
    params = cl.Corollary3Params(**job["corollary3"])
    worst = max(float(np.max(np.abs(cl.corollary3_axis(params, s) - e["axis"]))) for s in path)
    return [_check("example3.axis", worst, _tol(e["axis_tol"], tol), "flat slant-helix axis = (0,0,0,1) at every t")]


def _helix_witness(job, tol):
    e = job["expect"]
    curve = curve_of(job)
    field = ek.FieldSpec.from_string(job["field"])
    rep = cl.classify(curve, field)
    gap = max(abs(rep.helix.c - e["helix_c"]), rep.helix.deviation)
    ok = rep.helix.verdict and not rep.slant.verdict
    t1 = cl.theorem1_check(curve, field)
    deriv_gap = float(np.max(np.abs(t1.derivative_profile - e["composition_derivative"])))
    chain = ek.chain_rule_residual(field, curve)
    return [
        _check("helix_witness.classify", gap, _tol(e["helix_tol"], tol), "x1 - x4: helix with c = -1, not slant", ok),
        _check(
            "helix_witness.theorem1",
            max(deriv_gap, chain),
            _tol(e["helix_tol"], tol),
            "d(f o a)/dt = -1, linear <=> helix",
            t1.linear_along and t1.equivalence_holds,
        ),
    ]


def _synthetic(job, tol):
    e = job["expect"]
    s = job["synthesize"]
    curve = fr.SyntheticCurve(s["sigma1"], s["sigma2"], None, s["domain"], s["sample_count"], s["step"])
    path = curve.path
    t2 = cl.theorem2_condition(path)
    ax = cl.helix_axis(path, s["c"])
    ctrl = cl.helix_axis(path, s["c"], phi_offset=1.0)
    length = s["domain"][1] - s["domain"][0]
    drift = max(x.gram_deviation() for x in path) / length
    return [
        _check("synthetic.theorem2", t2.max_residual, _tol(e["theorem2_tol"], tol), "(sigma1'/sigma2)' - sigma2 = 0"),
        _check("synthetic.axis_drift", ax.drift, _tol(e["drift_tol"], tol), "axis is parallel"),
        _check("synthetic.axis_g_xi", ax.g_axis_xi_spread, _tol(e["g_axis_xi_tol"], tol), "g(axis, xi) constant"),
        Check(
            "synthetic.negative_control",
            ctrl.drift >= e["negative_control_min_drift"],
            ctrl.drift,
            e["negative_control_min_drift"],
            "shifted antiderivative breaks parallelism (value must exceed tol)",
        ),
        _check("synthetic.gram_drift", drift, _tol(e["gram_drift_per_length"], tol), "Gram drift per unit length"),
    ]


def _theorem3(corpus, tol):
    out = []
    c1 = curve_of(corpus["example1"])
    e1 = corpus["example1"]["expect"]
    r1 = cl.theorem3_profile(c1)
    gap = max(max(abs(abs(r.det_numeric) - e1["det_abs"]), abs(abs(r.det_formula) - 1.0)) for r in r1)
    out.append(_check("theorem3.example1", gap, _tol(e1["det_tol"], tol), "|det(a'',...,a^(5))| = sigma2^3 = 1"))
    c2 = curve_of(corpus["example2"])
    r2 = cl.theorem3_profile(c2)
    gap = max(max(abs(r.det_numeric), abs(r.det_formula)) for r in r2)
    out.append(_check("theorem3.example2", gap, _tol(corpus["example2"]["expect"]["det_tol"], tol), "determinant vanishes"))
    worst = 0.0
    for curve in random_null_paths():
        for t in curve.grid():
            r = cl.theorem3_det(curve, t)
            scale = max(abs(r.det_numeric), abs(r.det_formula), 1e-3)
            worst = max(worst, abs(abs(r.det_numeric) - abs(r.det_formula)) / scale)
    out.append(_check("theorem3.random_paths", worst, _tol(1e-5, tol), "20 random synthesized paths, relative gap"))
    return out


def _properties(corpus, tol):
    curves = [curve_of(corpus[k]) for k in ("example1", "example2")]
    gram, frenet = 0.0, 0.0
    for c in curves:
        for t in c.grid():
            gram = max(gram, fr.cartan_frame_at(c, t).gram_deviation())
            frenet = max(frenet, max(fr.frenet_residuals(c, t)))
    chain = 0.0
    for c in curves:
        for f in ("x1*x2", "x4", "x1 - x4", "x1^2", "sin(x2)*x3 + exp(x4/3)"):
            chain = max(chain, ek.chain_rule_residual(ek.FieldSpec.from_string(f), c))
    doubled = corpus["example2_doubled"]
    m = fr.reparametrize_pseudo_arc(curve_of(doubled))
    ss = np.linspace(m.s[0], m.s[-1], 41)
    restore = max(abs(m.second_derivative_gram(s) - 1.0) for s in ss)
    return [
        _check("properties.frame_gram", gram, _tol(1e-9, tol), "ten Gram conditions on corpus curves"),
        _check("properties.frenet_residuals", frenet, _tol(1e-8, tol), "Frenet equations on corpus curves"),
        _check("properties.chain_rule", chain, _tol(1e-8, tol), "g(grad f, xi) = d(f o a)/dt"),
        _check("properties.pseudo_arc_restore", restore, _tol(doubled["expect"]["restore_tol"], tol), "reparametrized doubled curve"),
    ]


def suite_report(checks):
    return {"passed": all(c.passed for c in checks), "checks": [asdict(c) for c in checks]}
