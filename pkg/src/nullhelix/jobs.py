"""JSON job files, the analysis pipeline, and CSV export of sampled profiles."""
from __future__ import annotations

import csv
import json
import math
import os
import dataclasses
from dataclasses import dataclass
from typing import Optional

import jsonschema
import numpy as np

from . import __version__
from . import classify as cl
from . import eikonal as ek
from . import expr as ex
from . import frame as fr
from .errors import ExprSyntaxError, NullHelixError, SchemaError

SCHEMA_VERSION = 1
TASK_ORDER = ("verify", "frame", "classify", "theorems", "synthesize")

_vec = {"type": "array", "items": {"type": "number"}, "minItems": 4, "maxItems": 4}
_domain = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

JOB_SCHEMA = {
    "type": "object",
    "required": ["tasks"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "curve": {
            "type": "object",
            "required": ["components", "domain"],
            "properties": {
                "components": {"type": "array", "items": {"type": "string"}, "minItems": 4, "maxItems": 4},
                "domain": _domain,
                "sample_count": {"type": "integer", "minimum": 2},
            },
            "additionalProperties": False,
        },
        "field": {"type": ["string", "null"]},
        "tolerances": {
            "type": "object",
            "properties": {
                "frame_tol": {"type": "number", "exclusiveMinimum": 0},
                "const_tol": {"type": "number", "exclusiveMinimum": 0},
                "ode_tol": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
        "gradient_convention": {"enum": list(ek.CONVENTIONS)},
        "tasks": {"type": "array", "items": {"enum": list(TASK_ORDER)}, "minItems": 1, "uniqueItems": True},
        "synthesize": {
            "type": "object",
            "required": ["sigma1", "sigma2"],
            "properties": {
                "sigma1": {"type": "string"},
                "sigma2": {"type": "string"},
                "init_frame": {
                    "type": "object",
                    "required": ["xi", "N", "W1", "W2"],
                    "properties": {"t": {"type": "number"}, "xi": _vec, "N": _vec, "W1": _vec, "W2": _vec, "position": _vec},
                    "additionalProperties": False,
                },
                "domain": _domain,
                "sample_count": {"type": "integer", "minimum": 5},
                "step": {"type": "number", "exclusiveMinimum": 0},
                "c": {"type": "number"},
            },
            "additionalProperties": False,
        },
        "corollary3": {
            "type": "object",
            "required": ["c"],
            "properties": {k: {"type": "number"} for k in ("c", "m", "n", "k")},
            "additionalProperties": False,
        },
        "expect": {"type": "object"},
    },
    "additionalProperties": False,
}


@dataclass(frozen=True)
class Tolerances:
    frame_tol: float = fr.DEFAULT_FRAME_TOL
    const_tol: float = cl.DEFAULT_CONST_TOL
    ode_tol: float = cl.DEFAULT_ODE_TOL


@dataclass
class SynthesizeSpec:
    sigma1: object
    sigma2: object
    init: fr.CartanFrameSample
    domain: tuple
    sample_count: int
    step: Optional[float]
    c: float


@dataclass
class JobSpec:
    tasks: tuple
    name: str = "job"
    curve: Optional[fr.CurveSpec] = None
    field: Optional[ek.FieldSpec] = None
    tolerances: Tolerances = dataclasses.field(default_factory=Tolerances)
    gradient_convention: str = ek.METRIC
    synthesize: Optional[SynthesizeSpec] = None
    corollary3: Optional[cl.Corollary3Params] = None
    raw: dict = dataclasses.field(default_factory=dict)


def _parse(location, fn, *args):
    try:
        return fn(*args)
    except ExprSyntaxError as exc:
        raise SchemaError(f"bad expression: {exc}", location) from exc
    except NullHelixError as exc:
        raise SchemaError(str(exc), location) from exc


def parse_job(data, convention=None, const_tol=None):
    """Validate a job dictionary and build a JobSpec.

    ``convention`` and ``const_tol`` override the file (CLI flags).
    """
    try:
        jsonschema.validate(data, JOB_SCHEMA)
    except jsonschema.ValidationError as exc:
        loc = ".".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(exc.message, loc) from None
    tasks = tuple(t for t in TASK_ORDER if t in data["tasks"])
    curve = None
    if "curve" in data:
        c = data["curve"]
        comps = tuple(_parse(f"curve.components[{i}]", ex.parse_curve_component, s) for i, s in enumerate(c["components"]))
        curve = _parse("curve.domain", fr.CurveSpec, comps, float(c["domain"][0]), float(c["domain"][1]), int(c.get("sample_count", 201)), tuple(c["components"]))
    needs_curve = {"verify", "frame", "classify", "theorems"} & set(tasks)
    if needs_curve and curve is None:
        raise SchemaError(f"tasks {sorted(needs_curve)} require a curve", "curve")
    fld = None
    if data.get("field") is not None:
        fld = _parse("field", ek.FieldSpec.from_string, data["field"])
    if {"classify", "theorems"} & set(tasks) and fld is None:
        raise SchemaError("classify/theorems tasks require a field", "field")
    tol = Tolerances(**data.get("tolerances", {}))
    if const_tol is not None:
        tol = Tolerances(tol.frame_tol, float(const_tol), tol.ode_tol)
    synth = None
    if "synthesize" in data:
        s = data["synthesize"]
        domain = tuple(s.get("domain", (0.0, 1.0)))
        if not domain[0] < domain[1]:
            raise SchemaError("empty domain", "synthesize.domain")
        if "init_frame" in s:
            f = s["init_frame"]
            init = fr.CartanFrameSample(
                t=float(f.get("t", domain[0])),
                xi=np.array(f["xi"], float),
                N=np.array(f["N"], float),
                W1=np.array(f["W1"], float),
                W2=np.array(f["W2"], float),
                sigma1=0.0,
                sigma2=0.0,
                position=np.array(f.get("position", [0, 0, 0, 0]), float),
            )
        else:
            init = fr.canonical_frame(domain[0])
        synth = SynthesizeSpec(
            sigma1=_parse("synthesize.sigma1", ex.parse_curve_component, s["sigma1"]),
            sigma2=_parse("synthesize.sigma2", ex.parse_curve_component, s["sigma2"]),
            init=init,
            domain=domain,
            sample_count=int(s.get("sample_count", 201)),
            step=s.get("step"),
            c=float(s.get("c", 1.0)),
        )
    if "synthesize" in tasks and synth is None:
        raise SchemaError("synthesize task requires a synthesize block", "synthesize")
    cor3 = None
    if "corollary3" in data:
        cor3 = _parse("corollary3.c", lambda d: cl.Corollary3Params(**d), data["corollary3"])
    echo = {k: v for k, v in data.items() if k != "expect"}
    if convention is not None:
        echo["gradient_convention"] = convention
    if const_tol is not None:
        echo.setdefault("tolerances", {})
        echo["tolerances"] = {**echo["tolerances"], "const_tol": float(const_tol)}
    return JobSpec(
        tasks=tasks,
        name=data.get("name", "job"),
        curve=curve,
        field=fld,
        tolerances=tol,
        gradient_convention=convention or data.get("gradient_convention", ek.METRIC),
        synthesize=synth,
        corollary3=cor3,
        raw=echo,
    )


def load_job(path, **overrides):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}", str(path)) from exc
    return parse_job(data, **overrides)


# pipeline ------------------------------------------------------------------


def _clean(x):
    """Recursively convert to JSON-safe builtins (non-finite floats become null)."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):
        return x.value
    return x


def _profile(columns, data):
    rows = np.column_stack([np.asarray(data[c], dtype=float) for c in columns])
    return {"columns": list(columns), "rows": rows.tolist()}


def _verdict(v):
    return {"verdict": v.verdict, "status": v.status.value, "c": v.c, "deviation": v.deviation}


def _task_verify(job, out):
    chk = fr.verify_curve(job.curve, job.tolerances.frame_tol)
    return {
        "is_null": chk.is_null,
        "is_pseudo_arc": chk.is_pseudo_arc,
        "is_cartan": chk.is_cartan,
        "max_deviations": chk.max_deviations,
    }


def _task_frame(job, out):
    tol = job.tolerances.frame_tol
    path = fr.frame_path(job.curve, tol)
    out["_path"] = path
    residuals = np.array([fr.frenet_residuals(job.curve, s.t, tol) for s in path])
    grams = np.array([s.gram_deviation() for s in path])
    dets = np.array([s.orientation() for s in path])
    data = {"t": path.t}
    for name in ("xi", "N", "W1", "W2"):
        vecs = path.column(name)
        for i in range(4):
            data[f"{name}_{i + 1}"] = vecs[:, i]
    for name in ("sigma1", "sigma2", "sigma1_d", "sigma1_dd", "sigma2_d"):
        data[name] = path.column(name)
    data["frenet_residual_max"] = residuals.max(axis=1)
    out["profiles"]["frame"] = _profile(list(data), data)
    return {
        "max_gram_deviation": float(grams.max()),
        "max_frenet_residuals": residuals.max(axis=0).tolist(),
        "orientation_det": float(dets[0]),
        "orientation_drift": float(np.max(np.abs(dets - dets[0]))),
        "sigma1_range": [float(data["sigma1"].min()), float(data["sigma1"].max())],
        "sigma2_range": [float(data["sigma2"].min()), float(data["sigma2"].max())],
        "start": _frame_dict(path.samples[0]),
        "end": _frame_dict(path.samples[-1]),
    }


def _frame_dict(s):
    return {
        "t": s.t,
        "xi": s.xi,
        "N": s.N,
        "W1": s.W1,
        "W2": s.W2,
        "sigma1": s.sigma1,
        "sigma2": s.sigma2,
    }


def _path(job, out):
    if "_path" not in out:
        out["_path"] = fr.frame_path(job.curve, job.tolerances.frame_tol)
    return out["_path"]


def _task_classify(job, out):
    rep = cl.classify(
        job.curve, job.field, job.tolerances.const_tol, job.gradient_convention, job.tolerances.frame_tol, _path(job, out)
    )
    out["_classification"] = rep
    for w in rep.warnings:
        out["warnings"].append({"task": "classify", "location": "field", "message": w})
    out["profiles"]["classify"] = _profile(list(rep.profiles), rep.profiles)
    return {
        "gradient_convention": rep.gradient_convention,
        "is_null": rep.is_null,
        "is_pseudo_arc": rep.is_pseudo_arc,
        "is_cartan": rep.is_cartan,
        "curve_deviations": rep.curve_deviations,
        "eikonal": {
            "is_eikonal": rep.eikonal.is_eikonal,
            "norm_value": rep.eikonal.norm_value,
            "max_deviation": rep.eikonal.max_deviation,
            "null_gradient": rep.eikonal.null_gradient,
        },
        "helix": _verdict(rep.helix),
        "slant": _verdict(rep.slant),
        "alternate_convention": {
            "convention": rep.alternate["convention"],
            "helix": _verdict(rep.alternate["helix"]),
            "slant": _verdict(rep.alternate["slant"]),
        },
        "hessian_zero": rep.hessian_zero,
        "hessian_max_entry": rep.hessian_max_entry,
        "theorem1": {
            "linear_along": rep.theorem1.linear_along,
            "helix_constant": rep.theorem1.helix_constant,
            "equivalence_holds": rep.theorem1.equivalence_holds,
            "zero_constant": rep.theorem1.zero_constant,
        },
        "consistency_violation": rep.consistency_violation,
    }


def _not_applicable(exc):
    return {"applicable": False, "reason": f"{type(exc).__name__}: {exc}"}


def _task_theorems(job, out):
    tol = job.tolerances
    path = _path(job, out)
    res = {}
    t1 = cl.theorem1_check(job.curve, job.field, tol.const_tol)
    res["theorem1"] = {
        "linear_along": t1.linear_along,
        "helix_constant": t1.helix_constant,
        "equivalence_holds": t1.equivalence_holds,
        "zero_constant": t1.zero_constant,
    }
    profiles = {"t": path.t}
    try:
        t2 = cl.theorem2_condition(path, tol.const_tol)
        res["theorem2"] = {"applicable": True, "max_residual": t2.max_residual, "holds": t2.holds, "sigma1_nonconstant": t2.sigma1_nonconstant}
        profiles["theorem2_residual"] = t2.residual_profile
        rep = out.get("_classification")
        c = rep.helix.c if rep is not None and rep.helix.verdict else None
        if c:
            ax = cl.helix_axis(path, c, tol.ode_tol)
            res["helix_axis"] = {"c": c, "drift": ax.drift, "constant_axis": ax.constant_axis}
    except NullHelixError as exc:
        res["theorem2"] = _not_applicable(exc)
    t3 = cl.theorem3_profile(job.curve, frame_tol=tol.frame_tol)
    profiles["det_numeric"] = [r.det_numeric for r in t3]
    profiles["det_formula"] = [r.det_formula for r in t3]
    gaps = [abs(abs(r.det_numeric) - abs(r.det_formula)) for r in t3]
    res["theorem3"] = {
        "all_match": all(r.match for r in t3),
        "max_abs_gap": max(gaps),
        "max_abs_det": max(abs(r.det_numeric) for r in t3),
    }
    try:
        t4 = cl.theorem4_residuals(path, job.field, tol.const_tol)
        res["theorem4"] = {"applicable": True, "residuals": t4.residuals, "c_status": t4.c_status.value}
        for w in t4.warnings:
            out["warnings"].append({"task": "theorems", "location": "theorem4", "message": w})
        profiles.update({"a1": t4.a1, "a2": t4.a2, "a3": t4.a3, "c": t4.c})
    except NullHelixError as exc:
        res["theorem4"] = _not_applicable(exc)
    try:
        params = job.corollary3
        fitted = params is None
        if fitted:
            params = cl.fit_corollary3_params(path, job.field)
        axes = np.array([cl.corollary3_axis(params, s, tol.frame_tol) for s in path])
        grads = np.array([ek.gradient(job.field, p) for p in path.positions])
        res["corollary3"] = {
            "applicable": True,
            "params": {"c": params.c, "m": params.m, "n": params.n, "k": params.k, "fitted": fitted},
            "axis_start": axes[0],
            "axis_drift": float(np.max(np.linalg.norm(axes - axes[0], axis=1))),
            "max_gap_to_gradient": float(np.max(np.abs(axes - grads))),
        }
    except NullHelixError as exc:
        res["corollary3"] = _not_applicable(exc)
    out["profiles"]["theorems"] = _profile(list(profiles), profiles)
    return res


def _task_synthesize(job, out):
    s = job.synthesize
    tol = job.tolerances
    curve = fr.SyntheticCurve(s.sigma1, s.sigma2, s.init, s.domain, s.sample_count, s.step)
    path = curve.path
    grams = np.array([x.gram_deviation() for x in path])
    length = s.domain[1] - s.domain[0]
    res = {"step": curve.step, "gram_drift": float(grams.max()), "gram_drift_per_length": float(grams.max() / length)}
    data = {"t": path.t, "sigma1": path.column("sigma1"), "sigma2": path.column("sigma2")}
    pos = path.positions
    for i in range(4):
        data[f"x{i + 1}"] = pos[:, i]
    try:
        t2 = cl.theorem2_condition(path, tol.const_tol)
        res["theorem2"] = {"applicable": True, "max_residual": t2.max_residual, "holds": t2.holds, "sigma1_nonconstant": t2.sigma1_nonconstant}
        ax = cl.helix_axis(path, s.c, tol.ode_tol)
        ctrl = cl.helix_axis(path, s.c, tol.ode_tol, phi_offset=1.0)
        res["helix_axis"] = {
            "c": s.c,
            "drift": ax.drift,
            "constant_axis": ax.constant_axis,
            "g_axis_xi_spread": ax.g_axis_xi_spread,
            "axis": ax.axis_samples[0],
            "negative_control_drift": ctrl.drift,
        }
        for i in range(4):
            data[f"axis_{i + 1}"] = ax.axis_samples[:, i]
        data["g_axis_xi"] = ax.g_axis_xi
    except NullHelixError as exc:
        res["theorem2"] = _not_applicable(exc)
    t3 = cl.theorem3_profile(curve, rtol=1e-5, atol=1e-8, frame_tol=max(tol.frame_tol, 1e-8))
    data["det_numeric"] = [r.det_numeric for r in t3]
    data["det_formula"] = [r.det_formula for r in t3]
    res["theorem3"] = {"all_match": all(r.match for r in t3), "max_abs_det": max(abs(r.det_numeric) for r in t3)}
    out["profiles"]["synthesize"] = _profile(list(data), data)
    return res


_TASKS = {
    "verify": _task_verify,
    "frame": _task_frame,
    "classify": _task_classify,
    "theorems": _task_theorems,
    "synthesize": _task_synthesize,
}


def run_job(job):
    """Run the requested tasks in pipeline order and return a JSON-ready report."""
    out = {"profiles": {}, "warnings": []}
    results, errors = {}, []
    for task in job.tasks:
        try:
            results[task] = _TASKS[task](job, out)
        except NullHelixError as exc:
            errors.append({"task": task, "location": task, "type": type(exc).__name__, "message": str(exc)})
    report = {
        "schema_version": SCHEMA_VERSION,
        "generator": f"nullhelix {__version__}",
        "job": job.raw,
        "results": results,
        "warnings": out["warnings"],
        "errors": errors,
        "ok": not errors,
        "profiles": out["profiles"],
    }
    return _clean(report)


def dumps_report(report):
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def export_profiles(report, path):
    """Write one CSV per sampled profile in ``report`` into directory ``path``.

    Values use 17 significant digits; quoting follows RFC 4180.
    """
    profiles = report.get("profiles", {})
    written = []
    if not profiles:
        return written
    name = report.get("job", {}).get("name", "job")
    try:
        os.makedirs(path, exist_ok=True)
        for key in sorted(profiles):
            prof = profiles[key]
            target = os.path.join(path, f"{name}_{key}.csv")
            with open(target, "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh, lineterminator="\r\n")
                w.writerow(prof["columns"])
                for row in prof["rows"]:
                    w.writerow(["" if v is None else format(v, ".17g") for v in row])
            written.append(target)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write profiles to {path}: {exc.strerror}") from exc
    return written
