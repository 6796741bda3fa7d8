import numpy as np
import pytest

from conftest import ex1_curve, ex2_curve
from nullhelix.classify import (
    Constancy,
    Corollary3Params,
    classify,
    constancy,
    corollary3_axis,
    fit_corollary3_params,
    grid_derivative,
    helix_axis,
    theorem1_check,
    theorem2_condition,
    theorem3_det,
    theorem3_profile,
    theorem4_residuals,
)
from nullhelix.eikonal import PARTIALS_TUPLE, FieldSpec, gradient
from nullhelix.errors import CurvatureDegenerate, CurvatureNotZero, HessianNotZero, PreconditionError
from nullhelix.frame import SyntheticCurve, frame_path
from nullhelix.minkowski import raise_index
from nullhelix.paper_suite import random_null_paths

F = FieldSpec.from_string


@pytest.fixture(scope="module")
def synthetic():
    return SyntheticCurve("t^2/2", "1", domain=(0, 2), sample_count=201, step=1e-3)


@pytest.mark.parametrize(
    "values, status",
    [([1.0, 1.0, 1.0], Constancy.NONZERO), ([0.0, 1e-9, -1e-9], Constancy.ZERO), ([0.0, 1.0], Constancy.VARYING)],
)
def test_constancy(values, status):
    assert constancy(values, 1e-6)[0] is status


class TestClassify:
    def test_example1_metric(self):
        rep = classify(ex1_curve(), F("x1*x2"))
        assert rep.is_null and rep.is_pseudo_arc and rep.is_cartan and rep.is_eikonal
        assert rep.helix.status is Constancy.VARYING and not rep.helix.verdict
        t = rep.profiles["t"]
        assert np.max(np.abs(rep.profiles["g_grad_xi"] - np.cosh(2 * t) / 2)) <= 1e-8
        assert any("gradient convention" in w for w in rep.warnings)
        assert rep.alternate["helix"].status is Constancy.NONZERO

    def test_example1_partials_tuple(self):
        rep = classify(ex1_curve(), F("x1*x2"), convention=PARTIALS_TUPLE)
        assert rep.helix.verdict
        assert np.max(np.abs(rep.profiles["g_grad_xi"] + 0.5)) <= 1e-10

    def test_example2_slant(self):
        rep = classify(ex2_curve(), F("x4"))
        assert rep.slant.verdict and abs(rep.slant.c - 1) <= 1e-12
        assert abs(rep.eikonal.norm_value - 1) <= 1e-12
        assert not rep.helix.verdict and rep.hessian_zero
        assert not rep.consistency_violation

    def test_helix_witness(self):
        curve = ex2_curve()
        rep = classify(curve, F("x1 - x4"))
        assert rep.helix.verdict and abs(rep.helix.c + 1) <= 1e-10
        assert not rep.slant.verdict and rep.slant.status is Constancy.ZERO
        assert any("null" in w for w in rep.warnings)
        t1 = theorem1_check(curve, F("x1 - x4"))
        assert t1.linear_along and t1.equivalence_holds
        np.testing.assert_allclose(t1.derivative_profile, -1, atol=1e-12)

    def test_theorem1_nonlinear(self):
        t1 = theorem1_check(ex1_curve(), F("x1*x2"))
        assert not t1.linear_along and not t1.helix_constant and t1.equivalence_holds

    def test_synthetic_axis_field(self, synthetic):
        # the linear field whose metric gradient is the helix axis
        v = helix_axis(synthetic, 1.0).axis_samples[0]
        a = raise_index(v)
        field = F(" + ".join(f"({float(x)!r})*x{i + 1}" for i, x in enumerate(a)))
        np.testing.assert_allclose(gradient(field, np.zeros(4)), v, atol=1e-15)
        rep = classify(synthetic, field)
        assert rep.helix.verdict and rep.helix.c == pytest.approx(1.0, abs=1e-6)
        assert not rep.slant.verdict and not rep.consistency_violation


class TestTheorem2:
    def test_synthetic(self, synthetic):
        res = theorem2_condition(synthetic)
        assert res.holds and res.max_residual <= 1e-6 and res.sigma1_nonconstant
        ax = helix_axis(synthetic, 1.0)
        assert ax.drift <= 1e-5 and ax.g_axis_xi_spread <= 1e-5
        np.testing.assert_allclose(ax.g_axis_xi, 1.0, atol=1e-5)
        assert helix_axis(synthetic, 1.0, phi_offset=1.0).drift >= 0.5

    def test_example1_fails(self):
        # sigma1 = 0, sigma2 = 1 gives residual -1 everywhere
        res = theorem2_condition(ex1_curve(n=21))
        assert not res.holds and res.max_residual == pytest.approx(1.0, abs=1e-10)

    def test_degenerate(self):
        with pytest.raises(CurvatureDegenerate):
            theorem2_condition(ex2_curve(n=11))

    def test_zero_c(self, synthetic):
        with pytest.raises(PreconditionError):
            helix_axis(synthetic, 0.0)


class TestTheorem3:
    def test_example1(self):
        for r in theorem3_profile(ex1_curve(n=21)):
            assert abs(abs(r.det_numeric) - 1) <= 1e-8 and r.match

    def test_example2(self):
        for r in theorem3_profile(ex2_curve(n=21)):
            assert abs(r.det_numeric) <= 1e-10 and abs(r.det_formula) <= 1e-10

    def test_random_paths(self):
        for curve in random_null_paths(count=5, seed=99, sample_count=5):
            for t in curve.grid():
                r = theorem3_det(curve, t)
                assert abs(abs(r.det_numeric) - abs(r.det_formula)) <= 1e-5 * max(abs(r.det_formula), 1e-3)
                # the sign is carried by the frame orientation
                assert np.sign(r.det_numeric) == np.sign(r.det_formula * r.orientation) or abs(r.det_formula) < 1e-8


class TestTheorem4:
    def test_example2(self):
        res = theorem4_residuals(ex2_curve(), F("x4"))
        assert max(res.residuals.values()) <= 1e-8
        assert res.c_status is Constancy.NONZERO and not res.warnings

    def test_zero_slant_constant_warns(self):
        res = theorem4_residuals(ex2_curve(), F("x1 - x4"))
        assert res.c_status is Constancy.ZERO and res.warnings

    def test_curved_field(self):
        with pytest.raises(HessianNotZero):
            theorem4_residuals(ex1_curve(n=11), F("x1*x2"))

    def test_grid_derivative_exact_on_quartics(self):
        t = np.linspace(-1, 2, 31)
        np.testing.assert_allclose(grid_derivative(t**4 - t, t), 4 * t**3 - 1, atol=1e-11)


class TestCorollary3:
    def test_example3(self):
        params = Corollary3Params(c=1, k=-1, m=0, n=0)
        for s in frame_path(ex2_curve()):
            np.testing.assert_allclose(corollary3_axis(params, s), [0, 0, 0, 1], atol=1e-12)

    def test_fit_recovers_gradient(self):
        path = frame_path(ex2_curve(n=21))
        params = fit_corollary3_params(path, F("x4"))
        assert (params.c, params.m, params.n, params.k) == pytest.approx((1, 0, 0, -1), abs=1e-12)

    def test_curved(self):
        s = frame_path(ex1_curve(n=3)).samples[0]
        with pytest.raises(CurvatureNotZero):
            corollary3_axis(Corollary3Params(c=1), s)

    def test_zero_c(self):
        with pytest.raises(PreconditionError):
            Corollary3Params(c=0)
