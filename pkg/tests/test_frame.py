import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import EX2, ex1_curve, ex1_position, ex2_curve
from nullhelix.errors import BadInitialFrame, DegeneratePseudoArc, NotNull, NotPseudoArc, PreconditionError
from nullhelix.frame import (
    CartanFrameSample,
    CurveSpec,
    FramePath,
    SyntheticCurve,
    canonical_frame,
    cartan_frame_at,
    frame_from_jet,
    frame_path,
    frenet_residuals,
    integrate_frenet,
    reparametrize_pseudo_arc,
    verify_curve,
)
from nullhelix.jet import fit_jet
from nullhelix.minkowski import det4
from nullhelix.paper_suite import random_lorentz

coeff = st.floats(min_value=-1, max_value=1, allow_nan=False).map(lambda v: round(v, 6))
sigmas = st.one_of(
    st.tuples(coeff, coeff, coeff).map(lambda c: f"{c[0]!r} + {c[1]!r}*t + {c[2]!r}*t^2"),
    st.tuples(coeff, coeff, coeff).map(lambda c: f"{c[0]!r} + {c[1]!r}*sin({c[2] + 1.5!r}*t)"),
)


def lorentz_frame(seed, t0=0.0):
    L = random_lorentz(np.random.default_rng(seed))
    b = canonical_frame(t0)
    return CartanFrameSample(t=t0, xi=L @ b.xi, N=L @ b.N, W1=L @ b.W1, W2=L @ b.W2, sigma1=0.0, sigma2=0.0)


class TestVerify:
    def test_example1(self):
        vc = verify_curve(ex1_curve())
        assert vc.is_null and vc.is_pseudo_arc and vc.is_cartan
        assert vc.max_deviations["null"] <= 1e-10
        assert vc.max_deviations["pseudo_arc"] <= 1e-10

    def test_example2(self):
        vc = verify_curve(ex2_curve())
        assert vc.is_null and vc.is_pseudo_arc and vc.is_cartan

    def test_timelike_line(self):
        vc = verify_curve(CurveSpec.from_strings(["t", "0", "0", "0"], (0, 1), 5))
        assert not vc.is_null

    def test_doubled_speed(self):
        doubled = CurveSpec.from_strings([s.replace("t", "(2*t)") for s in EX2], (-0.5, 0.5), 21)
        vc = verify_curve(doubled)
        assert vc.is_null and not vc.is_pseudo_arc
        with pytest.raises(NotPseudoArc):
            cartan_frame_at(doubled, 0.1)


class TestReparametrize:
    def test_restores_pseudo_arc(self):
        doubled = CurveSpec.from_strings([s.replace("t", "(2*t)") for s in EX2], (-0.5, 0.5), 201)
        m = reparametrize_pseudo_arc(doubled)
        # ds/dt = 2, so s spans [0, 2]
        assert m.s[-1] == pytest.approx(2.0, abs=1e-12)
        for s in np.linspace(m.s[0], m.s[-1], 41):
            assert m.second_derivative_gram(s) == pytest.approx(1.0, abs=1e-6)

    def test_nonlinear_warp(self):
        # t -> t + t^3/3 has ds/dt = 1 + t^2, so s(t) = t + t^3/3 + const
        warped = CurveSpec.from_strings([s.replace("t", "(t + t^3/3)") for s in EX2], (-1, 1), 2001)
        m = reparametrize_pseudo_arc(warped)
        t = np.linspace(-1, 1, 2001)
        np.testing.assert_allclose(m.s, t + t**3 / 3 + 4 / 3, atol=1e-12)
        # the interpolated inverse limits d2t/ds2 to O(h^2)
        for s in np.linspace(m.s[0], m.s[-1], 41):
            assert m.second_derivative_gram(s) == pytest.approx(1.0, abs=1e-5)

    def test_non_null(self):
        with pytest.raises(NotNull):
            reparametrize_pseudo_arc(CurveSpec.from_strings(["t", "0", "0", "0"], (0, 1), 5))

    def test_null_line_has_no_pseudo_arc(self):
        with pytest.raises(DegeneratePseudoArc):
            reparametrize_pseudo_arc(CurveSpec.from_strings(["t", "t", "0", "0"], (0, 1), 5))


class TestExampleFrames:
    def test_example1(self):
        for t in np.linspace(-2, 2, 9):
            s = cartan_frame_at(ex1_curve(), t)
            np.testing.assert_allclose(s.W2, -ex1_position(t), atol=1e-12)
            assert s.sigma1 == pytest.approx(0.0, abs=1e-12)
            assert s.sigma2 == pytest.approx(1.0, abs=1e-12)
            assert s.orientation() == pytest.approx(-1.0, abs=1e-12)

    def test_example2(self):
        for s in frame_path(ex2_curve()):
            t = s.t
            np.testing.assert_allclose(s.xi, [-(t * t / 2 + 1), -t, -1, -t * t / 2], atol=1e-12)
            np.testing.assert_allclose(s.N, [1, 0, 0, 1], atol=1e-12)
            np.testing.assert_allclose(s.W1, [-t, -1, 0, -t], atol=1e-12)
            np.testing.assert_allclose(s.W2, [-1, 0, -1, -1], atol=1e-12)
            assert abs(s.sigma1) <= 1e-12 and abs(s.sigma2) <= 1e-12
            assert s.orientation() == pytest.approx(-1.0, abs=1e-12)

    @pytest.mark.parametrize("make", [ex1_curve, ex2_curve])
    def test_gram_and_frenet(self, make):
        curve = make()
        for t in curve.grid()[::10]:
            assert cartan_frame_at(curve, t).gram_deviation() <= 1e-9
            assert max(frenet_residuals(curve, t)) <= 1e-8

    def test_framepath_requires_increasing(self):
        s = canonical_frame(0.0)
        with pytest.raises(PreconditionError):
            FramePath([s, s])


class TestIntegrate:
    def test_flat_closed_form(self):
        init = lorentz_frame(3)
        grid = np.linspace(0, 2, 21)
        path = integrate_frenet("0", "0", init, grid)
        for s in path:
            expected = init.xi + s.t * init.W1 - 0.5 * s.t**2 * init.N
            np.testing.assert_allclose(s.xi, expected, atol=1e-10)

    def test_bad_initial_frame(self):
        b = canonical_frame()
        bad = CartanFrameSample(t=0.0, xi=b.xi, N=2 * b.N, W1=b.W1, W2=b.W2, sigma1=0.0, sigma2=0.0)
        with pytest.raises(BadInitialFrame):
            integrate_frenet("1", "1", bad, [0.0, 1.0])

    @settings(max_examples=15, deadline=None)
    @given(s1=sigmas, s2=sigmas, seed=st.integers(0, 2**31))
    def test_gram_drift_and_orientation(self, s1, s2, seed):
        init = lorentz_frame(seed)
        path = integrate_frenet(s1, s2, init, np.linspace(0, 1, 11))
        scale = max(1.0, float(np.max(np.abs(init.vectors()))) ** 2)
        d0 = det4(*init.vectors())
        for s in path:
            assert s.gram_deviation() <= 1e-9 * scale
            assert det4(*s.vectors()) == pytest.approx(d0, abs=1e-9 * scale**2)

    def test_synthetic_jets_recover_curvatures(self):
        curve = SyntheticCurve("t^2/2", "1 + 0.3*sin(t)", lorentz_frame(11), (0, 1), 11)
        for t, ref in zip(curve.grid(), curve.path):
            s = cartan_frame_at(curve, t)
            assert s.sigma1 == pytest.approx(t * t / 2, abs=1e-9)
            assert s.sigma2 == pytest.approx(1 + 0.3 * np.sin(t), abs=1e-9)
            # with sigma2 > 0 every frame vector is forced, so the integrated frame is recovered
            for a, b in zip(s.vectors(), ref.vectors()):
                np.testing.assert_allclose(a, b, atol=1e-9)

    def test_round_trip_from_positions(self):
        """Frame rebuilt from integrated positions alone recovers the curvatures."""
        curve = SyntheticCurve("t^2/2", "1", domain=(0, 2), sample_count=2001, step=1e-3)
        ts = curve.path.t
        P = curve.path.positions
        for t0 in (0.5, 1.0, 1.5):
            A = fit_jet(ts, P, t0, 6, degree=10, window=0.2)
            s = frame_from_jet(A, tol=1e-3)
            assert s.sigma1 == pytest.approx(t0 * t0 / 2, abs=1e-5)
            assert s.sigma2 == pytest.approx(1.0, abs=1e-5)
