import math

import numpy as np
import pytest

from nullhelix.errors import DomainError
from nullhelix.jet import Jet, fit_jet


def t_jet(t0, order=6):
    return Jet.variable(t0, order)


@pytest.mark.parametrize("name", ["sin", "cos", "sinh", "cosh", "exp"])
def test_maclaurin(name):
    c = getattr(t_jet(0.0, 7), name)().coeffs
    derivs = {
        "sin": [0, 1, 0, -1, 0, 1, 0, -1],
        "cos": [1, 0, -1, 0, 1, 0, -1, 0],
        "sinh": [0, 1, 0, 1, 0, 1, 0, 1],
        "cosh": [1, 0, 1, 0, 1, 0, 1, 0],
        "exp": [1] * 8,
    }[name]
    np.testing.assert_allclose(c, [d / math.factorial(k) for k, d in enumerate(derivs)], atol=1e-16)


def test_product_is_cauchy():
    rng = np.random.default_rng(1)
    a, b = rng.normal(size=6), rng.normal(size=6)
    np.testing.assert_allclose((Jet(a) * Jet(b)).coeffs, np.convolve(a, b)[:6], rtol=1e-14)


def test_division_inverts_product():
    rng = np.random.default_rng(2)
    a = Jet(rng.normal(size=6))
    b = Jet(np.r_[2.0, rng.normal(size=5)])
    np.testing.assert_allclose(((a * b) / b).coeffs, a.coeffs, atol=1e-13)


def test_real_power_matches_series():
    # (1 + t)^(1/2) = sum binom(1/2, k) t^k
    c = (1.0 + t_jet(0.0)) ** 0.5
    binom = [1.0]
    for k in range(1, 7):
        binom.append(binom[-1] * (0.5 - k + 1) / k)
    np.testing.assert_allclose(c.coeffs, binom, rtol=1e-14)


def test_negative_integer_power():
    np.testing.assert_allclose((t_jet(2.0) ** -1).coeffs, [(-1) ** k / 2 ** (k + 1) for k in range(7)], rtol=1e-14)


def test_vector_broadcasting():
    t = t_jet(0.5)
    v = Jet.stack([t, t * t, t.sin(), 1.0 + 0 * t])
    w = v * t
    np.testing.assert_allclose(w[1].coeffs, (t * t * t).coeffs)


def test_domain_errors():
    with pytest.raises(DomainError):
        1.0 / t_jet(0.0)
    with pytest.raises(DomainError):
        t_jet(-1.0).sqrt()
    with pytest.raises(DomainError):
        t_jet(-1.0) ** 1.5


def test_derivatives_and_differentiate():
    j = t_jet(1.0) ** 3
    np.testing.assert_allclose(j.derivatives()[:4], [1, 3, 6, 6])
    np.testing.assert_allclose(j.derivative(2).derivatives()[:2], [6, 6])


def test_fit_jet_recovers_polynomial():
    ts = np.linspace(-1, 1, 101)
    vals = 1 + 2 * ts - ts**3
    j = fit_jet(ts, vals, 0.2, 3)
    np.testing.assert_allclose(j.derivatives(), [1 + 0.4 - 0.008, 2 - 3 * 0.04, -6 * 0.2, -6], atol=1e-10)
