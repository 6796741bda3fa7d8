import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nullhelix import expr as ex
from nullhelix.errors import DomainError, ExprSyntaxError, UnknownIdentifier


class TestParse:
    @pytest.mark.parametrize(
        "text, t, expected",
        [
            ("-sinh(t)/sqrt(2)", 0.3, -math.sinh(0.3) / math.sqrt(2)),
            ("-(t^3/6 + t)", 2.0, -(8 / 6 + 2)),
            ("2^3^2", 0.0, 2.0**9),
            ("-t^2", 3.0, -9.0),
            ("pi*t", 1.0, math.pi),
            ("1.5e-1 + t", 0.0, 0.15),
            ("cos(t)^2 + sin(t)^2", 0.7, 1.0),
        ],
    )
    def test_values(self, text, t, expected):
        node = ex.parse_curve_component(text)
        assert ex.evaluate(node, {"t": t}) == pytest.approx(expected, rel=1e-15)

    def test_field_variables(self):
        node = ex.parse_field("x1*x2 - x4")
        assert ex.free_variables(node) == {"x1", "x2", "x4"}

    @pytest.mark.parametrize("text", ["", "t +", "(t", "t)", "sin t", "2 ** t", "t^t"])
    def test_syntax_errors(self, text):
        with pytest.raises(ExprSyntaxError):
            ex.parse_curve_component(text)

    def test_error_position(self):
        with pytest.raises(ExprSyntaxError) as info:
            ex.parse_curve_component("t + * 2")
        assert info.value.position == 4

    @pytest.mark.parametrize("text", ["x1 + t", "tan(t)", "y"])
    def test_unknown_identifier(self, text):
        with pytest.raises(UnknownIdentifier):
            ex.parse_curve_component(text)

    def test_curve_variable_in_field(self):
        with pytest.raises(UnknownIdentifier):
            ex.parse_field("t*x1")


class TestDomain:
    @pytest.mark.parametrize("text, t", [("sqrt(t)", -1.0), ("1/t", 0.0), ("t^0.5", -2.0), ("exp(t)", 1e4)])
    def test_float_domain(self, text, t):
        with pytest.raises(DomainError):
            ex.evaluate(ex.parse_curve_component(text), {"t": t})

    def test_compiled_matches_tree(self):
        node = ex.parse_curve_component("sqrt(1 + t^2) / cosh(t) - 3*t")
        f = ex.compile_float(node)
        for t in np.linspace(-2, 2, 9):
            assert f(t) == ex.evaluate(node, {"t": t})
        with pytest.raises(DomainError):
            ex.compile_float(ex.parse_curve_component("1/t"))(0.0)


# random expression trees --------------------------------------------------

leaves = st.one_of(
    st.just("t"),
    st.floats(min_value=0.1, max_value=3, allow_nan=False).map(lambda v: f"{v:.3f}"),
)


def _combine(children):
    unary = st.tuples(st.sampled_from(["sin", "cos", "sinh", "cosh", "exp"]), children).map(lambda p: f"{p[0]}({p[1]})")
    binary = st.tuples(children, st.sampled_from(["+", "-", "*"]), children).map(lambda p: f"({p[0]} {p[1]} {p[2]})")
    power = st.tuples(children, st.integers(2, 3)).map(lambda p: f"({p[0]})^{p[1]}")
    neg = children.map(lambda c: f"-({c})")
    return st.one_of(unary, binary, power, neg)


texts = st.recursive(leaves, _combine, max_leaves=6)


@given(text=texts)
def test_round_trip(text):
    node = ex.parse_curve_component(text)
    assert ex.parse_curve_component(ex.to_text(node)) == node


def _mp_eval(node, t):
    """High-precision evaluation used as the finite-difference oracle."""
    if isinstance(node, ex.Num):
        return mpmath.mpf(node.value)
    if isinstance(node, ex.Var):
        return t
    if isinstance(node, ex.Neg):
        return -_mp_eval(node.operand, t)
    if isinstance(node, ex.Call):
        return getattr(mpmath, node.func)(_mp_eval(node.arg, t))
    if isinstance(node, ex.Pow):
        return _mp_eval(node.base, t) ** _mp_eval(node.exponent, t)
    a, b = _mp_eval(node.left, t), _mp_eval(node.right, t)
    if node.op == "/":
        return a / b
    return {"+": a + b, "-": a - b, "*": a * b}[node.op]


@settings(max_examples=40, deadline=None)
@given(text=texts, t0=st.floats(min_value=-1, max_value=1))
def test_jet_matches_finite_differences(text, t0):
    node = ex.parse_curve_component(text)
    jet = ex.eval_jet(node, t0, 3).derivatives()
    h = mpmath.mpf("1e-4")
    with mpmath.workdps(60):
        tt = mpmath.mpf(t0)
        f = {k: _mp_eval(node, tt + k * h) for k in (-2, -1, 0, 1, 2)}
        fd = [
            f[0],
            (f[1] - f[-1]) / (2 * h),
            (f[1] - 2 * f[0] + f[-1]) / h**2,
            (f[2] - 2 * f[1] + 2 * f[-1] - f[-2]) / (2 * h**3),
        ]
    for k in range(4):
        ref = float(fd[k])
        scale = max(abs(ref), 1.0)
        assert abs(jet[k] - ref) <= 1e-6 * scale, (k, jet[k], ref)


class TestField:
    def test_x1x2(self):
        probe = ex.eval_field(ex.parse_field("x1*x2"), [3.0, 5.0, 0.0, 0.0])
        assert probe.value == 15
        np.testing.assert_array_equal(probe.partials, [5, 3, 0, 0])
        expected = np.zeros((4, 4))
        expected[0, 1] = expected[1, 0] = 1
        np.testing.assert_array_equal(probe.second_partials, expected)

    def test_x1x2_against_differences(self):
        node = ex.parse_field("x1*x2")
        p = np.array([0.3, -1.2, 0.5, 2.0])
        h = 1e-5
        probe = ex.eval_field(node, p)
        for i in range(4):
            e = np.eye(4)[i] * h
            fd = (ex.evaluate(node, _env(p + e)) - ex.evaluate(node, _env(p - e))) / (2 * h)
            assert probe.partials[i] == pytest.approx(fd, abs=1e-9)

    def test_directional_derivatives(self):
        node = ex.parse_field("sin(x2)*x3 + exp(x4/3) - x1^2*x4")
        rng = np.random.default_rng(7)
        p = rng.normal(size=4)
        probe = ex.eval_field(node, p)
        h = 1e-4
        for _ in range(20):
            d = rng.normal(size=4)
            fp, f0, fm = (ex.evaluate(node, _env(p + s * h * d)) for s in (1, 0, -1))
            assert probe.partials @ d == pytest.approx((fp - fm) / (2 * h), abs=1e-7)
            assert d @ probe.second_partials @ d == pytest.approx((fp - 2 * f0 + fm) / h**2, abs=1e-5)

    def test_hessian_symmetric(self):
        probe = ex.eval_field(ex.parse_field("x1*x2*x3 + cosh(x1 - x4)"), [0.1, 0.2, 0.3, 0.4])
        np.testing.assert_array_equal(probe.second_partials, probe.second_partials.T)

    def test_compose_jet(self):
        A = ex.Jet.stack([ex.eval_jet(ex.parse_curve_component(s), 0.4, 3) for s in ("t", "t^2", "0", "sin(t)")])
        comp = ex.compose_jet(ex.parse_field("x1*x2 + x4"), A)
        t = 0.4
        assert comp.derivatives()[1] == pytest.approx(3 * t**2 + math.cos(t), rel=1e-14)


def _env(p):
    return {f"x{i + 1}": float(v) for i, v in enumerate(p)}
