import numpy as np
import pytest
from hypothesis import given, strategies as st

from layerbcd.activations import (apply, apply_and_derivative, check_assumption,
                                  derivative, identity, leaky_relu,
                                  parse_activation, relu)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


class TestApply:
    def test_leaky_relu(self):
        out = apply(leaky_relu(0.5), np.array([-2.0, 0.0, 3.0]))
        np.testing.assert_array_equal(out, [-1.0, 0.0, 3.0])

    def test_relu(self):
        np.testing.assert_array_equal(apply(relu(), np.array([-1.0, 2.0])), [0.0, 2.0])

    def test_identity(self):
        x = np.array([[-3.5, 0.0], [2.0, 7.0]])
        np.testing.assert_array_equal(apply(identity(), x), x)

    def test_zero_maps_to_zero_exactly(self):
        for spec in (leaky_relu(0.3), relu(), identity()):
            assert apply(spec, np.array([0.0]))[0] == 0.0


class TestDerivative:
    def test_leaky_relu(self):
        np.testing.assert_array_equal(
            derivative(leaky_relu(0.5), np.array([-2.0, 3.0])), [0.5, 1.0])

    def test_relu(self):
        np.testing.assert_array_equal(
            derivative(relu(), np.array([-2.0, 3.0])), [0.0, 1.0])

    def test_kink_resolves_to_one(self):
        assert derivative(leaky_relu(0.5), np.array([0.0]))[0] == 1.0
        assert derivative(relu(), np.array([0.0]))[0] == 1.0

    def test_values_within_slope_bounds(self):
        for spec in (leaky_relu(0.25), relu(), identity()):
            d = derivative(spec, np.linspace(-5, 5, 101))
            assert np.all(d >= spec.alpha) and np.all(d <= spec.ell)

    def test_fused_pair_matches_separate_calls(self):
        x = np.linspace(-3, 3, 37)
        for spec in (leaky_relu(0.5), relu(), identity()):
            s, d = apply_and_derivative(spec, x)
            np.testing.assert_array_equal(s, apply(spec, x))
            np.testing.assert_array_equal(d, derivative(spec, x))


class TestAssumptionCertificate:
    def test_leaky_relu_qualifies(self):
        assert check_assumption(leaky_relu(0.5)) == (True, 0.5, 1.0)

    def test_relu_fails(self):
        ok, alpha, _ = check_assumption(relu())
        assert not ok and alpha == 0.0

    def test_identity_qualifies(self):
        assert check_assumption(identity()) == (True, 1.0, 1.0)


class TestSecantBounds:
    @given(x1=finite, x2=finite)
    def test_leaky_secant_between_slope_bounds(self, x1, x2):
        if x1 <= x2:
            x1, x2 = x2, x1
        if x1 == x2:
            return
        spec = leaky_relu(0.5)
        diff = float(apply(spec, np.array([x1]))[0] - apply(spec, np.array([x2]))[0])
        gap = x1 - x2
        slack = 1e-12 * max(abs(x1), abs(x2), 1.0)
        assert spec.alpha * gap - slack <= diff <= spec.ell * gap + slack

    @given(x1=finite, x2=finite)
    def test_relu_secant_upper_bound(self, x1, x2):
        if x1 <= x2:
            x1, x2 = x2, x1
        spec = relu()
        diff = float(apply(spec, np.array([x1]))[0] - apply(spec, np.array([x2]))[0])
        assert 0.0 <= diff <= (x1 - x2) + 1e-12 * max(abs(x1), abs(x2), 1.0)


class TestParsing:
    def test_round_trip_tags(self):
        for tag in ("relu", "identity", "leaky_relu:0.5", "leaky_relu:0.25"):
            assert parse_activation(tag).tag == tag

    def test_unknown_tag(self):
        with pytest.raises(ValueError):
            parse_activation("sigmoid")

    def test_leaky_slope_range(self):
        with pytest.raises(ValueError):
            leaky_relu(1.5)
