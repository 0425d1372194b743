import numpy as np
import pytest

import greymatch as gm
from greymatch import basis
from greymatch.errors import AlignmentError, UnsupportedForcingError


class TestEvaluate:
    def test_zero_spec_has_no_columns(self):
        grid = gm.TimeGrid(np.arange(4.0))
        sample = gm.evaluate_forcing(gm.ZeroForcing(), grid)
        assert sample.values.shape == (4, 0)
        assert sample.antiderivatives.shape == (4, 0)

    def test_polynomial_monomials(self):
        spec = gm.PolynomialForcing(2)
        assert np.allclose(spec.values(np.array([3.0])), [[3.0, 9.0]])

    def test_polynomial_rejects_degree_zero(self):
        with pytest.raises(ValueError):
            gm.PolynomialForcing(0)

    def test_fourier_values(self):
        spec = gm.FourierForcing(pairs=1, frequency=0.25)
        # at t=1: (sin(pi/2), cos(pi/2))
        assert np.allclose(spec.values(np.array([1.0])), [[1.0, 0.0]], atol=1e-15)

    def test_fourier_derivatives(self):
        spec = gm.FourierForcing(pairs=1, frequency=0.25)
        got = spec.derivatives(np.array([0.0]))
        assert np.allclose(got, [[np.pi / 2, 0.0]], atol=1e-15)

    def test_polynomial_derivatives(self):
        spec = gm.PolynomialForcing(2)
        assert np.allclose(spec.derivatives(np.array([3.0])), [[1.0, 6.0]])

    def test_zero_derivative_empty(self):
        grid = gm.TimeGrid(np.arange(4.0))
        assert gm.forcing_derivative(gm.ZeroForcing(), grid).shape == (4, 0)


class TestAntiderivatives:
    @pytest.mark.parametrize("spec", [
        gm.PolynomialForcing(3),
        gm.FourierForcing(pairs=2, frequency=0.3),
        basis.MixedForcing((gm.PolynomialForcing(1),
                            gm.FourierForcing(pairs=1, frequency=0.5))),
    ])
    def test_difference_quotients_approximate_midpoint_values(self, spec):
        h = 1e-4
        t = np.array([1.0, 1.0 + h])
        U = spec.antiderivatives(t)
        mid = spec.values(np.array([1.0 + h / 2]))[0]
        quotient = (U[1] - U[0]) / h
        assert np.abs(quotient - mid).max() < 1e-7  # O(h^2)

    def test_columns_linearly_independent(self):
        rng = np.random.default_rng(6)
        t = np.sort(rng.uniform(0.2, 9.0, size=12))
        for spec in (gm.PolynomialForcing(3),
                     gm.FourierForcing(pairs=2, frequency=0.17)):
            cols = spec.values(t)
            assert np.linalg.matrix_rank(cols) == spec.dimension


class TestExogenous:
    def make_spec(self):
        t = np.arange(0.0, 5.0, 0.5)
        return gm.ExogenousForcing(gm.make_series(t, np.sin(t)))

    def test_values_on_aligned_grid(self):
        spec = self.make_spec()
        got = spec.values(np.array([0.5, 1.0]))
        assert np.allclose(got[:, 0], np.sin([0.5, 1.0]))

    def test_misaligned_grid_rejected(self):
        spec = self.make_spec()
        with pytest.raises(AlignmentError):
            spec.values(np.array([0.25]))

    def test_antiderivative_matches_trapezoid(self):
        spec = self.make_spec()
        t = np.arange(0.0, 5.0, 0.5)
        U = spec.antiderivatives(t)
        manual = gm.integrate_piecewise_linear(gm.make_series(t, np.sin(t))).values
        assert np.allclose(U, manual)

    def test_derivative_unsupported(self):
        spec = self.make_spec()
        with pytest.raises(UnsupportedForcingError):
            spec.derivatives(np.array([1.0]))

    def test_callable_interpolates(self):
        spec = self.make_spec()
        f = basis.forcing_callable(spec)
        # halfway between samples 0.5 and 1.0
        assert f(0.75)[0] == pytest.approx((np.sin(0.5) + np.sin(1.0)) / 2)
        with pytest.raises(AlignmentError):
            f(99.0)


class TestPolynomialCoefficients:
    def test_grey_style_assembly(self):
        spec = gm.PolynomialForcing(2)
        B = np.array([[0.5, 0.25]])
        c = np.array([2.0])
        coeffs = basis.forcing_polynomial_coefficients(spec, B, c)
        assert np.allclose(coeffs, [[2.0, 0.5, 0.25]])

    def test_zero_spec_with_constant(self):
        coeffs = basis.forcing_polynomial_coefficients(
            gm.ZeroForcing(), np.zeros((2, 0)), np.array([1.0, -1.0]))
        assert np.allclose(coeffs, [[1.0], [-1.0]])

    def test_homogeneous_case(self):
        coeffs = basis.forcing_polynomial_coefficients(
            gm.ZeroForcing(), np.zeros((2, 0)), None)
        assert coeffs.shape[1] == 0

    def test_fourier_not_polynomial(self):
        spec = gm.FourierForcing(pairs=1, frequency=1.0)
        assert basis.forcing_polynomial_coefficients(spec, np.ones((1, 2)),
                                                     np.ones(1)) is None

    def test_derivative_monomials(self):
        spec = gm.PolynomialForcing(3)
        dmono = basis.derivative_monomial_matrix(spec)
        # d/dt (t, t^2, t^3) = (1, 2t, 3t^2)
        assert np.allclose(dmono, [[1.0, 0.0, 0.0],
                                   [0.0, 2.0, 0.0],
                                   [0.0, 0.0, 3.0]])


class TestConfigRoundTrip:
    @pytest.mark.parametrize("spec", [
        gm.ZeroForcing(),
        gm.PolynomialForcing(3),
        gm.FourierForcing(pairs=2, frequency=0.25),
        basis.MixedForcing((gm.PolynomialForcing(1), gm.ZeroForcing())),
    ])
    def test_round_trip(self, spec):
        assert gm.spec_from_config(gm.spec_to_config(spec)) == spec

    def test_exogenous_round_trip(self):
        spec = gm.ExogenousForcing(gm.make_series([0.0, 1.0], [2.0, 3.0]))
        back = gm.spec_from_config(gm.spec_to_config(spec))
        assert np.array_equal(back.series.values, spec.series.values)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            gm.spec_from_config({"kind": "spline"})
