import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from kramers.quadrature import (
    BudgetExhaustedError,
    NonFiniteIntegrandError,
    QuadratureSpec,
    TailEstimateDominatesError,
    integrate_gaussian_weighted,
    integrate_spectral,
)

SQPI = math.sqrt(math.pi)
SPEC = QuadratureSpec()


class TestSpecValidation:
    def test_defaults_valid(self):
        assert SPEC.rel_tol == 1e-10
        assert SPEC.max_subdivisions == 200

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"rel_tol": 0.0},
            {"abs_tol": -1e-3},
            {"t_max": 0.0},
            {"k_max": -1.0},
            {"max_subdivisions": 0},
            {"t_max": 3.0},  # exp(-9) >> abs_tol
        ],
    )
    def test_invariants_rejected(self, kwargs):
        with pytest.raises(ValueError):
            QuadratureSpec(**kwargs)

    def test_weight_truncation_invariant(self):
        assert math.exp(-SPEC.t_max**2) < SPEC.abs_tol


class TestGaussianWeighted:
    def test_constant_moment(self):
        assert integrate_gaussian_weighted(lambda t: 1.0, SPEC) == pytest.approx(
            SQPI / 2.0, abs=1e-12
        )

    def test_first_moment(self):
        assert integrate_gaussian_weighted(lambda t: t, SPEC) == pytest.approx(
            0.5, abs=1e-12
        )

    def test_second_moment(self):
        assert integrate_gaussian_weighted(lambda t: t * t, SPEC) == pytest.approx(
            SQPI / 4.0, abs=1e-12
        )

    def test_scalar_only_callable(self):
        # a callable that rejects arrays must still work
        def f(t):
            return math.cos(float(t))

        vectorised = integrate_gaussian_weighted(lambda t: np.cos(t), SPEC)
        assert integrate_gaussian_weighted(f, SPEC) == pytest.approx(
            vectorised, abs=1e-13
        )

    def test_deterministic(self):
        def f(t):
            return t**2 / (1.0 + 4.0 * t**2)

        assert integrate_gaussian_weighted(f, SPEC) == integrate_gaussian_weighted(
            f, SPEC
        )

    def test_non_finite_integrand(self):
        def f(t):
            return np.where(np.asarray(t) > 0.5, np.nan, 1.0)

        with pytest.raises(NonFiniteIntegrandError):
            integrate_gaussian_weighted(f, SPEC, label="bad integrand")

    def test_budget_exhausted_names_label(self):
        tight = QuadratureSpec(max_subdivisions=5)

        def spiky(t):
            return 1.0 / (1e-10 + (np.asarray(t) - 1.1) ** 2)

        with pytest.raises(BudgetExhaustedError) as err:
            integrate_gaussian_weighted(spiky, tight, label="spiky one")
        assert "spiky one" in str(err.value)

    def test_halving_rel_tol_stable(self):
        loose = QuadratureSpec(rel_tol=1e-6)
        tight = QuadratureSpec(rel_tol=5e-7)

        def f(t):
            return t**2 / (1.0 + 2500.0 * t**2)

        a = integrate_gaussian_weighted(f, loose)
        b = integrate_gaussian_weighted(f, tight)
        assert abs(a - b) <= loose.rel_tol * abs(a) + loose.abs_tol

    def test_doubling_t_max_invariant(self):
        wide = QuadratureSpec(t_max=16.0)
        a = integrate_gaussian_weighted(lambda t: np.cos(t), SPEC)
        b = integrate_gaussian_weighted(lambda t: np.cos(t), wide)
        assert a == pytest.approx(b, abs=1e-12)

    @settings(max_examples=20, deadline=None)
    @given(
        coeffs_f=st.tuples(*[st.floats(-2, 2) for _ in range(3)]),
        coeffs_g=st.tuples(*[st.floats(-2, 2) for _ in range(3)]),
        a=st.floats(-3, 3),
        b=st.floats(-3, 3),
    )
    def test_linearity(self, coeffs_f, coeffs_g, a, b):
        def f(t):
            return coeffs_f[0] + coeffs_f[1] * t + coeffs_f[2] * t**2

        def g(t):
            return coeffs_g[0] + coeffs_g[1] * np.sin(t) + coeffs_g[2] * t**2

        combined = integrate_gaussian_weighted(
            lambda t: a * f(t) + b * g(t), SPEC
        )
        split = a * integrate_gaussian_weighted(f, SPEC) + b * integrate_gaussian_weighted(
            g, SPEC
        )
        tol = 2.0 * (SPEC.rel_tol * max(abs(combined), 1.0) + SPEC.abs_tol)
        assert abs(combined - split) <= tol + 1e-13


class TestSpectral:
    def test_lorentzian(self):
        value = integrate_spectral(
            lambda k: 1.0 / (1.0 + np.asarray(k) ** 2), SPEC, tail_exponent=2
        )
        assert value == pytest.approx(math.pi / 2.0, abs=1e-6)

    def test_exponential(self):
        value = integrate_spectral(
            lambda k: np.exp(-np.asarray(k)), SPEC, tail_exponent=2
        )
        assert value == pytest.approx(1.0, abs=1e-10)

    def test_t2_against_nested_brute_force(self):
        """Spectral integral of T_2 vs a from-scratch 2-D quadrature."""
        from kramers.special_integrals import t_n_vec

        def t2_scipy(k):
            val, _ = quad(
                lambda t: math.exp(-t * t) * t * t / (1.0 + k * k * t * t),
                0.0, 8.0, epsabs=1e-14, epsrel=1e-12, limit=200,
            )
            return 2.0 / SQPI * val

        head, _ = quad(t2_scipy, 0.0, 3000.0, epsabs=1e-10, epsrel=1e-9,
                       limit=500)
        brute = head + t2_scipy(3000.0) * 3000.0  # pure 1/k^2 tail closure
        value = integrate_spectral(
            lambda k: t_n_vec(2, k, SPEC), SPEC, tail_exponent=2
        )
        assert value == pytest.approx(brute, abs=5e-6)
        # the analytic value of this particular integral is sqrt(pi)/2
        assert value == pytest.approx(SQPI / 2.0, abs=1e-5)

    def test_doubling_k_max_invariant(self):
        wide = QuadratureSpec(k_max=1600.0)

        def f(k):
            return 1.0 / (1.0 + np.asarray(k) ** 2) ** 1.5

        a = integrate_spectral(f, SPEC, tail_exponent=3)
        b = integrate_spectral(f, wide, tail_exponent=3)
        assert a == pytest.approx(b, abs=1e-9)

    def test_tail_exponent_validated(self):
        with pytest.raises(ValueError):
            integrate_spectral(lambda k: 1.0 / (1.0 + k * k), SPEC, tail_exponent=1)

    def test_tail_dominates(self):
        small = QuadratureSpec(k_max=5.0)
        with pytest.raises(TailEstimateDominatesError) as err:
            integrate_spectral(
                lambda k: 1.0 / (1.0 + np.asarray(k) ** 2),
                small, tail_exponent=2, label="wide lorentzian",
            )
        assert "wide lorentzian" in str(err.value)
