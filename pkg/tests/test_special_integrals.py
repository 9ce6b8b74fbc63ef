import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kramers.quadrature import QuadratureSpec
from kramers.special_integrals import (
    GasParameters,
    MOMENTS,
    MomentBatch,
    dispersion_l,
    dispersion_l_vec,
    j_m,
    j_m_vec,
    j_n,
    j_n_vec,
    phi0,
    phi0_vec,
    t_moment,
    t_n,
    t_n_vec,
)

SQPI = math.sqrt(math.pi)
SPEC = QuadratureSpec()
K_GRID = np.concatenate([np.linspace(0.0, 2.0, 9), [3.0, 5.0, 8.0, 13.0, 21.0, 34.0, 55.0]])


class TestGasParameters:
    def test_valid(self):
        p = GasParameters(gamma=0.3, q=0.8, g_v=2.0)
        assert p.gamma == 0.3

    @pytest.mark.parametrize("gamma", [-0.1, 1.0, 1.5])
    def test_gamma_domain(self, gamma):
        with pytest.raises(ValueError):
            GasParameters(gamma=gamma, q=1.0)

    @pytest.mark.parametrize("q", [0.0, -0.2, 1.2])
    def test_q_domain(self, q):
        with pytest.raises(ValueError):
            GasParameters(gamma=0.0, q=q)

    def test_q_zero_message_names_expansion(self):
        with pytest.raises(ValueError, match="specular"):
            GasParameters(gamma=0.0, q=0.0)

    def test_gradient_finite(self):
        with pytest.raises(ValueError):
            GasParameters(gamma=0.0, q=1.0, g_v=math.inf)


class TestMoments:
    def test_table(self):
        assert MOMENTS[0] == pytest.approx(1.0, abs=0)
        assert MOMENTS[1] == pytest.approx(1.0 / SQPI, rel=1e-15)
        assert MOMENTS[2] == pytest.approx(0.5, rel=1e-15)
        assert MOMENTS[3] == pytest.approx(1.0 / SQPI, rel=1e-15)
        assert MOMENTS[4] == pytest.approx(0.75, rel=1e-15)
        assert MOMENTS[5] == pytest.approx(2.0 / SQPI, rel=1e-15)

    def test_t_moment_matches_quadrature(self):
        for n in range(7):
            from kramers.quadrature import integrate_gaussian_weighted

            direct = integrate_gaussian_weighted(
                lambda t, n=n: 2.0 / SQPI * np.asarray(t) ** n, SPEC
            )
            assert t_moment(n) == pytest.approx(direct, abs=1e-12)


class TestTn:
    def test_zero_wavenumber_exact(self):
        assert t_n(0, 0.0) == 1.0
        assert t_n(1, 0.0) == MOMENTS[1]
        assert t_n(2, 0.0) == 0.5
        assert t_n(4, 0.0) == 0.75

    def test_identity_at_unit_wavenumber(self):
        # both sides by independent quadratures of different integrands
        assert 1.0 - t_n(0, 1.0) == pytest.approx(t_n(2, 1.0), abs=1e-10)

    def test_recurrence_grid(self):
        for n in range(7):
            for k in K_GRID:
                assert t_n(n, k) + k * k * t_n(n + 2, k) == pytest.approx(
                    MOMENTS[n], abs=1e-10
                )

    def test_strictly_decreasing_in_k(self):
        for n in range(6):
            vals = [t_n(n, k) for k in K_GRID]
            assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_order_domain(self):
        with pytest.raises(ValueError):
            t_n(9, 1.0)
        with pytest.raises(ValueError):
            t_n(0, -1.0)

    @settings(max_examples=25, deadline=None)
    @given(n=st.integers(0, 6), k=st.floats(0.0, 120.0))
    def test_recurrence_property(self, n, k):
        assert t_n(n, k) + k * k * t_n(n + 2, k) == pytest.approx(
            MOMENTS[n], abs=1e-10
        )


class TestJn:
    def test_collapse_to_t(self):
        for k in (0.3, 1.0, 4.0):
            assert j_n(1, 0.0, k) == pytest.approx(t_n(1, k), abs=1e-12)
            assert j_n(1, k, 0.0) == pytest.approx(t_n(1, k), abs=1e-12)

    def test_symmetry_example(self):
        assert j_n(3, 0.7, 1.3) == pytest.approx(j_n(3, 1.3, 0.7), abs=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(
        n=st.sampled_from([1, 3, 5]),
        k=st.floats(0.0, 60.0),
        k1=st.floats(0.0, 60.0),
    )
    def test_symmetry_property(self, n, k, k1):
        assert j_n(n, k, k1) == pytest.approx(j_n(n, k1, k), abs=1e-10)


class TestJm:
    def test_gamma_zero_collapse(self):
        assert j_m(1, 0.7, 1.9, 0.0) == pytest.approx(j_n(1, 0.7, 1.9), abs=1e-13)

    def test_boundary_value(self):
        gamma, k1 = 0.35, 1.4
        expected = t_n(1, k1) + gamma * k1 * k1 * t_n(3, k1)
        assert j_m(1, 0.0, k1, gamma) == pytest.approx(expected, abs=1e-11)

    def test_decomposition_identity(self):
        direct = j_m(1, 0.5, 0.5, 0.1)
        split = j_n(1, 0.5, 0.5) + 0.1 * 0.25 * j_n(3, 0.5, 0.5)
        assert direct == pytest.approx(split, abs=1e-10)


class TestDispersion:
    def test_zero(self):
        assert dispersion_l(0.0, 0.3) == 0.0

    def test_limit_at_large_k(self):
        # approach to the limit goes like sqrt(pi)/k: 1e-3 needs k ~ 2000
        for gamma in (0.0, 0.4):
            assert dispersion_l(2000.0, gamma) == pytest.approx(
                1.0 - gamma, abs=1e-3
            )

    def test_limit_approach_rate(self):
        # k (1 - L/(1-gamma)) -> sqrt(pi)
        for k in (200.0, 500.0):
            rate = k * (1.0 - dispersion_l(k, 0.0))
            assert rate == pytest.approx(SQPI, rel=2e-2)

    def test_identity_three_forms(self):
        for gamma in (0.0, 0.25, 0.5):
            for k in K_GRID:
                alt = 1.0 - t_n(0, k) - gamma * k * k * t_n(2, k)
                assert dispersion_l(k, gamma) == pytest.approx(alt, abs=1e-10)

    def test_monotone_rising_curve(self):
        ks = np.arange(0.0, 10.01, 0.1)
        vals = [dispersion_l(k, 0.0) for k in ks]
        assert vals[0] == 0.0
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1.0


class TestPhi0:
    def test_value_at_zero(self):
        assert phi0(0.0) == pytest.approx(-0.25, abs=1e-12)

    def test_negative_and_shrinking(self):
        vals = [phi0(k) for k in K_GRID]
        assert all(v < 0.0 for v in vals)
        mags = [abs(v) for v in vals]
        assert all(a > b for a, b in zip(mags, mags[1:]))

    def test_vanishing_quadratic_tail(self):
        # k^2 phi0 -> 0: the 1/k^2 tail coefficient is zero, so the scaled
        # samples keep falling like ln(k)/k^2 over the fit window
        ks = np.array([20.0, 30.0, 50.0])
        scaled = np.array([abs(k * k * phi0(k)) for k in ks])
        assert scaled[0] > scaled[1] > scaled[2]
        exponent = np.polyfit(np.log(ks), np.log(scaled), 1)[0]
        assert exponent < -1.5
        assert scaled[-1] < 1.5e-3


class TestVectorisedAgainstScalar:
    """The graded-rule fast path must agree with the adaptive contract path."""

    def test_t_n(self):
        for n in range(9):
            vec = t_n_vec(n, K_GRID, SPEC)
            ref = np.array([t_n(n, k, SPEC) for k in K_GRID])
            np.testing.assert_allclose(vec, ref, atol=5e-12, rtol=5e-12)

    def test_j_n(self):
        k1 = np.array([0.0, 0.4, 1.7, 6.0, 30.0])
        for n in (1, 3, 5):
            for k in (0.0, 0.9, 12.0):
                vec = j_n_vec(n, k, k1, SPEC)
                ref = np.array([j_n(n, k, v, SPEC) for v in k1])
                np.testing.assert_allclose(vec, ref, atol=5e-12)

    def test_j_m(self):
        k1 = np.array([0.0, 0.8, 3.0])
        vec = j_m_vec(1, 0.6, k1, 0.3, SPEC)
        ref = np.array([j_m(1, 0.6, v, 0.3, SPEC) for v in k1])
        np.testing.assert_allclose(vec, ref, atol=5e-12)

    def test_phi0_and_dispersion(self):
        np.testing.assert_allclose(
            phi0_vec(K_GRID, SPEC),
            [phi0(k, SPEC) for k in K_GRID],
            atol=5e-12,
        )
        np.testing.assert_allclose(
            dispersion_l_vec(K_GRID, 0.2, SPEC),
            [dispersion_l(k, 0.2, SPEC) for k in K_GRID],
            atol=5e-12,
        )

    def test_moment_batch_consistency(self):
        batch = MomentBatch(K_GRID, SPEC)
        np.testing.assert_allclose(batch.t(2), t_n_vec(2, K_GRID, SPEC), rtol=0)
