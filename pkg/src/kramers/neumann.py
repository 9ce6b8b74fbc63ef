"""Neumann-series construction: coefficients U_n, densities E_n, assembly.

Each order couples one new slip coefficient to one new spectral density:
U_n is fixed by removing the second-order pole of E_n at k=0, after which

    E_n(k) = phi_n(k) / ((1 - gamma)^{n+1} T_2(k))

is finite everywhere.  The iterates phi_n come from repeated application of
the kernel operator to the seed phi_0.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .kernels import SpectralFunction, apply_kernel, standard_grid
from .quadrature import (
    DEFAULT_SPEC,
    QuadratureSpec,
    _integrate_spectral_detail,
    integrate_spectral,
)
from .special_integrals import MomentBatch, SQRT_PI, fixed_row, phi0_vec, t_n, t_n_vec

__all__ = ["SeriesExpansion", "u0", "u_coefficient", "e_n", "build_series",
           "pole_residual"]

#: the density-series convergence claim is only evidenced at small gamma;
#: values above this trigger a warning, values above 0.95 are rejected.
GAMMA_WARN = 0.5
GAMMA_MAX = 0.95
MAX_ORDER = 4


@dataclass(frozen=True)
class SeriesExpansion:
    """Ordered expansion coefficients with their spectral companions.

    ``u_coeffs[n]`` multiplies q^n in the slip series; ``phi_funcs[n]`` and
    ``e_funcs[n]`` are the matching iterate and pole-free density.
    ``diagnostics[n]`` records the quadrature error estimates accumulated
    while building order n.
    """

    gamma: float
    order: int
    u_coeffs: tuple[float, ...]
    phi_funcs: tuple[SpectralFunction, ...]
    e_funcs: tuple[SpectralFunction, ...]
    diagnostics: tuple[dict, ...]

    def __post_init__(self) -> None:
        if len(self.u_coeffs) != self.order + 1:
            raise ValueError("u_coeffs must hold orders 0..order")
        if self.u_coeffs[0] != u0():
            raise ValueError("u_coeffs[0] must be sqrt(pi)/2 exactly")


def u0() -> float:
    """Zero-order slip coefficient T_2(0)/T_1(0) = sqrt(pi)/2, closed form."""
    return SQRT_PI / 2.0


def _check_gamma(gamma: float) -> None:
    if gamma >= 1.0:
        raise ValueError("gamma must be < 1: every order divides by (1 - gamma)")
    if gamma < 0.0:
        raise ValueError("gamma must be >= 0")


def u_coefficient(
    n: int,
    gamma: float,
    phi_prev: SpectralFunction,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """Slip coefficient U_n from the pole-elimination integral.

    ``phi_prev`` is the previous-order iterate phi_{n-1} (the seed phi_0 for
    n=1): killing the constant term of the order-n density requires

        U_n = -(1-gamma)^{-n} (1/sqrt(pi))
              int J^(1)(0, k) phi_{n-1}(k) / T_2(k) dk.

    Computed from this closed form rather than by probing the k->0 limit,
    which would amplify quadrature noise by 1/k^2.
    """
    if n < 1:
        raise ValueError("u_coefficient is defined for n >= 1; use u0()")
    _check_gamma(gamma)

    def integrand(k):
        k = np.atleast_1d(np.asarray(k, dtype=float))
        batch = MomentBatch(k, spec)
        kernel_row = batch.t(1) + gamma * k**2 * batch.t(3)
        return kernel_row * phi_prev(k) / batch.t(2)

    integral = integrate_spectral(
        integrand, spec, tail_exponent=2,
        label=f"U_{n} pole-elimination integral",
    )
    return -integral / (SQRT_PI * (1.0 - gamma) ** n)


def e_n(
    n: int,
    gamma: float,
    phi_n: SpectralFunction,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> SpectralFunction:
    """Pole-free spectral density E_n = phi_n / ((1-gamma)^{n+1} T_2).

    Always evaluated through this quotient, never through the raw
    numerator / L(k) form whose k=0 limit is 0/0.  T_2(0) enters as the
    exact moment 1/2, so E_n(0) is finite by construction.
    """
    if n < 0:
        raise ValueError("order must be >= 0")
    _check_gamma(gamma)
    values = phi_n(phi_n.nodes) / (
        (1.0 - gamma) ** (n + 1) * t_n_vec(2, phi_n.nodes, spec)
    )
    return SpectralFunction(
        nodes=phi_n.nodes.copy(),
        values=values,
        tail_exponent=2,
        label=f"E_{n}",
    )


def build_series(
    gamma: float,
    order: int,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> SeriesExpansion:
    """Build U_0..U_order with their iterates and densities.

    Cost grows by one nesting level (one grid-sized factor of work) per
    order; orders beyond 4 are refused as outside the method's intended
    range.  The default order used by the CLI is 2.
    """
    if not (0 <= order <= MAX_ORDER):
        raise ValueError(f"order must be in [0, {MAX_ORDER}]")
    _check_gamma(gamma)
    if gamma > GAMMA_MAX:
        raise ValueError(
            f"gamma={gamma} outside the supported domain [0, {GAMMA_MAX}]"
        )
    if gamma > GAMMA_WARN:
        warnings.warn(
            f"gamma={gamma} > {GAMMA_WARN}: series convergence in q is only "
            "evidenced at small density parameters",
            stacklevel=2,
        )

    grid = standard_grid(spec)
    phi_funcs = [
        SpectralFunction(
            nodes=grid,
            values=phi0_vec(grid, spec),
            tail_exponent=4,
            label="phi_0",
        )
    ]
    u_coeffs = [u0()]
    diagnostics: list[dict] = [{"order": 0, "u_error": 0.0}]
    for n in range(1, order + 1):
        def integrand(k, phi=phi_funcs[-1]):
            k = np.atleast_1d(np.asarray(k, dtype=float))
            batch = MomentBatch(k, spec)
            kernel_row = batch.t(1) + gamma * k**2 * batch.t(3)
            return kernel_row * phi(k) / batch.t(2)

        integral, err, tail = _integrate_spectral_detail(
            integrand, spec, 2, f"U_{n} pole-elimination integral"
        )
        u_coeffs.append(float(-integral / (SQRT_PI * (1.0 - gamma) ** n)))
        phi_funcs.append(apply_kernel(phi_funcs[-1], gamma, spec))
        diagnostics.append(
            {
                "order": n,
                "u_error": err / (SQRT_PI * (1.0 - gamma) ** n),
                "u_tail": tail / (SQRT_PI * (1.0 - gamma) ** n),
            }
        )
    e_funcs = [e_n(n, gamma, phi_funcs[n], spec) for n in range(order + 1)]
    return SeriesExpansion(
        gamma=gamma,
        order=order,
        u_coeffs=tuple(u_coeffs),
        phi_funcs=tuple(phi_funcs),
        e_funcs=tuple(e_funcs),
        diagnostics=tuple(diagnostics),
    )


def pole_residual(
    series: SeriesExpansion,
    n: int,
    k: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """Numerator function B_n(k) whose k^2 vanishing certifies U_n.

    B_0(k) = U_0 T_1(k) - T_2(k); for n >= 1,

        B_n(k) = U_n T_1(k) + (1/pi) int J^(1)(k, k1) E_{n-1}(k1) dk1.

    With the correct U_n this scales as k^2 near zero (it equals
    -E_n(k) L(k)); a constant leftover means the pole survived.
    """
    if n == 0:
        return u0() * t_n(1, k, spec) - t_n(2, k, spec)
    if n > series.order:
        raise ValueError("series does not hold this order")
    phi_prev = series.phi_funcs[n - 1]
    scale = (1.0 - series.gamma) ** n

    def integrand(k1):
        # E_{n-1} through its pole-free quotient phi_{n-1}/T_2, the same
        # discretisation that fixed U_n; a resampled density interpolant
        # would leave a spurious k-independent floor under B_n.
        k1 = np.atleast_1d(np.asarray(k1, dtype=float))
        batch = MomentBatch(k1, spec)
        row = batch.against(fixed_row(1, k, spec))
        if series.gamma != 0.0:
            row = row + series.gamma * k1**2 * batch.against(fixed_row(3, k, spec))
        return row * phi_prev(k1) / (scale * batch.t(2))

    integral = integrate_spectral(
        integrand, spec, tail_exponent=2,
        label=f"B_{n} pole residual at k={k:.3g}",
    )
    return series.u_coeffs[n] * t_n(1, k, spec) + integral / math.pi
