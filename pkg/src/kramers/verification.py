"""Self-check suites behind the ``verify`` command.

Each check computes a measured deviation and compares it against a fixed
threshold; the CLI renders the results as a pass/fail table.  Groups:

* ``identities``  — moment recurrences, dispersion equivalence, kernel
  symmetry and collapse, dual-route kernel equality.
* ``constants``   — series coefficients against their reference values.
* ``pole``        — pole-elimination scaling of the order-n numerators.
* ``oracle``      — series path against the independent quadrature path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import neumann, oracle
from .kernels import s_kernel
from .quadrature import QuadratureSpec
from .special_integrals import MOMENTS, SQRT_PI, dispersion_l, j_m, j_n, t_n

__all__ = ["CheckResult", "run_checks", "GROUPS"]

GROUPS = ("identities", "constants", "pole", "oracle")

_K_GRID = np.concatenate([np.linspace(0.05, 2.0, 8), [3.0, 5.0, 10.0, 20.0]])


@dataclass(frozen=True)
class CheckResult:
    group: str
    name: str
    deviation: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.deviation <= self.threshold


def _identity_checks(spec: QuadratureSpec) -> list[CheckResult]:
    out = []
    dev = max(
        abs(t_n(n, k, spec) + k * k * t_n(n + 2, k, spec) - MOMENTS[n])
        for n in range(0, 7)
        for k in _K_GRID
    )
    out.append(CheckResult("identities", "T_n recurrence", dev, 1e-10))
    dev = max(
        abs(1.0 - t_n(0, k, spec) - k * k * t_n(2, k, spec)) for k in _K_GRID
    )
    out.append(CheckResult("identities", "1 - T_0 = k^2 T_2", dev, 1e-10))
    dev = max(
        abs(
            dispersion_l(k, g, spec)
            - (1.0 - t_n(0, k, spec) - g * k * k * t_n(2, k, spec))
        )
        for g in (0.0, 0.25, 0.5)
        for k in _K_GRID
    )
    out.append(CheckResult("identities", "L = 1 - T_0 - gamma k^2 T_2", dev, 1e-10))
    pairs = [(0.3, 1.1), (0.7, 1.3), (2.0, 5.0), (0.05, 9.0)]
    dev = max(
        abs(j_n(n, a, b, spec) - j_n(n, b, a, spec))
        for n in (1, 3, 5)
        for a, b in pairs
    )
    out.append(CheckResult("identities", "J_n symmetry", dev, 1e-10))
    dev = max(
        max(
            abs(j_n(n, k, 0.0, spec) - t_n(n, k, spec)),
            abs(j_n(n, 0.0, k, spec) - t_n(n, k, spec)),
        )
        for n in (1, 3, 5)
        for k in _K_GRID
    )
    out.append(CheckResult("identities", "J_n boundary collapse", dev, 1e-10))
    dev = 0.0
    for g in (0.0, 0.2, 0.5):
        for a, b in pairs:
            via_jm = j_m(3, a, b, g, spec) - SQRT_PI * t_n(3, a, spec) * j_m(
                1, 0.0, b, g, spec
            )
            dev = max(dev, abs(s_kernel(a, b, g, spec) - via_jm))
    out.append(CheckResult("identities", "S kernel dual route", dev, 1e-10))
    return out


def _constants_checks(spec: QuadratureSpec) -> list[CheckResult]:
    series = neumann.build_series(0.0, 2, spec)
    u_0, u_1, u_2 = series.u_coeffs
    return [
        CheckResult("constants", "U_0 = 0.8862", abs(u_0 - 0.8862269), 1e-4),
        CheckResult("constants", "U_1(0) = 0.1405", abs(u_1 - 0.1405), 5e-4),
        CheckResult("constants", "U_2(0) = -0.0116", abs(u_2 + 0.0116), 5e-4),
        CheckResult(
            "constants",
            "slip(q=1) = 1.0151",
            abs(u_0 + u_1 + u_2 - 1.0151),
            1e-3,
        ),
    ]


def _pole_checks(spec: QuadratureSpec) -> list[CheckResult]:
    out = []
    ks = np.array([1e-3, 2e-3, 4e-3])
    for gamma in (0.0, 0.25):
        series = neumann.build_series(gamma, 2, spec)
        for n in (0, 1, 2):
            b_vals = np.array(
                [abs(neumann.pole_residual(series, n, k, spec)) for k in ks]
            )
            slope = np.polyfit(np.log(ks), np.log(b_vals), 1)[0]
            out.append(
                CheckResult(
                    "pole",
                    f"B_{n} ~ k^2 at gamma={gamma}",
                    abs(slope - 2.0),
                    0.1,
                )
            )
    return out


def _oracle_checks(spec: QuadratureSpec) -> list[CheckResult]:
    out = []
    for gamma in (0.0, 0.25, 0.5):
        series = neumann.build_series(gamma, 1, spec)
        dev = abs(series.u_coeffs[1] - oracle.u1_direct(gamma, spec))
        out.append(
            CheckResult("oracle", f"U_1 cross-path at gamma={gamma}", dev, 1e-5)
        )
    j_values = oracle.j_constants(spec)
    out.append(
        CheckResult(
            "oracle", "J_0 = 0.0116", abs(j_values[0] - 0.0116), 5e-4
        )
    )
    out.append(
        CheckResult(
            "oracle", "J_1 = 0.0125", abs(j_values[1] - 0.0125), 5e-4
        )
    )
    out.append(
        CheckResult(
            "oracle",
            "J_2 = -(J_0 + J_1) kernel identity",
            abs(j_values[2] + j_values[0] + j_values[1]),
            1e-5,
        )
    )
    for gamma in (0.0, 0.25):
        series = neumann.build_series(gamma, 2, spec)
        dev = abs(
            series.u_coeffs[2] - oracle.u2_direct(gamma, spec, j_values=j_values)
        )
        out.append(
            CheckResult("oracle", f"U_2 cross-path at gamma={gamma}", dev, 1e-5)
        )
    return out


_RUNNERS = {
    "identities": _identity_checks,
    "constants": _constants_checks,
    "pole": _pole_checks,
    "oracle": _oracle_checks,
}


def run_checks(
    spec: QuadratureSpec, only: tuple[str, ...] | None = None
) -> list[CheckResult]:
    """Run the selected groups (all by default) and return their results."""
    groups = GROUPS if not only else only
    unknown = set(groups) - set(GROUPS)
    if unknown:
        raise ValueError(
            f"unknown check group(s) {sorted(unknown)}; choose from {GROUPS}"
        )
    results: list[CheckResult] = []
    for group in groups:
        results.extend(_RUNNERS[group](spec))
    return results
