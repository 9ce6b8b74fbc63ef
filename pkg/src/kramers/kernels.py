"""Iteration kernel S(k, k1) and the integral operator advancing phi_{n-1} -> phi_n.

The kernel combines the density-weighted moments with the subtraction that
removes the k=0 pole order by order:

    S(k, k1) = J^(3)(k, k1) - sqrt(pi) T_3(k) J^(1)(0, k1)
             = S_1(k, k1) + gamma k1^2 S_2(k, k1)
    S_1 = J_3 - sqrt(pi) T_3(k) T_1(k1)
    S_2 = J_5 - sqrt(pi) T_3(k) T_3(k1)

Applying the operator means sampling

    psi(k) = (1/pi) int_0^inf S(k, k1) phi(k1) / T_2(k1) dk1

on a fixed composite grid and interpolating between nodes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import BSpline, CubicSpline, make_interp_spline

from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_spectral
from .special_integrals import MomentBatch, SQRT_PI, fixed_row, j_n, t_n

__all__ = ["SpectralFunction", "standard_grid", "s_kernel", "apply_kernel"]


@dataclass(frozen=True)
class SpectralFunction:
    """A sampled, interpolable even function of k >= 0 with an algebraic tail.

    Evaluation between nodes is by a quintic spline whose odd derivatives
    are clamped to zero at k=0 (evenness forces a flat start); grids too
    short for a quintic fall back to a clamped cubic.  The quintic keeps
    the interpolation error of the standard grid near 1e-10 relative, which
    the refinement-stability contract of :func:`apply_kernel` needs.
    Beyond the last node the function follows C / k^tail_exponent anchored
    at the last sample.  Instances are immutable; the sample arrays are
    frozen on construction.
    """

    nodes: np.ndarray
    values: np.ndarray
    tail_exponent: int
    label: str
    _spline: BSpline = field(init=False, repr=False, compare=False)
    _tail_coeff: float = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if nodes.ndim != 1 or nodes.shape != values.shape:
            raise ValueError("nodes and values must be matching 1-d arrays")
        if nodes[0] != 0.0 or np.any(np.diff(nodes) <= 0.0):
            raise ValueError("nodes must start at 0 and increase strictly")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"{self.label}: non-finite sample values")
        if self.tail_exponent < 2:
            raise ValueError("tail_exponent must be >= 2")
        nodes.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)
        if len(nodes) >= 8:
            spline = make_interp_spline(
                nodes, values, k=5,
                bc_type=([(1, 0.0), (3, 0.0)], [(3, 0.0), (4, 0.0)]),
            )
        else:
            spline = CubicSpline(nodes, values, bc_type=((1, 0.0), "not-a-knot"))
        object.__setattr__(self, "_spline", spline)
        object.__setattr__(
            self, "_tail_coeff", values[-1] * nodes[-1] ** self.tail_exponent
        )

    @property
    def k_max(self) -> float:
        return float(self.nodes[-1])

    def __call__(self, k) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        if np.any(k < 0.0):
            raise ValueError("spectral functions are defined for k >= 0")
        scalar = k.ndim == 0
        k = np.atleast_1d(k)
        out = np.empty_like(k)
        inside = k <= self.nodes[-1]
        out[inside] = self._spline(k[inside])
        if not inside.all():
            out[~inside] = self._tail_coeff / k[~inside] ** self.tail_exponent
        return out[0] if scalar else out


def standard_grid(spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """Composite k-grid: dense where the pole physics lives, sparse beyond.

    64 uniform nodes on [0, 2], 64 log-spaced on [2, 50], and (when k_max
    exceeds 50) 32 more log-spaced nodes out to k_max so the interpolants
    cover the full truncation range of the spectral integrals.
    """
    inner_top = min(50.0, spec.k_max)
    sections = [
        np.linspace(0.0, 2.0, 64),
        np.geomspace(2.0, inner_top, 65)[1:],
    ]
    if spec.k_max > 50.0:
        sections.append(np.geomspace(50.0, spec.k_max, 33)[1:])
    return np.concatenate(sections)


def s_kernel(
    k: float, k1: float, gamma: float, spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    """Kernel value S(k, k1) = S_1 + gamma k1^2 S_2 (adaptive scalar path)."""
    t3k = t_n(3, k, spec)
    s1 = j_n(3, k, k1, spec) - SQRT_PI * t3k * t_n(1, k1, spec)
    if gamma == 0.0:
        return s1
    s2 = j_n(5, k, k1, spec) - SQRT_PI * t3k * t_n(3, k1, spec)
    return s1 + gamma * k1 * k1 * s2


def _s_kernel_row(
    k: float, k1: np.ndarray, gamma: float, spec: QuadratureSpec
) -> np.ndarray:
    """Vectorised S(k, k1-array) for the operator integrals."""
    t3k = t_n(3, k, spec)
    batch = MomentBatch(k1, spec)
    s1 = batch.against(fixed_row(3, k, spec)) - SQRT_PI * t3k * batch.t(1)
    if gamma == 0.0:
        return s1
    s2 = batch.against(fixed_row(5, k, spec)) - SQRT_PI * t3k * batch.t(3)
    return s1 + gamma * k1**2 * s2


_PHI_LABEL = re.compile(r"^phi_(\d+)$")


def _next_label(label: str) -> str:
    m = _PHI_LABEL.match(label)
    if m:
        return f"phi_{int(m.group(1)) + 1}"
    return f"K[{label}]"


def apply_kernel(
    phi: SpectralFunction,
    gamma: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> SpectralFunction:
    """Advance a spectral iterate: psi(k) = (1/pi) int S(k,k1) phi(k1)/T_2(k1) dk1.

    The positive sign is used throughout: it is the convention under which
    the second-order slip coefficient assembled from the iterates matches
    the independent double-integral route (see the oracle module).  Output
    is sampled on the grid of ``phi`` with tail exponent 2.
    """
    if not (0.0 <= gamma < 1.0):
        raise ValueError("gamma must be in [0, 1)")
    label = _next_label(phi.label)
    nodes = phi.nodes
    values = np.empty_like(nodes)
    for i, k in enumerate(nodes):
        t3k = t_n(3, float(k), spec)
        row3 = fixed_row(3, float(k), spec)
        row5 = fixed_row(5, float(k), spec)

        def integrand(k1, _t3k=t3k, _row3=row3, _row5=row5):
            k1 = np.atleast_1d(np.asarray(k1, dtype=float))
            batch = MomentBatch(k1, spec)
            s_row = batch.against(_row3) - SQRT_PI * _t3k * batch.t(1)
            if gamma != 0.0:
                s2 = batch.against(_row5) - SQRT_PI * _t3k * batch.t(3)
                s_row = s_row + gamma * k1**2 * s2
            return s_row * phi(k1) / batch.t(2)

        values[i] = integrate_spectral(
            integrand,
            spec,
            tail_exponent=2,
            label=f"{label} grid node k={k:.3g}",
        ) / np.pi
    return SpectralFunction(
        nodes=nodes.copy(), values=values, tail_exponent=2, label=label
    )
