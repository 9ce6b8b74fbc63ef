"""Special functions of the slip problem: T_n, J_n, J^(m), L(k), phi_0.

All are Gaussian-weighted velocity moments with one or two Lorentzian
factors:

    T_n(k)      = (2/sqrt(pi)) int_0^inf exp(-t^2) t^n / (1 + k^2 t^2) dt
    J_n(k, k1)  = same with both (1 + k^2 t^2)(1 + k1^2 t^2) factors
    J^(m)       = J_m + gamma k1^2 J_{m+2}   (density-weighted kernel moment)
    L(k)        = (1 - gamma) k^2 T_2(k)     (dispersion function)
    phi_0(k)    = (sqrt(pi)/2) T_3(k) - T_4(k)   (seed spectral numerator)

Two evaluation paths are provided.  The scalar functions (`t_n`, `j_n`, ...)
go through the adaptive engine in :mod:`kramers.quadrature` and honour the
QuadratureSpec contract.  The ``*_vec`` functions evaluate on arrays of k via
a fixed graded Gauss-Legendre rule whose panels are geometrically refined
toward t=0, resolving the Lorentzian knee at t ~ 1/k for k up to ~4000; they
are cross-checked against the scalar path in the test suite and exist purely
for speed in the grid/kernel machinery.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_gaussian_weighted

__all__ = [
    "GasParameters",
    "MOMENTS",
    "t_moment",
    "t_n",
    "j_n",
    "j_m",
    "dispersion_l",
    "phi0",
    "MomentBatch",
    "fixed_row",
    "t_n_vec",
    "j_n_vec",
    "j_m_vec",
    "phi0_vec",
    "dispersion_l_vec",
]

SQRT_PI = math.sqrt(math.pi)

_MAX_ORDER = 8


@dataclass(frozen=True)
class GasParameters:
    """Physical inputs: density parameter, diffusion coefficient, gradient.

    ``gamma`` is the dimensionless density correction (4/15) pi n sigma^3,
    ``q`` the fraction of molecules re-emitted diffusely at the wall and
    ``g_v`` the far-field dimensionless velocity gradient.
    """

    gamma: float
    q: float
    g_v: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.gamma < 1.0):
            raise ValueError(f"gamma must be in [0, 1), got {self.gamma}")
        if not (0.0 < self.q <= 1.0):
            raise ValueError(
                f"q must be in (0, 1]: q=0 is the pure-specular limit where "
                f"the slip expansion in (2-q)/q diverges (got {self.q})"
            )
        if not math.isfinite(self.g_v):
            raise ValueError("g_v must be finite")


def t_moment(n: int) -> float:
    """Exact half-range Gaussian moment T_n(0) = Gamma((n+1)/2)/sqrt(pi).

    Even orders are dyadic rationals ((n-1)!!/2^(n/2)) and are returned
    exactly, keeping the recurrence identities exact at k=0.
    """
    if n < 0:
        raise ValueError("moment order must be >= 0")
    if n % 2 == 0:
        num = 1
        for m in range(n - 1, 0, -2):
            num *= m
        return num / 2 ** (n // 2)
    return math.factorial((n - 1) // 2) / SQRT_PI


#: exact T_n(0) for the orders the method uses: {1, 1/sqrt(pi), 1/2, ...}
MOMENTS = tuple(t_moment(n) for n in range(_MAX_ORDER + 1))


# ---------------------------------------------------------------------------
# fixed graded rule for vectorised evaluation
# ---------------------------------------------------------------------------

class _GradedRule:
    """Composite 20-point Gauss-Legendre rule on [0, t_max].

    Panels are [0, 2^-12, 2^-11, ..., 1, 2, 4, t_max]: each octave sees a
    smooth factor-of-four variation of 1/(1 + k^2 t^2), so 20-point Gauss is
    exact to machine precision for every moment used here, for any k whose
    knee 1/k lies above the smallest panel (k up to ~4000).
    """

    def __init__(self, t_max: float):
        xg, wg = np.polynomial.legendre.leggauss(20)
        edges = [0.0] + [2.0**e for e in range(-12, 2)]
        while edges[-1] < t_max:
            edges.append(min(edges[-1] * 2.0, t_max))
        nodes, weights = [], []
        for a, b in zip(edges[:-1], edges[1:]):
            nodes.append(0.5 * (b - a) * xg + 0.5 * (a + b))
            weights.append(0.5 * (b - a) * wg)
        self.t = np.concatenate(nodes)
        self.w_exp = np.concatenate(weights) * np.exp(-self.t**2)
        self.t_sq = self.t**2
        self.t_pow = {n: self.t**n for n in range(_MAX_ORDER + 1)}
        self.moment_weights = {
            n: 2.0 / SQRT_PI * self.t_pow[n] * self.w_exp
            for n in range(_MAX_ORDER + 1)
        }


_RULES: dict[float, _GradedRule] = {}
_RULES_LOCK = threading.Lock()


def _rule(spec: QuadratureSpec) -> _GradedRule:
    rule = _RULES.get(spec.t_max)
    if rule is None:
        with _RULES_LOCK:
            rule = _RULES.get(spec.t_max)
            if rule is None:
                rule = _GradedRule(spec.t_max)
                _RULES[spec.t_max] = rule
    return rule


class MomentBatch:
    """Shared-denominator evaluator for several moments at one k batch.

    Builds the Lorentzian weight matrix 1/(1 + k^2 t^2) over the graded rule
    once; every requested moment is then a single matrix-vector contraction.
    ``fixed_row(n, k_fixed)`` prepares the extra row for double-Lorentzian
    J_n(k_fixed, k) moments, contracted with :meth:`against`.
    """

    def __init__(self, k, spec: QuadratureSpec = DEFAULT_SPEC):
        self.k = np.atleast_1d(np.asarray(k, dtype=float))
        self._rule = _rule(spec)
        self._weights = 1.0 / (1.0 + np.multiply.outer(self.k**2, self._rule.t_sq))
        self._zero = self.k == 0.0

    def t(self, n: int) -> np.ndarray:
        _check_order(n)
        out = self._weights @ self._rule.moment_weights[n]
        out[self._zero] = MOMENTS[n]
        return out

    def against(self, row: np.ndarray) -> np.ndarray:
        return self._weights @ row


def fixed_row(n: int, k_fixed: float, spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """Rule row for J_n(k_fixed, .): contract with MomentBatch.against."""
    _check_order(n)
    rule = _rule(spec)
    return rule.moment_weights[n] / (1.0 + k_fixed**2 * rule.t_sq)


def t_n_vec(n: int, k, spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """T_n at an array of wavenumbers; exact moment table at k=0."""
    return MomentBatch(k, spec).t(n)


def j_n_vec(n: int, k: float, k1, spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """J_n(k, k1) for scalar k against an array of k1."""
    _check_order(n)
    k1 = np.atleast_1d(np.asarray(k1, dtype=float))
    rule = _rule(spec)
    row = rule.moment_weights[n] / (1.0 + k * k * rule.t_sq)
    denom = 1.0 + np.multiply.outer(k1 * k1, rule.t_sq)
    return (row / denom).sum(axis=-1)


def j_m_vec(
    m: int, k: float, k1, gamma: float, spec: QuadratureSpec = DEFAULT_SPEC
) -> np.ndarray:
    """J^(m)(k, k1) = J_m + gamma k1^2 J_{m+2}, vectorised over k1."""
    k1 = np.atleast_1d(np.asarray(k1, dtype=float))
    return j_n_vec(m, k, k1, spec) + gamma * k1**2 * j_n_vec(m + 2, k, k1, spec)


def phi0_vec(k, spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """Seed spectral numerator (sqrt(pi)/2) T_3 - T_4, vectorised."""
    return SQRT_PI / 2.0 * t_n_vec(3, k, spec) - t_n_vec(4, k, spec)


def dispersion_l_vec(k, gamma: float, spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """Dispersion function (1 - gamma) k^2 T_2(k), vectorised."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    return (1.0 - gamma) * k**2 * t_n_vec(2, k, spec)


# ---------------------------------------------------------------------------
# scalar contract functions (adaptive engine, cached)
# ---------------------------------------------------------------------------

def _check_order(n: int) -> None:
    if not (0 <= n <= _MAX_ORDER):
        raise ValueError(f"moment order must be in [0, {_MAX_ORDER}], got {n}")


@lru_cache(maxsize=65536)
def _t_n_cached(n: int, k: float, spec: QuadratureSpec) -> float:
    return integrate_gaussian_weighted(
        lambda t: 2.0 / SQRT_PI * np.asarray(t) ** n / (1.0 + k * k * np.asarray(t) ** 2),
        spec,
        label=f"T_{n}(k={k:.6g})",
    )


def t_n(n: int, k: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Moment T_n(k); the k=0 values come from the exact moment table."""
    _check_order(n)
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0.0:
        return MOMENTS[n]
    return _t_n_cached(n, float(k), spec)


def j_n(n: int, k: float, k1: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Double-Lorentzian moment J_n(k, k1); symmetric in (k, k1)."""
    _check_order(n)
    if k < 0 or k1 < 0:
        raise ValueError("wavenumbers must be >= 0")

    def f(t):
        t = np.asarray(t)
        return (
            2.0 / SQRT_PI * t**n
            / ((1.0 + k * k * t**2) * (1.0 + k1 * k1 * t**2))
        )

    return integrate_gaussian_weighted(
        f, spec, label=f"J_{n}(k={k:.6g}, k1={k1:.6g})"
    )


def j_m(
    m: int, k: float, k1: float, gamma: float, spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    """Density-weighted kernel moment J^(m)(k, k1).

    Carries the factor (1 + gamma k1^2 t^2) on the second argument, the one
    that is integrated against the spectral density; equals
    J_m + gamma k1^2 J_{m+2}.
    """
    if not (0.0 <= gamma < 1.0):
        raise ValueError("gamma must be in [0, 1)")

    def f(t):
        t = np.asarray(t)
        return (
            2.0 / SQRT_PI * t**m * (1.0 + gamma * k1 * k1 * t**2)
            / ((1.0 + k * k * t**2) * (1.0 + k1 * k1 * t**2))
        )

    return integrate_gaussian_weighted(
        f, spec, label=f"J^({m})(k={k:.6g}, k1={k1:.6g}, gamma={gamma:.4g})"
    )


def dispersion_l(k: float, gamma: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Dispersion function L(k) = (1 - gamma) k^2 T_2(k).

    The pole-free product form is used rather than 1 - T_0 - gamma k^2 T_2;
    the two agree identically (tested) but this one is exact at k=0.
    """
    if not (0.0 <= gamma < 1.0):
        raise ValueError("gamma must be in [0, 1)")
    return (1.0 - gamma) * k * k * t_n(2, k, spec)


def phi0(k: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Seed function phi_0(k) = (sqrt(pi)/2) T_3(k) - T_4(k).

    Equal to int_0^inf (1 - 2t/sqrt(pi)) exp(-t^2) t^3/(1+k^2 t^2) dt; it is
    negative for all k and its 1/k^2 tail coefficient vanishes, leaving a
    ~ln(k)/k^4 tail (register tail_exponent 4 when integrating it).
    """
    return SQRT_PI / 2.0 * t_n(3, k, spec) - t_n(4, k, spec)
