"""Independent validation path: direct nested quadrature, no shared machinery.

Everything here is computed with scipy's QUADPACK integrator and inline
moment closures: no spectral grid, no interpolation, no code shared with
the kernel/series modules beyond the problem's formulas.  Slowly decaying
outer integrands (their tails fall like ln(k)/k^2) are handled exactly by
the substitution k -> 1/u on the far range, so these values are accurate
references rather than truncation-limited estimates.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.integrate import IntegrationWarning, quad


def _quiet_quad(*args, **kwargs):
    """quad with QUADPACK roundoff chatter silenced.

    Relative-mode tolerances near machine precision trigger advisory
    roundoff warnings; the achieved accuracy is asserted independently by
    the cross-path tests, so the warnings carry no signal here.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        return quad(*args, **kwargs)

from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .special_integrals import SQRT_PI

__all__ = ["u1_direct", "j_constants", "u2_direct"]

_OUTER_SPLIT = 10.0  # direct integration below, 1/u substitution above
_K_HIGH = 1e4        # substitution cap: above this the inline moments sink
                     # below quadrature resolution; the fitted log model
                     # closes the remainder (residual ~ 1/k^3 ~ 1e-12 here)
_INNER_KMAX = 120.0  # inner integrals decay like ln^2(k)/k^4


# Inline quadratures run in relative mode (vanishing absolute floor): the
# far-range moments scale like 1/k^2 down to 1e-8 and below, where any fixed
# absolute tolerance would drown them in noise.
_EPS_ABS = 1e-30


def _t_inline(n: int, k: float, t_max: float) -> float:
    """T_n(k) by direct quadrature; no caching, no interpolation."""
    pts = (1.0 / k,) if k > 1.0 / t_max else None

    def f(t):
        return math.exp(-t * t) * t**n / (1.0 + k * k * t * t)

    val, _ = _quiet_quad(f, 0.0, t_max, epsabs=_EPS_ABS, epsrel=1e-11, limit=200,
                  points=pts)
    return 2.0 / SQRT_PI * val


def _j_inline(n: int, k: float, k1: float, t_max: float) -> float:
    """J_n(k, k1) by direct quadrature."""
    pts = sorted({1.0 / v for v in (k, k1) if v > 1.0 / t_max})

    def f(t):
        return (
            math.exp(-t * t) * t**n
            / ((1.0 + k * k * t * t) * (1.0 + k1 * k1 * t * t))
        )

    val, _ = _quiet_quad(f, 0.0, t_max, epsabs=_EPS_ABS, epsrel=1e-11, limit=200,
                  points=pts or None)
    return 2.0 / SQRT_PI * val


def _phi0_inline(k: float, t_max: float) -> float:
    """Seed function from its single integrand.

    Evaluating (sqrt(pi)/2) T_3 - T_4 as a difference cancels ~k^2 digits at
    large k; the combined integrand (1 - 2t/sqrt(pi)) t^3 keeps the value
    accurate in relative terms everywhere.
    """
    pts = (1.0 / k,) if k > 1.0 / t_max else None

    def f(t):
        return (
            (1.0 - 2.0 * t / SQRT_PI) * math.exp(-t * t) * t**3
            / (1.0 + k * k * t * t)
        )

    val, _ = _quiet_quad(f, 0.0, t_max, epsabs=_EPS_ABS, epsrel=1e-11, limit=200,
                  points=pts)
    return val


def _log_closure(f, k_top: float, p: int) -> float:
    """Exact remainder of (alpha + beta ln k)/k^p fitted at 0.7 k_top, k_top."""
    fa, fb = f(0.7 * k_top), f(k_top)
    la, lb = math.log(0.7 * k_top), math.log(k_top)
    beta = (fb * k_top**p - fa * (0.7 * k_top) ** p) / (lb - la)
    alpha = fb * k_top**p - beta * lb
    return (alpha + beta * (lb + 1.0 / (p - 1))) * k_top ** (1 - p) / (p - 1)


def _split_integral(f, epsabs: float, epsrel: float) -> float:
    """int_0^inf f(k) dk as [0, split] + 1/u substitution + model closure.

    The far range [split, K_HIGH] maps to u = 1/k, turning the slow
    ln(k)/k^2 tails into a mild logarithmic endpoint; beyond K_HIGH the
    remainder is the exact integral of the fitted log-power model.
    """
    head, _ = _quiet_quad(f, 0.0, _OUTER_SPLIT, epsabs=epsabs, epsrel=epsrel,
                   limit=300)
    tail, _ = _quiet_quad(lambda u: f(1.0 / u) / (u * u), 1.0 / _K_HIGH,
                   1.0 / _OUTER_SPLIT, epsabs=epsabs, epsrel=epsrel,
                   limit=300)
    return head + tail + _log_closure(f, _K_HIGH, 2)


def u1_direct(gamma: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """First slip coefficient by single direct quadrature.

    U_1 = -(1-gamma)^{-1} (1/sqrt(pi))
          int [T_1(k) + gamma k^2 T_3(k)] phi_0(k)/T_2(k) dk,
    with every moment evaluated inline at each point.
    """
    if not (0.0 <= gamma < 1.0):
        raise ValueError("gamma must be in [0, 1)")
    t_max = spec.t_max

    def integrand(k: float) -> float:
        t1 = _t_inline(1, k, t_max)
        t2 = _t_inline(2, k, t_max)
        t3 = _t_inline(3, k, t_max)
        return (t1 + gamma * k * k * t3) * _phi0_inline(k, t_max) / t2

    integral = _split_integral(integrand, epsabs=1e-12, epsrel=1e-10)
    return -integral / ((1.0 - gamma) * SQRT_PI)


def j_constants(spec: QuadratureSpec = DEFAULT_SPEC) -> tuple[float, float, float]:
    """(J_0, J_1, J_2): the double integrals behind the second-order slip.

    J_0 pairs T_1 with the kernel part S_1, J_2 pairs the density-weighted
    moments with S_2, and J_1 holds the cross terms:

        J_0 = (1/pi^{3/2}) int int T_1(k1) S_1(k1,k2) phi_0(k2)
              / (T_2(k1) T_2(k2)) dk1 dk2,

    and so on.  Tensorized adaptive 1-D passes, inner (k2) tolerance ten
    times tighter than the outer; inner results are reused across the three
    outer integrals via an exact-argument table (values only, no grids).
    """
    t_max = spec.t_max
    t_memo: dict[tuple[int, float], float] = {}

    def T(n: int, k: float) -> float:
        key = (n, k)
        if key not in t_memo:
            t_memo[key] = _t_inline(n, k, t_max)
        return t_memo[key]

    phi_memo: dict[float, float] = {}

    def phi0(k: float) -> float:
        if k not in phi_memo:
            phi_memo[k] = _phi0_inline(k, t_max)
        return phi_memo[k]

    ab_memo: dict[float, tuple[float, float]] = {}

    def inner_ab(k1: float) -> tuple[float, float]:
        """A = int S_1(k1,k2) phi_0/T_2 dk2, B = int k2^2 S_2(k1,k2) phi_0/T_2 dk2."""
        if k1 in ab_memo:
            return ab_memo[k1]
        t3k1 = T(3, k1)

        def fa(k2: float) -> float:
            s1 = _j_inline(3, k1, k2, t_max) - SQRT_PI * t3k1 * T(1, k2)
            return s1 * phi0(k2) / T(2, k2)

        def fb(k2: float) -> float:
            s2 = _j_inline(5, k1, k2, t_max) - SQRT_PI * t3k1 * T(3, k2)
            return k2 * k2 * s2 * phi0(k2) / T(2, k2)

        a_val, _ = _quiet_quad(fa, 0.0, _INNER_KMAX, epsabs=_EPS_ABS, epsrel=1e-9,
                        limit=300)
        b_val, _ = _quiet_quad(fb, 0.0, _INNER_KMAX, epsabs=_EPS_ABS, epsrel=1e-9,
                        limit=300)
        # the inner integrands decay like ln^2(k2)/k2^4; close their tails
        a_val += _log_closure(fa, _INNER_KMAX, 4)
        b_val += _log_closure(fb, _INNER_KMAX, 4)
        ab_memo[k1] = (a_val, b_val)
        return a_val, b_val

    def f_j0(k1: float) -> float:
        a_val, _ = inner_ab(k1)
        return T(1, k1) * a_val / T(2, k1)

    def f_j1(k1: float) -> float:
        a_val, b_val = inner_ab(k1)
        return (k1 * k1 * T(3, k1) * a_val + T(1, k1) * b_val) / T(2, k1)

    def f_j2(k1: float) -> float:
        _, b_val = inner_ab(k1)
        return k1 * k1 * T(3, k1) * b_val / T(2, k1)

    norm = math.pi**1.5
    j0 = _split_integral(f_j0, epsabs=1e-13, epsrel=1e-8) / norm
    j1 = _split_integral(f_j1, epsabs=1e-13, epsrel=1e-8) / norm
    j2 = _split_integral(f_j2, epsabs=1e-13, epsrel=1e-8) / norm
    return j0, j1, j2


def u2_direct(
    gamma: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    j_values: tuple[float, float, float] | None = None,
) -> float:
    """Second slip coefficient -(J_0 + gamma J_1 + gamma^2 J_2)/(1-gamma)^2.

    Pass precomputed ``j_values`` to amortise the double integrals across
    several gamma evaluations.
    """
    if not (0.0 <= gamma < 1.0):
        raise ValueError("gamma must be in [0, 1)")
    j0, j1, j2 = j_values if j_values is not None else j_constants(spec)
    return -(j0 + gamma * j1 + gamma * gamma * j2) / (1.0 - gamma) ** 2
