"""Closed-form distributions of the L1 radius U(t).

The law of U(t) splits into a singular part on the shell u = ct
(carried by paths with fewer than d events, see `singular_masses`) and
an absolutely continuous density on (0, ct) for d = 2, 3.

The density has three equivalent representations, all implemented:

* `density_u` — the primary non-negative series (index-shifted so the
  edge u = ct is a plain evaluation; every term is >= 0);
* `density_u_from_coefficients` — a fixed linear combination of kernel
  t-derivatives (`DensityCoefficients`);
* `density_u_closed_form` — an I0/I1 expression, valid on the open
  interval only (0/0 at the edge).

Conditional laws given N(t)=n (n >= dim) are exact polynomials in u;
their CDFs are integrated term by term, so no quadrature is needed on
the Kolmogorov-Smirnov hot path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .bessel import (KernelPoint, bessel_i_scaled, kernel_derivative,
                     scaled_series)
from .model import ModelParams, face_label, stratum_labels, VERTEX

_QUAD_EPSABS = 1e-10
_EDGE_SPLIT = 1.0 - 1e-6  # adaptive quadrature split point as fraction of ct


class SingularStratumError(ValueError):
    """Raised when a conditional law is requested with n < dim.

    With fewer than dim events the motion is still on the shell
    u = ct: the conditional law is uniform on a boundary stratum and
    has no density in u.
    """


def poisson_pmf(n: int, mu: float) -> float:
    return math.exp(-mu + n * math.log(mu) - math.lgamma(n + 1))


@dataclass(frozen=True)
class StratumMass:
    """Probability mass of one shell stratum (total over its sites)."""

    stratum: str
    mass: float
    sites: int

    @property
    def each(self) -> float:
        """Mass per site (vertices are uniform across the 2d sites)."""
        return self.mass / self.sites


def singular_masses(params: ModelParams, t: float) -> list[StratumMass]:
    """Masses of the shell strata: P(N=k) for k < dim.

    k = 0 is the vertex stratum (uniform over the 2d vertices); k >= 1
    sits on the k-dimensional faces.  The remaining probability is the
    absolutely continuous interior mass `ac_mass`.
    """
    if t <= 0:
        raise ValueError("t must be > 0")
    if params.dim > 3:
        raise ValueError("analytic strata masses cover dim <= 3")
    out = [StratumMass(VERTEX, poisson_pmf(0, params.lam * t),
                       2 * params.dim)]
    for k in range(1, params.dim):
        out.append(StratumMass(face_label(k), poisson_pmf(k, params.lam * t), 1))
    return out


def ac_mass(params: ModelParams, t: float) -> float:
    """Total absolutely continuous mass 1 - sum_{k<dim} P(N=k)."""
    return 1.0 - sum(m.mass for m in singular_masses(params, t))


@dataclass(frozen=True)
class DensityCoefficients:
    """Coefficients (A, B, C[, D]) of the kernel-derivative form.

    The interior density is (e^{-lam t}/c) * sum_j coeffs[j] * d^j g/dt^j
    with (A, B, C) = (-lam, 1, 2/lam) in dimension 2 and
    (A, B, C, D) = (-lam, -3, 2/lam, 4/lam^2) in dimension 3.
    """

    dim: int
    coeffs: tuple[float, ...]

    @classmethod
    def for_params(cls, params: ModelParams) -> "DensityCoefficients":
        lam = params.lam
        if params.dim == 2:
            return cls(2, (-lam, 1.0, 2.0 / lam))
        if params.dim == 3:
            return cls(3, (-lam, -3.0, 2.0 / lam, 4.0 / lam ** 2))
        raise ValueError("closed-form densities exist for dim 2 and 3 only")

    def evaluate(self, params: ModelParams, t: float, u: float) -> float:
        point = KernelPoint(params, t, u)
        total = sum(a * kernel_derivative(point, t_order=j)
                    for j, a in enumerate(self.coeffs))
        return math.exp(-params.lam * t) / params.c * total


def density_u(params: ModelParams, t: float, u: float) -> float:
    """Interior density p(u, t) of U(t) for dim 2 or 3 (series form).

    Returns 0 outside [0, ct]; the edge u = ct is the finite limit
    (only the k=0 series term survives there).  Evaluated in scaled
    space, so large lam*t stays finite.
    """
    if t <= 0:
        raise ValueError("t must be > 0")
    lam, c = params.lam, params.c
    ct = c * t
    if u < 0 or u > ct:
        return 0.0
    lt = lam * t
    q = lam * lam * u * u / (2.0 * c * c)
    if params.dim == 2:
        def w(k):
            return (k / (k + 1.0) + lt / (2.0 * (k + 1.0))
                    + q / ((k + 1.0) * (k + 2.0)))
    elif params.dim == 3:
        def w(k):
            kk = (k + 1.0) * (k + 2.0)
            return (k / (k + 1.0) + lt * k / (2.0 * kk) + q / kk
                    + q * lt / (kk * (k + 3.0)))
    else:
        raise ValueError("closed-form densities exist for dim 2 and 3 only")
    (total,), xi = scaled_series(lam, c, t, u, (w,))
    return lam / c * math.exp(xi - lt) * total


def density_u_from_coefficients(params: ModelParams, t: float,
                                u: float) -> float:
    """Interior density via the kernel-derivative coefficient form."""
    if t <= 0:
        raise ValueError("t must be > 0")
    if u < 0 or u > params.c * t:
        return 0.0
    return DensityCoefficients.for_params(params).evaluate(params, t, u)


def density_u_closed_form(params: ModelParams, t: float, u: float) -> float:
    """Interior density via the I0/I1 expression (dim 2, 0 <= u < ct)."""
    if params.dim != 2:
        raise ValueError("the I0/I1 closed form is planar (dim 2) only")
    if t <= 0:
        raise ValueError("t must be > 0")
    lam, c = params.lam, params.c
    ct = c * t
    if not 0 <= u < ct:
        raise ValueError("closed form requires 0 <= u < ct (0/0 at the edge)")
    p_fac = (ct - u) * (ct + u)
    xi = lam / c * math.sqrt(p_fac)
    s = ct * ct + u * u
    i0 = bessel_i_scaled(0, xi)
    i1 = bessel_i_scaled(1, xi)
    return math.exp(xi - lam * t) * (
        lam / c * s / p_fac * i0
        + (lam * t * p_fac - 2.0 * s) / p_fac * i1 / math.sqrt(p_fac))


def _cond_poly(params: ModelParams, n: int, t: float):
    """(amplitude, j, a, b) with density = amplitude * P^j * (a + b u^2)."""
    if params.dim not in (1, 2, 3):
        raise ValueError("conditional laws cover dims 1, 2, 3")
    if n < params.dim:
        raise SingularStratumError(
            f"N={n} < dim={params.dim}: the motion is on a shell stratum "
            "and has no density in u")
    ct = params.c * t
    ct2 = ct * ct
    if n % 2 == 1:
        k = (n - 1) // 2
        if params.dim == 1:
            amp = (math.factorial(2 * k + 1)
                   / (math.factorial(k) ** 2 * 4 ** k * ct ** (2 * k + 1)))
            return amp, k, 1.0, 0.0
        amp = (math.factorial(2 * k + 1)
               / (math.factorial(k - 1) * math.factorial(k + 1)
                  * 4 ** k * ct ** (2 * k + 1)))
        return amp, k - 1, ct2, 1.0
    k = (n - 2) // 2
    if params.dim in (1, 2):
        amp = (math.factorial(2 * k + 2)
               / (math.factorial(k) * math.factorial(k + 1)
                  * (2 * ct) ** (2 * k + 1)))
        return amp, k, 1.0, 0.0
    amp = (math.factorial(2 * k + 2)
           / (math.factorial(k + 2) * math.factorial(k - 1)
              * (2 * ct) ** (2 * k + 1)))
    return amp, k - 1, ct2, 3.0


def conditional_density_u(params: ModelParams, n: int, t: float,
                          u: float) -> float:
    """Exact polynomial density of U(t) given N(t)=n, for n >= dim."""
    if t <= 0:
        raise ValueError("t must be > 0")
    amp, j, a, b = _cond_poly(params, n, t)
    ct = params.c * t
    if u < 0 or u > ct:
        return 0.0
    p_fac = (ct - u) * (ct + u)
    return amp * p_fac ** j * (a + b * u * u)


def _cond_cdf_coeffs(params: ModelParams, n: int, t: float) -> np.ndarray:
    """Coefficients gamma_i with CDF(u) = sum_i gamma_i u^{2i+1}."""
    amp, j, a, b = _cond_poly(params, n, t)
    ct2 = (params.c * t) ** 2
    # density = amp * (a + b u^2) * sum_i C(j,i) ct2^{j-i} (-1)^i u^{2i}
    base = np.array([math.comb(j, i) * ct2 ** (j - i) * (-1) ** i
                     for i in range(j + 1)])
    dens = a * np.concatenate([base, [0.0]])
    dens[1:] += b * base
    powers = 2 * np.arange(j + 2) + 1
    return amp * dens / powers


class ConditionalLaw:
    """The law of U(t) given N(t)=n in dims 1-3 (n >= dim).

    Bundles the polynomial density with its exact term-by-term CDF;
    `cdf` accepts arrays (used directly by the KS tests).
    """

    def __init__(self, params: ModelParams, n: int, horizon: float):
        self.params = params
        self.n = n
        self.horizon = horizon
        self._coeffs = _cond_cdf_coeffs(params, n, horizon)

    def density(self, u: float) -> float:
        return conditional_density_u(self.params, self.n, self.horizon, u)

    def cdf(self, u):
        u_arr = np.clip(np.asarray(u, dtype=float), 0.0,
                        self.params.c * self.horizon)
        u2 = u_arr * u_arr
        total = np.zeros_like(u_arr)
        for gamma in self._coeffs[::-1]:
            total = total * u2 + gamma
        out = np.clip(total * u_arr, 0.0, 1.0)
        return float(out) if np.isscalar(u) else out


def conditional_cdf_u(params: ModelParams, n: int, t: float, u) -> float:
    return ConditionalLaw(params, n, t).cdf(u)


def cdf_u(params: ModelParams, t: float, u: float,
          n: int | None = None) -> float:
    """CDF of the a.c. part of U(t) (mass below u; not renormalized).

    With ``n`` given, the conditional CDF instead (normalized to 1).
    The unconditional integral uses adaptive quadrature split near the
    edge; cdf_u(ct) equals `ac_mass` within quadrature tolerance.
    """
    if n is not None:
        return conditional_cdf_u(params, n, t, u)
    ct = params.c * t
    hi = min(max(u, 0.0), ct)
    if hi <= 0:
        return 0.0
    split = ct * _EDGE_SPLIT
    pts = [split] if hi > split else None
    val, _ = integrate.quad(lambda x: density_u(params, t, x), 0.0, hi,
                            epsabs=_QUAD_EPSABS, limit=200, points=pts)
    return val


def mean_u(params: ModelParams, t: float) -> float:
    """E U(t) in dim 2, singular part included (overflow-safe)."""
    if params.dim != 2:
        raise ValueError("the closed-form mean is planar (dim 2) only")
    if t <= 0:
        raise ValueError("t must be > 0")
    lam, c = params.lam, params.c
    lt = lam * t
    ct = c * t
    return ((ct + 2 * c / lam) * bessel_i_scaled(0, lt)
            + ct * bessel_i_scaled(1, lt) - 2 * c / lam * math.exp(-lt))


def moment_u(params: ModelParams, m: int, t: float) -> float:
    """E U(t)^m in dim 2 by the closed moment formula (m >= 0).

    The formula already absorbs the singular contribution
    (ct)^m e^{-lam t}(1 + lam t); Bessel factors are evaluated in
    scaled space.  m=0 reproduces 1 and m=1 reproduces `mean_u` to
    rounding.
    """
    if params.dim != 2:
        raise ValueError("closed-form moments are planar (dim 2) only")
    if m < 0:
        raise ValueError("m must be >= 0")
    if t <= 0:
        raise ValueError("t must be > 0")
    lam, c = params.lam, params.c
    lt = lam * t
    ct = c * t
    a_big = 2.0 * c * c * t / lam
    gam = math.gamma(0.5 * (m + 1))
    ive_hi = bessel_i_scaled(0.5 * (m + 1), lt)
    ive_lo = bessel_i_scaled(0.5 * (m - 1), lt)
    pow_hi = a_big ** (0.5 * (m + 1))
    total = 0.5 * lam * gam * pow_hi * ive_hi \
        + gam * ive_lo * (0.5 * lam * pow_hi
                          + 2.0 * m * c * c / lam * a_big ** (0.5 * (m - 1)))
    if m > 0:
        total -= 2.0 / lam * m * c * c * ct ** (m - 1) * math.exp(-lt)
    return total / c


def conditional_mean_u(n: int) -> float:
    """E[U(t) | N(t)=n] in dim 3, as a multiple of ct (n >= 3)."""
    if n < 3:
        raise SingularStratumError(
            f"N={n} < 3: conditional means require the a.c. regime")
    if n % 2 == 1:
        k = (n - 1) // 2
        return (math.factorial(2 * k + 1) * (k + 2)
                / (2 ** (2 * k + 1) * math.factorial(k + 1) ** 2))
    k = (n - 2) // 2
    return (math.factorial(2 * k + 1) * (k + 4)
            / (2 ** (2 * k + 1) * math.factorial(k) * math.factorial(k + 2)))


def conditional_mean_ratio(k: int) -> float:
    """Ratio E[U|N=2k+1] / E[U|N=2k+2] = (k+2)^2 / ((k+1)(k+4)).

    Equivalently 1 - k/((k+1)(k+4)): consecutive odd/even conditional
    means differ by O(1/k), both tending to the same limit.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    return (k + 2) ** 2 / ((k + 1) * (k + 4))


def catalan_number(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


def conditional_mean_catalan(n: int) -> float:
    """`conditional_mean_u` rewritten through Catalan numbers C_k."""
    if n < 3:
        raise SingularStratumError(
            f"N={n} < 3: conditional means require the a.c. regime")
    if n % 2 == 1:
        k = (n - 1) // 2
        return (2 * k + 1) * catalan_number(k) * (k + 2) \
            / (2 ** (2 * k + 1) * (k + 1))
    k = (n - 2) // 2
    return (2 * k + 1) * catalan_number(k) * (k + 4) \
        / (2 ** (2 * k + 1) * (k + 2))


def mixture_density(params: ModelParams, t: float, u: float,
                    n_max: int = 60) -> float:
    """sum_n P(N=n) conditional_density(n, u): reconstructs density_u."""
    lt = params.lam * t
    return sum(poisson_pmf(n, lt) * conditional_density_u(params, n, t, u)
               for n in range(params.dim, n_max + 1))
