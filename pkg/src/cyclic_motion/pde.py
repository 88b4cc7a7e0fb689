"""Finite-difference verification of the governing differential identities.

Checks implemented:

* Klein-Gordon factor equation on the layer density p(u,t):
  (d/dt + lam)^2 p - c^2 d2p/du2 - lam^2 p = 0 (dims 2 and 3);
* the planar fourth-order operator
  [(d/dt+lam)^2 - c^2 dxx][(d/dt+lam)^2 - c^2 dyy] f = lam^4 f
  on the point field f(x,y,t) = p(|x|+|y|, t)/(4(|x|+|y|)) (the coarea
  conversion of the layer density) and, as a positive control, on the
  layer parametrization h(x,y,t) = p(x+y, t);
* characteristic-function recursions d F_n/dt = F_{n-1} + ic theta F_n
  for the order-statistics time integrals, via nested Gauss-Legendre
  quadrature;
* the diffusive (heat) limit lam = c^2, c -> inf, of the per-coordinate
  position variance;
* normalization of the interior density against the shell masses.

Every differenced residual is reported with a least-squares convergence
order over a refinement schedule (expected ~2 for the O(h^2) stencils).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import laws, simulate
from .model import ModelParams
from .stats import TestReport

_COS4 = (1.0, 0.0, -1.0, 0.0)
_SIN4 = (0.0, 1.0, 0.0, -1.0)


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grid for residual checks.

    Points stay inside u in [margin, 1-margin]*ct for every stencil
    offset at every level; ``h`` is the coarsest spacing and each of
    the ``levels`` refinements halves it.
    """

    t_start: float
    t_stop: float
    margin: float = 0.2
    h: float = 0.02
    levels: int = 3
    n_t: int = 3
    n_u: int = 5

    def __post_init__(self):
        if not 0 < self.margin < 0.5:
            raise ValueError("margin must be in (0, 0.5)")
        if self.levels < 2:
            raise ValueError("need at least 2 refinement levels")
        if not 0 < self.t_start <= self.t_stop:
            raise ValueError("need 0 < t_start <= t_stop")
        if self.h <= 0:
            raise ValueError("h must be > 0")

    @property
    def h_values(self) -> tuple[float, ...]:
        return tuple(self.h / 2 ** i for i in range(self.levels))


@dataclass
class ResidualReport:
    """Per-level residuals of a differenced identity plus fitted order."""

    name: str
    h_values: list[float]
    max_abs: list[float]
    rms: list[float]
    order: float = field(init=False)
    order_fit_residual: float = field(init=False)

    def __post_init__(self):
        logs_h = np.log(np.asarray(self.h_values))
        logs_r = np.log(np.maximum(np.asarray(self.max_abs), 1e-300))
        coeffs, res, *_ = np.polyfit(logs_h, logs_r, 1, full=True)
        self.order = float(coeffs[0])
        self.order_fit_residual = float(res[0]) if len(res) else 0.0

    def converged(self, target: float = 2.0, tol: float = 0.3) -> bool:
        return abs(self.order - target) <= tol

    def line(self) -> str:
        res = ", ".join(f"{r:.3g}" for r in self.max_abs)
        return f"{self.name}: order={self.order:.2f} max_abs=[{res}]"


def _kg_points(params: ModelParams, grid: GridSpec):
    h_max = max(grid.h_values)
    ts = np.linspace(grid.t_start, grid.t_stop, grid.n_t)
    t_min = ts.min() - 2 * h_max
    if t_min <= 0:
        raise ValueError("t grid touches t=0 for the widest stencil")
    ct_min = params.c * t_min
    fracs = np.linspace(grid.margin, 1 - grid.margin, grid.n_u)
    return [(t, f * ct_min) for t in ts for f in fracs]


def klein_gordon_residual(params: ModelParams, grid: GridSpec) -> ResidualReport:
    """FD residual of (d/dt+lam)^2 p = c^2 d2p/du2 + lam^2 p on density_u.

    The lam^2 terms cancel exactly, leaving
    p_tt + 2 lam p_t - c^2 p_uu, differenced with central O(h^2)
    stencils at fixed points across the refinement levels.
    """
    lam, c = params.lam, params.c
    pts = _kg_points(params, grid)
    max_abs, rms = [], []
    for h in grid.h_values:
        res = []
        for t, u in pts:
            p_cc = laws.density_u(params, t, u)
            p_tp = laws.density_u(params, t + h, u)
            p_tm = laws.density_u(params, t - h, u)
            p_up = laws.density_u(params, t, u + h)
            p_um = laws.density_u(params, t, u - h)
            r = ((p_tp - 2 * p_cc + p_tm) / h ** 2
                 + lam * (p_tp - p_tm) / h
                 - c * c * (p_up - 2 * p_cc + p_um) / h ** 2)
            res.append(r)
        arr = np.abs(np.asarray(res))
        max_abs.append(float(arr.max()))
        rms.append(float(np.sqrt(np.mean(arr ** 2))))
    return ResidualReport(name=f"klein_gordon_dim{params.dim}",
                          h_values=list(grid.h_values),
                          max_abs=max_abs, rms=rms)


def _point_field(params: ModelParams):
    def f(t, x, y):
        u = abs(x) + abs(y)
        return laws.density_u(params, t, u) / (4.0 * u)
    return f


def _layer_field(params: ModelParams):
    def f(t, x, y):
        return laws.density_u(params, t, x + y)
    return f


# 5-point central stencils over offsets -2..2 (multiply by h^-order).
_D0 = np.array([0.0, 0.0, 1.0, 0.0, 0.0])
_D1 = np.array([0.0, -0.5, 0.0, 0.5, 0.0])
_D2 = np.array([0.0, 1.0, -2.0, 1.0, 0.0])
_D3 = np.array([-0.5, 1.0, 0.0, -1.0, 0.5])
_D4 = np.array([1.0, -4.0, 6.0, -4.0, 1.0])


def _fourth_order_weights(params: ModelParams, h: float) -> np.ndarray:
    """Weight tensor of the composite operator minus lam^4 I.

    [(d/dt+lam)^2 - c^2 dxx][(d/dt+lam)^2 - c^2 dyy] - lam^4
      = dt^4 + 4 lam dt^3 + 6 lam^2 dt^2 + 4 lam^3 dt
        - c^2 (dt^2 + 2 lam dt + lam^2)(dxx + dyy) + c^4 dxx dyy
    (the lam^4 constant cancels).  Each factor is discretized with the
    central stencils above; the result is a 5x5x5 tensor over
    (t, x, y) offsets of -2h..2h.
    """
    lam, c = params.lam, params.c
    t4 = _D4 / h ** 4 + 4 * lam * _D3 / h ** 3 \
        + 6 * lam ** 2 * _D2 / h ** 2 + 4 * lam ** 3 * _D1 / h
    a_op = _D2 / h ** 2 + 2 * lam * _D1 / h + lam ** 2 * _D0
    d2 = _D2 / h ** 2
    w = np.einsum("a,b,c->abc", t4, _D0, _D0)
    w -= c * c * np.einsum("a,b,c->abc", a_op, d2, _D0)
    w -= c * c * np.einsum("a,b,c->abc", a_op, _D0, d2)
    w += c ** 4 * np.einsum("a,b,c->abc", _D0, d2, d2)
    return w


def _fourth_order_points(params: ModelParams, t: float, h_max: float,
                         margin: float, n_pts: int):
    ct_min = params.c * (t - 2 * h_max)
    lo = margin * ct_min + 2 * h_max
    hi = (1 - margin) * ct_min - 2 * h_max
    if not (t - 2 * h_max > 0 and lo < hi):
        raise ValueError("grid too coarse: stencil leaves the admissible strip")
    us = np.linspace(lo, hi, n_pts)
    # split each u into unequal (x, y) to avoid accidental symmetry
    return [(0.35 * u, 0.65 * u) for u in us]


def planar_fourth_order_residual(params: ModelParams, grid: GridSpec,
                                 f_field=None,
                                 name: str = "planar_fourth_order"
                                 ) -> ResidualReport:
    """FD residual of the planar fourth-order equation on a field f(t,x,y).

    By default f is the coarea point field p(|x|+|y|, t)/(4(|x|+|y|)).
    Pass ``f_field=\"layer\"`` for the layer parametrization p(x+y, t),
    which satisfies the operator identity exactly (positive control of
    the machinery).
    """
    if params.dim != 2:
        raise ValueError("the fourth-order operator is planar (dim 2)")
    if f_field is None or f_field == "point":
        f = _point_field(params)
        name = name + "_point"
    elif f_field == "layer":
        f = _layer_field(params)
        name = name + "_layer"
    else:
        f = f_field
    lam = params.lam
    t0 = 0.5 * (grid.t_start + grid.t_stop)
    h_max = max(grid.h_values)
    pts = _fourth_order_points(params, t0, h_max, grid.margin, grid.n_u)
    offsets = np.arange(-2, 3)
    max_abs, rms = [], []
    for h in grid.h_values:
        w = _fourth_order_weights(params, h)
        res = []
        for x, y in pts:
            cube = np.empty((5, 5, 5))
            for a, dt in enumerate(offsets):
                for b, dx in enumerate(offsets):
                    for cc, dy in enumerate(offsets):
                        cube[a, b, cc] = f(t0 + dt * h, x + dx * h, y + dy * h)
            res.append(float(np.sum(w * cube)))
        arr = np.abs(np.asarray(res))
        max_abs.append(float(arr.max()))
        rms.append(float(np.sqrt(np.mean(arr ** 2))))
    return ResidualReport(name=name, h_values=list(grid.h_values),
                          max_abs=max_abs, rms=rms)


def cf_theta(k: int, j: int, alpha: float, beta: float) -> float:
    """Projection theta_k = alpha cos((k-j)pi/2) - beta sin((k-j)pi/2)."""
    m = (k - j) % 4
    return alpha * _COS4[m] - beta * _SIN4[m]


_GL_NODES = 48


def _gl_cache():
    nodes, weights = np.polynomial.legendre.leggauss(_GL_NODES)
    return nodes, weights


_GL_X, _GL_W = _gl_cache()


def conditional_cf_quadrature(params: ModelParams, n: int, j: int,
                              alpha: float, beta: float, t: float) -> complex:
    """G_n for initial direction j: the normalized order-statistics
    integral of exp(ic sum_k (s_k - s_{k-1}) theta_k) over the simplex.

    n=0 is the bare exponential, n=1 a single Gauss-Legendre integral,
    n=2 an iterated double integral.  Larger n is unsupported
    (combinatorial growth; Monte Carlo covers it).
    """
    if params.dim != 2:
        raise ValueError("characteristic-function quadrature is planar")
    if not 1 <= j <= 4:
        raise ValueError("initial direction j must be in 1..4")
    if n == 0:
        return cmath.exp(1j * params.c * t * cf_theta(1, j, alpha, beta))
    c = params.c
    if n == 1:
        th1 = cf_theta(1, j, alpha, beta)
        th2 = cf_theta(2, j, alpha, beta)
        s = 0.5 * t * (_GL_X + 1.0)
        vals = np.exp(1j * c * (s * th1 + (t - s) * th2))
        # 1!/t times the integral; the 0.5*t Jacobian leaves a bare 0.5
        return complex(np.sum(_GL_W * vals) * 0.5)
    if n == 2:
        th1 = cf_theta(1, j, alpha, beta)
        th2 = cf_theta(2, j, alpha, beta)
        th3 = cf_theta(3, j, alpha, beta)
        s1 = 0.5 * t * (_GL_X + 1.0)
        w1 = _GL_W * 0.5 * t
        total = 0.0 + 0.0j
        for s1_i, w1_i in zip(s1, w1):
            half = 0.5 * (t - s1_i)
            s2 = s1_i + half * (_GL_X + 1.0)
            inner = np.sum(_GL_W * half
                           * np.exp(1j * c * (s1_i * th1 + (s2 - s1_i) * th2
                                              + (t - s2) * th3)))
            total += w1_i * inner
        return complex(total * 2.0 / t ** 2)
    raise ValueError("quadrature supports n <= 2 only")


def average_cf_quadrature(params: ModelParams, n: int, alpha: float,
                          beta: float, t: float) -> complex:
    """G_n averaged over the uniform initial direction."""
    return sum(conditional_cf_quadrature(params, n, j, alpha, beta, t)
               for j in (1, 2, 3, 4)) / 4.0


def cf_recursion_check(params: ModelParams, n: int, j: int, alpha: float,
                       beta: float, t: float,
                       h_values=(0.02, 0.01, 0.005)) -> ResidualReport:
    """FD check of d F_n/dt = F_{n-1} + i c theta_{n+1} F_n.

    F_n = t^n/n! G_n are the unnormalized order-statistics integrals;
    the t-derivative is central-differenced from quadrature values, so
    the residual shrinks at O(h^2).
    """
    if n not in (1, 2):
        raise ValueError("recursion check supports n in {1, 2}")

    def f_n(m: int, tt: float) -> complex:
        return tt ** m / math.factorial(m) * conditional_cf_quadrature(
            params, m, j, alpha, beta, tt)

    th = cf_theta(n + 1, j, alpha, beta)
    max_abs, rms = [], []
    for h in h_values:
        dfdt = (f_n(n, t + h) - f_n(n, t - h)) / (2 * h)
        r = abs(dfdt - f_n(n - 1, t) - 1j * params.c * th * f_n(n, t))
        max_abs.append(r)
        rms.append(r)
    return ResidualReport(name=f"cf_recursion_n{n}_j{j}_a{alpha:g}_b{beta:g}",
                          h_values=list(h_values), max_abs=max_abs, rms=rms)


def heat_limit_check(dim: int, sigma_target: float, t: float,
                     c_schedule, count: int, seed: int) -> TestReport:
    """Diffusive limit: with lam = c^2, per-coordinate Var -> sigma_target*t.

    Passes iff the largest-c variance is within 5% of the target and
    the error sequence is non-increasing along the schedule within
    3-standard-error Monte Carlo noise bands.
    """
    target = sigma_target * t
    errs, noises, details = [], [], []
    for i, c in enumerate(c_schedule):
        params = ModelParams(c=float(c), lam=float(c) ** 2, dim=dim)
        samples = simulate.simulate_ensemble(params, t, count, seed + i)
        var = float(np.var(samples.positions[:, 0], ddof=1))
        err = abs(var - target)
        noise = var * math.sqrt(2.0 / (count - 1))
        errs.append(err)
        noises.append(noise)
        details.append(f"c={c}: var={var:.5f} err={err:.2e}")
    final_ok = errs[-1] <= 0.05 * target
    monotone_ok = all(errs[i + 1] <= errs[i] + 3 * (noises[i] + noises[i + 1])
                      for i in range(len(errs) - 1))
    return TestReport(
        name=f"heat_limit_dim{dim}", statistic=errs[-1] / target,
        p_value=None, tolerance=0.05,
        passed=bool(final_ok and monotone_ok), sample_size=count,
        detail="; ".join(details) + f"; monotone={monotone_ok}")


def normalization_check(params: ModelParams, t: float,
                        tol: float = 1e-8) -> TestReport:
    """Quadrature of density_u against 1 - sum of shell masses."""
    total = laws.cdf_u(params, t, params.c * t)
    expected = laws.ac_mass(params, t)
    err = abs(total - expected)
    return TestReport(
        name=f"normalization_dim{params.dim}_lt{params.lam * t:g}",
        statistic=err, p_value=None, tolerance=tol, passed=bool(err < tol),
        sample_size=None,
        detail=f"quadrature={total:.10f} expected={expected:.10f}")
