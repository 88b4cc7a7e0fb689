"""Goodness-of-fit and moment comparison for simulated ensembles.

All tests return a self-describing `TestReport`.  KS p-values use the
asymptotic Kolmogorov distribution (adequate at the sample sizes used
here, n >= 1e3); verification suites run with fixed seeds so pass/fail
is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special, stats as sps

ALPHA = 0.01  # default significance level for all goodness-of-fit tests


@dataclass
class TestReport:
    name: str
    statistic: float
    p_value: float | None
    tolerance: float
    passed: bool
    sample_size: int | None = None
    detail: str = ""
    blocking: bool = True

    def as_dict(self) -> dict:
        return {"name": self.name, "statistic": self.statistic,
                "p_value": self.p_value, "tolerance": self.tolerance,
                "pass": self.passed, "sample_size": self.sample_size,
                "detail": self.detail, "blocking": self.blocking}

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        p = "-" if self.p_value is None else f"{self.p_value:.3g}"
        return (f"{status}  {self.name}  statistic={self.statistic:.4g}  "
                f"p={p}  tol={self.tolerance:.3g}")


def _require_sorted(values: np.ndarray, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size < 10:
        raise ValueError(f"{name}: need a 1-d sample of size >= 10")
    if np.any(np.diff(arr) < 0):
        raise ValueError(f"{name}: values must be sorted ascending")
    return arr


def ks_one_sample(values, cdf, name: str = "ks_one_sample",
                  alpha: float = ALPHA, blocking: bool = True) -> TestReport:
    """One-sample KS test of sorted values against a callable CDF.

    The CDF must map the sample's support onto [0, 1] (renormalize
    unconditional laws by their a.c. mass before calling).
    """
    arr = _require_sorted(values, name)
    n = arr.size
    f = np.asarray(cdf(arr), dtype=float)
    grid = np.arange(1, n + 1) / n
    d_plus = np.max(grid - f)
    d_minus = np.max(f - (grid - 1.0 / n))
    d = max(d_plus, d_minus)
    p = float(special.kolmogorov(np.sqrt(n) * d))
    return TestReport(name=name, statistic=float(d), p_value=p,
                      tolerance=alpha, passed=p > alpha, sample_size=n,
                      blocking=blocking)


def ks_two_sample(a, b, name: str = "ks_two_sample", alpha: float = ALPHA,
                  blocking: bool = True) -> TestReport:
    """Two-sample KS test with asymptotic p-value."""
    x = _require_sorted(a, name + "[a]")
    y = _require_sorted(b, name + "[b]")
    n, m = x.size, y.size
    both = np.concatenate([x, y])
    cdf_x = np.searchsorted(x, both, side="right") / n
    cdf_y = np.searchsorted(y, both, side="right") / m
    d = float(np.max(np.abs(cdf_x - cdf_y)))
    en = np.sqrt(n * m / (n + m))
    p = float(special.kolmogorov(en * d))
    return TestReport(name=name, statistic=d, p_value=p, tolerance=alpha,
                      passed=p > alpha, sample_size=n + m, blocking=blocking)


def chi_square_masses(observed: dict[str, int], expected: dict[str, float],
                      name: str = "chi_square", alpha: float = ALPHA,
                      blocking: bool = True) -> TestReport:
    """Pearson chi-square of stratum counts against expected masses.

    ``expected`` must be a full partition (masses summing to 1); cells
    missing from ``observed`` count as zero.
    """
    total_mass = sum(expected.values())
    if abs(total_mass - 1.0) > 1e-9:
        raise ValueError(f"expected masses must sum to 1, got {total_mass}")
    if any(mass <= 0 for mass in expected.values()):
        raise ValueError("every expected mass must be positive")
    n = sum(observed.values())
    if n < 1000:
        raise ValueError("chi_square_masses needs >= 1000 observations")
    stat = 0.0
    for cell, mass in expected.items():
        exp_count = n * mass
        obs = observed.get(cell, 0)
        stat += (obs - exp_count) ** 2 / exp_count
    dof = len(expected) - 1
    p = float(sps.chi2.sf(stat, dof))
    return TestReport(name=name, statistic=stat, p_value=p, tolerance=alpha,
                      passed=p > alpha, sample_size=n,
                      detail=f"dof={dof}", blocking=blocking)


def moment_compare(samples, analytic: float, m: int,
                   name: str = "moment_compare",
                   blocking: bool = True) -> TestReport:
    """Check the sample m-th moment against an analytic value (3-sigma).

    The statistic is the standardized deviation
    (sample moment - analytic) / SE with SE = std(u^m)/sqrt(n).
    """
    arr = np.asarray(samples, dtype=float)
    powers = arr ** m
    n = arr.size
    sample_moment = float(np.mean(powers))
    se = float(np.std(powers, ddof=1) / np.sqrt(n)) if m > 0 else 0.0
    if se == 0.0:
        z = 0.0 if sample_moment == analytic else np.inf
    else:
        z = (sample_moment - analytic) / se
    return TestReport(name=name, statistic=float(z), p_value=None,
                      tolerance=3.0, passed=abs(z) <= 3.0, sample_size=n,
                      detail=f"sample={sample_moment:.6g} analytic={analytic:.6g}",
                      blocking=blocking)
