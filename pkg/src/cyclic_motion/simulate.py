"""Exact path simulation of the cyclic orthogonal-direction motion.

A path is: an initial direction uniform on the 2d cycle directions,
Poisson(lam) switch times on (0, t), and deterministic cycling
d_j -> d_{j+1} at each switch.  Conditioned on N(t)=n the switch times
are n sorted Uniform(0,t) draws (order statistics), sampled directly.

`simulate_ensemble` is vectorised and streams one event column at a
time, so memory stays O(count * dim) even for lam*t in the thousands;
replication i consumes only substream i regardless of batching, which
makes ensembles bit-reproducible under any execution layout.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import rng
from .model import Direction, ModelParams, classify_stratum

_STRATUM_TOL = 1e-9  # relative tolerance of the u == ct shell test


@dataclass(frozen=True)
class MotionPath:
    """One sampled path: initial direction plus sorted switch times."""

    params: ModelParams
    horizon: float
    initial_direction: Direction
    switch_times: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.switch_times, dtype=float)
        if s.ndim != 1 or np.any(np.diff(s) < 0):
            raise ValueError("switch_times must be a sorted 1-d array")
        if s.size and (s[0] < 0 or s[-1] > self.horizon):
            raise ValueError("switch_times must lie inside (0, horizon)")


@dataclass(frozen=True)
class MotionOutcome:
    """State at the horizon: position, L1 radius, and shell stratum."""

    params: ModelParams
    horizon: float
    position: np.ndarray
    u: float
    n_events: int
    initial_direction: Direction
    final_direction: Direction
    stratum: str


@dataclass
class SampleSet:
    """Vector of outcomes from `simulate_ensemble` (column arrays)."""

    params: ModelParams
    horizon: float
    conditioning: int | None
    seed: int
    u: np.ndarray
    n_events: np.ndarray
    positions: np.ndarray
    initial_direction: np.ndarray
    final_direction: np.ndarray

    @cached_property
    def strata(self) -> list[str]:
        return [classify_stratum(int(n), self.params.dim)
                for n in self.n_events]

    def __len__(self) -> int:
        return len(self.u)

    def outcome(self, i: int) -> MotionOutcome:
        d = self.params.dim
        return MotionOutcome(
            params=self.params, horizon=self.horizon,
            position=self.positions[i].copy(), u=float(self.u[i]),
            n_events=int(self.n_events[i]),
            initial_direction=Direction(int(self.initial_direction[i]), d),
            final_direction=Direction(int(self.final_direction[i]), d),
            stratum=self.strata[i])

    def stratum_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for s in self.strata:
            counts[s] = counts.get(s, 0) + 1
        return counts


def sample_path(params: ModelParams, horizon: float,
                stream: rng.Substream) -> MotionPath:
    """Unconditional path: uniform initial direction, Poisson switches."""
    if horizon <= 0:
        raise ValueError("horizon must be > 0")
    j0 = 1 + int(stream.uniform() * params.n_directions)
    times = []
    s = 0.0
    while True:
        s += stream.exponential(params.lam)
        if s >= horizon:
            break
        times.append(s)
    return MotionPath(params, horizon, Direction(j0, params.dim),
                      np.array(times))


def sample_path_conditional(params: ModelParams, horizon: float, n: int,
                            stream: rng.Substream) -> MotionPath:
    """Path conditioned on N(t)=n: switch times are n sorted uniforms."""
    if horizon <= 0:
        raise ValueError("horizon must be > 0")
    if n < 0:
        raise ValueError("n must be >= 0")
    j0 = 1 + int(stream.uniform() * params.n_directions)
    times = np.sort(stream.uniforms(n)) * horizon
    return MotionPath(params, horizon, Direction(j0, params.dim), times)


def evolve(path: MotionPath) -> MotionOutcome:
    """Integrate a path segment-by-segment to its outcome."""
    p = path.params
    t = path.horizon
    pos = np.zeros(p.dim)
    times = np.concatenate([[0.0], path.switch_times, [t]])
    j = path.initial_direction.index
    for k in range(len(times) - 1):
        d = Direction((j - 1 + k) % p.n_directions + 1, p.dim)
        pos[d.axis] += d.sign * p.c * (times[k + 1] - times[k])
    n = len(path.switch_times)
    u = float(np.sum(np.abs(pos)))
    stratum = classify_stratum(n, p.dim)
    if n < p.dim and abs(u - p.c * t) > _STRATUM_TOL * p.c * t:
        raise AssertionError(
            f"shell outcome with u={u} != ct={p.c * t}; path invariant broken")
    final = Direction((j - 1 + n) % p.n_directions + 1, p.dim)
    return MotionOutcome(params=p, horizon=t, position=pos, u=u, n_events=n,
                         initial_direction=path.initial_direction,
                         final_direction=final, stratum=stratum)


def _accumulate_segments(params: ModelParams, horizon: float,
                         j0: np.ndarray, seg_gaps) -> np.ndarray:
    """Add c * gap contributions along cycle directions (vectorised).

    ``seg_gaps`` yields (k, gaps) for segment index k = 0, 1, ...;
    direction of segment k for a row with initial index j0 is
    ((j0 - 1 + k) mod 2d).
    """
    d = params.dim
    pos = np.zeros((len(j0), d))
    rows = np.arange(len(j0))
    for k, gaps in seg_gaps:
        jj = (j0 - 1 + k) % (2 * d)
        axis = jj % d
        sign = np.where(jj < d, 1.0, -1.0)
        pos[rows, axis] += sign * params.c * gaps
    return pos


def simulate_ensemble(params: ModelParams, horizon: float, count: int,
                      seed: int, conditioning: int | None = None) -> SampleSet:
    """count independent outcomes; replication i depends only on (seed, i)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if horizon <= 0:
        raise ValueError("horizon must be > 0")
    t = float(horizon)
    keys = rng.substream_keys(seed, 0, count)
    two_d = params.n_directions
    j0 = 1 + (rng.uniform_column(keys, 0) * two_d).astype(np.int64)

    if conditioning is None:
        # Stream exponential-gap columns; a finished row (cum >= t)
        # contributes zero-length segments from then on.
        cum = np.zeros(count)
        prev = np.zeros(count)
        n_events = np.zeros(count, dtype=np.int64)
        pos = np.zeros((count, params.dim))
        rows = np.arange(count)
        k = 0
        while True:
            gap = -np.log(rng.uniform_column(keys, k + 1)) / params.lam
            cum = cum + gap
            clipped = np.minimum(cum, t)
            seg = clipped - prev
            jj = (j0 - 1 + k) % two_d
            axis = jj % params.dim
            sign = np.where(jj < params.dim, 1.0, -1.0)
            pos[rows, axis] += sign * params.c * seg
            n_events += cum < t
            prev = clipped
            k += 1
            if cum.min() >= t:
                break
    else:
        n = int(conditioning)
        if n < 0:
            raise ValueError("conditioning must be >= 0")
        if n > 0:
            cols = np.stack([rng.uniform_column(keys, j + 1) for j in range(n)],
                            axis=1)
            times = np.sort(cols, axis=1) * t
            bounds = np.concatenate(
                [np.zeros((count, 1)), times, np.full((count, 1), t)], axis=1)
            gaps = np.diff(bounds, axis=1)
        else:
            gaps = np.full((count, 1), t)
        pos = _accumulate_segments(params, t, j0,
                                   ((k, gaps[:, k]) for k in range(n + 1)))
        n_events = np.full(count, n, dtype=np.int64)

    u = np.abs(pos).sum(axis=1)
    final = (j0 - 1 + n_events) % two_d + 1
    return SampleSet(params=params, horizon=t, conditioning=conditioning,
                     seed=seed, u=u, n_events=n_events, positions=pos,
                     initial_direction=j0, final_direction=final)


def empirical_char_function(samples: SampleSet, alpha: float,
                            beta: float) -> complex:
    """Sample mean of e^{i(alpha X + beta Y)} over a planar SampleSet."""
    if samples.params.dim != 2:
        raise ValueError("empirical_char_function requires dim=2 samples")
    phase = alpha * samples.positions[:, 0] + beta * samples.positions[:, 1]
    return complex(np.mean(np.exp(1j * phase)))
