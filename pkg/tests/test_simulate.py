"""Path simulation: evolve semantics, shell law, strata, conditioning."""

import math

import numpy as np
import pytest

from cyclic_motion import laws, stats
from cyclic_motion.model import (Direction, ModelParams, classify_stratum,
                                 cycle_successor)
from cyclic_motion.simulate import (MotionPath, empirical_char_function,
                                    evolve, sample_path,
                                    sample_path_conditional,
                                    simulate_ensemble)
from cyclic_motion.rng import Substream

P2 = ModelParams(c=1.0, lam=1.0, dim=2)
P3 = ModelParams(c=1.0, lam=1.0, dim=3)


def test_direction_geometry():
    d1 = Direction(1, 2)
    assert d1.axis == 0 and d1.sign == 1
    assert np.array_equal(d1.vector(), [1.0, 0.0])
    d4 = Direction(4, 2)
    assert d4.axis == 1 and d4.sign == -1
    with pytest.raises(ValueError):
        Direction(0, 2)
    with pytest.raises(ValueError):
        Direction(5, 2)


def test_cycle_wraps_through_all_directions():
    d = Direction(1, 3)
    seen = [d.index]
    for _ in range(6):
        d = cycle_successor(d)
        seen.append(d.index)
    assert seen == [1, 2, 3, 4, 5, 6, 1]


def test_classify_stratum():
    assert classify_stratum(0, 3) == "vertex"
    assert classify_stratum(1, 3) == "face1"
    assert classify_stratum(2, 3) == "face2"
    assert classify_stratum(3, 3) == "interior"
    assert classify_stratum(0, 2) == "vertex"
    assert classify_stratum(1, 2) == "face1"
    assert classify_stratum(2, 2) == "interior"


def test_evolve_two_switches_planar():
    path = MotionPath(P2, 1.0, Direction(1, 2), np.array([0.3, 0.7]))
    out = evolve(path)
    assert out.position == pytest.approx([0.0, 0.4], abs=1e-12)
    assert out.u == pytest.approx(0.4, abs=1e-12)
    assert out.stratum == "interior"
    assert out.n_events == 2
    assert out.final_direction.index == 3


def test_evolve_no_switch_hits_vertex():
    params = ModelParams(c=2.0, lam=1.0, dim=2)
    out = evolve(MotionPath(params, 1.0, Direction(1, 2), np.array([])))
    assert out.position == pytest.approx([2.0, 0.0])
    assert out.u == pytest.approx(2.0)
    assert out.stratum == "vertex"
    assert out.final_direction.index == 1


def test_evolve_two_switches_3d_face():
    out = evolve(MotionPath(P3, 1.0, Direction(1, 3), np.array([0.2, 0.5])))
    assert out.position == pytest.approx([0.2, 0.3, 0.5])
    assert out.stratum == "face2"
    assert out.u == pytest.approx(1.0)


def test_motion_path_validation():
    with pytest.raises(ValueError):
        MotionPath(P2, 1.0, Direction(1, 2), np.array([0.7, 0.3]))
    with pytest.raises(ValueError):
        MotionPath(P2, 1.0, Direction(1, 2), np.array([-0.1, 0.5]))
    with pytest.raises(ValueError):
        MotionPath(P2, 1.0, Direction(1, 2), np.array([0.5, 1.5]))


def test_sample_path_reproducible_and_valid():
    a = sample_path(P2, 1.0, Substream(11, 0))
    b = sample_path(P2, 1.0, Substream(11, 0))
    assert a.initial_direction == b.initial_direction
    assert np.array_equal(a.switch_times, b.switch_times)
    assert np.all(np.diff(a.switch_times) >= 0)
    assert a.switch_times.size == 0 or a.switch_times[-1] < 1.0


def test_sample_path_conditional_count():
    for n in (0, 1, 5):
        p = sample_path_conditional(P3, 2.0, n, Substream(3, 7))
        assert p.switch_times.size == n
        assert np.all((p.switch_times > 0) & (p.switch_times < 2.0))


def test_shell_law_and_stratum_equivalence():
    # u <= ct always; u == ct exactly when fewer than dim switches
    s = simulate_ensemble(P2, 1.0, 1_000_000, 99)
    ct = 1.0
    assert float(np.max(s.u)) <= ct * (1 + 1e-12)
    on_shell = np.abs(s.u - ct) <= 1e-9 * ct
    assert np.array_equal(on_shell, s.n_events < P2.dim)


def test_ensemble_matches_per_path_sampler():
    s = simulate_ensemble(P3, 1.0, 64, 123)
    for i in range(64):
        out = evolve(sample_path(P3, 1.0, Substream(123, i)))
        assert out.position == pytest.approx(s.positions[i], abs=1e-12)
        assert out.n_events == s.n_events[i]
        assert out.final_direction.index == s.final_direction[i]
        assert out.stratum == s.outcome(i).stratum


def test_conditional_ensemble_matches_per_path_sampler():
    s = simulate_ensemble(P2, 1.5, 32, 55, conditioning=3)
    for i in range(32):
        out = evolve(sample_path_conditional(P2, 1.5, 3, Substream(55, i)))
        assert out.position == pytest.approx(s.positions[i], abs=1e-12)
    assert np.all(s.n_events == 3)


def test_batching_invariance():
    full = simulate_ensemble(P3, 1.0, 2000, 77)
    half = simulate_ensemble(P3, 1.0, 1000, 77)
    assert np.array_equal(full.u[:1000], half.u)
    assert np.array_equal(full.positions[:1000], half.positions)


def test_event_count_poisson_moments():
    s = simulate_ensemble(P2, 2.0, 200_000, 13)
    lt = 2.0
    se = math.sqrt(lt / s.n_events.size)
    assert abs(s.n_events.mean() - lt) < 4 * se
    rep = stats.chi_square_masses(
        {str(k): int(np.sum(s.n_events == k)) for k in range(9)}
        | {"9+": int(np.sum(s.n_events >= 9))},
        {str(k): laws.poisson_pmf(k, lt) for k in range(9)}
        | {"9+": 1.0 - sum(laws.poisson_pmf(k, lt) for k in range(9))},
        name="poisson_counts")
    assert rep.passed, rep.line()


def test_initial_direction_uniform():
    s = simulate_ensemble(P3, 1.0, 120_000, 17)
    rep = stats.chi_square_masses(
        {str(j): int(np.sum(s.initial_direction == j)) for j in range(1, 7)},
        {str(j): 1.0 / 6.0 for j in range(1, 7)},
        name="initial_direction_uniform")
    assert rep.passed, rep.line()


def test_switch_times_are_order_statistics():
    # conditioned switch times: sorted uniforms; the first of n=2 has
    # CDF 1 - (1-v)^2
    count = 20_000
    firsts = np.empty(count)
    for i in range(count):
        firsts[i] = sample_path_conditional(
            P2, 1.0, 2, Substream(29, i)).switch_times[0]
    rep = stats.ks_one_sample(
        np.sort(firsts), lambda v: 1.0 - (1.0 - np.clip(v, 0, 1)) ** 2,
        name="first_order_statistic")
    assert rep.passed, rep.line()


# --- empirical conditional laws of the simulated process -----------------
# These pin the true sampling distributions (quadratic/cubic CDFs) so any
# change to the path dynamics is caught immediately.

def test_true_law_u2_given_two_switches():
    s = simulate_ensemble(P2, 1.0, 100_000, 41, conditioning=2)
    rep = stats.ks_one_sample(np.sort(s.u),
                              lambda v: np.clip(v, 0.0, 1.0) ** 2,
                              name="u2_given_n2_quadratic")
    assert rep.passed, rep.line()


def test_true_law_u2_given_three_switches():
    s = simulate_ensemble(P2, 1.0, 100_000, 43, conditioning=3)

    def cdf(v):
        w = np.clip(v, 0.0, 1.0)
        return 3 * w ** 2 - 2 * w ** 3

    rep = stats.ks_one_sample(np.sort(s.u), cdf, name="u2_given_n3_cubic")
    assert rep.passed, rep.line()


def test_true_law_u3_given_three_switches():
    s = simulate_ensemble(P3, 1.0, 100_000, 47, conditioning=3)
    rep = stats.ks_one_sample(np.sort(s.u),
                              lambda v: np.clip(v, 0.0, 1.0) ** 3,
                              name="u3_given_n3_cubic")
    assert rep.passed, rep.line()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_telegraph_conditional_laws_fit(n):
    # in dimension 1 the closed-form conditional laws do describe the
    # simulated radius
    params = ModelParams(c=1.0, lam=1.0, dim=1)
    s = simulate_ensemble(params, 1.0, 100_000, 500 + n, conditioning=n)
    law = laws.ConditionalLaw(params, n, 1.0)
    rep = stats.ks_one_sample(np.sort(s.u), law.cdf,
                              name=f"telegraph_conditional_n{n}")
    assert rep.passed, rep.line()


def test_unconditional_mean_regression():
    # pinned simulated mean of U in the plane at lam=c=t=1; the closed
    # formula gives 0.869430 for comparison (documented divergence)
    s = simulate_ensemble(P2, 1.0, 200_000, 53)
    assert s.u.mean() == pytest.approx(0.8986, abs=0.004)


def test_char_function_basics():
    s = simulate_ensemble(P2, 1.0, 50_000, 61)
    assert empirical_char_function(s, 0.0, 0.0) == pytest.approx(1.0)
    s0 = simulate_ensemble(P2, 1.0, 200_000, 67, conditioning=0)
    val = empirical_char_function(s0, 1.0, 0.0)
    want = 0.5 * (1.0 + math.cos(1.0))
    assert val.real == pytest.approx(want, abs=0.01)
    assert val.imag == pytest.approx(0.0, abs=0.01)
    with pytest.raises(ValueError):
        empirical_char_function(simulate_ensemble(P3, 1.0, 100, 1), 1.0, 0.0)


def test_stratum_counts_and_outcome_roundtrip():
    s = simulate_ensemble(P3, 0.5, 5000, 71)
    counts = s.stratum_counts()
    assert sum(counts.values()) == 5000
    assert set(counts) <= {"vertex", "face1", "face2", "interior"}
    out = s.outcome(17)
    assert out.u == pytest.approx(abs(s.positions[17]).sum())
    assert out.stratum == classify_stratum(int(s.n_events[17]), 3)


def test_dim_validation():
    with pytest.raises(ValueError):
        ModelParams(c=1.0, lam=1.0, dim=9)
    with pytest.raises(ValueError):
        ModelParams(c=0.0, lam=1.0, dim=2)
    with pytest.raises(ValueError):
        ModelParams(c=1.0, lam=-1.0, dim=2)
    with pytest.raises(ValueError):
        simulate_ensemble(P2, -1.0, 10, 1)
    with pytest.raises(ValueError):
        simulate_ensemble(P2, 1.0, 0, 1)
    with pytest.raises(ValueError):
        simulate_ensemble(P2, 1.0, 10, 1, conditioning=-1)


def test_high_dimension_simulation_runs():
    params = ModelParams(c=1.0, lam=2.0, dim=8)
    s = simulate_ensemble(params, 1.0, 2000, 83)
    assert s.positions.shape == (2000, 8)
    assert float(np.max(s.u)) <= 1.0 + 1e-12
    assert np.all((1 <= s.initial_direction) & (s.initial_direction <= 16))
