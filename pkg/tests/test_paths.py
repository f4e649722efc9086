"""Path simulation: exactness of jump logs, determinism, stopping, partitions."""

import math

import numpy as np
import pytest

from bregvar.paths import (
    CompoundPoisson,
    GaussianLaw,
    LevyModel,
    TruncatedStable,
    TwoPointLaw,
    UniformLaw,
    coarsen_grid,
    path_seed,
    refine_partition,
    simulate,
    simulate_independent_pair,
    stop_path,
)

BM = LevyModel(sigma2=1.0)
PURE_JUMP = LevyModel(sigma2=0.0, jumps=CompoundPoisson(3.0, TwoPointLaw(1.0)))
JUMP_DIFF = LevyModel(sigma2=1.0, jumps=CompoundPoisson(2.0, TwoPointLaw(1.0)))


def test_model_validation():
    with pytest.raises(ValueError):
        LevyModel(sigma2=-1.0)
    with pytest.raises(ValueError):
        CompoundPoisson(0.0, TwoPointLaw(1.0))
    with pytest.raises(ValueError):
        TruncatedStable(alpha=2.5, c=1.0, eps=0.1)
    with pytest.raises(ValueError):
        TruncatedStable(alpha=1.5, c=1.0, eps=0.1, z_max=0.05)


def test_pure_diffusion_has_no_jumps():
    p = simulate(BM, T=1.0, M=64, seed=123)
    assert p.jump_log[0].size == 0
    assert p.qv_cont_rate == 1.0
    assert p.times.size == 65
    assert p.values[0] == 0.0


def test_pure_jump_piecewise_constant():
    p = simulate(PURE_JUMP, T=1.0, M=16, seed=5)
    jt, xl, xr = p.jump_log
    assert np.all(np.abs(xr - xl) == 1.0)
    # increments between jumps vanish
    flat = np.diff(p.values)[~p.is_jump[1:]]
    assert np.all(flat == 0.0)
    assert np.all((jt > 0) & (jt <= p.horizon))
    assert np.all(np.diff(jt) > 0)


def test_martingale_mean_within_three_se():
    n = 100_000
    term = np.empty(n)
    for i in range(n):
        term[i] = simulate(JUMP_DIFF, 1.0, 8, path_seed(2024, i)).terminal
    se = term.std(ddof=1) / math.sqrt(n)
    assert abs(term.mean()) <= 3.0 * se


def test_bitwise_determinism():
    a = simulate(JUMP_DIFF, 1.0, 64, seed=99)
    b = simulate(JUMP_DIFF, 1.0, 64, seed=99)
    assert np.array_equal(a.times, b.times)
    assert np.array_equal(a.values, b.values)
    assert np.array_equal(a.x_left, b.x_left)


def test_sign_flip_gives_negated_path():
    a = simulate(JUMP_DIFF, 1.0, 64, seed=11)
    b = simulate(JUMP_DIFF, 1.0, 64, seed=11, flip_sign=True)
    assert np.array_equal(b.values, -a.values)
    assert np.array_equal(b.x_left, -a.x_left)


def test_x0_offset():
    p = simulate(BM, 1.0, 16, seed=3, x0=2.5)
    assert p.values[0] == 2.5


class TestTruncatedStable:
    def test_intensity_formula(self):
        js = TruncatedStable(alpha=1.5, c=0.5, eps=0.1, z_max=None)
        assert js.rate == pytest.approx(2 * 0.5 * 0.1 ** (-1.5) / 1.5)
        js2 = TruncatedStable(alpha=1.5, c=0.5, eps=0.1, z_max=10.0)
        assert js2.rate == pytest.approx(2 * 0.5 * (0.1 ** (-1.5) - 10.0 ** (-1.5)) / 1.5)

    def test_sizes_within_support(self):
        js = TruncatedStable(alpha=1.2, c=1.0, eps=0.05, z_max=4.0)
        rng = np.random.default_rng(8)
        z = js.sample_sizes(20_000, rng)
        assert np.all(np.abs(z) >= 0.05) and np.all(np.abs(z) <= 4.0)
        # symmetric law: mean near zero
        assert abs(z.mean()) <= 3.0 * z.std(ddof=1) / math.sqrt(z.size)

    def test_tail_law_matches_inverse_transform(self):
        js = TruncatedStable(alpha=1.5, c=1.0, eps=0.1, z_max=None)
        rng = np.random.default_rng(21)
        z = np.abs(js.sample_sizes(200_000, rng))
        # P(|Z| > z) = (z/eps)^(-alpha)
        for thresh in (0.2, 0.5, 1.0):
            emp = np.mean(z > thresh)
            target = (thresh / 0.1) ** -1.5
            assert emp == pytest.approx(target, abs=4 * math.sqrt(target / z.size) + 1e-4)


class TestStopPath:
    def test_no_exit_flag(self):
        p = simulate(BM, 0.01, 16, seed=1)
        s = stop_path(p, -50.0, 50.0)
        assert s.exited is False and s.tau is None
        assert np.array_equal(s.values, p.values)

    def test_jump_overshoot_retained(self):
        big = LevyModel(sigma2=0.0, jumps=CompoundPoisson(5.0, TwoPointLaw(2.0)))
        p = simulate(big, 1.0, 16, seed=7)
        s = stop_path(p, -1.0, 1.0)
        assert s.exited
        assert abs(s.terminal) == 2.0  # first jump lands exactly at +-2
        assert s.times[-1] == s.tau

    def test_exit_probability_series_oracle(self):
        # P(exit (-1,1) by T=5) for standard BM via the classical series
        t_cap = 5.0
        series = sum(
            (4.0 / math.pi) * ((-1) ** k / (2 * k + 1)) * math.exp(-((2 * k + 1) ** 2) * math.pi**2 * t_cap / 8.0)
            for k in range(40)
        )
        p_exit_true = 1.0 - series
        n = 10_000
        hits = 0
        for i in range(n):
            p = simulate(BM, t_cap, 4096, path_seed(31, i))
            if stop_path(p, -1.0, 1.0).exited:
                hits += 1
        assert hits / n == pytest.approx(p_exit_true, abs=0.02)


class TestPartitions:
    def test_level_zero_is_simulation_grid(self):
        p = simulate(JUMP_DIFF, 1.0, 32, seed=13)
        part = refine_partition(p, 0)
        assert np.array_equal(part.times, p.times)

    def test_mesh_halves(self):
        p = simulate(BM, 1.0, 32, seed=13)
        m0 = refine_partition(p, 0).mesh
        m1 = refine_partition(p, 1).mesh
        assert m1 <= 0.5 * m0 + 1e-15

    def test_jumps_in_every_partition(self):
        p = simulate(JUMP_DIFF, 1.0, 32, seed=17)
        jt = p.jump_log[0]
        for lvl in (0, 1, 2):
            part = refine_partition(p, lvl)
            assert np.all(np.isin(jt, part.times))

    def test_refined_times_exactly_on_finer_path(self):
        # level-n partition of base m is bitwise representable on a path
        # simulated at m * 2^(n_max) intervals
        p_fine = simulate(BM, 0.7, 4 * 2**6, seed=23)
        part = refine_partition(p_fine, 3, base_m=4)
        assert np.all(np.isin(part.times, p_fine.times))


def test_realized_qv_refinement_improves():
    # median relative error of sum (dX)^2 vs sigma2*T shrinks with the level
    from bregvar.paths import RandomPartition
    from bregvar.variation import realized_qv

    levels = (4, 6, 8)
    errs = {lvl: [] for lvl in levels}
    for i in range(100):
        p = simulate(BM, 1.0, 4 * 2**8, path_seed(41, i))
        for lvl in levels:
            part = refine_partition(p, lvl, base_m=4)
            rq = realized_qv(p, part)
            errs[lvl].append(abs(rq - 1.0))
    med = [np.median(errs[lvl]) for lvl in levels]
    assert med[0] > med[1] > med[2]


class TestIndependentPair:
    def test_sum_path_consistency(self):
        mx = LevyModel(sigma2=1.0, jumps=CompoundPoisson(2.0, UniformLaw(1.0)))
        my = LevyModel(sigma2=0.5, jumps=CompoundPoisson(1.0, GaussianLaw(0.5)))
        px, py, ps = simulate_independent_pair(mx, my, 1.0, 32, seed=71)
        assert np.array_equal(px.times, py.times)
        assert np.array_equal(ps.values, px.values + py.values)
        assert ps.qv_cont_rate == 1.5
        # jump instants of the sum are the union
        assert np.array_equal(ps.is_jump, px.is_jump | py.is_jump)

    def test_deterministic(self):
        mx, my = BM, PURE_JUMP
        a = simulate_independent_pair(mx, my, 1.0, 16, seed=5)[2]
        b = simulate_independent_pair(mx, my, 1.0, 16, seed=5)[2]
        assert np.array_equal(a.values, b.values)


def test_coarsen_grid_preserves_jumps_and_terminal():
    p = simulate(JUMP_DIFF, 1.0, 64, seed=29)
    c = coarsen_grid(p)
    assert c.terminal == p.terminal
    assert np.array_equal(c.jump_log[0], p.jump_log[0])
    assert c.grid_m == 32
    assert np.all(np.isin(c.times, p.times))


def test_stop_path_immediate_exit():
    p = simulate(BM, 1.0, 16, seed=2, x0=5.0)
    s = stop_path(p, -1.0, 1.0)
    assert s.exited and s.tau == 0.0
    assert s.times.size == 1 and s.terminal == 5.0
