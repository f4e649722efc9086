"""Luxemburg norm, moments, and the L1 + Linf split on discrete measures."""

import math

import numpy as np
import pytest

from bregvar.convex import young_builtin
from bregvar.orlicz import (
    DiscreteMeasure,
    decompose_l1_linf,
    luxemburg_norm,
    phi_moment,
    small_growth_threshold,
)


@pytest.fixture
def phi2():
    return young_builtin("power", p=2)


@pytest.fixture
def phi3():
    return young_builtin("power", p=3)


def test_measure_validation():
    with pytest.raises(ValueError):
        DiscreteMeasure(np.array([1.0]), np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        DiscreteMeasure(np.array([1.0]), np.array([-1.0]))
    with pytest.raises(ValueError):
        DiscreteMeasure(np.array([1.0]), np.array([0.0]))


def test_phi_moment_examples(phi2, phi3):
    mu = DiscreteMeasure(np.array([0.0, 1.0]), np.array([1.0, 1.0]))
    assert phi_moment([1.0, 2.0], mu, phi2) == 5.0
    assert phi_moment([0.0, 0.0], mu, phi2) == 0.0
    mu1 = DiscreteMeasure(np.array([0.0]), np.array([0.5]))
    assert phi_moment([3.0], mu1, phi3) == pytest.approx(13.5)


class TestLuxemburgNorm:
    def test_p_norm_oracle_example(self, phi2):
        mu = DiscreteMeasure(np.array([0.0, 1.0]), np.array([0.5, 0.5]))
        got = luxemburg_norm([3.0, 4.0], mu, phi2)
        assert got == pytest.approx(math.sqrt(12.5), rel=1e-9)

    def test_zero_function(self, phi2):
        mu = DiscreteMeasure(np.array([0.0, 1.0]), np.array([0.5, 0.5]))
        assert luxemburg_norm([0.0, 0.0], mu, phi2) == 0.0

    def test_homogeneity(self, phi3):
        rng = np.random.default_rng(2)
        mu = DiscreteMeasure(np.arange(6.0), rng.uniform(0.1, 1.0, 6))
        f = rng.normal(0, 2, 6)
        base = luxemburg_norm(f, mu, phi3)
        assert luxemburg_norm(2.5 * f, mu, phi3) == pytest.approx(2.5 * base, rel=1e-9)

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_p_norm_oracle_random(self, p):
        # acceptance 13: Luxemburg norm equals the p-norm to 1e-9
        phi = young_builtin("power", p=p)
        rng = np.random.default_rng(4)
        for _ in range(20):
            n = int(rng.integers(1, 12))
            mu = DiscreteMeasure(rng.normal(size=n), rng.uniform(0.05, 2.0, n))
            f = rng.normal(0, 3, n)
            oracle = float(np.sum(mu.weights * np.abs(f) ** p)) ** (1.0 / p)
            assert luxemburg_norm(f, mu, phi) == pytest.approx(oracle, rel=1e-9, abs=1e-12)

    def test_unit_modular(self):
        # int phi(f/||f||) <= 1, with equality for doubling phi and f != 0
        rng = np.random.default_rng(9)
        for phi in (young_builtin("power", p=2), young_builtin("plog", p=2, gamma=1)):
            for _ in range(25):
                n = int(rng.integers(1, 10))
                mu = DiscreteMeasure(rng.normal(size=n), rng.uniform(0.05, 2.0, n))
                f = rng.normal(0, 2, n)
                if not np.any(np.abs(f) > 0):
                    continue
                k = luxemburg_norm(f, mu, phi)
                modular = phi_moment(np.abs(f) / k, mu, phi)
                assert modular <= 1.0 + 1e-12
                assert modular == pytest.approx(1.0, abs=1e-8)

    def test_triangle_inequality(self, phi2):
        rng = np.random.default_rng(13)
        for _ in range(30):
            n = int(rng.integers(2, 10))
            mu = DiscreteMeasure(rng.normal(size=n), rng.uniform(0.05, 2.0, n))
            f, g = rng.normal(0, 2, n), rng.normal(0, 2, n)
            nf = luxemburg_norm(f, mu, phi2)
            ng = luxemburg_norm(g, mu, phi2)
            assert luxemburg_norm(f + g, mu, phi2) <= nf + ng + 1e-8

    def test_l1_embedding_on_probability_measures(self):
        # ||f||_1 <= A ||f||_phi with A = (1 + b)/a from any affine minorant
        rng = np.random.default_rng(17)
        phi = young_builtin("power", p=2)
        for lam_star in (0.5, 1.0, 2.0):
            a = float(phi.deriv(lam_star))
            b = a * lam_star - float(phi(lam_star))
            lam = np.linspace(0, 50, 1000)
            assert np.all(phi(lam) >= a * lam - b - 1e-9)  # affine minorant indeed
            for _ in range(10):
                n = int(rng.integers(2, 8))
                w = rng.uniform(0.1, 1.0, n)
                mu = DiscreteMeasure(rng.normal(size=n), w / w.sum())
                f = rng.normal(0, 3, n)
                l1 = float(np.sum(mu.weights * np.abs(f)))
                assert l1 <= (1.0 + b) / a * luxemburg_norm(f, mu, phi) + 1e-10


class TestDecomposition:
    def test_threshold_square(self, phi2):
        assert small_growth_threshold(phi2) == pytest.approx(1.0, abs=1e-10)

    def test_bounded_function_all_linf(self, phi2):
        mu = DiscreteMeasure(np.arange(4.0), np.full(4, 5.0))
        f = np.array([0.1, -0.2, 0.15, 0.05])
        norm = luxemburg_norm(f, mu, phi2)
        assert np.all(np.abs(f) < norm)  # bounded below the norm
        f1, finf, lam0 = decompose_l1_linf(f, mu, phi2)
        assert np.all(f1 == 0.0)
        assert np.array_equal(finf, f)

    def test_split_example(self, phi2):
        mu = DiscreteMeasure(np.array([0.0, 1.0]), np.array([0.5, 0.5]))
        f = np.array([0.5, 3.0])
        f1, finf, lam0 = decompose_l1_linf(f, mu, phi2)
        assert f1[0] == 0.0 and f1[1] == 3.0
        assert np.array_equal(f1 + finf, f)

    def test_parts_bounds(self):
        rng = np.random.default_rng(23)
        phi = young_builtin("plog", p=2, gamma=1)
        for _ in range(20):
            n = int(rng.integers(2, 12))
            mu = DiscreteMeasure(rng.normal(size=n), rng.uniform(0.05, 2.0, n))
            f = rng.normal(0, 4, n)
            if luxemburg_norm(f, mu, phi) == 0:
                continue
            f1, finf, lam0 = decompose_l1_linf(f, mu, phi)
            norm = luxemburg_norm(f, mu, phi)
            assert np.all(np.abs(finf) <= lam0 * norm + 1e-12)
            assert np.array_equal(f1 + finf, f)

    def test_zero_function_rejected(self, phi2):
        mu = DiscreteMeasure(np.array([0.0]), np.array([1.0]))
        with pytest.raises(ValueError):
            decompose_l1_linf([0.0], mu, phi2)
