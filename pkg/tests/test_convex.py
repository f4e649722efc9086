"""Young-function toolkit: builtin values, conjugates, certificates."""

import math

import numpy as np
import pytest

from bregvar.convex import (
    BREGMAN_SLACK,
    SimonenkoIndices,
    bregman_divergence,
    delta2_constant,
    doob_constant,
    legendre_transform,
    log_grid,
    simonenko_indices,
    young_builtin,
    young_from_callables,
)
from bregvar.errors import ConjugateUnresolvedError, ConvexityError, NotModerateError


def power_conjugate(p: float, gamma: float) -> float:
    """Closed-form conjugate of |x|^p: (p-1) p^(-p/(p-1)) |g|^(p/(p-1))."""
    q = p / (p - 1.0)
    return (p - 1.0) * p ** (-q) * abs(gamma) ** q


class TestBuiltins:
    def test_power_values(self):
        phi = young_builtin("power", p=2)
        assert phi(3.0) == 9.0
        assert phi.deriv(3.0) == 6.0
        assert phi.second_deriv(3.0) == 2.0

    def test_power_boundary_rejected(self):
        with pytest.raises(ValueError):
            young_builtin("power", p=1)
        with pytest.raises(ValueError):
            young_builtin("power", p=0.5)

    def test_plog_value(self):
        phi = young_builtin("plog", p=2, gamma=1)
        assert phi(1.0) == pytest.approx(math.log(math.e + 1.0), rel=1e-15)

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            young_builtin("exp")

    def test_plog_nonconvex_params_rejected(self):
        with pytest.raises((ConvexityError, ValueError)):
            young_builtin("plog", p=1.01, gamma=-50.0)

    @pytest.mark.parametrize("name,params", [("power", {"p": 2}), ("power", {"p": 3}), ("plog", {"p": 2, "gamma": 1})])
    def test_young_axioms_sampled(self, name, params):
        phi = young_builtin(name, **params)
        lam = np.linspace(-10, 10, 201)
        assert phi(0.0) == 0.0
        assert np.allclose(phi(-lam), phi(lam), rtol=0, atol=0)
        mid = phi((lam[:-1] + lam[1:]) / 2.0)
        assert np.all(mid <= 0.5 * (phi(lam[:-1]) + phi(lam[1:])) + 1e-12)
        small = np.logspace(-12, -2, 30)
        ratio = phi(small) / small
        assert np.all(np.diff(ratio) >= 0) and ratio[0] < 1e-9  # phi/lam -> 0 at 0+
        big = np.logspace(2, 8, 30)
        assert phi(big[-1]) / big[-1] > 1e3
        pos = np.logspace(-8, 8, 100)
        assert np.all(np.diff(phi.deriv(pos)) >= 0)
        assert phi.deriv(0.0) == 0.0


class TestBregman:
    def test_square_is_squared_increment(self):
        phi = young_builtin("power", p=2)
        assert bregman_divergence(phi, 1.0, 3.0) == 4.0
        x = np.linspace(-5, 5, 41)
        y = np.linspace(-5, 5, 41)
        xx, yy = np.meshgrid(x, y)
        assert np.allclose(bregman_divergence(phi, xx, yy), (yy - xx) ** 2, rtol=0, atol=1e-12)

    def test_zero_at_base_point(self):
        for phi in (young_builtin("power", p=3), young_builtin("plog", p=2, gamma=1)):
            assert bregman_divergence(phi, 1.7, 1.7) == 0.0

    def test_cubic_example(self):
        phi = young_builtin("power", p=3)
        assert bregman_divergence(phi, 1.0, 2.0) == pytest.approx(4.0, abs=1e-12)

    def test_power_formula_match(self):
        # explicit F_p = |y|^p - |x|^p - p |x|^(p-1) sgn(x) (y - x)
        rng = np.random.default_rng(5)
        for p in (2.0, 3.0, 4.0):
            phi = young_builtin("power", p=p)
            x = rng.uniform(-10, 10, 200)
            y = rng.uniform(-10, 10, 200)
            explicit = np.abs(y) ** p - np.abs(x) ** p - p * np.abs(x) ** (p - 1) * np.sign(x) * (y - x)
            got = bregman_divergence(phi, x, y)
            assert np.max(np.abs(got - np.maximum(explicit, 0.0))) < 1e-12 * max(1.0, np.max(np.abs(explicit)))

    def test_nonnegative_sampled(self):
        rng = np.random.default_rng(7)
        phi = young_builtin("plog", p=2, gamma=1)
        x = rng.uniform(-10, 10, 500)
        y = rng.uniform(-10, 10, 500)
        assert np.all(bregman_divergence(phi, x, y) >= 0.0)

    def test_convex_in_second_argument(self):
        rng = np.random.default_rng(11)
        phi = young_builtin("power", p=3)
        x = rng.uniform(-10, 10, 300)
        y1 = rng.uniform(-10, 10, 300)
        y2 = rng.uniform(-10, 10, 300)
        lhs = bregman_divergence(phi, x, 0.5 * (y1 + y2))
        rhs = 0.5 * (bregman_divergence(phi, x, y1) + bregman_divergence(phi, x, y2))
        assert np.all(lhs <= rhs + 1e-10)

    def test_nonconvex_input_raises(self):
        concave = young_from_callables(lambda t: -np.asarray(t) ** 2, lambda t: -2.0 * np.asarray(t))
        with pytest.raises(ConvexityError):
            bregman_divergence(concave, 0.0, 1.0)

    def test_rounding_noise_clamped(self):
        phi = young_builtin("power", p=2)
        got = bregman_divergence(phi, 1.0, 1.0 + 1e-9)
        assert got >= 0.0
        assert BREGMAN_SLACK == 1e-12


class TestLegendre:
    def test_square(self):
        phi = young_builtin("power", p=2)
        assert legendre_transform(phi, 2.0) == pytest.approx(1.0, abs=1e-10)

    def test_zero_gamma(self):
        for phi in (young_builtin("power", p=3), young_builtin("plog", p=2, gamma=1)):
            assert legendre_transform(phi, 0.0) == 0.0

    def test_cubic(self):
        phi = young_builtin("power", p=3)
        assert legendre_transform(phi, 3.0) == pytest.approx(2.0, abs=1e-10)

    @pytest.mark.parametrize("p", [1.5, 2.0, 2.5, 4.0])
    def test_closed_form_oracle(self, p):
        phi = young_builtin("power", p=p)
        for g in (0.3, 1.0, 4.7, 9.0):
            assert legendre_transform(phi, g) == pytest.approx(power_conjugate(p, g), rel=1e-9, abs=1e-11)

    def test_bracket_cap(self):
        # a derivative bounded by 1 never reaches gamma = 2
        slow = young_from_callables(
            lambda t: np.sqrt(1.0 + np.asarray(t) ** 2) - 1.0,
            lambda t: np.asarray(t) / np.sqrt(1.0 + np.asarray(t) ** 2),
        )
        with pytest.raises(ConjugateUnresolvedError):
            legendre_transform(slow, 2.0, bracket_cap=1e6)

    def test_young_inequality_sampled(self):
        # acceptance 13: 100x100 grid on [0,10]^2 with slack 1e-9
        for phi in (young_builtin("power", p=2), young_builtin("power", p=3), young_builtin("plog", p=2, gamma=1)):
            lams = np.linspace(0, 10, 100)
            gams = np.linspace(0, 10, 100)
            conj = np.array([legendre_transform(phi, g) for g in gams])
            lhs = np.outer(lams, gams)
            rhs = phi(lams)[:, None] + conj[None, :]
            assert np.all(lhs <= rhs + 1e-9)


class TestCertificates:
    def test_delta2_powers(self):
        assert delta2_constant(young_builtin("power", p=2)).k_phi == pytest.approx(4.0, abs=0)
        assert delta2_constant(young_builtin("power", p=3)).k_phi == pytest.approx(8.0, rel=1e-12)

    def test_delta2_plog_bracket(self):
        phi = young_builtin("plog", p=2, gamma=1)
        cert = delta2_constant(phi)
        assert 4.0 < cert.k_phi < 8.0
        assert not cert.exact
        # dense brute-force oracle to 1e-6
        lam = np.logspace(-8, 8, 400_000)
        oracle = np.max(phi(2 * lam) / phi(lam))
        assert cert.k_phi == pytest.approx(oracle, rel=1e-6)

    def test_simonenko_power(self):
        for p in (2.0, 3.0, 4.0):
            idx = simonenko_indices(young_builtin("power", p=p))
            assert idx.lower == pytest.approx(p, abs=1e-12)
            assert idx.upper == pytest.approx(p, abs=1e-12)

    def test_simonenko_grid_matches_closed_form(self):
        phi = young_builtin("power", p=2)
        est = simonenko_indices(phi, use_closed_forms=False)
        assert est.lower == pytest.approx(2.0, abs=1e-12)
        assert est.upper == pytest.approx(2.0, abs=1e-12)

    def test_simonenko_plog(self):
        idx = simonenko_indices(young_builtin("plog", p=2, gamma=1))
        assert idx.lower == pytest.approx(2.0, abs=1e-6)
        assert idx.upper <= 3.0
        assert idx.moderate

    def test_grid_span_required(self):
        with pytest.raises(ValueError):
            simonenko_indices(young_builtin("power", p=2), grid=log_grid(1e-4, 1e4, 50))

    def test_doob_constant(self):
        assert doob_constant(SimonenkoIndices(2.0, 2.0, True)) == 4.0
        assert doob_constant(SimonenkoIndices(3.0, 3.0, True)) == pytest.approx(3.375)
        with pytest.raises(NotModerateError):
            doob_constant(SimonenkoIndices(1.0, 5.0, True))

    def test_appendix_derivative_bound(self):
        # |phi'(x) y| <= D (phi(x) + phi(y)) sampled
        rng = np.random.default_rng(3)
        for phi in (young_builtin("power", p=3), young_builtin("plog", p=2, gamma=1)):
            big_d = simonenko_indices(phi).upper
            x = rng.uniform(-10, 10, 400)
            y = rng.uniform(-10, 10, 400)
            assert np.all(np.abs(phi.deriv(x) * y) <= big_d * (phi(x) + phi(y)) + 1e-9)


class TestNumericSecondDerivative:
    def test_central_difference_fallback(self):
        phi = young_from_callables(lambda t: np.asarray(t) ** 4, lambda t: 4.0 * np.asarray(t) ** 3)
        assert not phi.second_exact
        lam = np.array([0.5, 1.0, 2.0])
        assert np.allclose(phi.second_deriv(lam), 12.0 * lam**2, rtol=1e-6)


def test_delta2_degenerate_function_rejected():
    from bregvar.errors import DegenerateFunctionError
    from bregvar.convex import young_from_callables

    # vanishes on [0, 1]: not a Young function, flagged on the grid
    hinge = young_from_callables(
        lambda t: np.maximum(np.abs(t) - 1.0, 0.0) ** 2,
        lambda t: 2.0 * np.maximum(np.abs(t) - 1.0, 0.0) * np.sign(t),
    )
    with pytest.raises(DegenerateFunctionError):
        delta2_constant(hinge)
