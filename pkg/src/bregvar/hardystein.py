"""Quadrature and Monte-Carlo verification of the semigroup energy identities.

The parabolic identity is checked in its finite-horizon form: the spatial
phi-mass of f equals the time-integrated diffusion and jump terms plus the
exact remainder (the phi-mass of the terminal semigroup slice).  All spatial
work lives on the same periodic grid as the spectral semigroup, so the
accounting residual is pure time-quadrature and aliasing error.

The elliptic check is restricted to affine harmonic functions of Brownian
motion on an interval, the one desk-scale setting where the exit law, the
Green function, and harmonicity are all in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad
from scipy.stats import norm as _norm

from .convex import YoungFunction, bregman_divergence
from .errors import ResolutionError
from .paths import (
    CompoundPoisson,
    GaussianLaw,
    JumpPart,
    LevyModel,
    TruncatedStable,
    TwoPointLaw,
    UniformLaw,
    path_seed,
    simulate,
    stop_path,
)
from .reports import IdentityReport
from .semigroup import GridFunction, LevySymbol, apply_semigroup, semigroup_gradient, tail_mass

__all__ = [
    "ParabolicReport",
    "JumpQuadrature",
    "jump_quadrature",
    "parabolic_identity",
    "mc_parabolic",
    "elliptic_identity_bm",
    "elliptic_exit_mc",
    "interval_green_function",
]


@dataclass(frozen=True)
class JumpQuadrature:
    """Discretization of a jump measure for the spatial Bregman integral.

    ``z`` and ``mass`` are shift/weight pairs (exact atoms for discrete laws,
    measure-centroid cells otherwise); ``m2_inner`` is the second moment of
    the measure inside the inner band where the integrand is replaced by its
    small-jump Taylor proxy; ``dropped_mass`` is measure beyond the cap.
    """

    z: np.ndarray
    mass: np.ndarray
    m2_inner: float
    dropped_mass: float


def _stable_cells(js: TruncatedStable, dz: float, z_cap: float):
    """Cells with exact measure mass and measure centroid on [max(eps,dz), cap]."""
    a, c = js.alpha, js.c
    lo = js.eps
    inner_hi = min(max(lo, dz), z_cap)
    m2_inner = 0.0
    if inner_hi > lo:
        m2_inner = 2.0 * c * (inner_hi ** (2.0 - a) - lo ** (2.0 - a)) / (2.0 - a)
    cap = z_cap if js.z_max is None else min(js.z_max, z_cap)
    dropped = 0.0
    if js.z_max is None or js.z_max > cap:
        hi_mass = 0.0 if js.z_max is None else js.z_max ** (-a)
        dropped = 2.0 * c * (cap ** (-a) - hi_mass) / a
    edges = np.arange(inner_hi, cap + 0.5 * dz, dz)
    if edges.size < 2 or edges[-1] < cap:
        edges = np.append(edges[edges < cap], cap)
    z0, z1 = edges[:-1], edges[1:]
    mass = c * (z0 ** (-a) - z1 ** (-a)) / a
    if a == 1.0:
        centroid = c * np.log(z1 / z0) / mass
    else:
        centroid = c * (z0 ** (1.0 - a) - z1 ** (1.0 - a)) / (a - 1.0) / mass
    z = np.concatenate([centroid, -centroid])
    m = np.concatenate([mass, mass])
    return z, m, m2_inner, dropped


def jump_quadrature(jumps: JumpPart, dz: float, z_cap: float) -> JumpQuadrature:
    """Shift/mass decomposition of the jump measure for grid integration."""
    if isinstance(jumps, CompoundPoisson):
        lam, law = jumps.intensity, jumps.law
        if isinstance(law, TwoPointLaw):
            return JumpQuadrature(
                z=np.array([law.a, -law.a]), mass=np.array([lam / 2.0, lam / 2.0]), m2_inner=0.0, dropped_mass=0.0
            )
        if isinstance(law, UniformLaw):
            cap = min(law.a, z_cap)
            edges = np.linspace(0.0, cap, max(2, int(round(cap / dz)) + 1))
            z0, z1 = edges[:-1], edges[1:]
            mass = lam * (z1 - z0) / (2.0 * law.a)
            mid = 0.5 * (z0 + z1)
            dropped = lam * max(0.0, (law.a - cap)) / law.a
            return JumpQuadrature(
                z=np.concatenate([mid, -mid]),
                mass=np.concatenate([mass, mass]),
                m2_inner=0.0,
                dropped_mass=dropped,
            )
        if isinstance(law, GaussianLaw):
            cap = min(8.0 * law.s, z_cap)
            edges = np.linspace(0.0, cap, max(2, int(round(cap / dz)) + 1))
            cdf = _norm.cdf(edges / law.s)
            mass = lam * np.diff(cdf)
            mid = 0.5 * (edges[:-1] + edges[1:])
            dropped = 2.0 * lam * (1.0 - _norm.cdf(cap / law.s))
            return JumpQuadrature(
                z=np.concatenate([mid, -mid]),
                mass=np.concatenate([mass, mass]),
                m2_inner=0.0,
                dropped_mass=dropped,
            )
        raise TypeError(f"unsupported jump law {type(law).__name__}")
    if isinstance(jumps, TruncatedStable):
        z, m, m2, dropped = _stable_cells(jumps, dz, z_cap)
        return JumpQuadrature(z=z, mass=m, m2_inner=m2, dropped_mass=dropped)
    raise TypeError(f"unsupported jump part {type(jumps).__name__}")


@dataclass(frozen=True)
class ParabolicReport:
    """Finite-horizon energy accounting for one (f, symbol, phi) setup.

    ``residual = lhs - rhs_diffusion - rhs_jump`` should match ``rhs_tail``
    up to the declared quadrature tolerance; ``accounting_rel`` is that gap
    relative to lhs.
    """

    lhs: float
    rhs_diffusion: float
    rhs_jump: float
    rhs_tail: float
    horizon: float
    n_time_nodes: int
    quad_tol: float
    wrap_mass: float
    jump_mass_dropped: float

    @property
    def residual(self) -> float:
        return self.lhs - self.rhs_diffusion - self.rhs_jump

    @property
    def rel_residual(self) -> float:
        return self.residual / max(abs(self.lhs), 1e-300)

    @property
    def accounting_gap(self) -> float:
        return self.residual - self.rhs_tail

    @property
    def accounting_rel(self) -> float:
        return abs(self.accounting_gap) / max(abs(self.lhs), 1e-300)

    @property
    def passed(self) -> bool:
        return self.accounting_rel <= self.quad_tol

    def as_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs_diffusion": self.rhs_diffusion,
            "rhs_jump": self.rhs_jump,
            "rhs_tail": self.rhs_tail,
            "residual": self.residual,
            "rel_residual": self.rel_residual,
            "accounting_gap": self.accounting_gap,
            "accounting_rel": self.accounting_rel,
            "horizon": self.horizon,
            "n_time_nodes": self.n_time_nodes,
            "quad_tol": self.quad_tol,
            "wrap_mass": self.wrap_mass,
            "jump_mass_dropped": self.jump_mass_dropped,
            "verdict": "pass" if self.passed else "fail",
        }


def _time_panels(T: float, K: int):
    """Geometric octave panels [T 2^-(k+1), T 2^-k], k = K..0, plus the
    remaining stub [0, T 2^-(K+1)] so the panels tile [0, T]."""
    edges = [0.0, T * 2.0 ** -(K + 1)]
    for k in range(K, -1, -1):
        edges.append(T * 2.0**-k)
    return edges


def _gauss_nodes(edges, n_nodes: int):
    ref_x, ref_w = np.polynomial.legendre.leggauss(n_nodes)
    ts, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        ts.append(0.5 * (a + b) + half * ref_x)
        ws.append(half * ref_w)
    return np.concatenate(ts), np.concatenate(ws)


def _boundary_clear(f: GridFunction, cells: int = 10, rel: float = 1e-10):
    peak = float(np.max(np.abs(f.values)))
    if peak == 0.0:
        return
    edge = max(float(np.max(np.abs(f.values[:cells]))), float(np.max(np.abs(f.values[-cells:]))))
    if edge > rel * peak:
        raise ResolutionError(
            f"f carries mass within {cells} cells of the domain boundary (ratio {edge / peak:.2e}); enlarge L"
        )


def parabolic_identity(
    f: GridFunction,
    symbol: LevySymbol,
    phi: YoungFunction,
    T: float = 8.0,
    K: int = 14,
    nodes_per_panel: int = 12,
    dz: Optional[float] = None,
    z_cap: Optional[float] = None,
    quad_tol: float = 1e-3,
    second_deriv_override: Optional[Callable] = None,
) -> ParabolicReport:
    """Finite-horizon accounting of the spatial phi-mass of f.

    Time integration is composite Gauss-Legendre on geometric octaves of
    [0, T]; each node costs one semigroup application and one spectral
    gradient.  Jump shifts are evaluated spectrally (periodic wrap), so the
    whole computation is consistent with the periodized process and the
    accounting gap is time-quadrature plus aliasing error only.

    ``second_deriv_override`` substitutes the diffusion-term second
    derivative (used to cross-check explicit power-law forms).
    """
    if not phi.has_second_deriv and second_deriv_override is None:
        raise ValueError("phi needs a second derivative for the diffusion term")
    _boundary_clear(f)
    d2 = second_deriv_override if second_deriv_override is not None else phi.second_deriv
    dx = f.dx
    lhs = float(np.sum(phi(f.values))) * dx

    jq = None
    if symbol.jumps is not None:
        dz_eff = 0.5 * dx if dz is None else dz
        cap_eff = 0.5 * f.L if z_cap is None else z_cap
        jq = jump_quadrature(symbol.jumps, dz_eff, cap_eff)
        # cos transform of the cell measure: the y-sum of the Bregman
        # integrand against the cells collapses to a spectral correlation
        # because F is affine in its second slot up to a shift-invariant term
        w_hat = np.cos(np.outer(f.xi, jq.z)) @ jq.mass
        m_tot = float(jq.mass.sum())

    t_nodes, t_weights = _gauss_nodes(_time_panels(T, K), nodes_per_panel)

    rhs_diffusion = 0.0
    rhs_jump = 0.0
    sigma2 = symbol.sigma2
    for t, w in zip(t_nodes, t_weights):
        u = apply_semigroup(f, symbol, float(t)).values
        du = semigroup_gradient(f, symbol, float(t)).values
        kinetic = d2(u) * du**2
        if sigma2 > 0.0:
            rhs_diffusion += w * 0.5 * sigma2 * float(np.sum(kinetic)) * dx
        if jq is not None:
            g = phi.deriv(u)
            cross = (np.conj(np.fft.fft(g)) * np.fft.fft(u)).real
            node_jump = dx * (m_tot * float(np.sum(g * u)) - float(cross @ w_hat) / u.size)
            if jq.m2_inner > 0.0:
                node_jump += 0.5 * jq.m2_inner * float(np.sum(kinetic)) * dx
            rhs_jump += w * node_jump

    u_terminal = apply_semigroup(f, symbol, T)
    rhs_tail = float(np.sum(phi(u_terminal.values))) * dx

    return ParabolicReport(
        lhs=lhs,
        rhs_diffusion=rhs_diffusion,
        rhs_jump=rhs_jump,
        rhs_tail=rhs_tail,
        horizon=T,
        n_time_nodes=t_nodes.size,
        quad_tol=quad_tol,
        wrap_mass=tail_mass(u_terminal, 0.5 * f.L),
        jump_mass_dropped=0.0 if jq is None else jq.dropped_mass,
    )


def mc_parabolic(
    f: GridFunction,
    model: LevyModel,
    phi: YoungFunction,
    T: float,
    n_paths: int,
    seed: int,
    x0_half_width: float = 12.0,
    n_x0: int = 32,
    n_steps: int = 128,
    dz: Optional[float] = None,
    z_cap: Optional[float] = None,
) -> IdentityReport:
    """Monte-Carlo route to the parabolic identity through the bridged
    martingale P_{T-t} f(Z_t).

    Along each path the divergence is accumulated in expectation-equivalent
    form: the time integral of the diffusion term plus the jump compensator
    (integral against the jump measure rather than raw jump sums, which cuts
    the variance dramatically).  Starting points average over a uniform grid
    to emulate the spatial integral.
    """
    if model.jumps is None and model.sigma2 <= 0.0:
        raise ValueError("need a nondegenerate model")
    symbol = LevySymbol.from_model(model)
    lhs = float(np.sum(phi(f.values))) * f.dx

    # semigroup slices at the left endpoints of the time steps
    ds = T / n_steps
    s_grid = ds * np.arange(n_steps)
    slices_u = []
    slices_g = []
    for s in s_grid:
        slices_u.append(apply_semigroup(f, symbol, float(T - s)).values)
        slices_g.append(semigroup_gradient(f, symbol, float(T - s)).values)
    u0 = slices_u[0]

    jq = None
    if model.jumps is not None:
        dz_eff = 2.0 * f.dx if dz is None else dz
        cap_eff = 0.5 * f.L if z_cap is None else z_cap
        jq = jump_quadrature(model.jumps, dz_eff, cap_eff)

    x_lo, x_hi = float(f.x[0]), float(f.x[-1])
    # starting points sit exactly on the spatial grid so slice lookups at
    # time zero carry no interpolation error and the rule bias is computable
    stride = max(1, int(round(2.0 * x0_half_width / (n_x0 * f.dx))))
    first = int(np.argmin(np.abs(f.x + x0_half_width)))
    idx0 = np.arange(first, f.n, stride)
    idx0 = idx0[f.x[idx0] <= x0_half_width]
    x0s = f.x[idx0]
    dx0 = stride * f.dx
    n_per = n_paths // x0s.size
    if n_per < 2:
        raise ValueError("need at least 2 paths per starting point")

    # deterministic error of the x0 quadrature rule, computable exactly:
    # x0 -> E_x0 phi(f(Z_T)) is the semigroup applied to phi(f)
    w_exact = apply_semigroup(GridFunction(f.L, phi(f.values)), symbol, T)
    x0_rule_err = abs(dx0 * float(np.sum(w_exact.values[idx0])) - w_exact.integral())

    estimate = 0.0
    coarse_estimate = 0.0
    var_acc = 0.0
    step_times = np.arange(n_steps, dtype=float) * T / n_steps
    for j, x0 in enumerate(x0s):
        z_at_steps = np.empty((n_per, n_steps))
        for i in range(n_per):
            p = simulate(model, T, n_steps, path_seed(seed, (j, i)), x0=float(x0))
            z_at_steps[i] = p.values[np.searchsorted(p.times, step_times)]
        if np.any(z_at_steps < x_lo) or np.any(z_at_steps > x_hi):
            raise ValueError("path left the interpolation grid; enlarge L")
        v = np.full(n_per, float(phi(np.interp(x0, f.x, u0))))
        v_coarse = v.copy()
        for k in range(n_steps):
            zk = z_at_steps[:, k]
            uk = np.interp(zk, f.x, slices_u[k])
            gk = np.interp(zk, f.x, slices_g[k])
            inc = 0.5 * model.sigma2 * phi.second_deriv(uk) * gk**2
            if jq is not None:
                comp = np.zeros(n_per)
                for z_shift, mass in zip(jq.z, jq.mass):
                    u_shift = np.interp(np.clip(zk + z_shift, x_lo, x_hi), f.x, slices_u[k])
                    comp += mass * bregman_divergence(phi, uk, u_shift)
                if jq.m2_inner > 0.0:
                    comp += 0.5 * jq.m2_inner * phi.second_deriv(uk) * gk**2
                inc = inc + comp
            v += ds * inc
            if k % 2 == 0:
                v_coarse += 2.0 * ds * inc
        estimate += dx0 * float(np.mean(v))
        coarse_estimate += dx0 * float(np.mean(v_coarse))
        var_acc += dx0**2 * float(np.var(v, ddof=1)) / n_per

    se = math.sqrt(var_acc)
    allowance = abs(estimate - coarse_estimate) + x0_rule_err
    return IdentityReport.monte_carlo(lhs, estimate, se, n_per * n_x0, allowance)


def interval_green_function(x: float, y, l: float, r: float, sigma2: float):
    """Green function of (sigma2/2) d^2/dx^2 on (l, r):
    G(x, y) = (2/sigma2) (min(x,y) - l)(r - max(x,y)) / (r - l)."""
    y = np.asarray(y, dtype=float)
    lo = np.minimum(x, y)
    hi = np.maximum(x, y)
    return (2.0 / sigma2) * (lo - l) * (r - hi) / (r - l)


def elliptic_identity_bm(
    a_coef: float,
    b_coef: float,
    phi: YoungFunction,
    l: float,
    r: float,
    x: float,
    sigma2: float = 1.0,
    rtol: float = 1e-10,
) -> IdentityReport:
    """Exit-value phi-mass of an affine harmonic function versus the Green
    integral of the diffusion term, on an interval.

    lhs is the exact exit expectation (exit-right probability is the scaled
    distance); rhs adds the Green integral of (sigma2/2) phi''(u) a^2 to
    phi(u(x)).  Both sides are closed-form or adaptive quadrature to 1e-10.
    """
    if not l < x < r:
        raise ValueError("x must lie inside (l, r)")
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")

    def u(y):
        return a_coef * y + b_coef

    p_right = (x - l) / (r - l)
    lhs = (1.0 - p_right) * float(phi(u(l))) + p_right * float(phi(u(r)))
    if a_coef == 0.0:
        rhs = float(phi(b_coef))
    else:
        integrand = lambda y: interval_green_function(x, y, l, r, sigma2) * 0.5 * sigma2 * float(
            phi.second_deriv(u(y))
        ) * a_coef**2
        green_term, _ = quad(integrand, l, r, points=[x], limit=200, epsabs=1e-13, epsrel=1e-12)
        rhs = float(phi(u(x))) + green_term
    return IdentityReport.exact(lhs, rhs, rtol)


def elliptic_exit_mc(
    a_coef: float,
    b_coef: float,
    phi: YoungFunction,
    l: float,
    r: float,
    x: float,
    sigma2: float,
    t_cap: float,
    n_paths: int,
    seed: int,
    grid_m: int = 32768,
) -> IdentityReport:
    """Monte-Carlo exit sampling of the elliptic left side.

    Exit detection at grid times overshoots by O(sqrt(dt)); pick ``grid_m``
    large enough that the documented bias sits below the statistical error.
    """
    model = LevyModel(sigma2=sigma2)
    vals = np.empty(n_paths)
    for i in range(n_paths):
        p = simulate(model, t_cap, grid_m, path_seed(seed, i), x0=x)
        s = stop_path(p, l, r)
        vals[i] = float(phi(a_coef * s.terminal + b_coef))
    p_right = (x - l) / (r - l)
    lhs = (1.0 - p_right) * float(phi(a_coef * l + b_coef)) + p_right * float(phi(a_coef * r + b_coef))
    se = float(vals.std(ddof=1) / math.sqrt(n_paths))
    return IdentityReport.monte_carlo(lhs, float(vals.mean()), se, n_paths)
