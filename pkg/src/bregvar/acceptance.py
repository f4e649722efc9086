"""The acceptance suite: thirteen checks covering every verified identity.

Each criterion pins its tolerances here; ``tolerance_scale`` multiplies them
(0 is the tamper negative-control: every check must then fail loudly).
``level="quick"`` shrinks sample counts and grids but keeps the tolerance
structure; statistical verdicts adapt through their standard errors.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List

import numpy as np

from . import __version__
from .convex import (
    bregman_divergence,
    delta2_constant,
    doob_constant,
    legendre_transform,
    simonenko_indices,
    young_builtin,
)
from .errors import CheckFailure
from .hardystein import elliptic_exit_mc, elliptic_identity_bm, mc_parabolic, parabolic_identity
from .orlicz import DiscreteMeasure, luxemburg_norm
from .paths import (
    CompoundPoisson,
    LevyModel,
    TruncatedStable,
    TwoPointLaw,
    path_seed,
    refine_partition,
    simulate,
    stop_path,
)
from .semigroup import GridFunction, LevySymbol, apply_semigroup, transition_density
from .variation import (
    discrete_variation,
    integral_partition_sum,
    pathwise_variation,
    realized_qv,
    variation_via_definition,
)
from .verify import (
    FiniteMartingale,
    conditional_identity,
    doob_check,
    enumerate_isometry,
    mc_isometry_multi,
    mc_stopped_isometry,
    parallelogram_residual,
    sum_of_independent,
)

BM1 = LevyModel(sigma2=1.0)
CP2 = LevyModel(sigma2=0.0, jumps=CompoundPoisson(2.0, TwoPointLaw(1.0)))
JD = LevyModel(sigma2=1.0, jumps=CompoundPoisson(2.0, TwoPointLaw(1.0)))


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: Dict[str, float] = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.name} ({self.seconds:.1f}s)"


def _phis():
    return {
        "x^2": young_builtin("power", p=2),
        "x^3": young_builtin("power", p=3),
        "x^4": young_builtin("power", p=4),
        "x^2 log(e+x)": young_builtin("plog", p=2, gamma=1),
    }


def criterion_1_discrete_isometry(seed: int, scale: float, quick: bool) -> CheckResult:
    """Exact phi-isometry on randomized finite martingales, plus the
    +-1-walk / quartic / n=3 value 21 from brute force."""
    n_trees = 50 if quick else 200
    tol = 1e-10 * scale
    rng = np.random.default_rng(seed)
    phis = _phis()
    worst = 0.0
    ok = True
    for _ in range(n_trees):
        tree = FiniteMartingale.random_tree(int(rng.integers(1, 9)), rng)
        for phi in phis.values():
            rep = enumerate_isometry(tree, phi)
            worst = max(worst, rep.rel_err)
            ok &= rep.rel_err <= tol
    walk = enumerate_isometry(FiniteMartingale.pm1_walk(3), phis["x^4"])
    walk_ok = abs(walk.lhs - 21.0) <= 1e-12 * 21 * scale and abs(walk.rhs - 21.0) <= 1e-12 * 21 * scale
    return CheckResult(
        "discrete phi-isometry (200 trees, 4 phis; +-1 walk = 21)",
        bool(ok and walk_ok),
        {"worst_rel_err": worst, "walk_lhs": walk.lhs, "walk_rhs": walk.rhs, "n_trees": n_trees},
    )


def criterion_2_conditional_identity(seed: int, scale: float, quick: bool) -> CheckResult:
    """E phi(Y) = E phi(X) + E F(X, Y) on randomized finite spaces."""
    n_spaces = 100 if quick else 500
    tol = 1e-12 * scale
    rng = np.random.default_rng(seed + 1)
    phis = list(_phis().values())
    worst = 0.0
    done = 0
    while done < n_spaces:
        n = int(rng.integers(2, 16))
        p = rng.dirichlet(np.ones(n))
        y = rng.uniform(-2, 2, n)
        cells = rng.integers(0, max(2, n // 2), n)
        if np.any(np.bincount(cells, weights=p) == 0.0):
            continue
        rep = conditional_identity(p, y, cells, phis[done % len(phis)])
        worst = max(worst, rep.rel_err)
        done += 1
    return CheckResult(
        "conditional three-term identity (500 random spaces)",
        bool(worst <= tol),
        {"worst_rel_err": worst, "n_spaces": n_spaces},
    )


def criterion_3_mc_isometry(seed: int, scale: float, quick: bool, workers: int = 1) -> CheckResult:
    """Monte-Carlo phi-isometry for Brownian and two-point compound-Poisson
    martingales, with the variance oracle for the square."""
    n_paths = 10_000 if quick else 100_000
    phis = _phis()
    pair = [phis["x^2"], phis["x^3"]]
    details: Dict[str, float] = {"n_paths": n_paths}
    ok = True
    for tag, model, oracle in (("bm", BM1, 1.0), ("cp", CP2, 2.0)):
        reports = mc_isometry_multi(model, pair, 0.0, 1.0, n_paths, seed + 2, grid_m=32, workers=workers)
        for phi_tag, rep in zip(("x2", "x3"), reports):
            gap_ok = abs(rep.lhs - rep.rhs) <= scale * (3.0 * rep.stderr + rep.grid_allowance)
            ok &= gap_ok
            details[f"{tag}_{phi_tag}_lhs"] = rep.lhs
            details[f"{tag}_{phi_tag}_rhs"] = rep.rhs
            details[f"{tag}_{phi_tag}_stderr"] = rep.stderr
            details[f"{tag}_{phi_tag}_allowance"] = rep.grid_allowance
        rep2 = reports[0]
        ok &= abs(rep2.lhs - oracle) <= scale * 3.0 * rep2.lhs_stderr
        details[f"{tag}_variance_oracle"] = oracle
    return CheckResult("continuous phi-isometry (MC, BM and two-point CP)", bool(ok), details)


def criterion_4_routes_refinement(seed: int, scale: float, quick: bool) -> CheckResult:
    """Definition-route vs pathwise-route gap shrinks under dyadic
    refinement; jump-complete partitions make the two routes agree exactly."""
    phi = young_builtin("power", p=3)
    n_paths = 10 if quick else 50
    levels = (4, 6, 8)
    gaps = {lvl: [] for lvl in levels}
    for i in range(n_paths):
        p = simulate(JD, 1.0, 4 * 2**8, path_seed(seed + 3, i))
        vp = pathwise_variation(phi, p).terminal
        for lvl in levels:
            part = refine_partition(p, lvl, base_m=4)
            gaps[lvl].append(abs(variation_via_definition(phi, p, part) - vp))
    med = [float(np.median(gaps[lvl])) for lvl in levels]
    monotone = med[0] > med[1] > med[2]

    pure = LevyModel(sigma2=0.0, jumps=CompoundPoisson(3.0, TwoPointLaw(1.0)))
    worst = 0.0
    for i in range(20):
        p = simulate(pure, 1.0, 8, path_seed(seed + 4, i), x0=0.3)
        part = refine_partition(p, 0)
        vd = variation_via_definition(phi, p, part)
        vp = pathwise_variation(phi, p).terminal
        worst = max(worst, abs(vd - vp) / max(abs(vp), 1.0))
    exact_ok = worst <= 1e-10 * scale
    return CheckResult(
        "definition vs pathwise route (dyadic refinement; pure-jump exact)",
        bool(monotone and exact_ok),
        {"median_n4": med[0], "median_n6": med[1], "median_n8": med[2], "pure_jump_worst_rel": worst},
    )


def criterion_5_stopping_commutation(seed: int, scale: float, quick: bool) -> CheckResult:
    """Trace of the stopped path equals the stopped trace, bitwise."""
    phis = [young_builtin("power", p=2), young_builtin("power", p=3)]
    n_paths = 20 if quick else 100
    ok = True
    exits = 0
    for i in range(n_paths):
        p = simulate(JD, 1.0, 64, path_seed(seed + 5, i))
        s = stop_path(p, -1.0, 1.0)
        exits += bool(s.exited)
        for phi in phis:
            tr_s = pathwise_variation(phi, s)
            tr_f = pathwise_variation(phi, p)
            ok &= bool(np.array_equal(tr_s.v, tr_f.v[: s.times.size]))
    return CheckResult(
        "stopping commutation (bitwise on shared nodes)",
        bool(ok and exits > 0 and scale > 0),
        {"n_paths": n_paths, "n_exited": exits},
    )


def criterion_6_quadratic_specialization(seed: int, scale: float, quick: bool) -> CheckResult:
    """Every route reproduces its exact square-case identity to 1e-10."""
    phi2 = young_builtin("power", p=2)
    tol = 1e-10 * scale
    worst = 0.0
    n_paths = 5 if quick else 20
    for i in range(n_paths):
        p = simulate(JD, 1.0, 64, path_seed(seed + 6, i), x0=0.3)
        jumps_sq = np.where(p.is_jump, (p.values - p.x_left) ** 2, 0.0)
        oracle = 0.3**2 + p.qv_cont_rate * p.times + np.cumsum(jumps_sq)
        tr = pathwise_variation(phi2, p)
        worst = max(worst, float(np.max(np.abs(tr.v - oracle))))
        # discrete route: x0^2 plus cumulative squared increments
        trd = discrete_variation(phi2, p.values)
        oracle_d = 0.3**2 + np.concatenate(([0.0], np.cumsum(np.diff(p.values) ** 2)))
        worst = max(worst, float(np.max(np.abs(trd.v - oracle_d))))
        # definition route over a partition: x0^2 plus realized QV
        part = refine_partition(p, 0)
        vd = variation_via_definition(phi2, p, part)
        worst = max(worst, abs(vd - (0.3**2 + realized_qv(p, part))))
    return CheckResult(
        "quadratic specialization of all routes",
        bool(worst <= tol),
        {"worst_abs_err": worst, "n_paths": n_paths},
    )


def criterion_7_doob(seed: int, scale: float, quick: bool, workers: int = 1) -> CheckResult:
    """Maximal inequality E sup phi <= C_phi E phi(X_T) + 3 SE."""
    n_paths = 5_000 if quick else 20_000
    phis = _phis()
    ok = True
    details: Dict[str, float] = {"n_paths": n_paths}
    c2 = doob_constant(simonenko_indices(phis["x^2"]))
    ok &= abs(c2 - 4.0) <= 1e-12
    details["c_phi_square"] = c2
    for tag, model in (("bm", BM1), ("cp", CP2)):
        for phi_tag, phi in (("x2", phis["x^2"]), ("x3", phis["x^3"])):
            rep = doob_check(model, phi, 1.0, n_paths, seed + 7, workers=workers)
            ok &= rep.lhs <= rep.rhs + scale * rep.tol
            details[f"{tag}_{phi_tag}_sup"] = rep.lhs
            details[f"{tag}_{phi_tag}_bound"] = rep.rhs
    return CheckResult("Doob phi-inequality (MC)", bool(ok), details)


def criterion_8_sum_of_independent(seed: int, scale: float, quick: bool, workers: int = 1) -> CheckResult:
    """Two-sided divergence bounds for sums, square additivity, and the
    quartic parallelogram residual 16 + 0 vs 4."""
    n_paths = 5_000 if quick else 20_000
    phis = _phis()
    ok = True
    details: Dict[str, float] = {"n_paths": n_paths}
    for tag, phi in (("x2", phis["x^2"]), ("x4", phis["x^4"])):
        rep = sum_of_independent(BM1, CP2, phi, 1.0, n_paths, seed + 8, workers=workers, sigmas=3.0 * scale)
        ok &= rep.passed
        details[f"{tag}_e_sum"] = rep.e_sum
        details[f"{tag}_e_parts"] = rep.e_x + rep.e_y
    rep2 = sum_of_independent(BM1, CP2, phis["x^2"], 1.0, n_paths, seed + 8, workers=workers)
    add_ok = abs(rep2.additivity_gap) <= scale * (3.0 * rep2.se_additivity + 1e-10)
    resid = parallelogram_residual(phis["x^4"], 1.0, 1.0)
    resid_ok = resid == 12.0 and scale > 0
    resid2 = parallelogram_residual(phis["x^2"], 1.0, 1.0)
    ok &= add_ok and resid_ok and (abs(resid2) <= 1e-12 * scale)
    details["additivity_gap"] = rep2.additivity_gap
    details["parallelogram_x4"] = resid
    details["parallelogram_x2"] = resid2
    return CheckResult("sum-of-independent bounds, additivity, parallelogram", bool(ok), details)


def criterion_9_semigroup(seed: int, scale: float, quick: bool) -> CheckResult:
    """Density engine: point value, mass, Chapman-Kolmogorov, contraction."""
    m = 11 if quick else 12
    tol = 1e-8 * scale
    sym = LevySymbol(sigma2=2.0)
    p1 = transition_density(sym, 1.0, 40.0, m)
    i0 = int(np.argmin(np.abs(p1.x)))
    err_pt = abs(p1.values[i0] - (4.0 * math.pi) ** -0.5)
    err_mass = abs(p1.integral() - 1.0)
    ps = transition_density(sym, 0.4, 40.0, m)
    pt = transition_density(sym, 0.6, 40.0, m)
    conv = np.fft.fftshift(
        np.fft.ifft(np.fft.fft(np.fft.ifftshift(ps.values)) * np.fft.fft(np.fft.ifftshift(pt.values))).real
    ) * ps.dx
    err_ck = float(np.max(np.abs(conv - p1.values)))
    f = GridFunction.from_callable(lambda x: np.exp(-(x**2) / 2.0), 40.0, m)
    mu = DiscreteMeasure.uniform_grid(f.x, f.dx)
    contraction_ok = True
    for phi in (young_builtin("power", p=2), young_builtin("power", p=3)):
        n0 = luxemburg_norm(f.values, mu, phi)
        for t in (0.1, 1.0):
            nt = luxemburg_norm(apply_semigroup(f, sym, t).values, mu, phi)
            contraction_ok &= nt <= n0 + (1e-10 if scale > 0 else -1.0)
    ok = err_pt <= tol and err_mass <= tol and err_ck <= tol and contraction_ok
    return CheckResult(
        "semigroup engine (density value, mass, Chapman-Kolmogorov, contraction)",
        bool(ok),
        {"point_err": err_pt, "mass_err": err_mass, "ck_err": err_ck},
    )


def criterion_10_parabolic_gaussian(seed: int, scale: float, quick: bool) -> CheckResult:
    """Heat-semigroup accounting for p in {2, 3} and the explicit-power
    cross-route agreement."""
    m, K = (11, 10) if quick else (12, 14)
    tol_acc = 1e-3 * scale
    tol_route = 1e-10 * scale
    f = GridFunction.from_callable(lambda x: np.exp(-(x**2) / 2.0), 40.0, m)
    sym = LevySymbol(sigma2=2.0)
    ok = True
    details: Dict[str, float] = {}
    for p in (2.0, 3.0):
        phi = young_builtin("power", p=p)
        rep = parabolic_identity(f, sym, phi, T=8.0, K=K, quad_tol=tol_acc)
        explicit = lambda u, _p=p: _p * (_p - 1.0) * np.abs(u) ** (_p - 2.0)
        rep_alt = parabolic_identity(f, sym, phi, T=8.0, K=K, second_deriv_override=explicit)
        route_gap = abs(rep.rhs_diffusion - rep_alt.rhs_diffusion) / max(rep.rhs_diffusion, 1e-300)
        ok &= rep.accounting_rel <= tol_acc and route_gap <= tol_route
        details[f"p{int(p)}_accounting_rel"] = rep.accounting_rel
        details[f"p{int(p)}_route_gap"] = route_gap
        details[f"p{int(p)}_lhs"] = rep.lhs
    return CheckResult("parabolic identity, Gaussian case (accounting + route)", bool(ok), details)


def criterion_11_parabolic_mixed(seed: int, scale: float, quick: bool) -> CheckResult:
    """Mixed diffusion+jump accounting: two-point and truncated stable."""
    m, K = (11, 10) if quick else (12, 14)
    phi2 = young_builtin("power", p=2)
    f = GridFunction.from_callable(lambda x: np.exp(-(x**2) / 2.0), 40.0, m)
    sym_tp = LevySymbol(sigma2=1.0, jumps=CompoundPoisson(1.0, TwoPointLaw(1.0)))
    rep_tp = parabolic_identity(f, sym_tp, phi2, T=8.0, K=K, quad_tol=5e-3 * scale)
    sym_st = LevySymbol(sigma2=1.0, jumps=TruncatedStable(alpha=1.5, c=0.5, eps=0.1, z_max=10.0))
    rep_st = parabolic_identity(f, sym_st, phi2, T=8.0, K=K, dz=0.25 * f.dx, quad_tol=1e-2 * scale)
    rep_st_half = parabolic_identity(f, sym_st, phi2, T=8.0, K=K, dz=0.125 * f.dx)
    refine_rel = abs(rep_st_half.rhs_jump - rep_st.rhs_jump) / max(rep_st.rhs_jump, 1e-300)
    ok = rep_tp.passed and rep_st.passed and refine_rel <= 1e-4 * scale
    return CheckResult(
        "parabolic identity, mixed regimes (two-point; truncated stable)",
        bool(ok),
        {
            "two_point_accounting_rel": rep_tp.accounting_rel,
            "stable_accounting_rel": rep_st.accounting_rel,
            "stable_z_refinement_rel": refine_rel,
            "stable_jump_term": rep_st.rhs_jump,
        },
    )


def criterion_12_elliptic(seed: int, scale: float, quick: bool) -> CheckResult:
    """Interval exit identity for affine harmonic u, exact and MC."""
    phi2 = young_builtin("power", p=2)
    phi4 = young_builtin("power", p=4)
    r2 = elliptic_identity_bm(1.0, 0.0, phi2, 0.0, 1.0, 0.5, 1.0)
    r4 = elliptic_identity_bm(1.0, 0.0, phi4, 0.0, 1.0, 0.5, 1.0)
    exact_ok = (
        abs(r2.lhs - 0.5) <= 1e-12
        and r2.rel_err <= 1e-10 * scale
        and r4.rel_err <= 1e-8 * scale
    )
    n_mc, grid_m = (500, 8192) if quick else (2000, 32768)
    rmc = elliptic_exit_mc(1.0, 0.0, phi2, 0.0, 1.0, 0.5, 1.0, t_cap=5.0, n_paths=n_mc, seed=seed + 12, grid_m=grid_m)
    mc_ok = abs(rmc.lhs - rmc.rhs) <= scale * 3.0 * rmc.stderr
    return CheckResult(
        "elliptic identity on an interval (exact + MC exit)",
        bool(exact_ok and mc_ok),
        {
            "square_rel_err": r2.rel_err,
            "quartic_rel_err": r4.rel_err,
            "mc_mean": rmc.rhs,
            "mc_stderr": rmc.stderr,
        },
    )


def criterion_13_convex_toolkit(seed: int, scale: float, quick: bool) -> CheckResult:
    """Young's inequality on a sample grid, exact power indices, and the
    p-norm oracle for the Luxemburg norm."""
    phis = _phis()
    ineq_ok = True
    worst_gap = -math.inf
    for phi in (phis["x^2"], phis["x^3"], phis["x^2 log(e+x)"]):
        lams = np.linspace(0, 10, 100)
        gams = np.linspace(0, 10, 100)
        conj = np.array([legendre_transform(phi, g) for g in gams])
        gap = np.outer(lams, gams) - phi(lams)[:, None] - conj[None, :]
        worst_gap = max(worst_gap, float(gap.max()))
        ineq_ok &= bool(np.all(gap <= 1e-9 * scale))

    idx_ok = True
    worst_idx = 0.0
    for p in (1.5, 2.0, 3.0, 4.0):
        idx = simonenko_indices(young_builtin("power", p=p))
        worst_idx = max(worst_idx, abs(idx.lower - p), abs(idx.upper - p))
        idx_ok &= abs(idx.lower - p) <= 1e-12 * scale and abs(idx.upper - p) <= 1e-12 * scale
    est = simonenko_indices(phis["x^2"], use_closed_forms=False)
    idx_ok &= abs(est.lower - 2.0) <= 1e-12 * scale and abs(est.upper - 2.0) <= 1e-12 * scale

    rng = np.random.default_rng(seed + 13)
    norm_ok = True
    worst_norm = 0.0
    for _ in range(10 if quick else 40):
        p = float(rng.choice([1.5, 2.0, 3.0]))
        phi = young_builtin("power", p=p)
        n = int(rng.integers(1, 12))
        mu = DiscreteMeasure(rng.normal(size=n), rng.uniform(0.05, 2.0, n))
        fv = rng.normal(0, 3, n)
        oracle = float(np.sum(mu.weights * np.abs(fv) ** p)) ** (1.0 / p)
        got = luxemburg_norm(fv, mu, phi)
        rel = abs(got - oracle) / max(oracle, 1e-300)
        worst_norm = max(worst_norm, rel)
        norm_ok &= rel <= 1e-9 * scale
    return CheckResult(
        "convex toolkit (Young inequality, indices, norm oracle)",
        bool(ineq_ok and idx_ok and norm_ok),
        {"young_worst_gap": worst_gap, "index_worst_err": worst_idx, "norm_worst_rel": worst_norm},
    )


CRITERIA: List[Callable] = [
    criterion_1_discrete_isometry,
    criterion_2_conditional_identity,
    criterion_3_mc_isometry,
    criterion_4_routes_refinement,
    criterion_5_stopping_commutation,
    criterion_6_quadratic_specialization,
    criterion_7_doob,
    criterion_8_sum_of_independent,
    criterion_9_semigroup,
    criterion_10_parabolic_gaussian,
    criterion_11_parabolic_mixed,
    criterion_12_elliptic,
    criterion_13_convex_toolkit,
]

_TAKES_WORKERS = {criterion_3_mc_isometry, criterion_7_doob, criterion_8_sum_of_independent}


def run_suite(
    level: str = "quick",
    seed: int = 7,
    tolerance_scale: float = 1.0,
    workers: int = 1,
    progress=None,
) -> dict:
    """Run all criteria; returns a manifest dict (deterministic for a fixed
    seed: wall times are reported via ``progress`` only, never stored)."""
    if level not in ("quick", "full"):
        raise ValueError("level must be 'quick' or 'full'")
    quick = level == "quick"
    checks = []
    all_pass = True
    for i, crit in enumerate(CRITERIA, start=1):
        t0 = time.time()
        if crit in _TAKES_WORKERS:
            res = crit(seed, tolerance_scale, quick, workers=workers)
        else:
            res = crit(seed, tolerance_scale, quick)
        res.seconds = time.time() - t0
        res.name = f"{i:2d}. {res.name}"
        all_pass &= res.passed
        checks.append(res)
        if progress is not None:
            progress(res)
    return {
        "schema_version": "bregvar/suite-v1",
        "library_version": __version__,
        "config": {"level": level, "seed": seed, "tolerance_scale": tolerance_scale, "workers": workers},
        "checks": [
            {"name": c.name, "verdict": "pass" if c.passed else "fail", "details": c.details} for c in checks
        ],
        "verdict": "pass" if all_pass else "fail",
    }


def require_pass(manifest: dict):
    if manifest["verdict"] != "pass":
        failed = [c["name"] for c in manifest["checks"] if c["verdict"] != "pass"]
        raise CheckFailure("failing criteria: " + "; ".join(failed))
