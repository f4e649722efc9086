"""Exact and Monte-Carlo verification of the cumulative-divergence identities.

Finite martingales are non-recombining trees, enumerated exactly in a fixed
order.  The Monte-Carlo drivers pair each path's phi(X_T) with its own
terminal cumulative divergence, report the standard error of the paired
difference, and measure discretization bias separately by recomputing the
divergence on a coarsened view of the same paths ("grid allowance").
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .convex import YoungFunction, bregman_divergence, delta2_constant, doob_constant, simonenko_indices, young_builtin
from .paths import LevyModel, coarsen_grid, path_seed, simulate, simulate_independent_pair, stop_path
from .reports import IdentityReport
from .variation import pathwise_variation

__all__ = [
    "FiniteMartingale",
    "enumerate_isometry",
    "conditional_identity",
    "mc_isometry",
    "mc_stopped_isometry",
    "doob_check",
    "sum_of_independent",
    "SumIndepReport",
    "parallelogram_residual",
]

ENUMERATION_DEPTH_CAP = 22


@dataclass(frozen=True, eq=False)
class FiniteMartingale:
    """Non-recombining tree of values with branch probabilities.

    ``values[l]`` holds the level-l node values, ``parents[l]`` the index of
    each node's parent on level l-1, and ``probs[l]`` the branch probability
    of reaching the node from its parent.  Each node's value must equal the
    probability-weighted mean of its children.
    """

    values: List[np.ndarray]
    parents: List[np.ndarray]
    probs: List[np.ndarray]

    def __post_init__(self):
        if len(self.values) == 0 or self.values[0].size != 1:
            raise ValueError("tree needs a single root")
        for lvl in range(1, len(self.values)):
            v, par, pr = self.values[lvl], self.parents[lvl], self.probs[lvl]
            if not (v.shape == par.shape == pr.shape):
                raise ValueError(f"level {lvl}: mismatched arrays")
            n_par = self.values[lvl - 1].size
            mass = np.zeros(n_par)
            mean = np.zeros(n_par)
            np.add.at(mass, par, pr)
            np.add.at(mean, par, pr * v)
            if np.max(np.abs(mass - 1.0)) > 1e-12:
                raise ValueError(f"level {lvl}: branch probabilities do not sum to 1")
            if np.max(np.abs(mean - self.values[lvl - 1])) > 1e-12:
                raise ValueError(f"level {lvl}: martingale property violated")

    @property
    def depth(self) -> int:
        return len(self.values) - 1

    def node_probs(self) -> List[np.ndarray]:
        out = [np.ones(1)]
        for lvl in range(1, len(self.values)):
            out.append(out[-1][self.parents[lvl]] * self.probs[lvl])
        return out

    @classmethod
    def pm1_walk(cls, n: int, x0: float = 0.0) -> "FiniteMartingale":
        """Symmetric +-1 random walk of length n as a binary tree."""
        values = [np.array([x0])]
        parents = [np.array([], dtype=int)]
        probs = [np.array([])]
        for lvl in range(1, n + 1):
            par = np.repeat(np.arange(values[-1].size), 2)
            step = np.tile([1.0, -1.0], values[-1].size)
            values.append(values[-1][par] + step)
            parents.append(par)
            probs.append(np.full(par.size, 0.5))
        return cls(values, parents, probs)

    @classmethod
    def random_tree(
        cls,
        depth: int,
        rng: np.random.Generator,
        max_children: int = 3,
        scale: float = 1.0,
    ) -> "FiniteMartingale":
        """Random martingale tree: random branch counts, Dirichlet branch
        probabilities, recentered value shifts."""
        values = [rng.uniform(-1.0, 1.0, 1)]
        parents = [np.array([], dtype=int)]
        probs = [np.array([])]
        for _ in range(depth):
            par_idx, br_prob, val = [], [], []
            for j, pv in enumerate(values[-1]):
                k = int(rng.integers(2, max_children + 1))
                pr = rng.dirichlet(np.ones(k))
                shift = rng.normal(0.0, scale, k)
                shift = shift - float(shift @ pr)
                par_idx.append(np.full(k, j))
                br_prob.append(pr)
                val.append(pv + shift)
            parents.append(np.concatenate(par_idx))
            probs.append(np.concatenate(br_prob))
            values.append(np.concatenate(val))
        return cls(values, parents, probs)


def enumerate_isometry(tree: FiniteMartingale, phi: YoungFunction, rtol: float = 1e-10) -> IdentityReport:
    """Exact comparison of E phi(X_n) with the expected cumulative divergence.

    Expectations come from full enumeration of the (non-recombining) tree in
    construction order; depth is capped at 22 to keep that tractable.
    """
    if tree.depth > ENUMERATION_DEPTH_CAP:
        raise ValueError(f"tree depth {tree.depth} exceeds enumeration cap {ENUMERATION_DEPTH_CAP}")
    node_p = tree.node_probs()
    lhs = float(node_p[-1] @ phi(tree.values[-1]))
    rhs = float(phi(tree.values[0][0]))
    for lvl in range(1, len(tree.values)):
        f = bregman_divergence(phi, tree.values[lvl - 1][tree.parents[lvl]], tree.values[lvl])
        rhs += float(node_p[lvl] @ np.atleast_1d(f))
    return IdentityReport.exact(lhs, rhs, rtol)


def conditional_identity(probs, y, cells, phi: YoungFunction, rtol: float = 1e-12) -> IdentityReport:
    """Check E phi(Y) = E phi(X) + E F(X, Y) for X the conditional mean of Y
    on a finite partition.

    ``cells`` labels each outcome with its partition cell; a zero-probability
    cell is rejected.
    """
    p = np.asarray(probs, dtype=float)
    y = np.asarray(y, dtype=float)
    cells = np.asarray(cells)
    if p.shape != y.shape or p.shape != cells.shape:
        raise ValueError("probs, y, and cells must have equal shapes")
    if np.any(p < 0):
        raise ValueError("probabilities must be nonnegative")
    _, inv = np.unique(cells, return_inverse=True)
    n_cells = int(inv.max()) + 1
    cell_mass = np.zeros(n_cells)
    np.add.at(cell_mass, inv, p)
    if np.any(cell_mass == 0.0):
        raise ValueError("partition contains a zero-probability cell")
    cell_mean = np.zeros(n_cells)
    np.add.at(cell_mean, inv, p * y)
    x = (cell_mean / cell_mass)[inv]
    lhs = float(p @ phi(y))
    rhs = float(p @ phi(x)) + float(p @ np.atleast_1d(bregman_divergence(phi, x, y)))
    return IdentityReport.exact(lhs, rhs, rtol)


def parallelogram_residual(phi: YoungFunction, x: float, y: float) -> float:
    """phi(x+y) + phi(x-y) - 2 phi(x) - 2 phi(y); zero for all (x, y) only
    when phi is the square."""
    return float(phi(x + y) + phi(x - y) - 2.0 * phi(x) - 2.0 * phi(y))


# ----------------------------------------------------------------------------
# Monte-Carlo drivers.  Each path draws from its own (seed, index) stream and
# blocks are merged in index order, so results do not depend on worker count.
# ----------------------------------------------------------------------------


def _phi_spec(phi: YoungFunction):
    if phi.family == "power":
        return ("power", {"p": phi.params[0]})
    if phi.family == "plog":
        return ("plog", {"p": phi.params[0], "gamma": phi.params[1]})
    raise ValueError("parallel workers support only builtin phi families")


def _require_moderate(phi: YoungFunction):
    idx = simonenko_indices(phi)
    if not idx.moderate:
        from .errors import NotModerateError

        raise NotModerateError(f"{phi!r} is not moderate (indices {idx.lower}, {idx.upper})")


def _phi_from_spec(spec) -> YoungFunction:
    name, params = spec
    return young_builtin(name, **params)


def _terminal_v(phi: YoungFunction, path) -> float:
    return pathwise_variation(phi, path).terminal


def _iso_block(payload, lo, hi):
    model, phi_specs, x0, T, M, seed, n_coarse = payload
    phis = [_phi_from_spec(s) for s in phi_specs]
    n = hi - lo
    phi_t = np.empty((len(phis), n))
    v_fine = np.empty((len(phis), n))
    v_coarse = np.full((len(phis), n), np.nan)
    for k in range(n):
        i = lo + k
        p = simulate(model, T, 2 * M, path_seed(seed, i), x0=x0)
        want_coarse = i < n_coarse
        pc = coarsen_grid(p) if want_coarse else None
        for j, phi in enumerate(phis):
            phi_t[j, k] = float(phi(p.terminal))
            v_fine[j, k] = _terminal_v(phi, p)
            if want_coarse:
                v_coarse[j, k] = _terminal_v(phi, pc)
    return phi_t, v_fine, v_coarse


def _stopped_block(payload, lo, hi):
    model, phi_specs, a, b, x0, T, M, seed, n_coarse = payload
    phis = [_phi_from_spec(s) for s in phi_specs]
    n = hi - lo
    phi_t = np.empty((len(phis), n))
    v_fine = np.empty((len(phis), n))
    resid_coarse = np.full((len(phis), n), np.nan)
    for k in range(n):
        i = lo + k
        p = simulate(model, T, 2 * M, path_seed(seed, i), x0=x0)
        ps = stop_path(p, a, b)
        psc = stop_path(coarsen_grid(p), a, b) if i < n_coarse else None
        for j, phi in enumerate(phis):
            phi_t[j, k] = float(phi(ps.terminal))
            v_fine[j, k] = _terminal_v(phi, ps)
            if psc is not None:
                # residual on the half-resolution view: exit node and
                # divergence both move with the grid
                resid_coarse[j, k] = float(phi(psc.terminal)) - _terminal_v(phi, psc)
    return phi_t, v_fine, resid_coarse


def _doob_block(payload, lo, hi):
    model, phi_specs, x0, T, M, seed = payload
    phis = [_phi_from_spec(s) for s in phi_specs]
    n = hi - lo
    sup_phi = np.empty((len(phis), n))
    phi_t = np.empty((len(phis), n))
    for k in range(n):
        p = simulate(model, T, M, path_seed(seed, lo + k), x0=x0)
        amax = float(np.max(np.abs(p.values)))
        for j, phi in enumerate(phis):
            sup_phi[j, k] = float(phi(amax))
            phi_t[j, k] = float(phi(p.terminal))
    return sup_phi, phi_t


def _sum_block(payload, lo, hi):
    model_x, model_y, phi_spec, T, M, seed = payload
    phi = _phi_from_spec(phi_spec)
    n = hi - lo
    vs = np.empty((3, n))
    for k in range(n):
        px, py, ps = simulate_independent_pair(model_x, model_y, T, M, path_seed(seed, lo + k))
        vs[0, k] = _terminal_v(phi, px)
        vs[1, k] = _terminal_v(phi, py)
        vs[2, k] = _terminal_v(phi, ps)
    return (vs,)


def _run_blocks(block_fn, payload, n_paths: int, workers: int, chunk: int = 2048):
    starts = list(range(0, n_paths, chunk))
    bounds = [(s, min(s + chunk, n_paths)) for s in starts]
    if workers <= 1 or len(bounds) == 1:
        pieces = [block_fn(payload, lo, hi) for lo, hi in bounds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            pieces = list(pool.map(_block_entry, [(block_fn, payload, lo, hi) for lo, hi in bounds]))
    return tuple(np.concatenate([p[j] for p in pieces], axis=-1) for j in range(len(pieces[0])))


def _block_entry(args):
    block_fn, payload, lo, hi = args
    return block_fn(payload, lo, hi)


def _paired_se(diff: np.ndarray) -> float:
    n = diff.size
    if n < 2:
        return 0.0
    return float(np.std(diff, ddof=1) / math.sqrt(n))


def _allowance(v_fine: np.ndarray, v_coarse: np.ndarray) -> float:
    mask = np.isfinite(v_coarse)
    if not np.any(mask):
        return 0.0
    return abs(float(np.mean(v_fine[mask] - v_coarse[mask])))


def mc_isometry(
    model: LevyModel,
    phi: YoungFunction,
    x0: float,
    T: float,
    n_paths: int,
    seed: int,
    grid_m: int = 32,
    workers: int = 1,
    _batch=None,
) -> IdentityReport:
    """Monte-Carlo check of E phi(X_T) against the mean terminal divergence.

    Paths are simulated at twice ``grid_m`` and the divergence recomputed on
    a half-resolution view of the same paths; the mean shift between the two
    is reported as the grid allowance.
    """
    _require_moderate(phi)
    if _batch is None:
        _batch = _run_blocks(
            _iso_block,
            (model, [_phi_spec(phi)], x0, T, grid_m, seed, min(n_paths, 20000)),
            n_paths,
            workers,
        )
        phi_t, v_fine, v_coarse = (a[0] for a in _batch)
    else:
        phi_t, v_fine, v_coarse = _batch
    lhs = float(np.mean(phi_t))
    rhs = float(np.mean(v_fine))
    se = _paired_se(phi_t - v_fine)
    allowance = _allowance(v_fine, v_coarse)
    return IdentityReport.monte_carlo(lhs, rhs, se, phi_t.size, allowance, lhs_stderr=_paired_se(phi_t))


def mc_isometry_multi(
    model: LevyModel,
    phis,
    x0: float,
    T: float,
    n_paths: int,
    seed: int,
    grid_m: int = 32,
    workers: int = 1,
):
    """mc_isometry for several phi over one set of simulated paths."""
    batch = _run_blocks(
        _iso_block,
        (model, [_phi_spec(p) for p in phis], x0, T, grid_m, seed, min(n_paths, 20000)),
        n_paths,
        workers,
    )
    phi_t, v_fine, v_coarse = batch
    return [
        mc_isometry(model, phi, x0, T, n_paths, seed, grid_m, workers, _batch=(phi_t[j], v_fine[j], v_coarse[j]))
        for j, phi in enumerate(phis)
    ]


def mc_stopped_isometry(
    model: LevyModel,
    phi: YoungFunction,
    a: float,
    b: float,
    x0: float,
    t_cap: float,
    n_paths: int,
    seed: int,
    grid_m: int = 256,
    workers: int = 1,
) -> IdentityReport:
    """Isometry at the first exit of (a, b), capped at t_cap."""
    _require_moderate(phi)
    if not a < x0 < b:
        raise ValueError("x0 must lie inside (a, b)")
    phi_t, v_fine, resid_coarse = (
        arr[0]
        for arr in _run_blocks(
            _stopped_block,
            (model, [_phi_spec(phi)], a, b, x0, t_cap, grid_m, seed, min(n_paths, 20000)),
            n_paths,
            workers,
        )
    )
    lhs = float(np.mean(phi_t))
    rhs = float(np.mean(v_fine))
    se = _paired_se(phi_t - v_fine)
    mask = np.isfinite(resid_coarse)
    allowance = (
        abs(float(np.mean((phi_t - v_fine)[mask]) - np.mean(resid_coarse[mask]))) if np.any(mask) else 0.0
    )
    return IdentityReport.monte_carlo(lhs, rhs, se, phi_t.size, allowance)


def doob_check(
    model: LevyModel,
    phi: YoungFunction,
    T: float,
    n_paths: int,
    seed: int,
    x0: float = 0.0,
    grid_m: int = 64,
    workers: int = 1,
) -> IdentityReport:
    """Check E sup phi(X_s) <= C_phi E phi(X_T) + 3 SE."""
    c_phi = doob_constant(simonenko_indices(phi))
    sup_phi, phi_t = _run_blocks(
        _doob_block, (model, [_phi_spec(phi)], x0, T, grid_m, seed), n_paths, workers
    )
    sup_phi, phi_t = sup_phi[0], phi_t[0]
    lhs = float(np.mean(sup_phi))
    rhs = c_phi * float(np.mean(phi_t))
    se = _paired_se(sup_phi - c_phi * phi_t)
    return IdentityReport.upper_bound(lhs, rhs, se, sup_phi.size)


@dataclass(frozen=True)
class SumIndepReport:
    """Two-sided bound check for the divergence of a sum of independent
    martingales, plus the exact-additivity comparison."""

    e_sum: float
    e_x: float
    e_y: float
    k_phi: float
    se_lower: float
    se_upper: float
    se_additivity: float
    n_samples: int
    lower_ok: bool
    upper_ok: bool

    @property
    def passed(self) -> bool:
        return self.lower_ok and self.upper_ok

    @property
    def additivity_gap(self) -> float:
        return self.e_sum - self.e_x - self.e_y

    def as_dict(self) -> dict:
        return {
            "e_sum": self.e_sum,
            "e_x": self.e_x,
            "e_y": self.e_y,
            "k_phi": self.k_phi,
            "se_lower": self.se_lower,
            "se_upper": self.se_upper,
            "additivity_gap": self.additivity_gap,
            "n_samples": self.n_samples,
            "verdict": "pass" if self.passed else "fail",
        }


def sum_of_independent(
    model_x: LevyModel,
    model_y: LevyModel,
    phi: YoungFunction,
    T: float,
    n_paths: int,
    seed: int,
    grid_m: int = 64,
    workers: int = 1,
    sigmas: float = 3.0,
) -> SumIndepReport:
    """Monte-Carlo check of
    (1/2) E[V(X) + V(Y)] <= E V(X+Y) <= (K_phi/2) E[V(X) + V(Y)]."""
    (vs,) = _run_blocks(_sum_block, (model_x, model_y, _phi_spec(phi), T, grid_m, seed), n_paths, workers)
    v_x, v_y, v_sum = vs[0], vs[1], vs[2]
    k_phi = delta2_constant(phi).k_phi
    low = v_sum - 0.5 * (v_x + v_y)
    up = (k_phi / 2.0) * (v_x + v_y) - v_sum
    add = v_sum - v_x - v_y
    se_low, se_up, se_add = _paired_se(low), _paired_se(up), _paired_se(add)
    return SumIndepReport(
        e_sum=float(np.mean(v_sum)),
        e_x=float(np.mean(v_x)),
        e_y=float(np.mean(v_y)),
        k_phi=float(k_phi),
        se_lower=se_low,
        se_upper=se_up,
        se_additivity=se_add,
        n_samples=v_sum.size,
        lower_ok=bool(float(np.mean(low)) >= -sigmas * se_low - 1e-12),
        upper_ok=bool(float(np.mean(up)) >= -sigmas * se_up - 1e-12),
    )
