"""Simulation of 1-d martingale paths with exact jump logs.

Models combine a Brownian part (variance rate sigma2) with a symmetric
finite-activity jump part: compound Poisson with a builtin symmetric law, or
a stable profile truncated below at ``eps`` (small jumps dropped, which keeps
the jump log exact; the truncated model is itself a legitimate Levy process).

Jump instants are inserted into the time grid so left limits are exact, and
every path draws from its own counter-derived stream, so Monte-Carlo results
do not depend on how paths are distributed over workers.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

__all__ = [
    "TwoPointLaw",
    "UniformLaw",
    "GaussianLaw",
    "CompoundPoisson",
    "TruncatedStable",
    "LevyModel",
    "SamplePath",
    "RandomPartition",
    "path_seed",
    "simulate",
    "simulate_independent_pair",
    "add_paths",
    "coarsen_grid",
    "stop_path",
    "refine_partition",
]

SeedLike = Union[int, Sequence[int], np.random.SeedSequence]


@dataclass(frozen=True)
class TwoPointLaw:
    """Jumps of size +-a with probability 1/2 each."""

    a: float

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("two-point size a must be positive")

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.a * np.where(rng.random(n) < 0.5, 1.0, -1.0)


@dataclass(frozen=True)
class UniformLaw:
    """Jumps uniform on (-a, a)."""

    a: float

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("uniform half-width a must be positive")

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(-self.a, self.a, n)


@dataclass(frozen=True)
class GaussianLaw:
    """Centered Gaussian jumps with standard deviation s."""

    s: float

    def __post_init__(self):
        if self.s <= 0:
            raise ValueError("gaussian scale s must be positive")

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.normal(0.0, self.s, n)


@dataclass(frozen=True)
class CompoundPoisson:
    """Compound-Poisson jump part with a symmetric jump law."""

    intensity: float
    law: Union[TwoPointLaw, UniformLaw, GaussianLaw]

    def __post_init__(self):
        if self.intensity <= 0:
            raise ValueError("jump intensity must be positive")

    @property
    def rate(self) -> float:
        return self.intensity

    def sample_sizes(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.law.sample(n, rng)


@dataclass(frozen=True)
class TruncatedStable:
    """Stable-profile jumps c|z|^(-1-alpha) restricted to eps <= |z| <= z_max.

    ``z_max=None`` means no upper cutoff; the effective intensity is then
    2c * eps^(-alpha) / alpha.  Small jumps below eps are dropped without
    Gaussian compensation (documented bias; eps is the knob).
    """

    alpha: float
    c: float
    eps: float
    z_max: Optional[float] = None

    def __post_init__(self):
        if not (0.0 < self.alpha < 2.0):
            raise ValueError("stable index alpha must lie in (0, 2)")
        if self.c <= 0 or self.eps <= 0:
            raise ValueError("scale c and cutoff eps must be positive")
        if self.z_max is not None and self.z_max <= self.eps:
            raise ValueError("z_max must exceed eps")

    @property
    def rate(self) -> float:
        hi = 0.0 if self.z_max is None else self.z_max ** (-self.alpha)
        return 2.0 * self.c * (self.eps ** (-self.alpha) - hi) / self.alpha

    def sample_sizes(self, n: int, rng: np.random.Generator) -> np.ndarray:
        a = self.alpha
        hi = 0.0 if self.z_max is None else self.z_max ** (-a)
        u = rng.random(n)
        mag = (self.eps ** (-a) - u * (self.eps ** (-a) - hi)) ** (-1.0 / a)
        sign = np.where(rng.random(n) < 0.5, 1.0, -1.0)
        return sign * mag


JumpPart = Union[CompoundPoisson, TruncatedStable]


@dataclass(frozen=True)
class LevyModel:
    """Martingale Levy model: diffusion rate sigma2 plus symmetric jumps.

    sigma2 == 0 with jumps == None gives the constant path, accepted as the
    trivial martingale (needed as the zero summand in sum checks).
    """

    sigma2: float
    jumps: Optional[JumpPart] = None

    def __post_init__(self):
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be nonnegative")

    @property
    def jump_rate(self) -> float:
        return 0.0 if self.jumps is None else self.jumps.rate


@dataclass(frozen=True, eq=False)
class SamplePath:
    """Piecewise path on a merged grid of uniform times and jump instants.

    ``values`` holds the cadlag (post-jump) value at every node, ``x_left``
    the left limit; the two differ exactly at jump nodes.  ``qv_cont_rate``
    is sigma2, so the continuous quadratic variation is sigma2 * t exactly.
    """

    times: np.ndarray
    values: np.ndarray
    is_jump: np.ndarray
    x_left: np.ndarray
    qv_cont_rate: float
    grid_m: int
    horizon: float
    x0: float = 0.0
    exited: Optional[bool] = None
    tau: Optional[float] = None

    @property
    def jump_log(self):
        """Arrays (jump times, pre-jump values, post-jump values)."""
        m = self.is_jump
        return self.times[m], self.x_left[m], self.values[m]

    @property
    def terminal(self) -> float:
        return float(self.values[-1])

    @classmethod
    def from_arrays(
        cls,
        times,
        values,
        is_jump=None,
        x_left=None,
        qv_cont_rate: float = 0.0,
        x0: Optional[float] = None,
    ) -> "SamplePath":
        """Wrap raw arrays (e.g. read back from CSV) as a path."""
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=float)
        is_jump = np.zeros(times.shape, dtype=bool) if is_jump is None else np.asarray(is_jump, dtype=bool)
        x_left = values.copy() if x_left is None else np.asarray(x_left, dtype=float)
        return cls(
            times=times,
            values=values,
            is_jump=is_jump,
            x_left=x_left,
            qv_cont_rate=qv_cont_rate,
            grid_m=max(times.size - 1, 1),
            horizon=float(times[-1]),
            x0=float(values[0]) if x0 is None else x0,
        )


@dataclass(frozen=True)
class RandomPartition:
    """Nondecreasing partition times; mesh is the largest gap."""

    times: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        object.__setattr__(self, "times", t)
        if t.size and np.any(np.diff(t) < 0):
            raise ValueError("partition times must be nondecreasing")

    @property
    def mesh(self) -> float:
        return float(np.max(np.diff(self.times))) if self.times.size > 1 else 0.0


def _seed_seq(seed: SeedLike) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, (tuple, list)):
        return np.random.SeedSequence(entropy=int(seed[0]), spawn_key=tuple(int(s) for s in seed[1:]))
    return np.random.SeedSequence(int(seed))


def path_seed(master: int, index) -> np.random.SeedSequence:
    """Counter-based per-path stream key derived from (seed, path index)."""
    if isinstance(index, (tuple, list)):
        key = tuple(int(i) for i in index)
    else:
        key = (int(index),)
    return np.random.SeedSequence(entropy=int(master), spawn_key=key)


def _draw_jumps(model: LevyModel, horizon: float, rng: np.random.Generator):
    """Jump times (sorted, in (0, horizon]) and sizes, in a fixed draw order."""
    if model.jumps is None:
        return np.empty(0), np.empty(0)
    n = int(rng.poisson(model.jumps.rate * horizon))
    t = np.sort(rng.uniform(0.0, horizon, n))
    keep = t > 0.0
    t = t[keep]
    sizes = model.jumps.sample_sizes(t.size, rng)
    live = sizes != 0.0
    t, sizes = t[live], sizes[live]
    if t.size > 1 and np.any(np.diff(t) == 0.0):
        # measure-zero collision: merge equal instants, summing sizes
        uniq, inv = np.unique(t, return_inverse=True)
        merged = np.zeros(uniq.size)
        np.add.at(merged, inv, sizes)
        live = merged != 0.0
        t, sizes = uniq[live], merged[live]
    return t, sizes


def _assemble(
    model: LevyModel,
    T: float,
    M: int,
    rng: np.random.Generator,
    jump_t: np.ndarray,
    jump_s: np.ndarray,
    x0: float,
    flip_sign: bool,
    extra_times: Optional[np.ndarray],
) -> SamplePath:
    grid = np.arange(M + 1, dtype=float) * T / M
    parts = [grid, jump_t]
    if extra_times is not None and len(extra_times):
        parts.append(np.asarray(extra_times, dtype=float))
    all_t = np.concatenate(parts)
    times, inverse = np.unique(all_t, return_inverse=True)

    size_node = np.zeros(times.size)
    if jump_t.size:
        jump_positions = inverse[grid.size : grid.size + jump_t.size]
        np.add.at(size_node, jump_positions, jump_s)
    is_jump = size_node != 0.0

    gaps = np.diff(times)
    sigma = math.sqrt(model.sigma2)
    if sigma > 0.0:
        dW = rng.standard_normal(gaps.size) * (sigma * np.sqrt(gaps))
    else:
        dW = np.zeros(gaps.size)
    if flip_sign:
        dW = -dW
        size_node = -size_node

    cum_dw = np.concatenate(([0.0], np.cumsum(dW)))
    cum_sz_excl = np.concatenate(([0.0], np.cumsum(size_node[:-1])))
    x_left = x0 + cum_dw + cum_sz_excl
    values = x_left + size_node

    return SamplePath(
        times=times,
        values=values,
        is_jump=is_jump,
        x_left=x_left,
        qv_cont_rate=model.sigma2,
        grid_m=M,
        horizon=T,
        x0=x0,
    )


def simulate(
    model: LevyModel,
    T: float,
    M: int,
    seed: SeedLike,
    x0: float = 0.0,
    flip_sign: bool = False,
    extra_times: Optional[np.ndarray] = None,
) -> SamplePath:
    """Simulate one path on a uniform M-interval grid plus exact jump instants.

    Deterministic for fixed (model, T, M, seed, x0): draw order is jump
    count, jump times, jump sizes, then Brownian increments over the merged
    grid.  ``flip_sign`` negates every Gaussian increment and jump, which
    produces exactly -X when x0 == 0.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    if M < 1:
        raise ValueError("M must be at least 1")
    rng = np.random.default_rng(_seed_seq(seed))
    grid_end = float(np.arange(M + 1, dtype=float)[-1] * T / M)
    jump_t, jump_s = _draw_jumps(model, grid_end, rng)
    return _assemble(model, T, M, rng, jump_t, jump_s, x0, flip_sign, extra_times)


def simulate_independent_pair(
    model_x: LevyModel,
    model_y: LevyModel,
    T: float,
    M: int,
    seed: SeedLike,
    x0_x: float = 0.0,
    x0_y: float = 0.0,
):
    """Two independent paths on a shared merged grid, plus their sum.

    X and Y use child streams of ``seed``; each path's nodes include the
    other's jump instants so the sum has exact left limits everywhere.
    """
    ss = _seed_seq(seed)
    child_x, child_y = ss.spawn(2)
    rng_x = np.random.default_rng(child_x)
    rng_y = np.random.default_rng(child_y)
    grid_end = float(np.arange(M + 1, dtype=float)[-1] * T / M)
    jt_x, js_x = _draw_jumps(model_x, grid_end, rng_x)
    jt_y, js_y = _draw_jumps(model_y, grid_end, rng_y)
    px = _assemble(model_x, T, M, rng_x, jt_x, js_x, x0_x, False, jt_y)
    py = _assemble(model_y, T, M, rng_y, jt_y, js_y, x0_y, False, jt_x)
    return px, py, add_paths(px, py)


def add_paths(px: SamplePath, py: SamplePath) -> SamplePath:
    """Nodewise sum of two paths sampled on identical time grids."""
    if px.times.shape != py.times.shape or not np.array_equal(px.times, py.times):
        raise ValueError("paths must share an identical time grid")
    values = px.values + py.values
    x_left = px.x_left + py.x_left
    is_jump = px.is_jump | py.is_jump
    return SamplePath(
        times=px.times,
        values=values,
        is_jump=is_jump,
        x_left=x_left,
        qv_cont_rate=px.qv_cont_rate + py.qv_cont_rate,
        grid_m=px.grid_m,
        horizon=px.horizon,
        x0=px.x0 + py.x0,
    )


def coarsen_grid(path: SamplePath) -> SamplePath:
    """Drop every other base-grid node (keeping all jumps): the same path
    observed on a grid of half the resolution.  Requires even grid_m."""
    if path.grid_m % 2 != 0:
        raise ValueError("grid_m must be even to coarsen")
    keep = path.is_jump.copy()
    base_rank = np.cumsum(~path.is_jump) - 1  # rank among base-grid nodes
    keep |= (~path.is_jump) & (base_rank % 2 == 0)
    keep[-1] = True
    return SamplePath(
        times=path.times[keep],
        values=path.values[keep],
        is_jump=path.is_jump[keep],
        x_left=path.x_left[keep],
        qv_cont_rate=path.qv_cont_rate,
        grid_m=path.grid_m // 2,
        horizon=path.horizon,
        x0=path.x0,
        exited=path.exited,
        tau=path.tau,
    )


def stop_path(path: SamplePath, a: float, b: float) -> SamplePath:
    """Freeze the path at its first node outside the open interval (a, b).

    Exit is only detected at grid/jump instants (an O(sqrt(dt)) bias on exit
    times); a jump may overshoot the boundary and the overshoot is retained.
    Without an exit the path is returned unchanged, flagged not-exited.
    """
    if not a < b:
        raise ValueError("need a < b")
    outside = (path.values <= a) | (path.values >= b)
    hits = np.flatnonzero(outside)
    if hits.size == 0:
        return dataclasses.replace(path, exited=False, tau=None)
    k = int(hits[0])
    sl = slice(0, k + 1)
    return SamplePath(
        times=path.times[sl],
        values=path.values[sl],
        is_jump=path.is_jump[sl],
        x_left=path.x_left[sl],
        qv_cont_rate=path.qv_cont_rate,
        grid_m=path.grid_m,
        horizon=path.horizon,
        x0=path.x0,
        exited=True,
        tau=float(path.times[k]),
    )


def refine_partition(path: SamplePath, level: int, base_m: Optional[int] = None) -> RandomPartition:
    """Dyadic partition with base_m * 2^level uniform intervals, merged with
    the path's jump times.

    With the defaults, level 0 reproduces the path's own node set.  A finer
    level is only usable against a path simulated at matching resolution
    (partition times must be exactly representable on the path).
    """
    if level < 0:
        raise ValueError("level must be nonnegative")
    base = path.grid_m if base_m is None else int(base_m)
    m_total = base * 2**level
    dyadic = np.arange(m_total + 1, dtype=float) * path.horizon / m_total
    jump_times = path.times[path.is_jump]
    return RandomPartition(np.union1d(dyadic, jump_times))
