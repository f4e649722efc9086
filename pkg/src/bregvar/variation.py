"""Three routes to the cumulative divergence process of a path.

* discrete: cumulated divergences of a value sequence (two equivalent forms,
  cross-checked),
* partition sum: left-endpoint Riemann-Stieltjes integral of phi'(X_-),
  subtracted from phi(X_T),
* pathwise: half the second derivative integrated against the continuous
  quadratic variation plus the divergence sum over exact jumps.

The t=0 convention is X_{0-} = 0, so the divergence at time zero equals
phi(X_0) and both displayed forms of the pathwise formula agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .convex import YoungFunction, bregman_divergence
from .paths import RandomPartition, SamplePath

__all__ = [
    "VariationTrace",
    "discrete_variation",
    "integral_partition_sum",
    "variation_via_definition",
    "pathwise_variation",
    "realized_qv",
]

_FORM_AGREEMENT_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class VariationTrace:
    """Nondecreasing cumulative-divergence values aligned to times.

    ``v = initial + cont + jump`` nodewise, with ``initial = phi(X_0)``.
    """

    times: np.ndarray
    v: np.ndarray
    initial: float
    cont: np.ndarray
    jump: np.ndarray

    @property
    def terminal(self) -> float:
        return float(self.v[-1])


def discrete_variation(phi: YoungFunction, x) -> VariationTrace:
    """Cumulated divergences of a finite value sequence.

    Both the integral form phi(x_n) - sum phi'(x_{k-1}) dx_k and the
    divergence form phi(x_0) + sum F(x_{k-1}, x_k) are evaluated; they must
    agree to 1e-10 relative or an ArithmeticError flags the inconsistency.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("need a nonempty 1-d value sequence")
    initial = float(phi(x[0]))
    if x.size == 1:
        z = np.zeros(1)
        return VariationTrace(z.copy(), np.array([initial]), initial, z.copy(), z.copy())
    f_steps = bregman_divergence(phi, x[:-1], x[1:])
    jump = np.concatenate(([0.0], np.cumsum(f_steps)))
    v = initial + jump
    integral = np.concatenate(([0.0], np.cumsum(phi.deriv(x[:-1]) * np.diff(x))))
    v_alt = phi(x) - integral
    scale = np.maximum(np.maximum(np.abs(v), np.abs(v_alt)), 1.0)
    worst = float(np.max(np.abs(v - v_alt) / scale))
    if worst > _FORM_AGREEMENT_RTOL:
        raise ArithmeticError(f"discrete-variation forms disagree: rel {worst:g}")
    times = np.arange(x.size, dtype=float)
    return VariationTrace(times, v, initial, np.zeros(x.size), jump)


def _partition_indices(path: SamplePath, partition: RandomPartition) -> np.ndarray:
    pt = partition.times
    idx = np.searchsorted(path.times, pt)
    ok = (idx < path.times.size) & (path.times[np.minimum(idx, path.times.size - 1)] == pt)
    if not np.all(ok):
        missing = pt[~ok][:3]
        raise ValueError(f"partition point not representable on the path: {missing}")
    return idx


def integral_partition_sum(phi: YoungFunction, path: SamplePath, partition: RandomPartition) -> float:
    """Left-endpoint sum of phi'(X_-) against path increments over a partition.

    The integrand on (tau_k, tau_{k+1}] is phi' of the left limit, which
    equals phi' of the cadlag value at tau_k; sampling the post-jump value
    there keeps the sum exact on jump-complete partitions (the divergence of
    a jump is picked up by the interval ending at it) and non-anticipating.
    The time-zero term vanishes because phi'(X_{0-}) = phi'(0) = 0.
    """
    idx = _partition_indices(path, partition)
    if idx.size < 2:
        return 0.0
    v = path.values[idx]
    return float(np.sum(phi.deriv(v[:-1]) * np.diff(v)))


def variation_via_definition(phi: YoungFunction, path: SamplePath, partition: RandomPartition) -> float:
    """phi at the partition endpoint minus the partition integral sum."""
    idx = _partition_indices(path, partition)
    end_val = float(path.values[idx[-1]])
    return float(phi(end_val)) - integral_partition_sum(phi, path, partition)


def pathwise_variation(phi: YoungFunction, path: SamplePath) -> VariationTrace:
    """Exact-route trace: half phi'' against sigma2 dt plus jump divergences.

    The continuous term uses the trapezoid rule on left limits between
    consecutive nodes (exact for constant phi''); the jump term sums
    F(X_{s-}, X_s) over the exact jump log, with phi(X_0) playing the role
    of the time-zero divergence.
    """
    if not phi.has_second_deriv:
        raise ValueError("pathwise route needs phi with a second derivative")
    t = path.times
    initial = float(phi(path.values[0]))
    if t.size == 1:
        z = np.zeros(1)
        return VariationTrace(t, np.array([initial]), initial, z.copy(), z.copy())

    sigma2 = path.qv_cont_rate
    if sigma2 > 0.0:
        d2_right = phi.second_deriv(path.values[:-1])
        d2_left = phi.second_deriv(path.x_left[1:])
        seg = 0.5 * np.diff(t) * (d2_right + d2_left)
        cont = 0.5 * sigma2 * np.concatenate(([0.0], np.cumsum(seg)))
    else:
        cont = np.zeros(t.size)

    f_node = np.zeros(t.size)
    jm = path.is_jump
    if np.any(jm):
        f_node[jm] = bregman_divergence(phi, path.x_left[jm], path.values[jm])
    jump = np.cumsum(f_node)

    return VariationTrace(t, initial + cont + jump, initial, cont, jump)


def realized_qv(path: SamplePath, partition: RandomPartition = None) -> float:
    """Sum of squared increments over the partition (path nodes by default)."""
    if partition is None:
        v = path.values
    else:
        v = path.values[_partition_indices(path, partition)]
    d = np.diff(v)
    return float(np.sum(d * d))
