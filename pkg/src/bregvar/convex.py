"""Young-function toolkit: construction, Bregman divergence, conjugates, indices.

A Young function is even, continuous, convex, vanishes at 0, and grows
super-linearly at infinity while being sub-linear at 0.  The toolkit keeps
analytic first and second derivatives for the builtin families and certifies
the doubling constant and the Simonenko indices on a log grid when no closed
form is available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    ConjugateUnresolvedError,
    ConvexityError,
    DegenerateFunctionError,
    NotModerateError,
)

__all__ = [
    "YoungFunction",
    "ClosedForms",
    "SimonenkoIndices",
    "Delta2Certificate",
    "young_builtin",
    "young_from_callables",
    "bregman_divergence",
    "legendre_transform",
    "delta2_constant",
    "simonenko_indices",
    "doob_constant",
    "log_grid",
]

# Negative Bregman values above this threshold are rounding noise and get
# clamped to zero; anything below signals a genuinely non-convex input.
BREGMAN_SLACK = 1e-12

_CERT_GRID = None  # built lazily; 400 log-spaced points on [1e-8, 1e8]


def log_grid(lo: float = 1e-8, hi: float = 1e8, n: int = 400) -> np.ndarray:
    """Log-spaced positive grid used for sup/inf certification."""
    if lo <= 0 or hi <= lo or n < 2:
        raise ValueError("need 0 < lo < hi and n >= 2")
    return np.logspace(math.log10(lo), math.log10(hi), n)


def _default_grid() -> np.ndarray:
    global _CERT_GRID
    if _CERT_GRID is None:
        _CERT_GRID = log_grid()
    return _CERT_GRID


@dataclass(frozen=True)
class ClosedForms:
    """Exact constants when the family admits them (None when unknown)."""

    k_phi: Optional[float] = None
    d_phi: Optional[float] = None
    big_d_phi: Optional[float] = None


@dataclass(frozen=True)
class SimonenkoIndices:
    """Lower/upper index pair d <= D of lambda*phi'(lambda)/phi(lambda)."""

    lower: float
    upper: float
    exact: bool

    def __post_init__(self):
        if not (1.0 <= self.lower <= self.upper):
            raise ValueError(f"indices must satisfy 1 <= d <= D, got ({self.lower}, {self.upper})")

    @property
    def moderate(self) -> bool:
        return self.lower > 1.0 and math.isfinite(self.upper)


@dataclass(frozen=True)
class Delta2Certificate:
    """Doubling constant sup phi(2x)/phi(x) estimated on a grid."""

    k_phi: float
    grid_lo: float
    grid_hi: float
    grid_n: int
    exact: bool


@dataclass(frozen=True)
class YoungFunction:
    """Evaluatable Young function with derivatives and certified metadata.

    ``second_deriv`` may be a central-difference fallback for user-supplied
    functions, in which case ``second_exact`` is False.
    """

    family: str
    params: tuple
    _f: Callable[[np.ndarray], np.ndarray]
    _df: Callable[[np.ndarray], np.ndarray]
    _d2f: Optional[Callable[[np.ndarray], np.ndarray]]
    closed_forms: ClosedForms
    second_exact: bool = True

    def __call__(self, lam):
        return self._f(np.asarray(lam, dtype=float))

    def deriv(self, lam):
        return self._df(np.asarray(lam, dtype=float))

    @property
    def has_second_deriv(self) -> bool:
        return self._d2f is not None

    def second_deriv(self, lam):
        if self._d2f is None:
            raise ValueError(f"phi family '{self.family}' carries no second derivative")
        return self._d2f(np.asarray(lam, dtype=float))

    def __repr__(self):  # params in the tag keep reports readable
        args = ",".join(f"{v:g}" for v in self.params)
        return f"YoungFunction({self.family}:{args})"


def _power_family(p: float) -> YoungFunction:
    def f(lam):
        return np.abs(lam) ** p

    def df(lam):
        return p * np.abs(lam) ** (p - 1.0) * np.sign(lam)

    if p == 2.0:

        def d2f(lam):
            return np.full_like(np.asarray(lam, dtype=float), 2.0)

    else:

        def d2f(lam):
            with np.errstate(divide="ignore"):
                return p * (p - 1.0) * np.abs(lam) ** (p - 2.0)

    try:
        k_phi = 2.0**p
    except OverflowError:
        k_phi = math.inf
    forms = ClosedForms(k_phi=k_phi, d_phi=p, big_d_phi=p)
    return YoungFunction("power", (p,), f, df, d2f, forms)


def _plog_family(p: float, gamma: float) -> YoungFunction:
    e = math.e

    def f(lam):
        u = np.abs(lam)
        return u**p * np.log(e + u) ** gamma

    def df(lam):
        u = np.abs(lam)
        big_l = np.log(e + u)
        return (p * u ** (p - 1.0) * big_l**gamma + gamma * u**p * big_l ** (gamma - 1.0) / (e + u)) * np.sign(lam)

    def d2f(lam):
        u = np.abs(lam)
        big_l = np.log(e + u)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (
                p * (p - 1.0) * u ** (p - 2.0) * big_l**gamma
                + 2.0 * p * gamma * u ** (p - 1.0) * big_l ** (gamma - 1.0) / (e + u)
                + gamma * (gamma - 1.0) * u**p * big_l ** (gamma - 2.0) / (e + u) ** 2
                - gamma * u**p * big_l ** (gamma - 1.0) / (e + u) ** 2
            )
        return out

    return YoungFunction("plog", (p, gamma), f, df, d2f, ClosedForms())


def young_builtin(name: str, **params) -> YoungFunction:
    """Construct a builtin Young function.

    Parameters
    ----------
    name : str
        ``"power"`` for |x|^p or ``"plog"`` for |x|^p log^gamma(e+|x|).
    **params
        ``p`` (required, p > 1) and for "plog" additionally ``gamma``.

    Raises
    ------
    ValueError
        Unknown family or parameters outside the Young-function regime.
    ConvexityError
        "plog" parameters whose second derivative goes negative on the
        certification grid.
    """
    if name == "power":
        p = float(params.pop("p"))
        if params:
            raise ValueError(f"unexpected parameters for power family: {sorted(params)}")
        if not (1.0 < p < math.inf):
            raise ValueError(f"power family requires p in (1, inf), got p={p}")
        return _power_family(p)
    if name == "plog":
        p = float(params.pop("p"))
        gamma = float(params.pop("gamma"))
        if params:
            raise ValueError(f"unexpected parameters for plog family: {sorted(params)}")
        if not (1.0 < p < math.inf):
            raise ValueError(f"plog family requires p in (1, inf), got p={p}")
        phi = _plog_family(p, gamma)
        grid = _default_grid()
        d2 = phi.second_deriv(grid)
        if not np.all(np.isfinite(d2)) or np.any(d2 < 0.0):
            raise ConvexityError(
                f"plog(p={p}, gamma={gamma}) is not convex on [1e-8, 1e8]"
            )
        # super-linear growth at infinity fails when gamma pushes the slope
        # ratio below 1 near the grid edge
        ratio = grid * phi.deriv(grid) / phi(grid)
        if ratio.min() < 1.0 - 1e-12:
            raise ValueError(f"plog(p={p}, gamma={gamma}) violates Young growth bounds")
        return phi
    raise ValueError(f"unknown Young family: {name!r}")


def young_from_callables(
    f: Callable,
    deriv: Callable,
    second_deriv: Optional[Callable] = None,
    tag: str = "custom",
) -> YoungFunction:
    """Wrap user callables; a central-difference second derivative is used
    when none is given (flagged approximate)."""

    def fv(lam):
        return np.asarray(f(lam), dtype=float)

    def dfv(lam):
        return np.asarray(deriv(lam), dtype=float)

    if second_deriv is not None:
        return YoungFunction(tag, (), fv, dfv, lambda lam: np.asarray(second_deriv(lam), float), ClosedForms())

    def d2_numeric(lam):
        lam = np.asarray(lam, dtype=float)
        h = np.maximum(1e-6, 1e-6 * np.abs(lam))
        return (dfv(lam + h) - dfv(lam - h)) / (2.0 * h)

    return YoungFunction(tag, (), fv, dfv, d2_numeric, ClosedForms(), second_exact=False)


def bregman_divergence(phi: YoungFunction, x, y):
    """Second-order Taylor remainder phi(y) - phi(x) - phi'(x)(y-x).

    Nonnegative for convex phi; rounding noise down to -1e-12 is clamped to
    zero, anything more negative raises :class:`ConvexityError`.  Accepts
    scalars or broadcastable arrays.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    val = phi(y) - phi(x) - phi.deriv(x) * (y - x)
    bad = val < -BREGMAN_SLACK
    if np.any(bad):
        worst = float(np.min(val))
        raise ConvexityError(f"Bregman divergence {worst:g} below -1e-12: phi not convex?")
    val = np.where(val < 0.0, 0.0, val)
    return float(val) if val.ndim == 0 else val


def legendre_transform(phi: YoungFunction, gamma: float, bracket_cap: float = 1e15) -> float:
    """Convex conjugate sup_{lam >= 0} |gamma|*lam - phi(lam).

    The maximizer solves phi'(lam) = |gamma|; monotonicity of phi' makes
    bisection globally convergent.  The bracket doubles from 1 until
    phi'(lam) >= |gamma|; exceeding ``bracket_cap`` raises
    :class:`ConjugateUnresolvedError`.
    """
    if bracket_cap <= 0:
        raise ValueError("bracket_cap must be positive")
    g = abs(float(gamma))
    if g == 0.0:
        return 0.0
    hi = 1.0
    while float(phi.deriv(hi)) < g:
        hi *= 2.0
        if hi > bracket_cap:
            raise ConjugateUnresolvedError(
                f"conjugate unresolved: phi' never reaches {g:g} below bracket cap {bracket_cap:g}"
            )
    lo = 0.0
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if float(phi.deriv(mid)) < g:
            lo = mid
        else:
            hi = mid
    lam = 0.5 * (lo + hi)
    return max(0.0, g * lam - float(phi(lam)))


def delta2_constant(phi: YoungFunction, grid: Optional[np.ndarray] = None) -> Delta2Certificate:
    """Doubling constant sup phi(2x)/phi(x) over a positive log grid."""
    grid = _default_grid() if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0 or np.any(grid <= 0.0):
        raise ValueError("grid must be nonempty and strictly positive")
    vals = phi(grid)
    if np.any(vals == 0.0):
        raise DegenerateFunctionError("phi vanishes on a positive grid point")
    k_grid = float(np.max(phi(2.0 * grid) / vals))
    if k_grid < 2.0 - 1e-12:
        raise ConvexityError(f"doubling ratio {k_grid:g} below 2; phi not a Young function")
    k_closed = phi.closed_forms.k_phi
    exact = k_closed is not None and abs(k_grid - k_closed) <= 1e-9 * abs(k_closed)
    return Delta2Certificate(
        k_phi=k_closed if exact else k_grid,
        grid_lo=float(grid[0]),
        grid_hi=float(grid[-1]),
        grid_n=grid.size,
        exact=exact,
    )


def simonenko_indices(
    phi: YoungFunction,
    grid: Optional[np.ndarray] = None,
    use_closed_forms: bool = True,
) -> SimonenkoIndices:
    """Grid estimate of the index pair (inf, sup) of lam*phi'(lam)/phi(lam).

    Closed forms override the estimate when the family supplies them; the
    grid must span at least [1e-8, 1e8] so the inf/sup are probed near both
    ends.
    """
    grid = _default_grid() if grid is None else np.asarray(grid, dtype=float)
    if grid[0] > 1e-8 or grid[-1] < 1e8:
        raise ValueError("grid must span at least [1e-8, 1e8]")
    ratio = grid * phi.deriv(grid) / phi(grid)
    if not np.all(np.isfinite(ratio)):
        raise DegenerateFunctionError("index ratio non-finite on the grid")
    lower, upper = float(np.min(ratio)), float(np.max(ratio))
    forms = phi.closed_forms
    if use_closed_forms and forms.d_phi is not None and forms.big_d_phi is not None:
        return SimonenkoIndices(forms.d_phi, forms.big_d_phi, exact=True)
    lower = max(lower, 1.0)
    return SimonenkoIndices(lower, upper, exact=False)


def doob_constant(indices: SimonenkoIndices) -> float:
    """Maximal-function constant (d/(d-1))^D for moderate phi."""
    if not indices.moderate:
        raise NotModerateError(
            f"not moderate: need 1 < d <= D < inf, got ({indices.lower}, {indices.upper})"
        )
    d, big_d = indices.lower, indices.upper
    return (d / (d - 1.0)) ** big_d
