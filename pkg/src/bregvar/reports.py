"""Identity-check reports: left/right sides, residuals, verdicts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

__all__ = ["IdentityReport"]


@dataclass(frozen=True)
class IdentityReport:
    """Comparison of the two sides of an identity or bound.

    For Monte-Carlo checks ``stderr`` is the standard error of the paired
    per-path difference and ``grid_allowance`` the measured discretization
    bias (kept separate from the statistical error on purpose).
    """

    lhs: float
    rhs: float
    tol: float
    passed: bool
    n_samples: Optional[int] = None
    stderr: Optional[float] = None
    grid_allowance: Optional[float] = None
    lhs_stderr: Optional[float] = None

    @property
    def abs_err(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def rel_err(self) -> float:
        return self.abs_err / max(abs(self.lhs), abs(self.rhs), 1e-300)

    @classmethod
    def exact(cls, lhs: float, rhs: float, rtol: float) -> "IdentityReport":
        """Verdict on the relative error of a deterministic identity."""
        err = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
        return cls(lhs=float(lhs), rhs=float(rhs), tol=rtol, passed=bool(err <= rtol))

    @classmethod
    def monte_carlo(
        cls,
        lhs: float,
        rhs: float,
        stderr: float,
        n_samples: int,
        grid_allowance: float = 0.0,
        sigmas: float = 3.0,
        lhs_stderr: Optional[float] = None,
    ) -> "IdentityReport":
        """Two-sided verdict |lhs - rhs| <= sigmas * stderr + grid allowance."""
        tol = sigmas * stderr + grid_allowance
        return cls(
            lhs=float(lhs),
            rhs=float(rhs),
            tol=tol,
            passed=bool(abs(lhs - rhs) <= tol),
            n_samples=n_samples,
            stderr=stderr,
            grid_allowance=grid_allowance,
            lhs_stderr=lhs_stderr,
        )

    @classmethod
    def upper_bound(
        cls,
        lhs: float,
        rhs: float,
        stderr: float,
        n_samples: int,
        sigmas: float = 3.0,
    ) -> "IdentityReport":
        """One-sided verdict lhs <= rhs + sigmas * stderr."""
        tol = sigmas * stderr
        return cls(
            lhs=float(lhs),
            rhs=float(rhs),
            tol=tol,
            passed=bool(lhs <= rhs + tol),
            n_samples=n_samples,
            stderr=stderr,
        )

    def as_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "stderr": self.stderr,
            "grid_allowance": self.grid_allowance,
            "n_samples": self.n_samples,
            "tol": self.tol,
            "verdict": "pass" if self.passed else "fail",
        }
