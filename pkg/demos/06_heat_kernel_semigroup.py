"""Transition densities and the semigroup on a periodic grid
===========================================================

The symbol sigma2 xi^2 / 2 + integral of (1 - cos xi z) against the jump
measure drives everything: its exponential inverts to the transition
density, multiplies spectra to apply the semigroup, and i xi gives the
gradient.  Sampling the symbol at grid frequencies is exactly the
periodized process, so mass and convolution identities hold to rounding.
"""

import math

import numpy as np

from bregvar import DiscreteMeasure, luxemburg_norm, young_builtin
from bregvar.paths import CompoundPoisson, TruncatedStable, TwoPointLaw
from bregvar.semigroup import (
    GridFunction,
    LevySymbol,
    apply_semigroup,
    hartman_wintner_check,
    semigroup_gradient,
    transition_density,
)

heat = LevySymbol(sigma2=2.0)
p1 = transition_density(heat, t=1.0, L=40.0, m=12)
i0 = int(np.argmin(np.abs(p1.x)))
print("p_1(0) =", p1.values[i0], " exact (4 pi)^-1/2 =", (4 * math.pi) ** -0.5)
print("mass  =", p1.integral())

# The growth heuristic separates symbols with smooth densities from bounded
# (pure compound-Poisson) ones.
cp_only = LevySymbol(0.0, CompoundPoisson(2.0, TwoPointLaw(1.0)))
stable = LevySymbol(0.0, TruncatedStable(alpha=1.5, c=1.0, eps=1e-4))
print("\ngrowth check: diffusion", hartman_wintner_check(heat).passed,
      "| pure CP", hartman_wintner_check(cp_only).passed,
      "| small-cutoff stable", hartman_wintner_check(stable).passed)

# Applying the semigroup to a Gaussian reproduces the closed-form convolution.
f = GridFunction.from_callable(lambda x: np.exp(-(x**2) / 2), 40.0, 12)
g = apply_semigroup(f, heat, t=0.5)
var = 1.0 + 2.0 * 0.5
oracle = np.exp(-f.x**2 / (2 * var)) / math.sqrt(var)
print("\nconvolution error:", float(np.max(np.abs(g.values - oracle))))
dg = semigroup_gradient(f, heat, t=0.5)
print("gradient error:   ", float(np.max(np.abs(dg.values + f.x / var * oracle))))

# Norm contraction: the semigroup never increases the Luxemburg norm.
mu = DiscreteMeasure.uniform_grid(f.x, f.dx)
for phi_name, phi in (("x^2", young_builtin("power", p=2)), ("x^3", young_builtin("power", p=3))):
    norms = [luxemburg_norm(apply_semigroup(f, heat, t).values, mu, phi) for t in (0.0, 0.1, 1.0)]
    print(f"norms under {phi_name} at t = 0, 0.1, 1:", [round(v, 6) for v in norms])
