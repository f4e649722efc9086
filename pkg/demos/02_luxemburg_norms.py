"""Luxemburg norms on empirical measures
=======================================

The norm of f is the smallest K with sum w_i phi(|f_i| / K) <= 1.  For the
power family it reduces to the plain weighted p-norm, which makes an easy
oracle; for other Young functions the bisection is the only route.
"""

import numpy as np

from bregvar import DiscreteMeasure, decompose_l1_linf, luxemburg_norm, phi_moment, young_builtin

phi2 = young_builtin("power", p=2)
plog = young_builtin("plog", p=2, gamma=1)

mu = DiscreteMeasure(atoms=np.array([0.0, 1.0]), weights=np.array([0.5, 0.5]))
f = np.array([3.0, 4.0])
print("norm of (3,4) under x^2:", luxemburg_norm(f, mu, phi2))
print("p-norm oracle sqrt(12.5):", np.sqrt(12.5))
print("norm under the log family:", luxemburg_norm(f, mu, plog))

# The modular of f / ||f|| equals one for doubling phi.
k = luxemburg_norm(f, mu, plog)
print("modular at the norm:", phi_moment(np.abs(f) / k, mu, plog))

# A function splits into a large-value part with finite weighted L1 mass and
# a bounded remainder; the threshold solves phi(lambda) = lambda.
rng = np.random.default_rng(3)
mu_big = DiscreteMeasure(np.arange(8.0), rng.uniform(0.2, 1.0, 8))
g = rng.normal(0, 3, 8)
g1, g_inf, lam0 = decompose_l1_linf(g, mu_big, phi2)
print("\nsplit threshold lambda_0:", lam0)
print("large part support:", np.flatnonzero(g1 != 0.0))
print("bounded part max:", np.max(np.abs(g_inf)), "<=", lam0 * luxemburg_norm(g, mu_big, phi2))
print("recombines exactly:", bool(np.array_equal(g1 + g_inf, g)))
