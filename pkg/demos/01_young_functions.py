"""Young functions and their certificates
========================================

A Young function is even, convex, vanishes at zero, and grows faster than
linearly.  The library ships two families: plain powers |x|^p and the
log-perturbed powers |x|^p log^gamma(e + |x|).  Each carries analytic first
and second derivatives plus certified metadata: the doubling constant, the
Simonenko index pair, and the maximal-inequality constant built from them.
"""

import numpy as np

from bregvar import (
    bregman_divergence,
    delta2_constant,
    doob_constant,
    legendre_transform,
    simonenko_indices,
    young_builtin,
)

phi2 = young_builtin("power", p=2)
phi3 = young_builtin("power", p=3)
plog = young_builtin("plog", p=2, gamma=1)

print("values of x^2 at 3:", phi2(3.0), phi2.deriv(3.0), phi2.second_deriv(3.0))
print("x^2 log(e+x) at 1:", float(plog(1.0)), "(= log(e+1))")

# The divergence F(x, y) = phi(y) - phi(x) - phi'(x)(y - x) is the quadratic
# remainder; for the square it is literally the squared increment.
print("\ndivergence of the square at (1, 3):", bregman_divergence(phi2, 1.0, 3.0))
print("divergence of the cube at (1, 2):  ", bregman_divergence(phi3, 1.0, 2.0))

# The convex conjugate pairs with phi in Young's inequality.
print("\nconjugate of x^2 at gamma=2:", legendre_transform(phi2, 2.0))
print("conjugate of |x|^3 at gamma=3:", legendre_transform(phi3, 3.0))
lams = np.linspace(0, 5, 6)
gams = np.linspace(0, 5, 6)
worst = max(
    l * g - float(phi3(l)) - legendre_transform(phi3, g) for l in lams for g in gams
)
print("largest Young-inequality violation on a sample grid:", worst, "(<= 0 expected)")

# Certificates: the doubling constant is exactly 2^p for powers and sits
# strictly between 4 and 8 for the log family at p=2.
for name, phi in (("x^2", phi2), ("x^3", phi3), ("x^2 log(e+x)", plog)):
    cert = delta2_constant(phi)
    idx = simonenko_indices(phi)
    c = doob_constant(idx) if idx.moderate else float("nan")
    print(
        f"\n{name}: K = {cert.k_phi:.6f} (exact={cert.exact}), "
        f"indices = ({idx.lower:.6f}, {idx.upper:.6f}), maximal constant = {c:.4f}"
    )
