"""Cumulative-divergence (Bregman) variation of stochastic processes.

Library layout:

* :mod:`bregvar.convex` -- Young functions, divergences, conjugates, indices
* :mod:`bregvar.orlicz` -- Luxemburg norm and moments on discrete measures
* :mod:`bregvar.paths` -- jump-diffusion path simulation with exact jump logs
* :mod:`bregvar.variation` -- discrete / partition / pathwise variation routes
* :mod:`bregvar.verify` -- exact and Monte-Carlo identity checks
* :mod:`bregvar.semigroup` -- symbols, densities, spectral semigroup on a grid
* :mod:`bregvar.hardystein` -- parabolic and elliptic identity verification
* :mod:`bregvar.cli` -- experiment runner and acceptance suite driver
"""

from .convex import (
    Delta2Certificate,
    SimonenkoIndices,
    YoungFunction,
    bregman_divergence,
    delta2_constant,
    doob_constant,
    legendre_transform,
    simonenko_indices,
    young_builtin,
    young_from_callables,
)
from .orlicz import DiscreteMeasure, decompose_l1_linf, luxemburg_norm, phi_moment
from .paths import (
    CompoundPoisson,
    GaussianLaw,
    LevyModel,
    RandomPartition,
    SamplePath,
    TruncatedStable,
    TwoPointLaw,
    UniformLaw,
    path_seed,
    refine_partition,
    simulate,
    simulate_independent_pair,
    stop_path,
)
from .reports import IdentityReport
from .variation import (
    VariationTrace,
    discrete_variation,
    integral_partition_sum,
    pathwise_variation,
    realized_qv,
    variation_via_definition,
)

__version__ = "0.1.0"
