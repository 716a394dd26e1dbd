"""Commitment, discretion and weighted inflation-targeting in two-sector NK models.

A small numpy/scipy toolkit for linear-quadratic rational-expectations
models: build one of the two benchmark economies (or your own LQREModel),
solve it under the three policy regimes, and compare unconditional losses.

>>> import stabias
>>> model = stabias.build_woodford(stabias.WoodfordParams(w2=0.25))
>>> lc = stabias.unconditional_loss(stabias.solve_commitment(model), model)
>>> ld = stabias.unconditional_loss(stabias.solve_discretion(model), model)
>>> stabias.stabilisation_bias(ld, lc).bias_ratio < 0.02
True
"""

from .numerics import (
    NonConvergenceError,
    NonStationaryError,
    ObjectiveFailureError,
    SolverError,
    discrete_lyapunov,
    minimize_scalar,
    spectral_radius,
)
from .lre_core import (
    IndeterminacyError,
    LQREModel,
    ModelNames,
    NoStableSolutionError,
    SingularRuleError,
    StateSpaceSolution,
    close_with_rule,
    solve_re,
    validate,
)
from .models import (
    InvalidParamsError,
    LiuPappaParams,
    WoodfordParams,
    build_liu_pappa,
    build_woodford,
    lp_weights,
)
from .solvers import (
    COMMITMENT,
    DISCRETION,
    RULE,
    PolicySolution,
    optimize_rule,
    solve_commitment,
    solve_discretion,
    solve_rule,
)
from .welfare import (
    BiasReport,
    LossReport,
    deterministic_impulse_loss,
    inflation_equivalent,
    stabilisation_bias,
    unconditional_loss,
)

__version__ = "0.1.0"

__all__ = [
    "BiasReport",
    "COMMITMENT",
    "DISCRETION",
    "IndeterminacyError",
    "InvalidParamsError",
    "LQREModel",
    "LiuPappaParams",
    "LossReport",
    "ModelNames",
    "NoStableSolutionError",
    "NonConvergenceError",
    "NonStationaryError",
    "ObjectiveFailureError",
    "PolicySolution",
    "RULE",
    "SingularRuleError",
    "SolverError",
    "StateSpaceSolution",
    "WoodfordParams",
    "build_liu_pappa",
    "build_woodford",
    "close_with_rule",
    "deterministic_impulse_loss",
    "discrete_lyapunov",
    "inflation_equivalent",
    "lp_weights",
    "minimize_scalar",
    "optimize_rule",
    "solve_commitment",
    "solve_discretion",
    "solve_re",
    "solve_rule",
    "spectral_radius",
    "stabilisation_bias",
    "unconditional_loss",
    "validate",
    "__version__",
]
