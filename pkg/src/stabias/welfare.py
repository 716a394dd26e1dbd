"""Unconditional loss evaluation and the stabilisation-bias metrics.

The loss criterion is a discounted expectation of a quadratic form in the
targets with a (1-beta) normalization, so for a stationary equilibrium it
collapses to the per-period expectation E[z'Wz] = trace(W cov(z)).  The
stabilisation bias is the loss under discretion minus the loss under
commitment; its inflation equivalent is the permanent inflation deviation
with the same welfare cost, sqrt(L_d - L_c).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lre_core import LQREModel
from .numerics import discrete_lyapunov
from .solvers import PolicySolution

RATIO_FLOOR = 1e-14  # commitment losses below this leave the ratio undefined


@dataclass(frozen=True)
class LossReport:
    """Per-period unconditional expected loss with a per-target split.

    Cross-weight terms are folded into the diagonal attribution by symmetric
    splitting, so ``by_target`` sums to ``total`` exactly; the attribution is
    diagnostic only.
    """

    total: float
    by_target: np.ndarray
    target_names: tuple[str, ...]
    regime: str

    def lines(self) -> list[str]:
        out = [f"regime: {self.regime}", f"total loss: {self.total:.12g}"]
        for name, value in zip(self.target_names, self.by_target):
            out.append(f"  {name}: {value:.12g}")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


@dataclass(frozen=True)
class BiasReport:
    """Welfare comparison of discretion against commitment."""

    loss_discretion: float
    loss_commitment: float
    bias: float
    bias_ratio: float
    ratio_defined: bool
    inflation_equivalent: float
    loss_rule: float | None = None


def unconditional_loss(sol: PolicySolution, model: LQREModel) -> LossReport:
    """Stationary expected per-period loss of a policy solution.

    The state covariance solves the discount-free Lyapunov equation of the
    closed loop; the target covariance follows from the solution's loading,
    and the loss is trace(W cov(z)).
    """
    ss = sol.state_space
    q = ss.C @ model.Sigma_eps @ ss.C.T
    sigma_state = discrete_lyapunov(ss.T, q, 1.0)
    sigma_z = sol.target_loading @ sigma_state @ sol.target_loading.T
    contributions = model.W * sigma_z
    by_target = contributions.sum(axis=1)
    total = float(by_target.sum())
    if total < 0.0:
        total = 0.0 if total > -1e-12 else total
    return LossReport(
        total=total,
        by_target=by_target,
        target_names=model.names.z,
        regime=sol.regime,
    )


def stabilisation_bias(loss_d: LossReport, loss_c: LossReport) -> BiasReport:
    """Loss under discretion minus loss under commitment, with scale-free ratio."""
    bias = loss_d.total - loss_c.total
    defined = loss_c.total >= RATIO_FLOOR
    ratio = bias / loss_c.total if defined else math.nan
    return BiasReport(
        loss_discretion=loss_d.total,
        loss_commitment=loss_c.total,
        bias=bias,
        bias_ratio=ratio,
        ratio_defined=defined,
        inflation_equivalent=inflation_equivalent(loss_d.total, loss_c.total),
    )


def inflation_equivalent(loss_d: float, loss_c: float) -> float:
    """Permanent inflation deviation equivalent to the commitment gain.

    Differentials that are negative within solver tolerance clamp to zero.
    """
    return math.sqrt(max(loss_d - loss_c, 0.0))


def deterministic_impulse_loss(
    sol: PolicySolution,
    model: LQREModel,
    eps0: np.ndarray,
    horizon: int,
) -> float:
    """Discounted loss sum_{t<horizon} beta^t z_t'W z_t after a date-0 impulse."""
    ss = sol.state_space
    state = ss.C @ np.asarray(eps0, dtype=float)
    total = 0.0
    discount = 1.0
    for _ in range(horizon):
        z = sol.target_loading @ state
        total += discount * float(z @ model.W @ z)
        discount *= model.beta
        state = ss.T @ state
    return total
