"""The three policy regimes: commitment, discretion, and targeting rules.

Commitment (timeless perspective)
    The discounted loss is minimized once and for all.  Stacking the
    first-order conditions of the Lagrangian gives a linear RE system in
    which the multipliers on the forward-looking constraints are co-states:
    predetermined, starting at zero, and carrying the policy maker's
    promises.  The stacked system is solved by the same stable-subspace
    method as any other RE model, and the unconditional loss is evaluated
    from the stationary distribution of the augmented state (k, lambda).

Discretion (Markov-perfect)
    Each period the policy maker re-optimizes, taking the private-sector
    response f = F k and the quadratic continuation value V as given.  The
    equilibrium is the fixed point of the one-period best-response map,
    found by value-function iteration.

Rule
    A weighted average of sectoral inflation rates is pegged to zero,
    phi pi_a + (1 - phi) pi_b = 0 (one row per country pair); the closed
    model is handed to the RE solver.  ``optimize_rule`` searches the
    weight(s) by grid-seeded golden sections, treating indeterminate
    parameter points as infinitely costly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lre_core import (
    LQREModel,
    ModelNames,
    NoStableSolutionError,
    StateSpaceSolution,
    close_with_rule,
    klein_solve,
    solve_re,
    validate,
)
from .numerics import (
    UNIT_CIRCLE_TOL,
    NonConvergenceError,
    ObjectiveFailureError,
    SolverError,
    minimize_scalar,
    spectral_radius,
)

COMMITMENT = "commitment"
DISCRETION = "discretion"
RULE = "rule"

_FOC_TOL = 1e-9


@dataclass(frozen=True)
class PolicySolution:
    """Closed-loop solution for one regime.

    ``state_space`` is over the regime's own predetermined state: (k, lambda)
    under commitment, k otherwise.  ``target_loading`` maps that state to the
    target vector z, so the unconditional loss is trace(W cov(z)).
    """

    regime: str
    state_space: StateSpaceSolution
    target_loading: np.ndarray
    rule_weights: tuple[float, ...] | None = None
    diagnostics: dict | None = None

    @property
    def u_response(self) -> np.ndarray | None:
        return self.state_space.G_u


def _require_valid(model: LQREModel) -> None:
    problems = validate(model)
    if problems:
        raise ValueError("invalid model: " + "; ".join(problems))


def _loss_blocks(model: LQREModel):
    w = model.W
    q_kk = model.S_k.T @ w @ model.S_k
    q_kf = model.S_k.T @ w @ model.S_f
    q_ku = model.S_k.T @ w @ model.S_u
    q_ff = model.S_f.T @ w @ model.S_f
    q_fu = model.S_f.T @ w @ model.S_u
    q_uu = model.S_u.T @ w @ model.S_u
    return q_kk, q_kf, q_ku, q_ff, q_fu, q_uu


def _commitment_pencil(model: LQREModel) -> tuple[np.ndarray, np.ndarray]:
    """Stacked first-order-condition system  A E_t s_{t+1} = B s_t.

    Ordering: s = (k, lambda | f, mu, u) with (k, lambda) predetermined.
    The blocks are the structural equations, the instrument condition, and
    the two co-state recursions

        mu_t        = S_k'W z_t + beta A_kk' mu_{t+1} + beta A_fk' lambda_{t+1}
        A_fE' lam_t = S_f'W z_t + beta A_kf' mu_{t+1} + beta A_ff' lambda_{t+1}
        0           = S_u'W z_t + beta B_k'  mu_{t+1} + beta B_f'  lambda_{t+1}
    """
    n_k, n_f, n_u = model.n_pre, model.n_jump, model.n_inst
    b = model.beta
    q_kk, q_kf, q_ku, q_ff, q_fu, q_uu = _loss_blocks(model)
    n = 2 * (n_k + n_f) + n_u

    zkk = np.zeros((n_k, n_k))
    zkf = np.zeros((n_k, n_f))
    zfk = zkf.T
    zff = np.zeros((n_f, n_f))
    zku = np.zeros((n_k, n_u))
    zfu = np.zeros((n_f, n_u))
    zuk = zku.T
    zuf = zfu.T
    zuu = np.zeros((n_u, n_u))

    # columns: k, lambda, f, mu, u
    a_lead = np.block([
        [np.eye(n_k), zkf,                 zkf,      zkk,                 zku],
        [zfk,         zff,                 model.A_fE, zfk,               zfu],
        [zuk,         -b * model.B_f.T,    zuf,      -b * model.B_k.T,    zuu],
        [zkk,         -b * model.A_fk.T,   zkf,      -b * model.A_kk.T,   zku],
        [zfk,         -b * model.A_ff.T,   zff,      -b * model.A_kf.T,   zfu],
    ])
    b_cur = np.block([
        [model.A_kk, zkf,           model.A_kf, zkk,          model.B_k],
        [model.A_fk, zff,           model.A_ff, zfk,          model.B_f],
        [q_ku.T,     zuf,           q_fu.T,     zuk,          q_uu],
        [q_kk,       zkf,           q_kf,       -np.eye(n_k), q_ku],
        [q_kf.T,     -model.A_fE.T, q_ff,       zfk,          q_fu],
    ])
    assert a_lead.shape == (n, n) and b_cur.shape == (n, n)
    return a_lead, b_cur


def commitment_foc_residual(model: LQREModel, t_mat: np.ndarray, g: np.ndarray) -> float:
    """Max-norm residual of the stacked FOC system at a candidate solution."""
    a_lead, b_cur = _commitment_pencil(model)
    lead = np.vstack([t_mat, g @ t_mat])
    cur = np.vstack([np.eye(t_mat.shape[0]), g])
    return float(np.max(np.abs(a_lead @ lead - b_cur @ cur), initial=0.0))


def solve_commitment(model: LQREModel) -> PolicySolution:
    """Stationary optimal policy with binding promises.

    The multipliers on the forward-looking constraints join the state with
    initial value zero; the returned law of motion is the stable solution of
    the stacked first-order-condition system.
    """
    _require_valid(model)
    if model.n_inst < 1:
        raise ValueError("commitment requires at least one instrument")
    n_k, n_f, n_u = model.n_pre, model.n_jump, model.n_inst

    a_lead, b_cur = _commitment_pencil(model)
    t_mat, g, _ = klein_solve(a_lead, b_cur, n_k + n_f)

    residual = commitment_foc_residual(model, t_mat, g)
    if residual > _FOC_TOL:
        raise NoStableSolutionError(
            n_k + n_f, n_k + n_f, f"first-order-condition residual {residual:.3e}"
        )
    g_f = g[:n_f]
    g_u = g[n_f + n_k:]
    c_aug = np.vstack([model.C, np.zeros((n_f, model.n_shock))])
    e_k = np.hstack([np.eye(n_k), np.zeros((n_k, n_f))])
    loading = model.S_k @ e_k + model.S_f @ g_f + model.S_u @ g_u
    names = ModelNames(
        k=model.names.k + tuple("costate_" + n for n in model.names.f),
        f=model.names.f,
        u=model.names.u,
        z=model.names.z,
    )
    state_space = StateSpaceSolution(
        T=t_mat, G_f=g_f, G_u=g_u, C=c_aug, names=names, beta=model.beta
    )
    return PolicySolution(
        regime=COMMITMENT,
        state_space=state_space,
        target_loading=loading,
        diagnostics={"foc_residual": residual},
    )


def discretion_step(model: LQREModel, v: np.ndarray, f_resp: np.ndarray):
    """One best-response update given next period's value and jump response.

    Returns (v_new, f_new, g_u, t_cl).  Solving the forward block for the
    current jumps under the conjecture f_{t+1} = f_resp k_{t+1} gives
    f_t = J_k k_t + J_u u_t; the one-period problem is then a standard LQR
    step in (k, u).
    """
    m = model.A_fE @ f_resp @ model.A_kf - model.A_ff
    rhs = np.hstack([
        model.A_fk - model.A_fE @ f_resp @ model.A_kk,
        model.B_f - model.A_fE @ f_resp @ model.B_k,
    ])
    j = np.linalg.solve(m, rhs)
    j_k, j_u = j[:, : model.n_pre], j[:, model.n_pre:]

    a_bar = model.A_kk + model.A_kf @ j_k
    b_bar = model.B_k + model.A_kf @ j_u
    z_k = model.S_k + model.S_f @ j_k
    z_u = model.S_u + model.S_f @ j_u
    q = z_k.T @ model.W @ z_k
    n_cross = z_k.T @ model.W @ z_u
    r = z_u.T @ model.W @ z_u

    h = r + model.beta * b_bar.T @ v @ b_bar
    g_u = -np.linalg.solve(h, n_cross.T + model.beta * b_bar.T @ v @ a_bar)
    t_cl = a_bar + b_bar @ g_u
    v_new = (
        q + n_cross @ g_u + g_u.T @ n_cross.T + g_u.T @ r @ g_u
        + model.beta * t_cl.T @ v @ t_cl
    )
    v_new = 0.5 * (v_new + v_new.T)
    f_new = j_k + j_u @ g_u
    return v_new, f_new, g_u, t_cl


def solve_discretion(
    model: LQREModel,
    *,
    tol: float = 1e-12,
    max_iter: int = 20_000,
    damping: float = 0.0,
) -> PolicySolution:
    """Markov-perfect policy by joint iteration on (V, F, G_u).

    ``damping`` in [0, 1) mixes the previous iterate into each update;
    value iteration can oscillate for near-unit-root exogenous persistence.
    """
    _require_valid(model)
    if model.n_inst < 1:
        raise ValueError("discretion requires at least one instrument")
    if not 0.0 <= damping < 1.0:
        raise ValueError(f"damping must lie in [0,1): {damping}")

    n_k, n_f, n_u = model.n_pre, model.n_jump, model.n_inst
    v = np.zeros((n_k, n_k))
    f_resp = np.zeros((n_f, n_k))
    g_u = np.zeros((n_u, n_k))
    change = np.inf
    for iteration in range(1, max_iter + 1):
        v_new, f_new, g_new, _ = discretion_step(model, v, f_resp)
        if damping > 0.0:
            v_new = (1.0 - damping) * v_new + damping * v
            f_new = (1.0 - damping) * f_new + damping * f_resp
        change = max(
            np.max(np.abs(v_new - v), initial=0.0),
            np.max(np.abs(f_new - f_resp), initial=0.0),
            np.max(np.abs(g_new - g_u), initial=0.0),
        )
        v, f_resp, g_u = v_new, f_new, g_new
        if change <= tol:
            break
    else:
        raise NonConvergenceError(
            f"discretion iteration did not converge in {max_iter} steps "
            f"(last change {change:.3e})",
            residual=float(change),
        )

    # Consistent closed loop at the fixed point.
    _, f_fix, g_u, t_cl = discretion_step(model, v, f_resp)
    sr = spectral_radius(t_cl)
    if sr >= 1.0 - UNIT_CIRCLE_TOL:
        raise NoStableSolutionError(
            n_k, n_k, f"discretionary closed loop has spectral radius {sr:.6g}"
        )
    loading = model.S_k + model.S_f @ f_fix + model.S_u @ g_u
    state_space = StateSpaceSolution(
        T=t_cl, G_f=f_fix, G_u=g_u, C=model.C.copy(), names=model.names, beta=model.beta
    )
    return PolicySolution(
        regime=DISCRETION,
        state_space=state_space,
        target_loading=loading,
        diagnostics={"iterations": iteration, "last_change": float(change), "value": v},
    )


def _rule_rows(model: LQREModel, phi: tuple[float, ...]):
    if not model.rule_pairs:
        raise ValueError("model declares no inflation pairs for targeting rules")
    if len(phi) != len(model.rule_pairs):
        raise ValueError(
            f"rule needs {len(model.rule_pairs)} weight(s), got {len(phi)}"
        )
    r_f = np.zeros((model.n_inst, model.n_jump))
    for row, (p, (ia, ib)) in enumerate(zip(phi, model.rule_pairs)):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"rule weight out of [0,1]: {p}")
        r_f[row, ia] = p
        r_f[row, ib] = 1.0 - p
    r_k = np.zeros((model.n_inst, model.n_pre))
    r_u = np.zeros((model.n_inst, model.n_inst))
    return r_k, r_f, r_u


def solve_rule(model: LQREModel, phi) -> PolicySolution:
    """Peg the weighted inflation index (one per country pair) at zero."""
    _require_valid(model)
    phi = tuple(np.atleast_1d(np.asarray(phi, dtype=float)).tolist())
    r_k, r_f, r_u = _rule_rows(model, phi)
    closed = close_with_rule(model, r_k, r_f, r_u)
    try:
        sol = solve_re(closed)
    except SolverError as exc:
        exc.args = (f"{exc.args[0]} [rule weights phi={phi}]",) + exc.args[1:]
        raise
    n_f = model.n_jump
    g_f = sol.G_f[:n_f]
    g_u = sol.G_f[n_f:]
    loading = closed.S_k + closed.S_f @ sol.G_f
    state_space = StateSpaceSolution(
        T=sol.T, G_f=g_f, G_u=g_u, C=sol.C, names=model.names, beta=model.beta
    )
    return PolicySolution(
        regime=RULE,
        state_space=state_space,
        target_loading=loading,
        rule_weights=phi,
    )


def optimize_rule(model: LQREModel, n_weights: int | None = None):
    """Loss-minimizing rule weights in [0,1]^n, smallest-weight tie-breaking.

    One weight is searched directly; two are searched by coordinate descent
    (the country blocks are separable as built, so the sweeps terminate after
    the second pass).  Returns (phi_star, PolicySolution at phi_star).
    """
    from .welfare import unconditional_loss  # local import, no cycle at module load

    _require_valid(model)
    if n_weights is None:
        n_weights = len(model.rule_pairs)
    if n_weights not in (1, 2) or n_weights != len(model.rule_pairs):
        raise ValueError(
            f"model supports {len(model.rule_pairs)} rule weight(s), asked for {n_weights}"
        )

    def loss_at(phi: tuple[float, ...]) -> float:
        return unconditional_loss(solve_rule(model, phi), model).total

    search_tol = 1e-7
    if n_weights == 1:
        phi_star, _ = minimize_scalar(lambda x: loss_at((x,)), 0.0, 1.0, tol=search_tol)
        best = (phi_star,)
    else:
        current = [0.5, 0.5]
        prev_value = np.inf
        for _ in range(20):
            for j in (0, 1):
                def coord(x, j=j):
                    point = list(current)
                    point[j] = x
                    return loss_at(tuple(point))

                current[j], value = minimize_scalar(coord, 0.0, 1.0, tol=search_tol)
            if prev_value - value < 1e-12:
                break
            prev_value = value
        best = tuple(current)

    solution = solve_rule(model, best)
    return best, PolicySolution(
        regime=RULE,
        state_space=solution.state_space,
        target_loading=solution.target_loading,
        rule_weights=best,
        diagnostics={"optimized": True},
    )
