"""Canonical linear-quadratic rational-expectations models and the RE solver.

A model is written in partitioned predetermined/jump form with explicit
policy instruments:

    k_{t+1}            = A_kk k_t + A_kf f_t + B_k u_t + C eps_{t+1}
    A_fE E_t f_{t+1}   = A_fk k_t + A_ff f_t + B_f u_t

with a discounted quadratic loss on targets z_t = S_k k_t + S_f f_t + S_u u_t,

    E (1-beta) sum_t beta^t  z_t' W z_t.

Innovations load onto k_{t+1} (end-of-period timing), so exogenous AR(1)
states dated t are known when period-t decisions are made.

``solve_re`` closes a model with no free instruments by the stable-subspace
(generalized Schur) method and returns the unique stable law of motion when
the count of stable generalized eigenvalues equals the number of
predetermined variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy import linalg

from .numerics import UNIT_CIRCLE_TOL, SolverError, spectral_radius

_COND_LIMIT = 1e12


class IndeterminacyError(SolverError):
    """More stable eigenvalues than predetermined variables: multiple solutions."""

    def __init__(self, n_stable: int, n_pre: int, detail: str = ""):
        super().__init__(
            f"indeterminate: {n_stable} stable eigenvalues for {n_pre} predetermined variables"
            + (f" ({detail})" if detail else "")
        )
        self.n_stable = n_stable
        self.n_pre = n_pre


class NoStableSolutionError(SolverError):
    """Too few stable eigenvalues, or the stable subspace is degenerate."""

    def __init__(self, n_stable: int, n_pre: int, detail: str = ""):
        super().__init__(
            f"no stable solution: {n_stable} stable eigenvalues for {n_pre} predetermined variables"
            + (f" ({detail})" if detail else "")
        )
        self.n_stable = n_stable
        self.n_pre = n_pre


class SingularRuleError(SolverError):
    """A policy rule that cannot close the model."""


@dataclass(frozen=True)
class ModelNames:
    """Ordered labels for the variable blocks; report columns derive from these."""

    k: tuple[str, ...]
    f: tuple[str, ...]
    u: tuple[str, ...]
    z: tuple[str, ...]


@dataclass(frozen=True)
class RuleClosure:
    """How instruments were removed from a model closed by a policy rule."""

    method: str  # "eliminated" (R_u invertible) or "appended" (static rows)
    r_k: np.ndarray
    r_f: np.ndarray
    r_u: np.ndarray
    n_jump_orig: int
    n_inst_orig: int


def _as_matrix(x, rows: int, cols: int, name: str) -> np.ndarray:
    a = np.asarray(x, dtype=float).reshape(rows, cols)
    a = a.copy()
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LQREModel:
    """Immutable container for one linear-quadratic RE model."""

    A_kk: np.ndarray
    A_kf: np.ndarray
    B_k: np.ndarray
    A_fk: np.ndarray
    A_ff: np.ndarray
    B_f: np.ndarray
    A_fE: np.ndarray
    C: np.ndarray
    Sigma_eps: np.ndarray
    beta: float
    S_k: np.ndarray
    S_f: np.ndarray
    S_u: np.ndarray
    W: np.ndarray
    names: ModelNames
    rule_pairs: tuple[tuple[int, int], ...] = ()
    closure: RuleClosure | None = None

    def __post_init__(self):
        n_k, n_f, n_u = len(self.names.k), len(self.names.f), len(self.names.u)
        n_z = len(self.names.z)
        n_s = np.asarray(self.C).shape[1] if np.asarray(self.C).size else 0
        fix = object.__setattr__
        fix(self, "A_kk", _as_matrix(self.A_kk, n_k, n_k, "A_kk"))
        fix(self, "A_kf", _as_matrix(self.A_kf, n_k, n_f, "A_kf"))
        fix(self, "B_k", _as_matrix(self.B_k, n_k, n_u, "B_k"))
        fix(self, "A_fk", _as_matrix(self.A_fk, n_f, n_k, "A_fk"))
        fix(self, "A_ff", _as_matrix(self.A_ff, n_f, n_f, "A_ff"))
        fix(self, "B_f", _as_matrix(self.B_f, n_f, n_u, "B_f"))
        fix(self, "A_fE", _as_matrix(self.A_fE, n_f, n_f, "A_fE"))
        fix(self, "C", _as_matrix(self.C, n_k, n_s, "C"))
        fix(self, "Sigma_eps", _as_matrix(self.Sigma_eps, n_s, n_s, "Sigma_eps"))
        fix(self, "S_k", _as_matrix(self.S_k, n_z, n_k, "S_k"))
        fix(self, "S_f", _as_matrix(self.S_f, n_z, n_f, "S_f"))
        fix(self, "S_u", _as_matrix(self.S_u, n_z, n_u, "S_u"))
        fix(self, "W", _as_matrix(self.W, n_z, n_z, "W"))

    @property
    def n_pre(self) -> int:
        return len(self.names.k)

    @property
    def n_jump(self) -> int:
        return len(self.names.f)

    @property
    def n_inst(self) -> int:
        return len(self.names.u)

    @property
    def n_shock(self) -> int:
        return self.C.shape[1]

    @property
    def n_target(self) -> int:
        return len(self.names.z)


def identity_sigma(n_shock: int) -> np.ndarray:
    """Default unit innovation covariance."""
    return np.eye(n_shock)


def validate(model: LQREModel) -> list[str]:
    """Return every invariant violation as a human-readable string.

    An empty list means the model is well formed.  Violations are data, not
    failures; solvers raise on them only when asked to run anyway.
    """
    out: list[str] = []
    mats = {
        "A_kk": model.A_kk, "A_kf": model.A_kf, "B_k": model.B_k,
        "A_fk": model.A_fk, "A_ff": model.A_ff, "B_f": model.B_f,
        "A_fE": model.A_fE, "C": model.C, "Sigma_eps": model.Sigma_eps,
        "S_k": model.S_k, "S_f": model.S_f, "S_u": model.S_u, "W": model.W,
    }
    for name, m in mats.items():
        if m.size and not np.all(np.isfinite(m)):
            out.append(f"{name} has non-finite entries")
    if not 0.0 < model.beta < 1.0:
        out.append(f"beta out of (0,1): {model.beta}")
    scale = max(1.0, float(np.max(np.abs(model.W), initial=0.0)))
    if model.W.size and np.max(np.abs(model.W - model.W.T)) > 1e-12 * scale:
        out.append("W not symmetric")
    elif model.W.size:
        eigs = np.linalg.eigvalsh(0.5 * (model.W + model.W.T))
        if eigs.size and eigs[0] < -1e-12 * scale:
            out.append(f"W not positive semidefinite (min eigenvalue {eigs[0]:.3e})")
    se = model.Sigma_eps
    if se.size:
        sscale = max(1.0, float(np.max(np.abs(se))))
        if np.max(np.abs(se - se.T)) > 1e-12 * sscale:
            out.append("Sigma_eps not symmetric")
        elif np.linalg.eigvalsh(0.5 * (se + se.T))[0] < -1e-12 * sscale:
            out.append("Sigma_eps not positive semidefinite")
    # Static (all-zero) A_fE rows are legitimate only in rule-closed models;
    # an open model needs the lead block to be invertible.
    if model.n_inst > 0 and model.n_jump > 0:
        if np.linalg.cond(model.A_fE) > _COND_LIMIT:
            out.append("A_fE not invertible (condition number above 1e12)")
    elif model.n_jump > 0 and model.closure is None:
        if np.linalg.cond(model.A_fE) > _COND_LIMIT:
            out.append("A_fE not invertible (condition number above 1e12)")
    for row in range(model.n_target):
        nz = (
            int(np.any(model.S_k[row] != 0.0))
            + int(np.any(model.S_f[row] != 0.0))
            + int(np.any(model.S_u[row] != 0.0))
        )
        if nz == 0:
            out.append(f"target '{model.names.z[row]}' loads on no variable")
    return out


@dataclass(frozen=True)
class StateSpaceSolution:
    """Closed-loop law of motion  state_{t+1} = T state_t + C eps_{t+1}.

    ``G_f`` maps the predetermined state to the jump block, ``G_u`` (when the
    model retained explicit instruments) to the instruments.
    """

    T: np.ndarray
    G_f: np.ndarray
    C: np.ndarray
    names: ModelNames
    beta: float
    G_u: np.ndarray | None = None
    eigenvalues: np.ndarray | None = None

    def __post_init__(self):
        sr = spectral_radius(np.sqrt(self.beta) * self.T)
        if sr >= 1.0:
            raise NoStableSolutionError(
                0, self.T.shape[0], f"closed loop unstable: sr(sqrt(beta) T) = {sr:.6g}"
            )


def re_residuals(model: LQREModel, t_mat: np.ndarray, g_f: np.ndarray) -> tuple[float, float]:
    """Max-norm residuals of the two equation blocks at a candidate solution."""
    res_k = model.A_kk + model.A_kf @ g_f - t_mat
    res_f = model.A_fE @ g_f @ t_mat - model.A_fk - model.A_ff @ g_f
    return (
        float(np.max(np.abs(res_k), initial=0.0)),
        float(np.max(np.abs(res_f), initial=0.0)),
    )


def klein_solve(
    a_lead: np.ndarray, b_cur: np.ndarray, n_pre: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stable-subspace solution of  a_lead E_t s_{t+1} = b_cur s_t.

    The first ``n_pre`` entries of s are predetermined.  Returns
    ``(T, G, eigenvalues)`` with s2_t = G s1_t and s1_{t+1} = T s1_t.
    Raises IndeterminacyError / NoStableSolutionError on eigenvalue-count
    mismatches, carrying the counts.
    """
    n = a_lead.shape[0]
    if n_pre == n:
        t_mat = np.linalg.solve(a_lead, b_cur) if n else b_cur.copy()
        return t_mat, np.zeros((0, n_pre)), np.linalg.eigvals(t_mat) if n else np.array([])

    def stable(alpha, beta):
        return np.abs(alpha) < (1.0 - UNIT_CIRCLE_TOL) * np.abs(beta)

    # ordqz(B, A) orders the pencil so the dynamic roots are alpha/beta.
    aa, bb, alpha, beta, _, z = linalg.ordqz(b_cur, a_lead, sort=stable, output="complex")
    with np.errstate(divide="ignore", invalid="ignore"):
        eigenvalues = np.where(np.abs(beta) > 0, alpha / beta, np.inf)
    n_stable = int(np.sum(stable(alpha, beta)))
    if n_stable > n_pre:
        raise IndeterminacyError(n_stable, n_pre)
    if n_stable < n_pre:
        raise NoStableSolutionError(n_stable, n_pre)

    z11 = z[:n_pre, :n_pre]
    z21 = z[n_pre:, :n_pre]
    if n_pre and np.linalg.cond(z11) > _COND_LIMIT:
        raise NoStableSolutionError(
            n_stable, n_pre, "stable subspace not spanned by the predetermined block"
        )
    g = np.real(z21 @ np.linalg.inv(z11)) if n_pre else np.zeros((n - n_pre, 0))
    s11 = aa[:n_pre, :n_pre]
    t11 = bb[:n_pre, :n_pre]
    t_mat = np.real(z11 @ np.linalg.solve(t11, s11) @ np.linalg.inv(z11)) if n_pre else np.zeros((0, 0))
    return t_mat, g, eigenvalues


def solve_re(model: LQREModel, *, residual_tol: float = 1e-9) -> StateSpaceSolution:
    """Determinate RE solution of a model with no free instruments."""
    if model.n_inst != 0:
        raise ValueError("solve_re requires a closed model (n_inst = 0)")
    problems = validate(model)
    if problems:
        raise ValueError("invalid model: " + "; ".join(problems))

    n_k, n_f = model.n_pre, model.n_jump
    if n_f == 0:
        t_mat = model.A_kk.copy()
        g_f = np.zeros((0, n_k))
    else:
        a_lead = np.block([
            [np.eye(n_k), np.zeros((n_k, n_f))],
            [np.zeros((n_f, n_k)), model.A_fE],
        ])
        b_cur = np.block([
            [model.A_kk, model.A_kf],
            [model.A_fk, model.A_ff],
        ])
        t_mat, g_f, _ = klein_solve(a_lead, b_cur, n_k)
        # T from the Schur blocks and from re-substitution agree to rounding;
        # keep the re-substituted form so the k-block identity is exact.
        t_mat = model.A_kk + model.A_kf @ g_f

    res_k, res_f = re_residuals(model, t_mat, g_f)
    if max(res_k, res_f) > residual_tol:
        raise NoStableSolutionError(
            n_k, n_k, f"forward-block residual {max(res_k, res_f):.3e} above {residual_tol:g}"
        )
    return StateSpaceSolution(
        T=t_mat, G_f=g_f, C=model.C.copy(), names=model.names, beta=model.beta
    )


def close_with_rule(
    model: LQREModel,
    r_k: np.ndarray,
    r_f: np.ndarray,
    r_u: np.ndarray,
) -> LQREModel:
    """Close a model with rule rows  R_k k_t + R_f f_t + R_u u_t = 0.

    One row per instrument.  When R_u is invertible the instruments are
    eliminated algebraically; otherwise they are folded into the jump block
    and the rule rows enter the forward system as static constraints.
    """
    n_u = model.n_inst
    r_k = np.asarray(r_k, dtype=float).reshape(n_u, model.n_pre)
    r_f = np.asarray(r_f, dtype=float).reshape(n_u, model.n_jump)
    r_u = np.asarray(r_u, dtype=float).reshape(n_u, n_u)
    if n_u == 0:
        raise ValueError("model has no instruments to close")
    stacked = np.hstack([r_k, r_f, r_u])
    if np.any(np.all(stacked == 0.0, axis=1)) or np.linalg.matrix_rank(stacked) < n_u:
        raise SingularRuleError("rule rows are rank deficient; cannot close the model")

    closure_args = dict(r_k=r_k, r_f=r_f, r_u=r_u,
                        n_jump_orig=model.n_jump, n_inst_orig=n_u)

    if np.linalg.matrix_rank(r_u) == n_u and np.linalg.cond(r_u) < _COND_LIMIT:
        # u_t = -R_u^{-1} (R_k k_t + R_f f_t)
        g_k = -np.linalg.solve(r_u, r_k)
        g_f = -np.linalg.solve(r_u, r_f)
        return replace(
            model,
            A_kk=model.A_kk + model.B_k @ g_k,
            A_kf=model.A_kf + model.B_k @ g_f,
            B_k=np.zeros((model.n_pre, 0)),
            A_fk=model.A_fk + model.B_f @ g_k,
            A_ff=model.A_ff + model.B_f @ g_f,
            B_f=np.zeros((model.n_jump, 0)),
            S_k=model.S_k + model.S_u @ g_k,
            S_f=model.S_f + model.S_u @ g_f,
            S_u=np.zeros((model.n_target, 0)),
            names=ModelNames(model.names.k, model.names.f, (), model.names.z),
            closure=RuleClosure(method="eliminated", **closure_args),
        )

    # Fold instruments into the jump block; the rule rows become static
    # constraints (zero-lead rows of the forward system).
    n_f = model.n_jump
    a_fe = np.block([
        [model.A_fE, np.zeros((n_f, n_u))],
        [np.zeros((n_u, n_f + n_u))],
    ])
    a_ff = np.block([
        [model.A_ff, model.B_f],
        [r_f, r_u],
    ])
    a_fk = np.vstack([model.A_fk, r_k])
    return replace(
        model,
        A_kf=np.hstack([model.A_kf, model.B_k]),
        B_k=np.zeros((model.n_pre, 0)),
        A_fk=a_fk,
        A_ff=a_ff,
        B_f=np.zeros((n_f + n_u, 0)),
        A_fE=a_fe,
        S_f=np.hstack([model.S_f, model.S_u]),
        S_u=np.zeros((model.n_target, 0)),
        names=ModelNames(model.names.k, model.names.f + model.names.u, (), model.names.z),
        closure=RuleClosure(method="appended", **closure_args),
    )
