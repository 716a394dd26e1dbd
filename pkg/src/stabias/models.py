"""Builders mapping the two benchmark economies into LQREModel form.

Closed-economy two-sector model
-------------------------------
Sectoral Phillips curves with a relative-price gap,

    pi_jt = beta E_t pi_{j,t+1} + kappa_j x_t + gamma_j (p_Rt - p^n_Rt),

the relative-price identity p_Rt = p_{R,t-1} + pi_2t - pi_1t, an AR(1)
natural relative price, and a quadratic loss on (pi_1, pi_2, x, p_R - p^n_R)
with sectoral weights w_j = n_j kappa / kappa_j summing to one.  Sweeps vary
w_2 at fixed aggregate slope kappa, so the sectoral slopes are recovered as
kappa_j = n_j kappa / w_j.

The relative-price loadings are normalized as gamma_1 = c_rel kappa_1 n_2,
gamma_2 = -c_rel kappa_2 n_1: opposite signs, proportional to own slopes,
and the n-weighted loading n_1 gamma_1 + n_2 gamma_2 vanishes exactly when
kappa_1 = kappa_2, which reproduces the aggregate Phillips curve at equal
stickiness.  c_rel only rescales the (policy-invariant) relative block, and
all headline comparisons are invariant to it.

Two-country tradable/non-tradable model
---------------------------------------
Per country: NKPCs for non-traded and home-traded inflation, and an
expenditure-proportionality condition linking the sectoral gaps,

    d x_Nt = d x_Tt - pi_Nt + pi_Ht - d a_Nt + d a_Tt,

integrated to gap_t = x_Nt - x_Tt so that one lagged gap is the only
endogenous predetermined variable.  The welfare weights are
(1-alpha) on x_N^2, (1-alpha) theta/kappa_N on pi_N^2, alpha_tilde on
x_T^2 and alpha_tilde theta/kappa_T on pi_H^2, with foreign analogues; the
traded-sector output gap is the instrument in each country and
x_N = x_T + gap.  As written the two country blocks decouple, and the model
is built exactly as written.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .lre_core import LQREModel, ModelNames
from .numerics import SolverError


class InvalidParamsError(SolverError):
    """Parameter record violates its invariants."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


W2_MIN = 0.01  # interior clamp for the sectoral-weight sweep


@dataclass(frozen=True)
class WoodfordParams:
    """Calibration of the closed-economy two-sector model (quarterly)."""

    beta: float = 0.99
    eta: float = 1.0          # substitution elasticity between sector bundles;
    kappa: float = 0.024      # absorbed into lambda_x / lambda_R, kept for provenance
    n1: float = 0.5
    lambda_x: float = 0.048
    lambda_R: float = 0.0288
    rho: float = 0.8
    w2: float = 0.5
    c_rel: float = 1.0        # scale of the relative-price-gap NKPC loadings
    sigma_eps: float = 1.0

    @property
    def n2(self) -> float:
        return 1.0 - self.n1

    @property
    def w1(self) -> float:
        return 1.0 - self.w2

    def sector_slopes(self) -> tuple[float, float]:
        """(kappa_1, kappa_2) implied by the weights at fixed aggregate slope."""
        return self.n1 * self.kappa / self.w1, self.n2 * self.kappa / self.w2

    def violations(self) -> list[str]:
        out = []
        if not 0.0 < self.beta < 1.0:
            out.append(f"beta out of (0,1): {self.beta}")
        if not 0.0 <= self.rho < 1.0:
            out.append(f"rho out of [0,1): {self.rho}")
        if not 0.0 < self.n1 < 1.0:
            out.append(f"n1 out of (0,1): {self.n1}")
        if not W2_MIN <= self.w2 <= 1.0 - W2_MIN:
            out.append(f"w2 out of [{W2_MIN}, {1.0 - W2_MIN}]: {self.w2}")
        if self.kappa <= 0.0:
            out.append(f"kappa must be positive: {self.kappa}")
        if self.lambda_x <= 0.0 or self.lambda_R <= 0.0:
            out.append("loss weights lambda_x, lambda_R must be positive")
        if self.c_rel <= 0.0:
            out.append(f"c_rel must be positive: {self.c_rel}")
        if self.sigma_eps < 0.0:
            out.append(f"sigma_eps must be nonnegative: {self.sigma_eps}")
        return out


def build_woodford(p: WoodfordParams) -> LQREModel:
    """Two-sector closed-economy model in predetermined/jump/instrument form.

    Predetermined: (p_R_lag, p_R_nat).  Jumps: (pi_1, pi_2).  Instrument: x.
    Targets: (pi_1, pi_2, x, p_R_gap) with weights (w1, w2, lambda_x, lambda_R).
    """
    problems = p.violations()
    if problems:
        raise InvalidParamsError(problems)
    k1, k2 = p.sector_slopes()
    g1 = p.c_rel * k1 * p.n2
    g2 = -p.c_rel * k2 * p.n1

    a_kk = np.array([[1.0, 0.0], [0.0, p.rho]])
    a_kf = np.array([[-1.0, 1.0], [0.0, 0.0]])
    b_k = np.zeros((2, 1))
    c = np.array([[0.0], [p.sigma_eps]])

    # beta E pi_j+ = (1 + g_j I{j=1} ...) pi - kappa_j x - g_j p_R_lag + g_j p_R_nat
    a_fe = p.beta * np.eye(2)
    a_fk = np.array([[-g1, g1], [-g2, g2]])
    a_ff = np.array([[1.0 + g1, -g1], [g2, 1.0 - g2]])
    b_f = np.array([[-k1], [-k2]])

    s_k = np.array([[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, -1.0]])
    s_f = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0], [-1.0, 1.0]])
    s_u = np.array([[0.0], [0.0], [1.0], [0.0]])
    w = np.diag([p.w1, p.w2, p.lambda_x, p.lambda_R])

    return LQREModel(
        A_kk=a_kk, A_kf=a_kf, B_k=b_k,
        A_fk=a_fk, A_ff=a_ff, B_f=b_f, A_fE=a_fe,
        C=c, Sigma_eps=np.eye(1), beta=p.beta,
        S_k=s_k, S_f=s_f, S_u=s_u, W=w,
        names=ModelNames(
            k=("p_R_lag", "p_R_nat"),
            f=("pi_1", "pi_2"),
            u=("x",),
            z=("pi_1", "pi_2", "x", "p_R_gap"),
        ),
        rule_pairs=((0, 1),),
    )


@dataclass(frozen=True)
class LiuPappaParams:
    """Calibration of the two-country tradable/non-tradable model.

    ``alpha_tilde`` defaults to ``alpha`` (the adjusted tradable weight equals
    the tradable share at the baseline calibration).  Setting ``w2`` (and
    optionally ``kappa_bar``) reparameterizes a country's slopes at a fixed
    weighted-harmonic slope:  kappa_N = (1-alpha) kbar / w1,
    kappa_T = alpha_tilde kbar / w2.  ``omega`` (home bias) is recorded for
    provenance; it does not enter the linear block as written.
    """

    beta: float = 0.99
    alpha: float = 0.3
    alpha_star: float = 0.3
    alpha_tilde: float | None = None
    alpha_tilde_star: float | None = None
    omega: float = 0.7
    theta: float = 10.0
    kappa_N: float = 0.0858
    kappa_T: float = 0.0858
    kappa_N_star: float = 0.0858
    kappa_F_star: float = 0.0858
    rho_a: float = 0.8
    sigma_a: float = 1.0
    w2: float | None = None
    kappa_bar: float | None = None
    w2_star: float | None = None
    kappa_bar_star: float | None = None

    def resolved_tilde(self) -> tuple[float, float]:
        at = self.alpha if self.alpha_tilde is None else self.alpha_tilde
        ats = self.alpha_star if self.alpha_tilde_star is None else self.alpha_tilde_star
        return at, ats

    def effective_slopes(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """((kappa_N, kappa_T), foreign) after any w2 reparameterization."""
        at, ats = self.resolved_tilde()
        home = _country_slopes(self.alpha, at, self.kappa_N, self.kappa_T,
                               self.w2, self.kappa_bar)
        foreign = _country_slopes(self.alpha_star, ats, self.kappa_N_star,
                                  self.kappa_F_star, self.w2_star, self.kappa_bar_star)
        return home, foreign

    def violations(self) -> list[str]:
        out = []
        if not 0.0 < self.beta < 1.0:
            out.append(f"beta out of (0,1): {self.beta}")
        if not 0.0 <= self.rho_a < 1.0:
            out.append(f"rho_a out of [0,1): {self.rho_a}")
        at, ats = self.resolved_tilde()
        for label, a, atilde in (("home", self.alpha, at), ("foreign", self.alpha_star, ats)):
            if not 0.0 < a < 1.0:
                out.append(f"{label} tradable share out of (0,1): {a}")
            if atilde <= 0.0:
                out.append(f"{label} adjusted tradable weight must be positive: {atilde}")
        try:
            (kn, kt), (kns, kfs) = self.effective_slopes()
            if min(kn, kt, kns, kfs) <= 0.0:
                out.append("all sectoral slopes must be positive")
        except ZeroDivisionError:
            out.append("w2 reparameterization is degenerate (weight of 0 or 1)")
        if self.theta <= 0.0:
            out.append(f"theta must be positive: {self.theta}")
        if self.sigma_a < 0.0:
            out.append(f"sigma_a must be nonnegative: {self.sigma_a}")
        for name in ("w2", "w2_star"):
            v = getattr(self, name)
            if v is not None and not 0.0 < v < 1.0:
                out.append(f"{name} out of (0,1): {v}")
        return out


def _country_slopes(alpha, alpha_tilde, kappa_n, kappa_t, w2, kappa_bar):
    if w2 is None:
        return kappa_n, kappa_t
    if not 0.0 < w2 < 1.0:
        raise ZeroDivisionError
    kbar = kappa_bar
    if kbar is None:
        kbar = 1.0 / ((1.0 - alpha) / kappa_n + alpha_tilde / kappa_t)
    return (1.0 - alpha) * kbar / (1.0 - w2), alpha_tilde * kbar / w2


def lp_weights(p: LiuPappaParams) -> tuple[tuple[float, float, float], tuple[float, float, float]]:
    """Sectoral welfare weights (w1, w2, kappa_bar) for each country.

    w1 = (1-alpha)/kappa_N and w2 = alpha_tilde/kappa_T, normalized by their
    sum; kappa_bar is the reciprocal of that sum.  w1 + w2 = 1 holds exactly.
    """
    at, ats = self_tilde = p.resolved_tilde()
    (kn, kt), (kns, kfs) = p.effective_slopes()
    out = []
    for alpha, atilde, k_n, k_t in (
        (p.alpha, self_tilde[0], kn, kt),
        (p.alpha_star, self_tilde[1], kns, kfs),
    ):
        if min(k_n, k_t) <= 0.0 or (1.0 - alpha) + atilde <= 0.0:
            raise InvalidParamsError(["sectoral slopes and weights must be positive"])
        a = (1.0 - alpha) / k_n
        b = atilde / k_t
        s = a + b
        w1, w2 = a / s, b / s
        if w1 + w2 != 1.0:
            w2 = 1.0 - w1
        out.append((w1, w2, 1.0 / s))
    return out[0], out[1]


def _lp_country_blocks(beta, alpha, alpha_tilde, kappa_n, kappa_t, theta, rho_a, sigma_a):
    """One country's matrices; states (gap_lag, a_N, a_T, a_N_lag, a_T_lag)."""
    # gap_t = gap_{t-1} - pi_N + pi_H - (a_N - a_N_lag) + (a_T - a_T_lag)
    gap_k = np.array([1.0, -1.0, 1.0, 1.0, -1.0])
    a_kk = np.array([
        gap_k,
        [0.0, rho_a, 0.0, 0.0, 0.0],
        [0.0, 0.0, rho_a, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0],
    ])
    a_kf = np.array([
        [-1.0, 1.0],
        [0.0, 0.0],
        [0.0, 0.0],
        [0.0, 0.0],
        [0.0, 0.0],
    ])
    b_k = np.zeros((5, 1))
    c = np.zeros((5, 2))
    c[1, 0] = sigma_a
    c[2, 1] = sigma_a

    # beta E pi_N+ = (1+kappa_N) pi_N - kappa_N pi_H - kappa_N x_T - kappa_N gap_k
    a_fe = beta * np.eye(2)
    a_fk = np.vstack([-kappa_n * gap_k, np.zeros(5)])
    a_ff = np.array([[1.0 + kappa_n, -kappa_n], [0.0, 1.0]])
    b_f = np.array([[-kappa_n], [-kappa_t]])

    # targets (x_N, pi_N, x_T, pi_H) with x_N = x_T + gap_t
    s_k = np.vstack([gap_k, np.zeros(5), np.zeros(5), np.zeros(5)])
    s_f = np.array([[-1.0, 1.0], [1.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
    s_u = np.array([[1.0], [0.0], [1.0], [0.0]])
    w = np.diag([
        1.0 - alpha,
        (1.0 - alpha) * theta / kappa_n,
        alpha_tilde,
        alpha_tilde * theta / kappa_t,
    ])
    return a_kk, a_kf, b_k, c, a_fe, a_fk, a_ff, b_f, s_k, s_f, s_u, w


def _block_diag(a, b):
    return np.block([
        [a, np.zeros((a.shape[0], b.shape[1]))],
        [np.zeros((b.shape[0], a.shape[1])), b],
    ])


def build_liu_pappa(p: LiuPappaParams) -> LQREModel:
    """Two-country model; home block first, foreign block second.

    Predetermined: five states per country.  Jumps: (pi_N, pi_H) and the
    foreign pair.  Instruments: the traded-sector gaps (x_T, x_T_star).
    Four independent technology innovations load the AR(1) states.
    """
    problems = p.violations()
    if problems:
        raise InvalidParamsError(problems)
    at, ats = p.resolved_tilde()
    (kn, kt), (kns, kfs) = p.effective_slopes()

    home = _lp_country_blocks(p.beta, p.alpha, at, kn, kt, p.theta, p.rho_a, p.sigma_a)
    foreign = _lp_country_blocks(p.beta, p.alpha_star, ats, kns, kfs, p.theta, p.rho_a, p.sigma_a)

    (a_kk, a_kf, b_k, c, a_fe, a_fk, a_ff, b_f, s_k, s_f, s_u, w) = (
        _block_diag(h, f) for h, f in zip(home, foreign)
    )
    k_names = ("gap_lag", "a_N", "a_T", "a_N_lag", "a_T_lag")
    z_names = ("x_N", "pi_N", "x_T", "pi_H")
    star = lambda names: tuple(n + "_star" for n in names)
    return LQREModel(
        A_kk=a_kk, A_kf=a_kf, B_k=b_k,
        A_fk=a_fk, A_ff=a_ff, B_f=b_f, A_fE=a_fe,
        C=c, Sigma_eps=np.eye(4), beta=p.beta,
        S_k=s_k, S_f=s_f, S_u=s_u, W=w,
        names=ModelNames(
            k=k_names + star(k_names),
            f=("pi_N", "pi_H") + ("pi_N_star", "pi_F_star"),
            u=("x_T", "x_T_star"),
            z=z_names + star(z_names),
        ),
        rule_pairs=((0, 1), (2, 3)),
    )


def param_names(cls) -> tuple[str, ...]:
    """Field names accepted as config overrides / sweep parameters."""
    return tuple(f.name for f in fields(cls))
