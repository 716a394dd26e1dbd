import dataclasses

import numpy as np
import pytest
from numpy.testing import assert_allclose

from stabias.lre_core import IndeterminacyError, LQREModel, ModelNames
from stabias.models import LiuPappaParams, WoodfordParams, build_liu_pappa, build_woodford
from stabias.numerics import NonConvergenceError
from stabias.solvers import (
    discretion_step,
    optimize_rule,
    solve_commitment,
    solve_discretion,
    solve_rule,
)
from stabias.welfare import unconditional_loss

from oracles import backward_induction_discretion, stacked_commitment_loss


def cost_push_model(beta=0.99, kappa=0.3, lam=0.25, rho=0.5):
    """One-sector NKPC with an AR(1) cost-push term; loss pi^2 + lam x^2."""
    return LQREModel(
        A_kk=[[rho]], A_kf=[[0.0]], B_k=[[0.0]],
        A_fk=[[-1.0]], A_ff=[[1.0]], B_f=[[-kappa]], A_fE=[[beta]],
        C=[[1.0]], Sigma_eps=[[1.0]], beta=beta,
        S_k=[[0.0], [0.0]], S_f=[[1.0], [0.0]], S_u=[[0.0], [1.0]],
        W=np.diag([1.0, lam]),
        names=ModelNames(k=("u",), f=("pi",), u=("x",), z=("pi", "x")),
    )


def backward_only_model():
    """No forward-looking block: all regimes collapse to the same LQR."""
    return LQREModel(
        A_kk=[[0.9, 0.2], [0.0, 0.5]], A_kf=np.zeros((2, 0)), B_k=[[0.4], [1.0]],
        A_fk=np.zeros((0, 2)), A_ff=np.zeros((0, 0)), B_f=np.zeros((0, 0)),
        A_fE=np.zeros((0, 0)), C=np.eye(2), Sigma_eps=np.eye(2), beta=0.98,
        S_k=np.vstack([np.eye(2), np.zeros((1, 2))]), S_f=np.zeros((3, 0)),
        S_u=[[0.0], [0.0], [1.0]], W=np.diag([1.0, 0.5, 0.3]),
        names=ModelNames(k=("k1", "k2"), f=(), u=("x",), z=("k1", "k2", "x")),
    )


class TestDiscretionAgainstClosedForm:
    def test_cost_push_markov_perfect(self):
        beta, kappa, lam, rho = 0.99, 0.3, 0.25, 0.5
        sol = solve_discretion(cost_push_model(beta, kappa, lam, rho))
        pi_response = sol.state_space.G_f[0, 0]
        assert pi_response == pytest.approx(lam / (lam * (1 - beta * rho) + kappa**2), rel=1e-12)
        assert sol.state_space.G_u[0, 0] == pytest.approx(-(kappa / lam) * pi_response, rel=1e-12)

    def test_one_step_reproduction(self):
        model = build_woodford(WoodfordParams(w2=0.3))
        sol = solve_discretion(model)
        v = sol.diagnostics["value"]
        v2, f2, g2, _ = discretion_step(model, v, sol.state_space.G_f)
        assert np.max(np.abs(f2 - sol.state_space.G_f)) <= 1e-11
        assert np.max(np.abs(g2 - sol.state_space.G_u)) <= 1e-11
        assert np.max(np.abs(v2 - v)) <= 1e-11

    def test_nonconvergence_budget(self):
        with pytest.raises(NonConvergenceError):
            solve_discretion(build_woodford(WoodfordParams()), max_iter=3)

    def test_damping_reaches_same_fixed_point(self):
        model = build_woodford(WoodfordParams(w2=0.2, rho=0.95))
        plain = solve_discretion(model)
        damped = solve_discretion(model, damping=0.5)
        assert_allclose(damped.state_space.G_u, plain.state_space.G_u, atol=1e-9)


class TestCommitment:
    def test_no_jumps_equals_discretion(self):
        model = backward_only_model()
        sc = solve_commitment(model)
        sd = solve_discretion(model)
        assert_allclose(sc.state_space.G_u, sd.state_space.G_u, atol=1e-10)
        lc = unconditional_loss(sc, model).total
        ld = unconditional_loss(sd, model).total
        assert ld == pytest.approx(lc, rel=1e-10)

    def test_no_jumps_commitment_feedback_as_rule(self):
        # expressing the commitment feedback as a rule reproduces its loss
        model = backward_only_model()
        sc = solve_commitment(model)
        from stabias.lre_core import close_with_rule, solve_re

        closed = close_with_rule(model, -sc.state_space.G_u, np.zeros((1, 0)), np.eye(1))
        ss = solve_re(closed)
        loading = closed.S_k + closed.S_f @ ss.G_f
        from stabias.solvers import PolicySolution

        rule_sol = PolicySolution(regime="rule", state_space=ss, target_loading=loading)
        assert unconditional_loss(rule_sol, model).total == pytest.approx(
            unconditional_loss(sc, model).total, rel=1e-10
        )

    def test_foc_residual_reported_and_small(self):
        sol = solve_commitment(build_woodford(WoodfordParams(w2=0.25)))
        assert sol.diagnostics["foc_residual"] <= 1e-9

    def test_symmetric_point_equals_optimal_rule(self):
        model = build_woodford(WoodfordParams(w2=0.5))
        lc = unconditional_loss(solve_commitment(model), model).total
        phi, rule = optimize_rule(model)
        lr = unconditional_loss(rule, model).total
        assert lr == pytest.approx(lc, rel=1e-8)
        assert phi[0] == pytest.approx(0.5, abs=1e-4)

    def test_impulse_path_matches_stacked_oracle(self):
        from stabias.welfare import deterministic_impulse_loss

        model = build_woodford(WoodfordParams(w2=0.25))
        sol = solve_commitment(model)
        path = deterministic_impulse_loss(sol, model, np.array([1.0]), 500)
        oracle = stacked_commitment_loss(model, model.C @ np.array([1.0]), 500)
        assert path == pytest.approx(oracle, rel=1e-6)


class TestRegimeOrdering:
    def test_commitment_is_lower_bound_on_woodford_grid(self):
        for w2 in (0.1, 0.3, 0.5, 0.7, 0.9):
            model = build_woodford(WoodfordParams(w2=w2))
            lc = unconditional_loss(solve_commitment(model), model).total
            ld = unconditional_loss(solve_discretion(model), model).total
            _, rule = optimize_rule(model)
            lr = unconditional_loss(rule, model).total
            tol = 1e-9 * (1.0 + lc)
            assert ld >= lc - tol
            assert lr >= lc - tol


class TestRules:
    def test_phi_zero_pegs_second_sector(self):
        model = build_woodford(WoodfordParams(w2=0.3))
        sol = solve_rule(model, 0.0)
        assert sol.rule_weights == (0.0,)
        # pegged index is pi_2 alone: its response to the state is identically 0
        assert np.max(np.abs(sol.state_space.G_f[1])) <= 1e-12

    def test_liu_pappa_two_rule_rows(self):
        model = build_liu_pappa(LiuPappaParams())
        from stabias.solvers import _rule_rows

        _, r_f, _ = _rule_rows(model, (0.6, 0.4))
        assert_allclose(r_f[0], [0.6, 0.4, 0.0, 0.0])
        assert_allclose(r_f[1], [0.0, 0.0, 0.4, 0.6])

    def test_indeterminate_rule_is_tagged(self):
        # a third jump with a root inside the unit circle stays indeterminate
        # no matter how the first two are pegged
        model = LQREModel(
            A_kk=[[0.8]], A_kf=np.zeros((1, 3)), B_k=[[0.0]],
            A_fk=[[-0.1], [-0.1], [0.0]],
            A_ff=np.diag([1.0, 1.0, 1.0]),
            B_f=[[-0.2], [-0.4], [0.0]],
            A_fE=np.diag([0.99, 0.99, 2.0]),
            C=[[1.0]], Sigma_eps=[[1.0]], beta=0.99,
            S_k=np.zeros((2, 1)), S_f=[[1.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
            S_u=[[0.0], [1.0]], W=np.diag([1.0, 0.1]),
            names=ModelNames(k=("k",), f=("pi_a", "pi_b", "q"), u=("x",), z=("pi_a", "x")),
            rule_pairs=((0, 1),),
        )
        with pytest.raises(IndeterminacyError) as info:
            solve_rule(model, 0.5)
        assert "phi=(0.5,)" in str(info.value)

    def test_optimizer_ties_break_to_first_grid_point(self):
        # zero out every loss weight that the rule weight can influence: at the
        # symmetric point the relative-price block is policy independent, so
        # with weight only on it the loss is flat in phi
        base = build_woodford(WoodfordParams(w2=0.5))
        flat = dataclasses.replace(base, W=np.diag([0.0, 0.0, 0.0, 0.0288]))
        phi, sol = optimize_rule(flat)
        assert phi == (0.0,)
        reference = unconditional_loss(solve_rule(flat, 0.77), flat).total
        assert unconditional_loss(sol, flat).total == pytest.approx(reference, rel=1e-9)

    def test_lp_coordinate_descent_confirmed_by_grid(self):
        model = build_liu_pappa(LiuPappaParams(alpha=0.4, alpha_star=0.25))
        phi, sol = optimize_rule(model)
        best = unconditional_loss(sol, model).total
        grid = np.linspace(0.0, 1.0, 21)
        grid_best = min(
            unconditional_loss(solve_rule(model, (a, b)), model).total
            for a in grid
            for b in grid
        )
        assert best <= grid_best + 1e-10 * (1.0 + abs(grid_best))


class TestDiscretionOracle:
    def test_backward_induction_matches_fixed_point(self):
        model = build_woodford(WoodfordParams(w2=0.5, rho=0.0))
        sol = solve_discretion(model)
        _, f50, g50 = backward_induction_discretion(model, 50)
        assert np.max(np.abs(g50 - sol.state_space.G_u)) <= 1e-8
