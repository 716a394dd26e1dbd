import dataclasses

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from stabias.lre_core import (
    IndeterminacyError,
    LQREModel,
    ModelNames,
    SingularRuleError,
    close_with_rule,
    re_residuals,
    solve_re,
    validate,
)
from stabias.models import WoodfordParams, build_woodford
from stabias.solvers import solve_rule


def scalar_forward_model(a, b, rho):
    """f_t = a E_t f_{t+1} + b k_t with k an AR(1); no instruments."""
    return LQREModel(
        A_kk=[[rho]], A_kf=[[0.0]], B_k=np.zeros((1, 0)),
        A_fk=[[-b]], A_ff=[[1.0]], B_f=np.zeros((1, 0)), A_fE=[[a]],
        C=[[1.0]], Sigma_eps=[[1.0]], beta=0.99,
        S_k=[[1.0]], S_f=[[0.0]], S_u=np.zeros((1, 0)), W=[[1.0]],
        names=ModelNames(k=("k",), f=("f",), u=(), z=("k",)),
    )


class TestValidate:
    def test_woodford_defaults_are_valid(self):
        assert validate(build_woodford(WoodfordParams())) == []

    def test_beta_out_of_range(self):
        model = dataclasses.replace(build_woodford(WoodfordParams()), beta=1.2)
        assert any("beta out of (0,1)" in v for v in validate(model))

    def test_asymmetric_w(self):
        base = build_woodford(WoodfordParams())
        w = base.W.copy()
        w[0, 1] = 0.3
        model = dataclasses.replace(base, W=w)
        assert any("W not symmetric" in v for v in validate(model))

    def test_indefinite_w(self):
        base = build_woodford(WoodfordParams())
        model = dataclasses.replace(base, W=-base.W)
        assert any("positive semidefinite" in v for v in validate(model))


class TestSolveRE:
    def test_scalar_geometric_sum(self):
        sol = solve_re(scalar_forward_model(a=0.5, b=1.0, rho=0.8))
        assert_allclose(sol.G_f, [[1.0 / (1.0 - 0.5 * 0.8)]], rtol=1e-12)
        assert_allclose(sol.T, [[0.8]], rtol=1e-12)

    def test_inside_circle_root_is_indeterminate(self):
        with pytest.raises(IndeterminacyError) as info:
            solve_re(scalar_forward_model(a=2.0, b=1.0, rho=0.8))
        assert info.value.n_stable > info.value.n_pre

    def test_purely_backward_model(self):
        a_kk = np.array([[0.9, 0.1], [0.0, 0.5]])
        model = LQREModel(
            A_kk=a_kk, A_kf=np.zeros((2, 0)), B_k=np.zeros((2, 0)),
            A_fk=np.zeros((0, 2)), A_ff=np.zeros((0, 0)), B_f=np.zeros((0, 0)),
            A_fE=np.zeros((0, 0)), C=np.eye(2), Sigma_eps=np.eye(2), beta=0.99,
            S_k=np.eye(2), S_f=np.zeros((2, 0)), S_u=np.zeros((2, 0)), W=np.eye(2),
            names=ModelNames(k=("k1", "k2"), f=(), u=(), z=("k1", "k2")),
        )
        sol = solve_re(model)
        assert_array_equal(sol.T, a_kk)

    def test_residuals_and_determinism_on_closed_woodford(self):
        model = build_woodford(WoodfordParams(w2=0.3))
        closed = close_with_rule(model, np.zeros((1, 2)), [[0.4, 0.6]], [[0.0]])
        first = solve_re(closed)
        second = solve_re(closed)
        assert_array_equal(first.T, second.T)
        assert_array_equal(first.G_f, second.G_f)
        res_k, res_f = re_residuals(closed, first.T, first.G_f)
        assert max(res_k, res_f) <= 1e-9

    def test_rule_closures_determinate_across_w2_grid(self):
        # interior phi, Table-1 parameters: determinate for all w2 on the grid
        for phi in (0.25, 0.5, 0.75):
            for i in range(1, 20):
                w2 = round(0.05 * i, 2)
                model = build_woodford(WoodfordParams(w2=w2))
                sol = solve_rule(model, phi)
                res_k, res_f = re_residuals(
                    close_with_rule(model, np.zeros((1, 2)), [[phi, 1 - phi]], [[0.0]]),
                    sol.state_space.T,
                    np.vstack([sol.state_space.G_f, sol.state_space.G_u]),
                )
                assert max(res_k, res_f) <= 1e-9


class TestCloseWithRule:
    def test_zero_instrument_rule_drops_b_columns(self):
        model = build_woodford(WoodfordParams())
        closed = close_with_rule(
            model, np.zeros((1, 2)), np.zeros((1, 2)), np.eye(1)
        )
        assert closed.n_inst == 0
        assert closed.B_k.shape == (2, 0)
        assert_array_equal(closed.A_kk, model.A_kk)
        assert_array_equal(closed.A_ff, model.A_ff)
        assert closed.closure.method == "eliminated"

    def test_static_append_keeps_rule_row(self):
        model = build_woodford(WoodfordParams())
        phi = 0.5
        closed = close_with_rule(model, np.zeros((1, 2)), [[phi, 1 - phi]], [[0.0]])
        assert closed.closure.method == "appended"
        assert closed.n_jump == 3 and closed.n_inst == 0
        # last forward row is the static constraint: zero lead, rule loadings
        assert_array_equal(closed.A_fE[2], np.zeros(3))
        assert_allclose(closed.A_ff[2], [phi, 1 - phi, 0.0])
        assert validate(closed) == []

    def test_all_zero_rule_rows_rejected(self):
        model = build_woodford(WoodfordParams())
        with pytest.raises(SingularRuleError):
            close_with_rule(model, np.zeros((1, 2)), np.zeros((1, 2)), np.zeros((1, 1)))

    def test_eliminated_and_appended_closures_agree(self):
        # a rule with invertible R_u can also be closed by static appending;
        # both routes must produce the same equilibrium law of motion
        model = build_woodford(WoodfordParams(w2=0.35))
        r_k, r_f, r_u = np.array([[0.1, -0.2]]), np.array([[0.3, 0.4]]), np.array([[1.0]])
        closed_elim = close_with_rule(model, r_k, r_f, r_u)
        sol_elim = solve_re(closed_elim)

        a_fe = np.block([
            [model.A_fE, np.zeros((2, 1))],
            [np.zeros((1, 3))],
        ])
        a_ff = np.block([[model.A_ff, model.B_f], [r_f, r_u]])
        static = dataclasses.replace(
            model,
            A_kf=np.hstack([model.A_kf, model.B_k]),
            B_k=np.zeros((2, 0)),
            A_fk=np.vstack([model.A_fk, r_k]),
            A_ff=a_ff,
            B_f=np.zeros((3, 0)),
            A_fE=a_fe,
            S_f=np.hstack([model.S_f, model.S_u]),
            S_u=np.zeros((4, 0)),
            names=ModelNames(model.names.k, model.names.f + model.names.u, (), model.names.z),
            closure=closed_elim.closure,
        )
        sol_app = solve_re(static)
        assert_allclose(sol_app.T, sol_elim.T, atol=1e-10)
        assert_allclose(sol_app.G_f[:2], sol_elim.G_f, atol=1e-10)
