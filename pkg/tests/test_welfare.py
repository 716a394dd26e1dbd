import dataclasses
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from stabias.lre_core import LQREModel, ModelNames, StateSpaceSolution
from stabias.models import LiuPappaParams, WoodfordParams, build_liu_pappa, build_woodford
from stabias.solvers import PolicySolution, solve_commitment, solve_discretion
from stabias.welfare import (
    LossReport,
    inflation_equivalent,
    stabilisation_bias,
    unconditional_loss,
)


def white_noise_target_model(weight=2.0):
    """z_t = eps_t with a scalar weight; the loss is weight * var(eps)."""
    model = LQREModel(
        A_kk=[[0.0]], A_kf=np.zeros((1, 0)), B_k=np.zeros((1, 0)),
        A_fk=np.zeros((0, 1)), A_ff=np.zeros((0, 0)), B_f=np.zeros((0, 0)),
        A_fE=np.zeros((0, 0)), C=[[1.0]], Sigma_eps=[[1.0]], beta=0.99,
        S_k=[[1.0]], S_f=np.zeros((1, 0)), S_u=np.zeros((1, 0)), W=[[weight]],
        names=ModelNames(k=("eps",), f=(), u=(), z=("z",)),
    )
    ss = StateSpaceSolution(
        T=np.zeros((1, 1)), G_f=np.zeros((0, 1)), C=model.C, names=model.names, beta=0.99
    )
    sol = PolicySolution(regime="rule", state_space=ss, target_loading=model.S_k)
    return model, sol


class TestUnconditionalLoss:
    def test_zero_shock_loading_gives_zero_loss(self):
        model, sol = white_noise_target_model()
        silent = dataclasses.replace(model, Sigma_eps=np.zeros((1, 1)))
        assert unconditional_loss(sol, silent).total == 0.0

    def test_scalar_white_noise(self):
        model, sol = white_noise_target_model(weight=2.0)
        report = unconditional_loss(sol, model)
        assert report.total == pytest.approx(2.0, rel=1e-12)
        assert report.target_names == ("z",)

    def test_by_target_sums_to_total(self):
        for build, params in (
            (build_woodford, WoodfordParams(w2=0.3)),
            (build_liu_pappa, LiuPappaParams()),
        ):
            model = build(params)
            for solver in (solve_commitment, solve_discretion):
                report = unconditional_loss(solver(model), model)
                assert report.by_target.sum() == pytest.approx(report.total, rel=1e-10)
                assert report.total >= -1e-12

    def test_loss_invariant_to_shock_rotation(self):
        # an orthogonal relabeling of unit-variance innovations leaves the
        # state covariance, and hence the loss, unchanged
        model = build_liu_pappa(LiuPappaParams())
        sol = solve_commitment(model)
        rng = np.random.default_rng(5)
        q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
        rotated = PolicySolution(
            regime=sol.regime,
            state_space=dataclasses.replace(sol.state_space, C=sol.state_space.C @ q.T),
            target_loading=sol.target_loading,
        )
        base = unconditional_loss(sol, model).total
        rot = unconditional_loss(rotated, model).total
        assert rot == pytest.approx(base, rel=1e-10)

    def test_scale_equivariance(self):
        c = 3.0
        base = build_woodford(WoodfordParams(w2=0.25))
        scaled = build_woodford(WoodfordParams(w2=0.25, sigma_eps=c))
        l_base = unconditional_loss(solve_commitment(base), base).total
        l_scaled = unconditional_loss(solve_commitment(scaled), scaled).total
        assert l_scaled == pytest.approx(c * c * l_base, rel=1e-12)

    def test_bias_ratio_scale_invariance(self):
        ratios = []
        for sigma in (1.0, 3.0):
            model = build_woodford(WoodfordParams(w2=0.25, sigma_eps=sigma))
            l_c = unconditional_loss(solve_commitment(model), model)
            l_d = unconditional_loss(solve_discretion(model), model)
            ratios.append(stabilisation_bias(l_d, l_c).bias_ratio)
        assert ratios[0] == pytest.approx(ratios[1], rel=1e-9)


def _report(total):
    return LossReport(total=total, by_target=np.array([total]),
                      target_names=("z",), regime="test")


class TestBiasMetrics:
    def test_equal_losses_give_zero_bias(self):
        report = stabilisation_bias(_report(1.0), _report(1.0))
        assert report.bias == 0.0
        assert report.bias_ratio == 0.0
        assert report.inflation_equivalent == 0.0

    def test_simple_arithmetic(self):
        report = stabilisation_bias(_report(1.01), _report(1.00))
        assert report.bias == pytest.approx(0.01, abs=1e-15)
        assert report.bias_ratio == pytest.approx(0.01, rel=1e-12)

    def test_ratio_undefined_below_floor(self):
        report = stabilisation_bias(_report(1e-16), _report(0.0))
        assert not report.ratio_defined
        assert math.isnan(report.bias_ratio)

    def test_inflation_equivalent_values(self):
        assert inflation_equivalent(1.0 + 1e-4, 1.0) == pytest.approx(0.01, rel=1e-10)
        assert inflation_equivalent(1.0, 1.0) == 0.0
        assert inflation_equivalent(1.0, 1.0 + 1e-9) == 0.0  # clamps solver noise

    def test_report_invariants(self):
        report = stabilisation_bias(_report(2.5), _report(2.0))
        assert report.inflation_equivalent == pytest.approx(math.sqrt(0.5), rel=1e-12)
        assert report.bias >= -1e-9 * (1.0 + report.loss_commitment)
