# -*- coding: utf-8 -*-
"""
信息不等式服务层测试
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.stats import norm

from src.estimation.bounds.service import (
    bayes_risk_sandwich,
    bounds_report,
    chapman_robbins_bound,
    efficiency_verdict,
    fit_slope,
    minimax_bound,
)
from src.estimation.exceptions import CapabilityError, InvalidInputError
from src.estimation.model.schemas import Model, ParamPoint, Prior
from src.estimation.model.service import sample
from src.estimation.schemas import SeedState

GRID = [25, 50, 100, 200]


def _tail_curve(scale: float) -> dict[int, float]:
    """ℙ = Φ(−scale·√n)"""
    return {n: float(np.exp(norm.logcdf(-scale * math.sqrt(n)))) for n in GRID}


def test_gaussian_pair_bounds(gaussian_pair: Model) -> None:
    """KL = 2、C = 1/2。"""
    assert chapman_robbins_bound(gaussian_pair, 0) == pytest.approx(-2.0, abs=1e-12)
    assert minimax_bound(gaussian_pair) == pytest.approx(-0.5, abs=1e-8)

    report = bounds_report(gaussian_pair, 0)
    assert report.cr_rate_bound == pytest.approx(-2.0, abs=1e-12)
    assert report.inaccuracy_cap == -report.cr_rate_bound
    assert report.minimax_rate_bound == pytest.approx(-0.5, abs=1e-8)
    assert report.bayes_risk_rate_bound == report.minimax_rate_bound
    assert report.cr_attaining == [1]
    assert report.minimax_pair == (0, 1)
    assert report.per_truth_cr == pytest.approx([-2.0, -2.0])


def test_three_point_bounds(gaussian_three_point: Model) -> None:
    """均值 {0,1,5}：CR = −min(0.5, 12.5)，minimax = −1/8。"""
    assert chapman_robbins_bound(gaussian_three_point, 0) == pytest.approx(-0.5, abs=1e-12)
    report = bounds_report(gaussian_three_point, 0)
    assert report.cr_attaining == [1]
    assert report.minimax_rate_bound == pytest.approx(-0.125, abs=1e-8)
    assert report.per_truth_cr == pytest.approx([-0.5, -0.5, -8.0])


def test_symmetric_truth_attained_twice(gaussian_symmetric: Model) -> None:
    report = bounds_report(gaussian_symmetric, 1)
    assert report.cr_attaining == [0, 2]
    assert report.truth_label == "0"


@pytest.mark.parametrize(
    "fixture_name",
    ["gaussian_pair", "gaussian_three_point", "poisson_pair", "two_symbol", "five_symbol_three_point"],
)
def test_cr_bound_below_minimax_bound(request: pytest.FixtureRequest, fixture_name: str) -> None:
    """C(a,b) ≤ KL(a‖b) 使得每个真值处 CR 界不高于 minimax 界。"""
    model: Model = request.getfixturevalue(fixture_name)
    report = bounds_report(model, 0)
    assert all(cr <= report.minimax_rate_bound + 1e-9 for cr in report.per_truth_cr)
    assert report.minimax_rate_bound <= 0.0


def test_singleton_space_rejected() -> None:
    model = Model.model_validate(
        {
            "space": {"points": [{"label": "only", "value": [0.0]}]},
            "family": {"name": "gaussian_known_var", "sigma": 1.0},
        }
    )
    with pytest.raises(InvalidInputError):
        minimax_bound(model)
    with pytest.raises(InvalidInputError):
        bounds_report(model, 0)


def test_truth_out_of_range(gaussian_pair: Model) -> None:
    with pytest.raises(InvalidInputError):
        chapman_robbins_bound(gaussian_pair, 2)


def test_fit_slope_recovers_exact_exponent() -> None:
    curve = {n: math.exp(-1.0 - 0.3 * n - 0.5 * math.log(n)) for n in GRID}
    fit = fit_slope(curve)
    assert fit.slope == pytest.approx(-0.3, abs=1e-9)
    assert fit.log_coefficient == pytest.approx(-0.5, abs=1e-7)
    assert fit.points == 4


def test_fit_slope_requires_four_points() -> None:
    with pytest.raises(InvalidInputError):
        fit_slope({25: 0.1, 50: 0.01, 100: 0.001})
    with pytest.raises(InvalidInputError):
        fit_slope({25: 0.1, 50: 0.01, 100: 0.001, 200: 1.5})


def test_mle_verdict(gaussian_pair: Model) -> None:
    """θ̂ⁿ 在两个真值下的误差均为 Φ(−√n)：达到 minimax 界而达不到 CR 界。"""
    report = bounds_report(gaussian_pair, 0)
    verdict = efficiency_verdict({0: _tail_curve(1.0), 1: _tail_curve(1.0)}, report)
    assert verdict.slope_under_truth == pytest.approx(-0.5, abs=0.02)
    assert verdict.attains_minimax
    assert not verdict.attains_cr
    assert verdict.no_superefficiency
    assert verdict.flags == []


def test_shifted_rule_trades_worst_case(gaussian_pair: Model) -> None:
    """k = 1 的平移规则：θ₀ 下斜率更陡，最大误差斜率更平。"""
    report = bounds_report(gaussian_pair, 0)
    mle = efficiency_verdict({0: _tail_curve(1.0), 1: _tail_curve(1.0)}, report)
    shifted = efficiency_verdict(
        {0: _tail_curve(1.5), 1: _tail_curve(0.5)}, report, estimator="shifted(k=1)"
    )
    assert shifted.slope_under_truth < mle.slope_under_truth
    assert shifted.max_over_truth_slope > mle.max_over_truth_slope
    assert not shifted.attains_minimax
    assert shifted.no_superefficiency


def test_constant_estimator_verdict(gaussian_pair: Model) -> None:
    """常数估计量：θ₀ 下概率为 0（斜率 −∞），θ₁ 下恒为 1。"""
    report = bounds_report(gaussian_pair, 0)
    verdict = efficiency_verdict(
        {0: {n: 0.0 for n in GRID}, 1: {n: 1.0 for n in GRID}}, report, estimator="constant"
    )
    assert verdict.slope_under_truth == -math.inf
    assert "zero_probability" in verdict.flags
    assert not verdict.attains_cr
    assert not verdict.attains_minimax
    assert not verdict.no_superefficiency
    assert verdict.max_over_truth_slope == pytest.approx(0.0, abs=1e-12)


def test_verdict_requires_truth_curve(gaussian_pair: Model) -> None:
    report = bounds_report(gaussian_pair, 0)
    with pytest.raises(InvalidInputError):
        efficiency_verdict({1: _tail_curve(1.0)}, report)
    with pytest.raises(InvalidInputError):
        efficiency_verdict({0: _tail_curve(1.0), 5: _tail_curve(1.0)}, report)


def test_bayes_risk_sandwich() -> None:
    check = bayes_risk_sandwich([0.1, 0.3], Prior(weights=[0.5, 0.5]), 10)
    assert check.bayes_risk == pytest.approx(0.2)
    assert check.lower == pytest.approx(0.15)
    assert check.holds
    assert check.log_gap <= check.cap

    equal = bayes_risk_sandwich([0.2, 0.2, 0.2], Prior.uniform(3), 5)
    assert equal.holds and equal.log_gap == pytest.approx(0.0, abs=1e-12)

    with pytest.raises(InvalidInputError):
        bayes_risk_sandwich([0.1], Prior.uniform(2), 5)


def _shifted_gaussian_log_density(y: float, point: ParamPoint) -> float:
    return -0.5 * (float(y) - point.value[0]) ** 2


def test_empirical_bounds_from_frozen_samples(gaussian_pair: Model) -> None:
    """回调族只能用冻结样本；样本足够时界接近高斯闭式 −2 与 −0.5。"""
    model = Model.model_validate(
        {
            "space": {"points": [{"label": "1", "value": [1.0]}, {"label": "-1", "value": [-1.0]}]},
            "family": {"name": "empirical", "callback": _shifted_gaussian_log_density},
        }
    )
    with pytest.raises(CapabilityError):
        bounds_report(model, 0)

    samples = {i: sample(gaussian_pair, i, SeedState(seed=9, stream=i), 50_000) for i in range(2)}
    report = bounds_report(model, 0, samples=samples)
    assert report.cr_rate_bound == pytest.approx(-2.0, abs=0.05)
    assert report.minimax_rate_bound == pytest.approx(-0.5, abs=0.02)
    assert chapman_robbins_bound(model, 0, samples) == report.cr_rate_bound
    assert minimax_bound(model, samples) == pytest.approx(report.minimax_rate_bound, abs=1e-12)
