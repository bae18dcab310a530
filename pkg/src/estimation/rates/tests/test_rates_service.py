# -*- coding: utf-8 -*-
"""
误差指数服务层测试
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.special import logsumexp
from scipy.stats import norm, poisson

from src.estimation.exceptions import (
    CapabilityError,
    InvalidInputError,
    MissingEmbeddingError,
)
from src.estimation.llr.schemas import TruthSpec
from src.estimation.llr.service import build_system
from src.estimation.model.schemas import Model, ParamPoint, Prior
from src.estimation.model.service import sample
from src.estimation.schemas import SeedState
from src.estimation.rates.service import (
    alternative_rate,
    bayes_rate_invariance,
    bias_bound,
    chernoff_information,
    kl_divergence,
    pairwise_matrices,
    rate_report,
    total_error_rate,
)


def test_gaussian_pair_rate(gaussian_pair: Model) -> None:
    """α = σ = 1：I₁ = 0.5，λ* = 0.5，支配点为 0。"""
    result = alternative_rate(build_system(gaussian_pair, 0, 1))
    assert result.rate == pytest.approx(0.5, abs=1e-9)
    assert result.lam[0] == pytest.approx(0.5, abs=1e-8)
    assert result.dominating_point[0] == pytest.approx(0.0, abs=1e-8)
    assert result.duality_gap <= 1e-6
    assert not result.misidentified


def test_misidentified_candidate_has_zero_rate(gaussian_pair: Model, two_symbol: Model) -> None:
    """E₀X 已在象限内：速率 0、λ* = 0。"""
    same = alternative_rate(build_system(gaussian_pair, 0, 0))
    assert same.rate == 0.0 and same.lam == [0.0] and same.misidentified

    dataset = TruthSpec(dataset=("a", "a", "a", "b"))
    shifted = alternative_rate(build_system(two_symbol, dataset, 1))
    assert shifted.rate == 0.0 and shifted.misidentified


def test_unreachable_candidate_has_infinite_rate(two_symbol: Model) -> None:
    """数据集只含符号 a：fair 永远输给 biased，速率为 +inf。"""
    report = rate_report(two_symbol, TruthSpec(dataset=("a", "a")))
    assert report.reference_index == 1
    assert report.backend == "empirical"
    (only,) = report.per_alternative
    assert only.candidate == 0
    assert only.unreachable and math.isinf(only.rate)


def test_categorical_rate_matches_grid_oracle(two_symbol: Model) -> None:
    """I₁ 与 λ ∈ [0, 20]、步长 1e-4 的网格极小值一致（1e-6），并等于 Chernoff 信息。"""
    sys = build_system(two_symbol, 0, 1)
    grid = np.linspace(0.0, 20.0, 200_001)
    values = np.log(np.array([0.9, 0.1]) / np.array([0.5, 0.5]))
    oracle = -float(np.min(logsumexp(np.log(0.5) + grid[:, None] * values[None, :], axis=1)))
    rate = alternative_rate(sys).rate
    assert rate == pytest.approx(oracle, abs=1e-6)
    assert rate == pytest.approx(chernoff_information(two_symbol, 0, 1).value, abs=1e-6)


def test_total_error_rate_examples(
    gaussian_pair: Model, gaussian_three_point: Model, gaussian_symmetric: Model
) -> None:
    """两点高斯 0.5；{0,1,5} 由最近邻支配；{−1,0,1} 两个邻点并列。"""
    assert total_error_rate(gaussian_pair, 0)[0] == pytest.approx(0.5, abs=1e-9)

    rate, argmin = total_error_rate(gaussian_three_point, 0)
    assert rate == pytest.approx(0.125, abs=1e-8)
    assert argmin == [1]

    rate, argmin = total_error_rate(gaussian_symmetric, 1)
    assert rate == pytest.approx(0.125, abs=1e-8)
    assert argmin == [0, 2]


@pytest.mark.parametrize(
    "fixture_name",
    ["gaussian_three_point", "poisson_pair", "two_symbol", "five_symbol_three_point", "tumor_model"],
)
def test_total_rate_equals_min_chernoff(request: pytest.FixtureRequest, fixture_name: str) -> None:
    """总误差速率 = min_j C(truth, j)（1e-6），且各对偶间隙 ≤ 1e-6。"""
    model: Model = request.getfixturevalue(fixture_name)
    report = rate_report(model, 0)
    pairwise = min(chernoff_information(model, 0, j).value for j in range(1, model.space.size))
    assert report.total_rate == pytest.approx(pairwise, abs=1e-6)
    assert report.duality_gap <= 1e-6
    assert all(min(item.lam) >= 0.0 for item in report.per_alternative)


def test_rate_report_is_thread_count_independent(five_symbol_three_point: Model) -> None:
    """单线程与多线程结果逐位一致。"""
    single = rate_report(five_symbol_three_point, 0, max_workers=1)
    multi = rate_report(five_symbol_three_point, 0, max_workers=4)
    assert single.model_dump() == multi.model_dump()


def test_rate_report_rejects_bad_alternatives(gaussian_three_point: Model) -> None:
    """备择点不能是真值本身或越界索引。"""
    with pytest.raises(InvalidInputError):
        rate_report(gaussian_three_point, 0, alternatives=[0])
    with pytest.raises(InvalidInputError):
        rate_report(gaussian_three_point, 0, alternatives=[7])
    only = rate_report(gaussian_three_point, 0, alternatives=[2])
    assert [item.candidate for item in only.per_alternative] == [2]
    assert only.total_rate == pytest.approx(4.5, abs=1e-8)


@pytest.mark.parametrize("fixture_name", ["two_symbol", "five_symbol_three_point"])
def test_empirical_backend_rates(request: pytest.FixtureRequest, fixture_name: str) -> None:
    """m = 10⁶ 的经验后端速率与解析速率相差 ≤ 5e-3。"""
    model: Model = request.getfixturevalue(fixture_name)
    analytic = rate_report(model, 0)
    empirical = rate_report(model, 0, backend="empirical", sample_size=1_000_000, seed=11)
    for exact, estimated in zip(analytic.per_alternative, empirical.per_alternative):
        assert abs(exact.rate - estimated.rate) <= 5e-3


def test_kl_divergence_examples(gaussian_pair: Model, poisson_pair: Model, two_symbol: Model) -> None:
    """高斯 ±1 为 2；泊松 2‖1 为 1 − 2 + 2ln2，与截断求和一致。"""
    assert kl_divergence(gaussian_pair, 0, 0) == 0.0
    assert kl_divergence(gaussian_pair, 0, 1) == pytest.approx(2.0, abs=1e-14)

    closed = kl_divergence(poisson_pair, 0, 1)
    assert closed == pytest.approx(1.0 - 2.0 + 2.0 * math.log(2.0), abs=1e-12)
    ys = np.arange(0, 200)
    truncated = math.fsum(poisson.pmf(ys, 2.0) * (poisson.logpmf(ys, 2.0) - poisson.logpmf(ys, 1.0)))
    assert closed == pytest.approx(truncated, abs=1e-12)

    expected = 0.5 * math.log(0.5 / 0.9) + 0.5 * math.log(0.5 / 0.1)
    assert kl_divergence(two_symbol, 0, 1) == pytest.approx(expected, abs=1e-14)


def test_chernoff_information_examples(gaussian_pair: Model, poisson_pair: Model) -> None:
    """高斯 ±1：C = 0.5、u* = 0.5；泊松 {1, 2} 与 u 网格（步长 1e-6）一致。"""
    gaussian = chernoff_information(gaussian_pair, 0, 1)
    assert gaussian.value == pytest.approx(0.5, abs=1e-10)
    assert gaussian.u == pytest.approx(0.5, abs=1e-6)
    assert chernoff_information(gaussian_pair, 1, 1).value == 0.0

    # poisson_pair：索引 1 为强度 1，索引 0 为强度 2
    result = chernoff_information(poisson_pair, 1, 0)
    u = np.linspace(1e-6, 1.0 - 1e-6, 999_999)
    oracle = -float(np.min(2.0**u - 1.0 - u))
    assert result.value == pytest.approx(oracle, abs=1e-8)
    assert result.u == pytest.approx(math.log(1.0 / math.log(2.0)) / math.log(2.0), abs=1e-5)


_probabilities = st.lists(st.floats(min_value=0.05, max_value=1.0), min_size=2, max_size=5)


@settings(derandomize=True, max_examples=100, deadline=None)
@given(data=st.data())
def test_chernoff_below_kl_and_symmetric(data: st.DataObject) -> None:
    """C(a,b) ≤ min(KL(a‖b), KL(b‖a)) + 1e-10，且 C(a,b) = C(b,a)（1e-10）。"""
    first = data.draw(_probabilities)
    second = data.draw(st.lists(st.floats(min_value=0.05, max_value=1.0), min_size=len(first), max_size=len(first)))
    p = np.array(first) / math.fsum(first)
    q = np.array(second) / math.fsum(second)
    assume(np.max(np.abs(p - q)) > 1e-6)
    model = Model.model_validate(
        {
            "space": {"points": [{"label": "a"}, {"label": "b"}]},
            "family": {
                "name": "categorical",
                "support": [f"s{k}" for k in range(len(first))],
                "pmf": [p.tolist(), q.tolist()],
            },
        }
    )
    forward = chernoff_information(model, 0, 1).value
    backward = chernoff_information(model, 1, 0).value
    assert forward <= min(kl_divergence(model, 0, 1), kl_divergence(model, 1, 0)) + 1e-10
    assert abs(forward - backward) <= 1e-10


def test_bayes_rate_invariance(gaussian_pair: Model) -> None:
    """均匀先验差值恰为 0；(0.9, 0.1) 先验在速率层面差值 ≤ 1e-8；有限 n 时为 1/n 量级。"""
    sys = build_system(gaussian_pair, 0, 1)
    uniform = bayes_rate_invariance(sys, Prior.uniform(2))
    assert uniform.thresholds == [0.0]
    assert uniform.difference == 0.0

    skewed = Prior(weights=[0.9, 0.1])
    assert bayes_rate_invariance(sys, skewed).difference <= 1e-8

    finite = bayes_rate_invariance(sys, skewed, n=20)
    t = math.log(9.0) / 20
    assert finite.rate_with_prior == pytest.approx((2.0 + t) ** 2 / 8.0, abs=1e-8)
    assert finite.difference <= math.log(9.0) / 20


def test_bias_bound(gaussian_pair: Model, gaussian_three_point: Model, two_symbol: Model) -> None:
    """偏差上界 = sup|Δθ| · ℙ(θ̂ ≠ θ₀)。"""
    assert bias_bound(gaussian_pair, 0, float(norm.cdf(-2.0))) == pytest.approx(0.0455003, abs=1e-7)
    assert bias_bound(gaussian_pair, 0, 0.0) == 0.0
    assert bias_bound(gaussian_three_point, 0, 0.01) == pytest.approx(0.05)

    report = rate_report(gaussian_pair, 0)
    assert bias_bound(gaussian_pair, 0, report, n=4) == pytest.approx(2.0 * math.exp(-2.0), rel=1e-8)
    with pytest.raises(InvalidInputError):
        bias_bound(gaussian_pair, 0, report)
    with pytest.raises(InvalidInputError):
        bias_bound(gaussian_pair, 0, 1.5)
    with pytest.raises(MissingEmbeddingError):
        bias_bound(two_symbol, 0, 0.1)


def test_pairwise_matrices(gaussian_pair: Model, tmp_path) -> None:
    """对角为 0，非对角为 KL = 2 与 C = 0.5；CSV 为长格式。"""
    matrices = pairwise_matrices(gaussian_pair)
    assert matrices.kl[0][0] == 0.0 and matrices.kl[0][1] == pytest.approx(2.0)
    assert matrices.chernoff[1][0] == pytest.approx(0.5, abs=1e-10)
    assert matrices.max_asymmetry() <= 1e-10

    target = matrices.to_csv(tmp_path / "pairwise.csv")
    lines = target.read_text(encoding="utf-8").strip().splitlines()
    assert lines[0] == "a,b,kl,chernoff,u"
    assert len(lines) == 5


def _unit_gaussian_log_density(y: float, point: ParamPoint) -> float:
    return -0.5 * (float(y) - point.value[0]) ** 2 - 0.5 * math.log(2.0 * math.pi)


def _empirical_pair() -> Model:
    return Model.model_validate(
        {
            "space": {"points": [{"label": "1", "value": [1.0]}, {"label": "-1", "value": [-1.0]}]},
            "family": {"name": "empirical", "callback": _unit_gaussian_log_density},
        }
    )


def _frozen_samples(gaussian_pair: Model, m: int) -> dict[int, np.ndarray]:
    return {i: sample(gaussian_pair, i, SeedState(seed=5, stream=i), m) for i in range(2)}


def test_empirical_kl_and_chernoff_use_frozen_samples(gaussian_pair: Model) -> None:
    """回调族的 KL / Chernoff 取冻结样本均值，逼近高斯闭式 2 与 0.5。"""
    model = _empirical_pair()
    samples = _frozen_samples(gaussian_pair, 50_000)
    assert kl_divergence(model, 0, 1, samples) == pytest.approx(2.0, abs=0.05)
    assert kl_divergence(model, 1, 0, samples) == pytest.approx(2.0, abs=0.05)
    result = chernoff_information(model, 0, 1, samples)
    assert result.value == pytest.approx(0.5, abs=0.02)
    assert result.u == pytest.approx(0.5, abs=0.05)

    matrices = pairwise_matrices(model, samples=samples)
    assert matrices.kl[0][1] == kl_divergence(model, 0, 1, samples)
    assert matrices.chernoff[0][0] == 0.0


def test_empirical_divergences_require_samples(gaussian_pair: Model) -> None:
    model = _empirical_pair()
    with pytest.raises(CapabilityError):
        kl_divergence(model, 0, 1)
    with pytest.raises(CapabilityError):
        chernoff_information(model, 0, 1)
    with pytest.raises(CapabilityError):
        pairwise_matrices(model, samples={0: _frozen_samples(gaussian_pair, 10)[0]})
