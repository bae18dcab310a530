# -*- coding: utf-8 -*-
"""
似然比服务层测试
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from scipy.special import logsumexp

from src.estimation.exceptions import CapabilityError, InvalidInputError
from src.estimation.llr.schemas import TruthSpec
from src.estimation.llr.service import (
    LlrSystem,
    build_system,
    check_hellinger_identity,
    cramer_transform,
    dump_lmgf_grid,
    hellinger_transform,
    log_hellinger_transform,
    lmgf,
    lmgf_grad,
    lmgf_hess,
)
from src.estimation.model.schemas import Model

ANALYTIC_FIXTURES = [
    "gaussian_pair",
    "gaussian_three_point",
    "poisson_pair",
    "two_symbol",
    "five_symbol_three_point",
    "tumor_model",
]


@pytest.mark.parametrize("fixture_name", ANALYTIC_FIXTURES)
def test_lmgf_vanishes_at_origin(request: pytest.FixtureRequest, fixture_name: str) -> None:
    """Λ(0) = 0 精确成立，且分量个数为 J。"""
    model: Model = request.getfixturevalue(fixture_name)
    for candidate in range(model.space.size):
        sys = build_system(model, 0, candidate)
        assert sys.dim == model.space.J
        assert sys.components == tuple(j for j in range(model.space.size) if j != candidate)
        assert lmgf(sys, np.zeros(sys.dim)) == 0.0


def test_gaussian_closed_form(gaussian_pair: Model) -> None:
    """X^{(1)} = −2Y，Λ(λ) = −2λ + 2λ²。"""
    sys = build_system(gaussian_pair, 0, 1)
    for lam in (-1.3, 0.2, 0.5, 2.0):
        assert lmgf(sys, [lam]) == pytest.approx(-2 * lam + 2 * lam**2, abs=1e-12)
    assert lmgf(sys, [0.5]) == pytest.approx(-0.5, abs=1e-12)
    assert lmgf_grad(sys, [0.5])[0] == pytest.approx(0.0, abs=1e-12)
    assert lmgf_grad(sys, [0.0])[0] == pytest.approx(-2.0, abs=1e-12)
    assert lmgf_hess(sys, [0.3])[0, 0] == pytest.approx(4.0, abs=1e-12)
    assert not sys.lattice


def test_categorical_unit_tilt(two_symbol: Model) -> None:
    """λ = 1 时倾斜质量积分出另一密度：Λ = 0。"""
    sys = build_system(two_symbol, 0, 1)
    assert lmgf(sys, [1.0]) == pytest.approx(0.0, abs=1e-15)
    expected_mean = 0.5 * math.log(0.9 / 0.5) + 0.5 * math.log(0.1 / 0.5)
    assert lmgf_grad(sys, [0.0])[0] == pytest.approx(expected_mean, abs=1e-14)
    assert sys.lattice


@pytest.mark.parametrize("fixture_name", ANALYTIC_FIXTURES)
def test_gradient_matches_finite_differences(
    request: pytest.FixtureRequest, fixture_name: str
) -> None:
    """20 个随机 λ 上解析梯度与中心差分（步长 1e-5）相对误差 ≤ 1e-6。"""
    model: Model = request.getfixturevalue(fixture_name)
    rng = np.random.default_rng(5)
    step = 1e-5
    for candidate in range(1, model.space.size):
        sys = build_system(model, 0, candidate)
        for _ in range(20):
            lam = rng.uniform(-1.0, 1.0, size=sys.dim)
            analytic = lmgf_grad(sys, lam)
            numeric = np.array(
                [
                    (lmgf(sys, lam + step * e) - lmgf(sys, lam - step * e)) / (2 * step)
                    for e in np.eye(sys.dim)
                ]
            )
            scale = np.maximum(1.0, np.abs(analytic))
            assert np.all(np.abs(analytic - numeric) <= 1e-6 * scale)


def test_cramer_transform_known_values(gaussian_pair: Model) -> None:
    """均值处为 0；高斯 y = 0 处为 0.5，λ* = 0.5。"""
    sys = build_system(gaussian_pair, 0, 1)
    at_mean = cramer_transform(sys, sys.mean())
    assert at_mean.value == 0.0
    assert at_mean.lam == [0.0]

    result = cramer_transform(sys, [0.0])
    assert result.value == pytest.approx(0.5, abs=1e-10)
    assert result.lam[0] == pytest.approx(0.5, abs=1e-9)


def test_cramer_transform_matches_grid_oracle(two_symbol: Model) -> None:
    """两符号模型 y = 0：与 [−20, 20]、步长 1e-4 的网格搜索一致（1e-8）。"""
    sys = build_system(two_symbol, 0, 1)
    grid = np.linspace(-20.0, 20.0, 400_001)
    values = sys.kernel.values[:, 0]  # type: ignore[attr-defined]
    log_weights = sys.kernel.log_weights  # type: ignore[attr-defined]
    oracle = float(np.max(-logsumexp(log_weights[None, :] + grid[:, None] * values[None, :], axis=1)))
    assert cramer_transform(sys, [0.0]).value == pytest.approx(oracle, abs=1e-8)


def test_cramer_transform_divergence(gaussian_three_point: Model) -> None:
    """一维观测生成的二维似然比：直线外 Λ* = +∞，直线上有限。"""
    sys = build_system(gaussian_three_point, 0, 1)
    off_line = cramer_transform(sys, [0.0, 0.0])
    assert off_line.diverged and math.isinf(off_line.value)

    on_line = cramer_transform(sys, [0.0, 10.0])
    assert on_line.value == pytest.approx(0.125, abs=1e-9)


def test_hellinger_indicator_is_one(five_symbol_three_point: Model, gaussian_pair: Model) -> None:
    """γ 为真值指示向量时 H = 1。"""
    assert hellinger_transform(five_symbol_three_point, 0, [1.0, 0.0, 0.0]) == pytest.approx(1.0, abs=1e-12)
    assert hellinger_transform(gaussian_pair, 1, [0.0, 1.0]) == 1.0


def test_hellinger_rejects_unnormalized(two_symbol: Model) -> None:
    """Σγ ≠ 1 报错。"""
    with pytest.raises(InvalidInputError):
        hellinger_transform(two_symbol, 0, [0.5, 0.6])


@pytest.mark.parametrize("fixture_name", ["two_symbol", "five_symbol_three_point", "tumor_model"])
def test_hellinger_identity_finite_support(request: pytest.FixtureRequest, fixture_name: str) -> None:
    """50 个随机 λ 上 |M(λ) − H_γ| ≤ 1e-12。"""
    model: Model = request.getfixturevalue(fixture_name)
    rng = np.random.default_rng(17)
    for truth in range(model.space.size):
        for candidate in range(model.space.size):
            if candidate == truth:
                continue
            sys = build_system(model, truth, candidate)
            for _ in range(50):
                lam = rng.uniform(-1.0, 1.0, size=sys.dim)
                check = check_hellinger_identity(sys, lam)
                assert abs(sum(check.gamma) - 1.0) <= 1e-12
                assert check.residual <= 1e-12


@pytest.mark.parametrize("fixture_name", ["gaussian_three_point", "poisson_pair"])
def test_hellinger_identity_closed_forms(request: pytest.FixtureRequest, fixture_name: str) -> None:
    """高斯 / 泊松闭式 Hellinger 变换与 Λ 一致。"""
    model: Model = request.getfixturevalue(fixture_name)
    rng = np.random.default_rng(23)
    sys = build_system(model, 0, 1)
    for _ in range(50):
        lam = rng.uniform(-0.8, 0.8, size=sys.dim)
        check = check_hellinger_identity(sys, lam)
        assert check.residual <= 1e-12 * max(1.0, check.mgf)


def test_pairwise_hellinger_is_chernoff_integrand(two_symbol: Model) -> None:
    """J = 1、γ = (1−u, u)：ln H = ln Σ f₁ᵘ f₀^{1−u}。"""
    p0 = np.array([0.5, 0.5])
    p1 = np.array([0.9, 0.1])
    for u in (0.1, 0.37, 0.5, 0.9):
        direct = math.log(float(np.sum(p1**u * p0 ** (1 - u))))
        assert log_hellinger_transform(two_symbol, 0, [1 - u, u]) == pytest.approx(direct, abs=1e-14)


def test_identity_undefined_cases(two_symbol: Model) -> None:
    """数据集真值、经验后端与候选 = 真值均不提供恒等式检查。"""
    dataset_sys = build_system(two_symbol, TruthSpec(dataset=("a", "b", "a")), 1)
    with pytest.raises(CapabilityError):
        check_hellinger_identity(dataset_sys, [0.3])
    empirical_sys = build_system(two_symbol, 0, 1, backend="empirical", sample_size=1000, seed=3)
    with pytest.raises(CapabilityError):
        check_hellinger_identity(empirical_sys, [0.3])
    with pytest.raises(InvalidInputError):
        check_hellinger_identity(build_system(two_symbol, 0, 0), [0.3])


def test_dataset_truth_is_empirical_average(two_symbol: Model) -> None:
    """数据集真值：Λ̂(λ) = ln 平均 exp(λX)。"""
    sys = build_system(two_symbol, TruthSpec(dataset=("a", "a", "b")), 1)
    x_a, x_b = math.log(0.9 / 0.5), math.log(0.1 / 0.5)
    lam = 0.7
    expected = math.log((2 * math.exp(lam * x_a) + math.exp(lam * x_b)) / 3)
    assert lmgf(sys, [lam]) == pytest.approx(expected, abs=1e-14)
    assert sys.backend == "empirical" and sys.sample_size == 3


@pytest.mark.parametrize("fixture_name", ["two_symbol", "five_symbol_three_point"])
def test_empirical_backend_matches_analytic(request: pytest.FixtureRequest, fixture_name: str) -> None:
    """m = 10⁶ 的冻结样本：[−1,1]^J 网格上 |Λ̂ − Λ| ≤ 5e-3。"""
    model: Model = request.getfixturevalue(fixture_name)
    analytic = build_system(model, 0, 1)
    empirical = build_system(model, 0, 1, backend="empirical", sample_size=1_000_000, seed=41)
    axis = np.linspace(-1.0, 1.0, 5)
    grid = np.array(np.meshgrid(*[axis] * analytic.dim)).reshape(analytic.dim, -1).T
    for lam in grid:
        assert abs(lmgf(empirical, lam) - lmgf(analytic, lam)) <= 5e-3


def test_dump_lmgf_grid(gaussian_pair: Model) -> None:
    """诊断行包含 λ、Λ 与 ∇Λ。"""
    rows = dump_lmgf_grid(build_system(gaussian_pair, 0, 1), np.array([[0.0], [0.5]]))
    assert rows[1] == {"lam_0": 0.5, "lmgf": pytest.approx(-0.5), "grad_0": pytest.approx(0.0, abs=1e-12)}
    assert rows[0]["lmgf"] == 0.0


def test_lmgf_rejects_wrong_dimension(gaussian_three_point: Model) -> None:
    """λ 维数不符报错。"""
    with pytest.raises(InvalidInputError):
        lmgf(build_system(gaussian_three_point, 0, 1), [0.1])


_PROPERTY_SETTINGS = settings(
    max_examples=100,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
_coordinates = st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=4, max_size=4)


def _draw_system(data: st.DataObject, model: Model) -> LlrSystem:
    size = model.space.size
    truth = data.draw(st.integers(min_value=0, max_value=size - 1))
    candidate = data.draw(st.integers(min_value=0, max_value=size - 2))
    return build_system(model, truth, candidate + (candidate >= truth))


def _draw_lam(data: st.DataObject, sys: LlrSystem) -> np.ndarray:
    return np.array(data.draw(_coordinates)[: sys.dim])


@pytest.mark.parametrize("fixture_name", ANALYTIC_FIXTURES)
@_PROPERTY_SETTINGS
@given(data=st.data())
def test_lmgf_is_convex(request: pytest.FixtureRequest, fixture_name: str, data: st.DataObject) -> None:
    """Λ(tλ₁ + (1−t)λ₂) ≤ tΛ(λ₁) + (1−t)Λ(λ₂)，容差相对于弦值。"""
    sys = _draw_system(data, request.getfixturevalue(fixture_name))
    first, second = _draw_lam(data, sys), _draw_lam(data, sys)
    t = data.draw(st.floats(min_value=0.0, max_value=1.0))
    chord = t * lmgf(sys, first) + (1.0 - t) * lmgf(sys, second)
    middle = lmgf(sys, t * first + (1.0 - t) * second)
    assert middle <= chord + 1e-9 * max(1.0, abs(chord))


@pytest.mark.parametrize("fixture_name", ANALYTIC_FIXTURES)
@_PROPERTY_SETTINGS
@given(data=st.data())
def test_cramer_transform_fenchel_equality(
    request: pytest.FixtureRequest, fixture_name: str, data: st.DataObject
) -> None:
    """y = ∇Λ(λ) 时 Λ*(y) = ⟨y, λ⟩ − Λ(λ)（1e-7）。"""
    sys = _draw_system(data, request.getfixturevalue(fixture_name))
    lam = _draw_lam(data, sys)
    y = lmgf_grad(sys, lam)
    expected = float(y @ lam) - lmgf(sys, lam)
    result = cramer_transform(sys, y)
    assert not result.diverged
    assert result.value == pytest.approx(expected, abs=1e-7 * max(1.0, abs(expected)))


@pytest.mark.parametrize("fixture_name", ANALYTIC_FIXTURES)
@_PROPERTY_SETTINGS
@given(data=st.data())
def test_lmgf_hessian_is_positive_semidefinite(
    request: pytest.FixtureRequest, fixture_name: str, data: st.DataObject
) -> None:
    """∇²Λ 对称，最小特征值 ≥ −1e-9。"""
    sys = _draw_system(data, request.getfixturevalue(fixture_name))
    hess = lmgf_hess(sys, _draw_lam(data, sys))
    np.testing.assert_allclose(hess, hess.T, atol=1e-12)
    eigvals = np.linalg.eigvalsh(hess)
    assert eigvals.min() >= -1e-9 * max(1.0, float(eigvals.max()))


@pytest.mark.parametrize("fixture_name", ANALYTIC_FIXTURES)
@_PROPERTY_SETTINGS
@given(data=st.data())
def test_cramer_transform_is_nonnegative(
    request: pytest.FixtureRequest, fixture_name: str, data: st.DataObject
) -> None:
    """支撑凸包内部的 y（倾斜均值与均值的凸组合）上 Λ*(y) ≥ −1e-10。"""
    sys = _draw_system(data, request.getfixturevalue(fixture_name))
    t = data.draw(st.floats(min_value=0.0, max_value=1.0))
    y = t * lmgf_grad(sys, _draw_lam(data, sys)) + (1.0 - t) * sys.mean()
    assert cramer_transform(sys, y).value >= -1e-10
