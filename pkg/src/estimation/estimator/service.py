# -*- coding: utf-8 -*-
"""
估计量服务层

公开接口：
- `objective_values(model, data)`：各参数点的样本均值对数目标 Q_n(θ)
- `decision_offsets(spec, size, n)`：估计量在目标上附加的常数偏移
- `decide(values)`：argmax，平局取最小索引
- `decide_batch(values)`：对多行决策向量逐行 argmax
- `estimate(model, data, spec)`：按 `EstimatorSpec` 分派
- `m_estimate(model, data)`：m 估计 / 极大似然
- `bayes_estimate(model, data, prior)`：后验众数
- `shifted_estimate(model, data, k)`：两点空间上的平移估计量

内部方法：
- `_prepare`
- `_check_prior`

说明：
- 全程对数域，不形成似然乘积。
- 目标值按列排序后求和，数据的任意重排得到逐位相同的结果。
- 先验偏移取 ln π − max ln π：均匀先验偏移恰为 0，与极大似然逐位一致。
- shifted(k)：θ₀ 当且仅当 Q_n(θ₀) − Q_n(θ₁) + k ≥ 0；k = 0 即极大似然。
"""

from __future__ import annotations

from typing import Any, Sequence

import numpy as np
from scipy.special import logsumexp

from ..config import global_config
from ..exceptions import InvalidInputError
from ..model.schemas import Model, Prior
from ..model.service import encode_observations, log_density_matrix
from .schemas import EstimationResult, EstimatorSpec


def _prepare(model: Model, data: Sequence[Any] | np.ndarray) -> np.ndarray:
    if len(data) == 0:
        raise InvalidInputError("数据不能为空")
    if isinstance(data, np.ndarray) and data.dtype != object:
        return encode_observations(model, data.tolist())
    return encode_observations(model, list(data))


def _check_prior(model: Model, prior: Prior) -> None:
    if len(prior.weights) != model.space.size:
        raise InvalidInputError(
            f"先验长度 {len(prior.weights)} 与参数点个数 {model.space.size} 不一致"
        )


def objective_values(model: Model, data: Sequence[Any] | np.ndarray) -> np.ndarray:
    """Q_n(θ_j) = (1/n) Σ ln q(y_k;θ_j)。"""
    observations = _prepare(model, data)
    logq = log_density_matrix(model, observations)
    return np.sort(logq, axis=0).sum(axis=0) / len(observations)


def decision_offsets(spec: EstimatorSpec, size: int, n: int) -> np.ndarray:
    """返回加到 Q_n 上的偏移向量。"""
    if spec.kind == "bayes":
        assert spec.prior is not None
        log_prior = spec.prior.log_weights()
        if log_prior.size != size:
            raise InvalidInputError("先验长度与参数点个数不一致")
        return (log_prior - log_prior.max()) / n
    if spec.kind == "shifted":
        if size != 2:
            raise InvalidInputError("shifted 估计量只适用于两点参数空间（J = 1）")
        return np.array([spec.k, 0.0])
    return np.zeros(size)


def decide_batch(
    values: np.ndarray, tie_tolerance: float | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """逐行 argmax；与最大值相差不超过 tol·max(1,|max|) 的索引视为并列。"""
    tol = global_config.tie_tolerance if tie_tolerance is None else tie_tolerance
    values = np.atleast_2d(values)
    maxima = values.max(axis=1, keepdims=True)
    winners = values >= maxima - tol * np.maximum(1.0, np.abs(maxima))
    return winners.argmax(axis=1), winners.sum(axis=1) > 1


def decide(values: np.ndarray, tie_tolerance: float | None = None) -> tuple[int, bool]:
    """单个决策向量的 argmax，平局取最小索引。"""
    indices, ties = decide_batch(np.asarray(values, dtype=float)[None, :], tie_tolerance)
    return int(indices[0]), bool(ties[0])


def estimate(
    model: Model, data: Sequence[Any] | np.ndarray, spec: EstimatorSpec
) -> EstimationResult:
    """按估计量描述计算估计值。"""
    objective = objective_values(model, data)
    n = len(data)
    if spec.prior is not None:
        _check_prior(model, spec.prior)
    decision = objective + decision_offsets(spec, model.space.size, n)
    chosen, tie = decide(decision)

    posterior = None
    if spec.kind == "bayes" and spec.prior is not None:
        joint = n * objective + spec.prior.log_weights()
        posterior = (joint - logsumexp(joint)).tolist()

    return EstimationResult(
        chosen_index=chosen,
        chosen_label=model.space.labels[chosen],
        n=n,
        estimator=spec.label,
        objective_values=objective.tolist(),
        decision_values=decision.tolist(),
        posterior_log_weights=posterior,
        tie_occurred=tie,
    )


def m_estimate(model: Model, data: Sequence[Any] | np.ndarray) -> EstimationResult:
    """argmax_θ Q_n(θ)。"""
    return estimate(model, data, EstimatorSpec(kind="mle"))


def bayes_estimate(
    model: Model, data: Sequence[Any] | np.ndarray, prior: Prior
) -> EstimationResult:
    """后验众数：argmax_θ [Q_n(θ) + ln π(θ)/n]。"""
    return estimate(model, data, EstimatorSpec(kind="bayes", prior=prior))


def shifted_estimate(
    model: Model, data: Sequence[Any] | np.ndarray, k: float
) -> EstimationResult:
    """两点空间的平移估计量。"""
    if model.space.J != 1:
        raise InvalidInputError("shifted 估计量只适用于两点参数空间（J = 1）")
    return estimate(model, data, EstimatorSpec(kind="shifted", k=k))
