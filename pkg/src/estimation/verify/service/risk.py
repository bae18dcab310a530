# -*- coding: utf-8 -*-
"""
风险评估

公开接口：
- `estimator_law(source)`：把精确分布、模拟结果或概率向量统一为选择概率向量
- `mean_squared_error(model, law, truth)`：R₂
- `estimator_bias(model, law, truth)`：|E θ̂ − θ₀|
- `risk_table(model, laws, n, estimator, weights, prior)`：R₁、R₂、R₃、r₁ 与 P_e

内部方法：
- 无

说明：
- R₃(θ₀) = Σ_{j≠0} a_j(θ₀)·ℙ_{θ₀}(θ̃ⁿ = θ_j)，单位权重时与 R₁ 相同。
- r₁ 与 P_e 只在给出全部真值的分布时计算。
"""

from __future__ import annotations

import math
from typing import Mapping, Sequence, Union

import numpy as np

from ...exceptions import InvalidInputError, MissingEmbeddingError
from ...model.schemas import Model, Prior
from ..schemas import ExactDistribution, RiskRow, RiskTable, SimulationResult

LawSource = Union[ExactDistribution, SimulationResult, Sequence[float]]


def estimator_law(source: LawSource) -> np.ndarray:
    if isinstance(source, ExactDistribution):
        return np.exp(np.array(source.log_prob))
    if isinstance(source, SimulationResult):
        return np.array(source.p_hat)
    law = np.asarray(source, dtype=float)
    if np.any(law < 0.0) or abs(math.fsum(law) - 1.0) > 1e-9:
        raise InvalidInputError("选择概率必须非负且和为 1")
    return law


def _distances(model: Model, truth: int) -> np.ndarray:
    if not model.space.has_embedding:
        raise MissingEmbeddingError("参数点缺少数值嵌入，无法计算均方误差或偏差")
    points = model.space.embedding()
    return points - points[truth]


def mean_squared_error(model: Model, law: np.ndarray, truth: int) -> float:
    offsets = _distances(model, truth)
    return math.fsum(law * np.sum(offsets**2, axis=1))


def estimator_bias(model: Model, law: np.ndarray, truth: int) -> float:
    offsets = _distances(model, truth)
    return float(np.linalg.norm(law @ offsets))


def risk_table(
    model: Model,
    laws: Mapping[int, LawSource],
    n: int,
    estimator: str = "mle",
    weights: Sequence[Sequence[float]] | None = None,
    prior: Prior | None = None,
) -> RiskTable:
    """按真值汇总风险。

    `laws[t]` 为真值 t 下估计量的分布；`weights[t][j]` 为 a_j(θ_t)，对角元忽略。
    """
    size = model.space.size
    if weights is not None:
        matrix = np.asarray(weights, dtype=float)
        if matrix.shape != (size, size):
            raise InvalidInputError("权重矩阵形状必须为 (J+1)×(J+1)")
        off_diagonal = matrix[~np.eye(size, dtype=bool)]
        if np.any(off_diagonal <= 0.0):
            raise InvalidInputError("误判权重必须为正")
    else:
        matrix = np.ones((size, size))
    if prior is not None and len(prior.weights) != size:
        raise InvalidInputError("先验长度与参数点个数不一致")

    rows: list[RiskRow] = []
    for truth in sorted(laws):
        if not 0 <= truth < size:
            raise InvalidInputError(f"真值索引越界：{truth}")
        law = estimator_law(laws[truth])
        if law.size != size:
            raise InvalidInputError("选择概率向量长度与参数点个数不一致")
        wrong = np.arange(size) != truth
        embedded = model.space.has_embedding
        rows.append(
            RiskRow(
                truth=truth,
                truth_label=model.space.labels[truth],
                r1=min(1.0, math.fsum(law[wrong])),
                r2=mean_squared_error(model, law, truth) if embedded else None,
                r3=math.fsum(matrix[truth][wrong] * law[wrong]),
                bias=estimator_bias(model, law, truth) if embedded else None,
            )
        )

    complete = len(rows) == size
    bayes = average = None
    if complete:
        r1 = [row.r1 for row in rows]
        average = math.fsum(r1) / size
        if prior is not None:
            bayes = math.fsum(w * r for w, r in zip(prior.weights, r1))
    return RiskTable(
        n=n,
        estimator=estimator,
        rows=rows,
        prior=None if prior is None else list(prior.weights),
        bayes_risk=bayes,
        average_error=average,
    )
