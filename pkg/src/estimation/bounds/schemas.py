# -*- coding: utf-8 -*-
"""
信息不等式数据模型

公开接口：
- `BoundsReport`：Chapman–Robbins 界、minimax 界、不准确率上限与成对矩阵
- `SlopeFit`：单条 ln P 曲线的回归结果
- `EfficiencyVerdict`：估计量的效率判定
- `SandwichCheck`：贝叶斯风险夹逼检查
- `BoundsRequest`：HTTP 请求体

内部方法：
- 无
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field

from ..model.schemas import DeclarativeModel, Model
from ..rates.schemas import PairwiseMatrices


class BoundsReport(BaseModel):
    """真值 θ₀ 处的速率下界"""

    truth: int
    truth_label: str
    cr_rate_bound: float = Field(le=0.0, description="−min_{θ₁≠θ₀} KL(θ₁‖θ₀)")
    cr_attaining: list[int] = Field(description="取到上确界的备择点")
    per_truth_cr: list[float] = Field(description="以每个参数点为真值的 Chapman–Robbins 界")
    minimax_rate_bound: float = Field(le=0.0, description="−min_{a≠b} C(a,b)")
    minimax_pair: tuple[int, int]
    inaccuracy_cap: float = Field(ge=0.0, description="min_{θ₁≠θ₀} KL(θ₁‖θ₀)")
    bayes_risk_rate_bound: float = Field(description="贝叶斯风险速率下界，与先验无关，等于 minimax 界")
    pairwise: PairwiseMatrices


class SlopeFit(BaseModel):
    """ln P = c₀ + slope·n + c₁·ln n 的最小二乘拟合"""

    truth: Optional[int] = Field(default=None, description="None 表示逐 n 取各真值最大误差概率的曲线")
    slope: float
    intercept: float
    log_coefficient: float
    points: int
    zero_probability: bool = False


class EfficiencyVerdict(BaseModel):
    """估计量的效率判定"""

    estimator: str
    truth: int
    tol: float
    cr_rate_bound: float
    minimax_rate_bound: float
    slope_under_truth: float
    max_over_truth_slope: float
    attains_cr: bool
    attains_minimax: bool
    no_superefficiency: bool
    per_truth: list[SlopeFit]
    max_over_truth: SlopeFit
    flags: list[str] = Field(default_factory=list)


class SandwichCheck(BaseModel):
    """min(π)·max R₁ ≤ r₁ ≤ max R₁"""

    n: int
    bayes_risk: float
    max_risk: float
    lower: float
    holds: bool
    log_gap: float = Field(description="|(1/n)ln r₁ − (1/n)ln max R₁|")
    cap: float = Field(description="(−ln π_min)/n")


class BoundsRequest(BaseModel):
    """HTTP 界计算请求"""

    model: DeclarativeModel
    truth: int = Field(default=0, ge=0)
