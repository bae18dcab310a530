# -*- coding: utf-8 -*-
"""
验证模块数据模型

公开接口：
- `ExactDistribution`：枚举得到的估计量精确分布
- `SimulationResult`：蒙特卡罗频率与 Wilson 区间
- `RetryOutcome`：带一次重跑的模拟一致性检查
- `GaussianClosedForm`：两点高斯模型平移估计量的闭式误差概率
- `RiskRow` / `RiskTable`：R₁、R₂、R₃、贝叶斯风险与平均误差概率
- `CurveRow`：长格式曲线行（n, method, truth, alt, log_prob）

内部方法：
- 无
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field

CURVE_COLUMNS = ["n", "method", "truth", "alt", "log_prob"]


class ExactDistribution(BaseModel):
    """ℙ_truth(θ̂ⁿ = θ_i) 的对数值"""

    n: int = Field(ge=1)
    truth: int
    estimator: str
    log_prob: list[float]
    log_misclassification: float = Field(description="ln ℙ_truth(θ̂ⁿ ≠ θ_truth)")
    count_vectors: int = Field(description="枚举的计数向量个数")


class SimulationResult(BaseModel):
    """R 次独立重复的估计量频率"""

    n: int = Field(ge=1)
    truth: int
    estimator: str
    replicates: int = Field(ge=1)
    seed: int
    counts: list[int]
    p_hat: list[float]
    wilson_lower: list[float]
    wilson_upper: list[float]
    error_count: int
    error_rate: float


class RetryOutcome(BaseModel):
    """模拟频率与参考概率的一致性判定"""

    result: SimulationResult
    index: Optional[int] = Field(default=None, description="None 表示比较误判频率")
    expected: float
    observed: float
    standard_error: float
    passed: bool
    attempts: int
    seeds: list[int]


class GaussianClosedForm(BaseModel):
    """θ₀ = +α、θ₁ = −α，方差 σ² 的两点高斯模型"""

    alpha: float
    sigma: float
    n: int
    k: float
    error_under_theta0: float
    error_under_theta1: float
    log_error_under_theta0: float
    log_error_under_theta1: float
    rate_under_theta0: float
    rate_under_theta1: float
    consistent: bool = Field(description="|k| < 2(α/σ)²")
    beats_cr: bool = Field(description="θ₀ 下的误差指数不低于 Chapman–Robbins 界 2α²/σ²")


class RiskRow(BaseModel):
    """单个真值处的风险"""

    truth: int
    truth_label: str
    r1: float = Field(ge=0.0, le=1.0, description="误判概率")
    r2: Optional[float] = Field(default=None, description="均方误差，需要数值嵌入")
    r3: float = Field(ge=0.0, description="加权误判概率")
    bias: Optional[float] = Field(default=None, description="|E θ̂ − θ₀|")


class RiskTable(BaseModel):
    """风险汇总"""

    n: int
    estimator: str
    rows: list[RiskRow]
    prior: Optional[list[float]] = None
    bayes_risk: Optional[float] = Field(default=None, description="r₁ = Σ π(θ) R₁(θ)")
    average_error: Optional[float] = Field(default=None, description="均匀先验下的 r₁")


class CurveRow(BaseModel):
    """长格式曲线行；alt 为空表示误判概率"""

    n: int = Field(ge=1)
    method: str
    truth: int
    alt: Optional[int] = None
    log_prob: float
