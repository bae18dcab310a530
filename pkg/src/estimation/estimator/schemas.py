# -*- coding: utf-8 -*-
"""
估计量数据模型

公开接口：
- `EstimatorSpec`：估计量描述（mle | bayes(π) | shifted(k)），供估计、枚举与模拟共用
- `EstimationResult`：单次估计结果
- `EstimateRequest`：HTTP 估计请求体

内部方法：
- 无
"""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..model.schemas import DeclarativeModel, Model, Prior


class EstimatorSpec(BaseModel):
    """估计量描述"""

    model_config = ConfigDict(frozen=True)

    kind: Literal["mle", "bayes", "shifted"] = "mle"
    prior: Optional[Prior] = None
    k: float = Field(default=0.0, description="shifted 估计量的均值对数似然比阈值平移")

    @model_validator(mode="after")
    def _check_kind(self) -> "EstimatorSpec":
        if self.kind == "bayes" and self.prior is None:
            raise ValueError("bayes 估计量需要先验")
        return self

    @property
    def label(self) -> str:
        """稳定的估计量标识，写入产物与曲线文件。"""
        if self.kind == "bayes":
            assert self.prior is not None
            weights = ",".join(f"{w:g}" for w in self.prior.weights)
            return f"bayes({weights})"
        if self.kind == "shifted":
            return f"shifted({self.k:g})"
        return "mle"


class EstimationResult(BaseModel):
    """估计结果"""

    chosen_index: int
    chosen_label: str
    n: int
    estimator: str
    objective_values: list[float] = Field(description="各参数点的样本均值对数目标")
    decision_values: list[float] = Field(description="实际取 argmax 的决策向量")
    posterior_log_weights: Optional[list[float]] = None
    tie_occurred: bool = False


class EstimateRequest(BaseModel):
    """HTTP 估计请求"""

    model: DeclarativeModel
    data: list[Any] = Field(min_length=1)
    prior: Optional[list[float]] = None
    k: Optional[float] = None
