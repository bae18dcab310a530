# -*- coding: utf-8 -*-
"""
似然比模块数据模型

公开接口：
- `TruthSpec`：真值描述（参数索引或外部数据集）
- `CramerResult`：Cramér 变换值与对偶证书 λ*
- `HellingerCheck`：Hellinger 恒等式残差

内部方法：
- 无
"""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class TruthSpec(BaseModel):
    """真值：正确设定时为参数索引，错设 / 经验情形为外部数据集"""

    model_config = ConfigDict(frozen=True)

    index: Optional[int] = Field(default=None, ge=0)
    dataset: Optional[tuple[Any, ...]] = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "TruthSpec":
        if (self.index is None) == (self.dataset is None):
            raise ValueError("真值必须且只能是参数索引或数据集之一")
        if self.dataset is not None and len(self.dataset) == 0:
            raise ValueError("真值数据集不能为空")
        return self

    @property
    def is_index(self) -> bool:
        return self.index is not None

    @property
    def label(self) -> str:
        if self.index is not None:
            return f"index:{self.index}"
        assert self.dataset is not None
        return f"dataset(m={len(self.dataset)})"


class CramerResult(BaseModel):
    """Λ*(y) 及其对偶证书"""

    value: float = Field(description="Λ*(y)，发散时为 +inf")
    lam: list[float] = Field(description="极大化点 λ*")
    iterations: int
    diverged: bool = False


class HellingerCheck(BaseModel):
    """M(λ) 与 H_γ 的比较"""

    residual: float
    mgf: float
    hellinger: float
    gamma: list[float]
