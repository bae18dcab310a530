# -*- coding: utf-8 -*-
"""
速率模块数据模型

公开接口：
- `AlternativeRate`：单个备择点的误差指数与对偶证书
- `RateReport`：所有备择点的速率汇总
- `ChernoffResult`：Chernoff 信息与极小化点 u*
- `BayesRateInvariance`：有无先验平移的速率比较
- `PairwiseMatrices`：成对 KL / Chernoff 矩阵
- `AnalyzeRequest`：HTTP 速率分析请求体

内部方法：
- 无
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field

from ..model.schemas import DeclarativeModel, Model
from ..schemas import ArtifactMeta


class AlternativeRate(BaseModel):
    """I_i = −inf_{λ⪰0} [Λ^{(i)}(λ) − λ·t]"""

    candidate: int
    label: str
    rate: float = Field(ge=0.0, description="nats / 观测；候选永不胜出时为 +inf")
    lam: list[float] = Field(description="对偶证书 λ*，逐分量非负")
    dominating_point: list[float] = Field(description="y* = ∇Λ(λ*)")
    duality_gap: float = 0.0
    iterations: int = 0
    misidentified: bool = Field(default=False, description="E₀X 已落在象限内，速率为 0")
    unreachable: bool = Field(default=False, description="象限与支撑凸包不相交，速率为 +inf")


class RateReport(BaseModel):
    """真值（或伪真值）下全部备择点的速率"""

    truth: str
    reference_index: int = Field(description="真值索引；数据集真值时为伪真值（平均对数似然最大者）")
    reference_label: str
    backend: str
    per_alternative: list[AlternativeRate]
    total_rate: float
    argmin: list[int]
    argmin_labels: list[str]
    duality_gap: float = Field(description="各备择点对偶间隙的最大值")


class ChernoffResult(BaseModel):
    """C(a,b) = −inf_u ln ∫ f_b^u f_a^{1−u} dμ"""

    value: float = Field(ge=0.0)
    u: float


class BayesRateInvariance(BaseModel):
    """先验平移象限与原象限的速率差"""

    candidate: int
    n: Optional[float] = None
    thresholds: list[float]
    rate_with_prior: float
    rate_without: float
    difference: float


class PairwiseMatrices(BaseModel):
    """成对 KL(a‖b) 与 Chernoff 信息矩阵"""

    labels: list[str]
    kl: list[list[float]]
    chernoff: list[list[float]]
    chernoff_u: list[list[float]]

    def to_csv(self, path: str | Path, meta: Optional[ArtifactMeta] = None) -> Path:
        """按长格式 (a, b, kl, chernoff, u) 写出；给出 meta 时首行为 `# meta:` 注释。"""
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", newline="", encoding="utf-8") as handle:
            if meta is not None:
                handle.write(meta.csv_comment() + "\n")
            writer = csv.writer(handle)
            writer.writerow(["a", "b", "kl", "chernoff", "u"])
            for a, label_a in enumerate(self.labels):
                for b, label_b in enumerate(self.labels):
                    writer.writerow(
                        [
                            label_a,
                            label_b,
                            repr(self.kl[a][b]),
                            repr(self.chernoff[a][b]),
                            repr(self.chernoff_u[a][b]),
                        ]
                    )
        return target

    def max_asymmetry(self) -> float:
        """max |C(a,b) − C(b,a)|。"""
        size = len(self.labels)
        return max(
            (
                abs(self.chernoff[a][b] - self.chernoff[b][a])
                for a in range(size)
                for b in range(size)
            ),
            default=0.0,
        )


class AnalyzeRequest(BaseModel):
    """HTTP 速率分析请求"""

    model: DeclarativeModel
    truth: int = Field(default=0, ge=0)
    alternatives: Optional[list[int]] = None

