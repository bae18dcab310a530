# -*- coding: utf-8 -*-
"""
渐近近似数据模型

公开接口：
- `TwoPointAsymptotic`：J = 1 精确渐近式及其中间量
- `SaddlepointResult`：前导阶鞍点近似及其中间量
- `ApproxRow` / `ApproxCurve`：n 网格上的近似曲线
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field

from ..schemas import ArtifactMeta

APPROX_COLUMNS = ["n", "crude", "exact_j1", "saddlepoint", "bracket_lower", "bracket_upper", "exact_enum"]


class TwoPointAsymptotic(BaseModel):
    log_prob: float
    mu: float = Field(description="Λ′(μ) = t 的根")
    lmgf_at_mu: float
    curvature: float = Field(description="Λ″(μ)")
    lattice: bool


class SaddlepointResult(BaseModel):
    log_prob: float
    u: list[float] = Field(description="支配点对应的对偶证书")
    active: list[int] = Field(description="u_j > 0 的分量位置")
    hessian_det: float = Field(description="Δ = |∇²Λ(u)|")
    rate: float
    lattice: bool


class ApproxRow(BaseModel):
    n: int
    crude: float
    exact_j1: Optional[float] = None
    saddlepoint: Optional[float] = None
    bracket_lower: float
    bracket_upper: float
    exact_enum: Optional[float] = None


class ApproxCurve(BaseModel):
    """ln ℙ₀(θ̂ⁿ = θ_i) 的各种近似"""

    truth: int
    candidate: int
    candidate_label: str
    J: int
    estimator: str
    rate: float
    u: list[float]
    mu: Optional[float] = None
    hessian_det: Optional[float] = None
    lattice: bool
    rows: list[ApproxRow]

    def to_csv(self, path: str | Path, meta: Optional[ArtifactMeta] = None) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", newline="", encoding="utf-8") as handle:
            if meta is not None:
                handle.write(meta.csv_comment() + "\n")
            writer = csv.writer(handle)
            writer.writerow(APPROX_COLUMNS)
            for row in self.rows:
                values = row.model_dump()
                writer.writerow(["" if values[c] is None else repr(values[c]) for c in APPROX_COLUMNS])
        return target
