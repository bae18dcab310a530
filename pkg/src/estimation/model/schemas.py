# -*- coding: utf-8 -*-
"""
参数空间与模型族的数据模型

公开接口：
- `ParamPoint`：参数点（标签 + 可选数值嵌入）
- `ParameterSpace`：有序有限参数空间 θ₀..θ_J
- `GaussianKnownVar` / `PoissonFamily` / `BernoulliPower` / `Categorical` / `Empirical`：模型族
- `FamilySpec`：以 `name` 区分的模型族联合类型
- `DeclarativeFamilySpec`：去掉 `Empirical` 的联合类型
- `Capabilities`：能力标记
- `Prior`：先验分布
- `Model`：参数空间 + 模型族 + 可选先验
- `DeclarativeModel`：族限定为 `DeclarativeFamilySpec` 的 `Model`

内部方法：
- `_scalar_values`

说明：
- 所有模型在构造后不可变，可被多个线程并发读取。
- 分类族要求所有行共享同一支撑（每个格子概率严格为正）。
"""

from __future__ import annotations

import math
from typing import Annotated, Any, Callable, Literal, Optional, Union

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ImportString,
    WithJsonSchema,
    field_serializer,
    field_validator,
    model_validator,
)

NORMALIZATION_TOL = 1e-12


class ParamPoint(BaseModel):
    """参数点"""

    model_config = ConfigDict(frozen=True)

    label: str = Field(min_length=1, description="唯一标签")
    value: list[float] = Field(
        default_factory=list, description="数值嵌入；为空表示仅有标签"
    )


class ParameterSpace(BaseModel):
    """有序有限参数空间，索引 i 在对象生命周期内固定指向第 i 个点"""

    model_config = ConfigDict(frozen=True)

    points: list[ParamPoint] = Field(min_length=1)

    @model_validator(mode="after")
    def _check_identification(self) -> "ParameterSpace":
        labels = [point.label for point in self.points]
        if len(set(labels)) != len(labels):
            raise ValueError("参数点标签必须互不相同")
        if self.has_embedding:
            values = [tuple(point.value) for point in self.points]
            dims = {len(value) for value in values}
            if len(dims) != 1:
                raise ValueError("数值嵌入维度不一致")
            if len(set(values)) != len(values):
                raise ValueError("参数点取值必须互不相同")
            if not all(math.isfinite(v) for value in values for v in value):
                raise ValueError("参数点取值必须为有限实数")
        return self

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def J(self) -> int:
        """备选点个数 = 基数 − 1"""
        return len(self.points) - 1

    @property
    def labels(self) -> list[str]:
        return [point.label for point in self.points]

    @property
    def has_embedding(self) -> bool:
        return all(point.value for point in self.points)

    def embedding(self) -> np.ndarray:
        """返回 (size, d) 的数值嵌入矩阵。"""
        return np.array([point.value for point in self.points], dtype=float)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"未知的参数点标签：{label}") from None


class GaussianKnownVar(BaseModel):
    """已知方差的高斯族，参数点取值为均值"""

    model_config = ConfigDict(frozen=True)

    name: Literal["gaussian_known_var"] = "gaussian_known_var"
    sigma: float = Field(gt=0.0, description="标准差 σ")


class PoissonFamily(BaseModel):
    """泊松族，参数点取值为强度 θ > 0"""

    model_config = ConfigDict(frozen=True)

    name: Literal["poisson"] = "poisson"


class BernoulliPower(BaseModel):
    """单次伯努利试验，成功概率 k^θ（移植成活模型）"""

    model_config = ConfigDict(frozen=True)

    name: Literal["bernoulli_power"] = "bernoulli_power"
    k: float = Field(gt=0.0, lt=1.0, description="底数 k ∈ (0,1)")


class Categorical(BaseModel):
    """有限支撑上的分类族，每个参数点一行概率表"""

    model_config = ConfigDict(frozen=True)

    name: Literal["categorical"] = "categorical"
    support: list[str] = Field(min_length=1, description="共享支撑的符号")
    pmf: list[list[float]] = Field(min_length=1, description="(J+1)×|support| 概率表")

    @field_validator("support")
    @classmethod
    def _distinct_symbols(cls, value: list[str]) -> list[str]:
        if len(set(value)) != len(value):
            raise ValueError("支撑符号必须互不相同")
        return value

    @model_validator(mode="after")
    def _check_rows(self) -> "Categorical":
        for row_index, row in enumerate(self.pmf):
            if len(row) != len(self.support):
                raise ValueError(f"第 {row_index} 行长度与支撑不一致")
            if any(not math.isfinite(p) or p < 0.0 for p in row):
                raise ValueError(f"第 {row_index} 行存在负概率")
            if any(p == 0.0 for p in row):
                raise ValueError(f"第 {row_index} 行存在零概率格子，要求共享支撑")
            if abs(math.fsum(row) - 1.0) > NORMALIZATION_TOL:
                raise ValueError(f"第 {row_index} 行概率和不为 1")
        return self

    def table(self) -> np.ndarray:
        return np.array(self.pmf, dtype=float)


class Empirical(BaseModel):
    """外部对数密度回调，签名 callback(y, point) -> float"""

    model_config = ConfigDict(frozen=True)

    name: Literal["empirical"] = "empirical"
    callback: Annotated[
        ImportString[Callable[[Any, ParamPoint], float]],
        WithJsonSchema({"type": "string", "description": "回调的导入路径"}),
    ]


FamilySpec = Annotated[
    Union[GaussianKnownVar, PoissonFamily, BernoulliPower, Categorical, Empirical],
    Field(discriminator="name"),
]

# 不含 empirical：校验时不会导入任何模块
DeclarativeFamilySpec = Annotated[
    Union[GaussianKnownVar, PoissonFamily, BernoulliPower, Categorical],
    Field(discriminator="name"),
]


class Capabilities(BaseModel):
    """模型族能力标记"""

    can_sample: bool
    can_enumerate: bool
    has_analytic_lmgf: bool


class Prior(BaseModel):
    """先验分布：所有权重严格为正且和为 1"""

    model_config = ConfigDict(frozen=True)

    weights: list[float] = Field(min_length=1)

    @field_validator("weights")
    @classmethod
    def _check_weights(cls, value: list[float]) -> list[float]:
        if any(not math.isfinite(w) or w <= 0.0 for w in value):
            raise ValueError("先验权重必须严格为正")
        if abs(math.fsum(value) - 1.0) > NORMALIZATION_TOL:
            raise ValueError("先验权重之和必须为 1")
        return value

    @classmethod
    def uniform(cls, size: int) -> "Prior":
        return cls(weights=[1.0 / size] * size)

    def log_weights(self) -> np.ndarray:
        return np.log(np.array(self.weights, dtype=float))


def _scalar_values(space: ParameterSpace, family: str) -> None:
    for point in space.points:
        if len(point.value) != 1:
            raise ValueError(f"{family} 族要求每个参数点有一维数值取值：{point.label}")


class Model(BaseModel):
    """统计模型：参数空间 + 模型族 + 可选先验"""

    model_config = ConfigDict(frozen=True)

    space: ParameterSpace
    family: FamilySpec
    prior: Optional[Prior] = None

    @field_validator("prior", mode="before")
    @classmethod
    def _prior_from_list(cls, value: Any) -> Any:
        """规格文件中的先验写作权重数组：`"prior": [0.5, 0.5]`。"""
        if isinstance(value, (list, tuple)):
            return {"weights": list(value)}
        return value

    @field_serializer("prior")
    def _prior_as_list(self, prior: Optional[Prior]) -> Optional[list[float]]:
        return None if prior is None else list(prior.weights)

    @model_validator(mode="after")
    def _check_family(self) -> "Model":
        family = self.family
        if isinstance(family, GaussianKnownVar):
            _scalar_values(self.space, family.name)
        elif isinstance(family, (PoissonFamily, BernoulliPower)):
            _scalar_values(self.space, family.name)
            if any(point.value[0] <= 0.0 for point in self.space.points):
                raise ValueError(f"{family.name} 族要求参数取值严格为正")
        elif isinstance(family, Categorical):
            if len(family.pmf) != self.space.size:
                raise ValueError("分类族概率表行数必须等于参数点个数")
            rows = {tuple(row) for row in family.pmf}
            if len(rows) != len(family.pmf):
                raise ValueError("分类族各参数点的概率行必须互不相同")
        if self.prior is not None and len(self.prior.weights) != self.space.size:
            raise ValueError("先验长度必须等于参数点个数")
        return self

    @property
    def capabilities(self) -> Capabilities:
        name = self.family.name
        return Capabilities(
            can_sample=name != "empirical",
            can_enumerate=name == "categorical",
            has_analytic_lmgf=name != "empirical",
        )

    def scalar_values(self) -> np.ndarray:
        """一维参数取值向量（高斯均值、泊松强度或指数 θ）。"""
        return np.array([point.value[0] for point in self.space.points], dtype=float)


class DeclarativeModel(Model):
    """完全由数据声明的模型，供 HTTP 请求体使用"""

    family: DeclarativeFamilySpec
