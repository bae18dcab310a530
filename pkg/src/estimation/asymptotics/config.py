# -*- coding: utf-8 -*-
"""
渐近近似模块配置

公开接口：
- `asymptotics_config`
"""

from pydantic import Field
from pydantic_settings import BaseSettings


class AsymptoticsConfig(BaseSettings):
    """求根区间与鞍点求积的数值协议"""

    asymptotics_root_low: float = Field(
        default=1e-6,
        title="求根区间左端",
        description="Λ′(μ) = t 的初始区间左端点",
    )

    asymptotics_root_high: float = Field(
        default=1.0,
        title="求根区间右端",
        description="初始右端点，未变号时逐次加倍",
    )

    asymptotics_root_cap: float = Field(
        default=2.0**40,
        title="右端点上限",
        description="加倍超过该值仍未变号则判定求根失败",
    )

    asymptotics_laguerre_nodes: int = Field(
        default=48,
        ge=8,
        title="Gauss–Laguerre 节点数",
        description="J ∈ {2,3} 时每个活动坐标上的求积节点数",
    )

    asymptotics_max_dim: int = Field(
        default=3,
        title="鞍点近似的最大 J",
        description="超过该维数时不计算正交象限积分",
    )

    asymptotics_degenerate_tol: float = Field(
        default=1e-12,
        title="协方差退化阈值",
        description="特征值不超过 tol·max(1, 最大特征值) 的方向视为退化",
    )

    asymptotics_mvn_releps: float = Field(
        default=1e-6,
        title="象限概率相对误差",
        description="多元正态 CDF（Genz 算法）的相对误差目标",
    )

    asymptotics_mvn_abseps: float = Field(
        default=1e-10,
        title="象限概率绝对误差",
        description="多元正态 CDF 的绝对误差目标",
    )

    asymptotics_mvn_maxpts: int = Field(
        default=2_000_000,
        ge=1000,
        title="象限概率最大求值点数",
        description="多元正态 CDF 的积分点上限",
    )


asymptotics_config = AsymptoticsConfig()
