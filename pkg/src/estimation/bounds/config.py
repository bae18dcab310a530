# -*- coding: utf-8 -*-
"""
信息不等式模块配置

公开接口：
- `bounds_config`
"""

from pydantic import Field
from pydantic_settings import BaseSettings


class BoundsConfig(BaseSettings):
    """效率判定协议"""

    bounds_verdict_tol: float = Field(
        default=0.02,
        title="判定容差",
        description="拟合斜率与界的差不超过该值（nats）即视为达到",
    )

    bounds_min_points: int = Field(
        default=4,
        ge=3,
        title="最少网格点数",
        description="回归 ln P ~ [1, n, ln n] 所需的最少 n 个数",
    )

    bounds_min_n: int = Field(
        default=25,
        title="推荐的最小 n",
        description="网格最小 n 低于该值时记录协议偏离警告",
    )

    bounds_attain_tol: float = Field(
        default=1e-9,
        title="取到上确界的容差",
        description="KL 与最小值相差不超过 tol·max(1, KL) 的备择点视为取到 Chapman–Robbins 界",
    )


bounds_config = BoundsConfig()
