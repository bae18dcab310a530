# -*- coding: utf-8 -*-
"""
速率模块配置

公开接口：
- `rates_config`
"""

from pydantic import Field
from pydantic_settings import BaseSettings


class RatesConfig(BaseSettings):
    """误差指数计算的数值协议"""

    rates_kkt_slack: float = Field(
        default=1e-7,
        title="KKT 松弛",
        description="支配点 y* 相对阈值的分量允许的最大负偏差",
    )

    rates_gap_cap: float = Field(
        default=1e-6,
        title="对偶间隙上限",
        description="原始值 Λ*(y*) 与对偶值之差超过该值时视为未收敛",
    )

    rates_argmin_tol: float = Field(
        default=1e-8,
        title="argmin 容差",
        description="速率与最小值相差不超过 tol·max(1, I) 的备择点计入 argmin 集合",
    )

    rates_chernoff_xatol: float = Field(
        default=1e-10,
        title="Chernoff 指数 u 的精度",
        description="在 (0,1) 上一维极小化的 xatol",
    )

    rates_invariance_horizon: float = Field(
        default=1e10,
        title="先验不变性的代表 n",
        description="bayes_rate_invariance 未给出 n 时，先验平移按该 n 缩放",
    )


rates_config = RatesConfig()
