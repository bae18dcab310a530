# -*- coding: utf-8 -*-
"""
似然比模块配置

公开接口：
- `llr_config`
"""

from pydantic import Field
from pydantic_settings import BaseSettings


class LlrConfig(BaseSettings):
    """对数矩母函数与 Cramér 变换的数值协议"""

    llr_grad_tol: float = Field(
        default=1e-9,
        title="梯度收敛阈值",
        description="梯度（或投影梯度）∞-范数不超过该值即视为收敛",
    )

    llr_max_iterations: int = Field(
        default=10_000,
        title="迭代预算",
        description="阻尼牛顿迭代的最大步数",
    )

    llr_divergence_norm: float = Field(
        default=1e8,
        title="发散判定范数",
        description="迭代点 ∞-范数超过该值时判定上确界为 +∞",
    )

    llr_armijo: float = Field(
        default=1e-4,
        title="Armijo 常数",
        description="回溯线搜索的充分下降系数",
    )

    llr_empirical_sample_size: int = Field(
        default=100_000,
        title="经验后端默认样本量",
        description="empirical 后端未指定 m 时冻结样本的大小",
    )

    llr_identity_sum_tol: float = Field(
        default=1e-10,
        title="γ 归一化容差",
        description="Hellinger 变换要求 Σγ = 1 的容差",
    )


llr_config = LlrConfig()
