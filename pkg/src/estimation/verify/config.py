# -*- coding: utf-8 -*-
"""
验证模块配置

公开接口：
- `verify_config`
"""

from pydantic import Field
from pydantic_settings import BaseSettings


class VerifyConfig(BaseSettings):
    """枚举、模拟与一致性检查的协议常数"""

    verify_enum_guard: int = Field(
        default=10**8,
        ge=1,
        title="枚举保护上限",
        description="计数向量个数 C(n+|S|−1, |S|−1) 超过该值时拒绝枚举",
    )

    verify_enum_chunk: int = Field(
        default=8192,
        ge=1,
        title="计数向量分块大小",
        description="固定分块保证对数求和的归约顺序与线程数无关",
    )

    verify_replicate_chunk: int = Field(
        default=4096,
        ge=1,
        title="重复实验分块大小",
    )

    verify_wilson_z: float = Field(
        default=1.959963984540054,
        gt=0.0,
        title="Wilson 区间分位数",
        description="默认 95% 双侧区间",
    )

    verify_se_radius: float = Field(
        default=4.0,
        gt=0.0,
        title="一致性判定半径",
        description="模拟频率与参考概率相差不超过该倍数的二项标准误即视为一致",
    )

    verify_normalization_tol: float = Field(
        default=1e-10,
        title="归一化容差",
        description="枚举得到的概率之和与 1 的允许偏差",
    )


verify_config = VerifyConfig()
