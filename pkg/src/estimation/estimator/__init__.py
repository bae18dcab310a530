# -*- coding: utf-8 -*-
"""
估计量模块入口

公开接口：
- `EstimatorSpec` / `EstimationResult`
- `router`
- `m_estimate` / `bayes_estimate` / `shifted_estimate` / `estimate`

内部方法：
- 无

文件功能：
- 暴露 m 估计、后验众数与平移估计量，供 CLI、HTTP 与验证引擎复用。
"""

from typing import Any

from .schemas import EstimationResult, EstimatorSpec

__all__ = [
    "EstimatorSpec",
    "EstimationResult",
    "router",
    "m_estimate",
    "bayes_estimate",
    "shifted_estimate",
    "estimate",
]


def __getattr__(name: str) -> Any:
    """按需加载子模块，避免导入时出现循环依赖。"""
    if name == "router":
        from .router import router as value
    elif name in {"m_estimate", "bayes_estimate", "shifted_estimate", "estimate"}:
        from . import service as service_module

        value = getattr(service_module, name)
    else:
        raise AttributeError(f"module 'src.estimation.estimator' has no attribute '{name}'")
    return value


def __dir__() -> list[str]:
    return sorted(__all__)
