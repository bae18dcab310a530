# -*- coding: utf-8 -*-
"""
误差指数模块入口

公开接口：
- `rates_config`
- `RateReport` / `AlternativeRate` / `ChernoffResult`
- `router`
- `alternative_rate` / `rate_report` / `total_error_rate`
- `kl_divergence` / `chernoff_information` / `bayes_rate_invariance` / `bias_bound` / `pairwise_matrices`

内部方法：
- 无
"""

from typing import Any

from .config import rates_config
from .schemas import AlternativeRate, ChernoffResult, RateReport

__all__ = [
    "rates_config",
    "RateReport",
    "AlternativeRate",
    "ChernoffResult",
    "router",
    "alternative_rate",
    "rate_report",
    "total_error_rate",
    "kl_divergence",
    "chernoff_information",
    "bayes_rate_invariance",
    "bias_bound",
    "pairwise_matrices",
]


def __getattr__(name: str) -> Any:
    """按需加载子模块，避免导入时出现循环依赖。"""
    if name == "router":
        from .router import router as value
    elif name in __all__:
        from . import service as service_module

        value = getattr(service_module, name)
    else:
        raise AttributeError(f"module 'src.estimation.rates' has no attribute '{name}'")
    return value


def __dir__() -> list[str]:
    return sorted(__all__)
