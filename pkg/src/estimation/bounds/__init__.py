# -*- coding: utf-8 -*-
"""
信息不等式模块入口

公开接口：
- `bounds_config`
- `BoundsReport` / `EfficiencyVerdict` / `SlopeFit` / `SandwichCheck`
- `router`
- `chapman_robbins_bound` / `minimax_bound` / `bounds_report`
- `fit_slope` / `efficiency_verdict` / `bayes_risk_sandwich`
"""

from typing import Any

from .config import bounds_config
from .schemas import BoundsReport, EfficiencyVerdict, SandwichCheck, SlopeFit

__all__ = [
    "bounds_config",
    "BoundsReport",
    "EfficiencyVerdict",
    "SlopeFit",
    "SandwichCheck",
    "router",
    "chapman_robbins_bound",
    "minimax_bound",
    "bounds_report",
    "fit_slope",
    "efficiency_verdict",
    "bayes_risk_sandwich",
]


def __getattr__(name: str) -> Any:
    if name == "router":
        from .router import router as value
    elif name in __all__:
        from . import service as service_module

        value = getattr(service_module, name)
    else:
        raise AttributeError(f"module 'src.estimation.bounds' has no attribute '{name}'")
    return value


def __dir__() -> list[str]:
    return sorted(__all__)
