# -*- coding: utf-8 -*-
"""
渐近近似模块入口

公开接口：
- `asymptotics_config`
- `ApproxCurve` / `ApproxRow`
- `crude_ld` / `bracket_lower` / `bracket_upper`
- `exact_asymptotic_two_point` / `saddlepoint_leading` / `approximation_curve`

内部方法：
- 无
"""

from typing import Any

from .config import asymptotics_config
from .schemas import ApproxCurve, ApproxRow

__all__ = [
    "asymptotics_config",
    "ApproxCurve",
    "ApproxRow",
    "crude_ld",
    "bracket_lower",
    "bracket_upper",
    "exact_asymptotic_two_point",
    "saddlepoint_leading",
    "approximation_curve",
]


def __getattr__(name: str) -> Any:
    if name in __all__:
        from . import service as service_module

        return getattr(service_module, name)
    raise AttributeError(f"module 'src.estimation.asymptotics' has no attribute '{name}'")


def __dir__() -> list[str]:
    return sorted(__all__)
