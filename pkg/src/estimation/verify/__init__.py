# -*- coding: utf-8 -*-
"""
验证模块入口

公开接口：
- `verify_config`
- `ExactDistribution` / `SimulationResult` / `RiskTable` / `CurveRow` / `GaussianClosedForm`
- `enumerate_exact` / `simulate` / `simulate_with_retry` / `gaussian_closed_form` / `risk_table`
"""

from typing import Any

from .config import verify_config
from .schemas import CurveRow, ExactDistribution, GaussianClosedForm, RiskTable, SimulationResult

__all__ = [
    "verify_config",
    "ExactDistribution",
    "SimulationResult",
    "RiskTable",
    "CurveRow",
    "GaussianClosedForm",
    "enumerate_exact",
    "simulate",
    "simulate_with_retry",
    "gaussian_closed_form",
    "risk_table",
]


def __getattr__(name: str) -> Any:
    if name in __all__:
        from . import service as service_module

        return getattr(service_module, name)
    raise AttributeError(f"module 'src.estimation.verify' has no attribute '{name}'")


def __dir__() -> list[str]:
    return sorted(__all__)
