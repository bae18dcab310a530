# -*- coding: utf-8 -*-
"""
似然比模块入口

公开接口：
- `llr_config`
- `LlrSystem` / `TruthSpec` / `CramerResult`
- `build_system` / `lmgf` / `lmgf_grad` / `lmgf_hess`
- `cramer_transform` / `hellinger_transform` / `check_hellinger_identity`

内部方法：
- 无

文件功能：
- 暴露似然比向量过程的对数矩母函数、梯度、Hessian 与 Cramér 变换，供 rates / asymptotics 使用。
"""

from typing import Any

from .config import llr_config
from .schemas import CramerResult, TruthSpec

__all__ = [
    "llr_config",
    "LlrSystem",
    "TruthSpec",
    "CramerResult",
    "build_system",
    "lmgf",
    "lmgf_grad",
    "lmgf_hess",
    "cramer_transform",
    "hellinger_transform",
    "check_hellinger_identity",
]


def __getattr__(name: str) -> Any:
    """按需加载服务层，避免导入时出现循环依赖。"""
    if name in {
        "LlrSystem",
        "build_system",
        "lmgf",
        "lmgf_grad",
        "lmgf_hess",
        "cramer_transform",
        "hellinger_transform",
        "check_hellinger_identity",
    }:
        from . import service as service_module

        return getattr(service_module, name)
    raise AttributeError(f"module 'src.estimation.llr' has no attribute '{name}'")


def __dir__() -> list[str]:
    return sorted(__all__)
