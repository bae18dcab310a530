# -*- coding: utf-8 -*-
"""
命令行模块入口

公开接口：
- `RunConfig`
- `run` / `execute`
- `main`
"""

from typing import Any

from .schemas import RunConfig

__all__ = ["RunConfig", "run", "execute", "main"]


def __getattr__(name: str) -> Any:
    if name in ("run", "execute"):
        from . import service as service_module

        return getattr(service_module, name)
    if name == "main":
        from .main import main as value

        return value
    raise AttributeError(f"module 'src.estimation.cli' has no attribute '{name}'")


def __dir__() -> list[str]:
    return sorted(__all__)
