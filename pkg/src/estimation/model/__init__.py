# -*- coding: utf-8 -*-
"""
模型模块入口

公开接口：
- `Model` / `ParameterSpace` / `ParamPoint` / `Prior`
- `load_model_spec` / `parse_model_spec`
- `log_density` / `sample` / `enumerate_support`

内部方法：
- 无

文件功能：
- 暴露参数空间、模型族与其能力分级（求值、抽样、枚举、解析矩）。
"""

from typing import Any

from .schemas import Model, ParameterSpace, ParamPoint, Prior

__all__ = [
    "Model",
    "ParameterSpace",
    "ParamPoint",
    "Prior",
    "load_model_spec",
    "parse_model_spec",
    "log_density",
    "sample",
    "enumerate_support",
]


def __getattr__(name: str) -> Any:
    """按需加载服务层，避免导入时出现循环依赖。"""
    if name in {
        "load_model_spec",
        "parse_model_spec",
        "log_density",
        "sample",
        "enumerate_support",
    }:
        from . import service as service_module

        return getattr(service_module, name)
    raise AttributeError(f"module 'src.estimation.model' has no attribute '{name}'")


def __dir__() -> list[str]:
    return sorted(__all__)
