# -*- coding: utf-8 -*-
"""
线程池工具

公开接口：
- `resolve_workers`：解析线程上限（参数优先，其次全局配置）
- `parallel_map`：在线程池中按输入顺序映射
- `run_in_thread`：将同步函数放入线程池执行（路由层使用）

内部方法：
- 无

说明：
- 所有结果按输入顺序返回，调用方的归约顺序因此与线程数无关。
- numpy / scipy 的向量化内核会释放 GIL，线程池足以获得并行收益。
"""

from __future__ import annotations

import asyncio
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, TypeVar

from .config import global_config

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(max_workers: int | None = None) -> int:
    """返回实际使用的线程数（至少为 1）。"""
    if max_workers is None:
        max_workers = global_config.worker_threads
    return max(1, int(max_workers))


def parallel_map(
    func: Callable[[T], R], items: Iterable[T], max_workers: int | None = None
) -> list[R]:
    """并发执行 `func`，结果顺序与 `items` 一致。"""
    materialized = list(items)
    workers = min(resolve_workers(max_workers), max(1, len(materialized)))
    if workers == 1:
        return [func(item) for item in materialized]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, materialized))


async def run_in_thread(sync_func: Callable[[], Any]) -> Any:
    """将同步函数放到默认线程池中执行并返回结果。"""
    return await asyncio.to_thread(sync_func)
