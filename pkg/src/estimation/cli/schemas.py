# -*- coding: utf-8 -*-
"""
命令行数据模型

公开接口：
- `Command`：子命令名
- `RunConfig`：一次运行的全部输入，决定全部输出
- `Artifact`：写出的 JSON 产物（元信息 + 结果）

内部方法：
- 无

说明：
- 配置哈希取规范 JSON（键排序、紧凑分隔符）的 sha256，与工具版本、种子一起写入每个产物。
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .. import __version__
from ..config import global_config
from ..schemas import ArtifactMeta

Command = Literal[
    "estimate",
    "analyze",
    "bounds",
    "approx",
    "simulate",
    "enumerate",
    "report",
    "verdict",
    "example",
]

TOOL_NAME = "discrete-param"


class RunConfig(BaseModel):
    """一次命令行运行的完整配置"""

    model_config = ConfigDict(frozen=True)

    command: Command
    example: Optional[Literal["gaussian", "tumor"]] = None
    model_path: Optional[str] = Field(default=None, description="模型规格 JSON")
    data_path: Optional[str] = Field(default=None, description="每行一个观测的数据文件")
    truth: int = Field(default=0, ge=0)
    truth_data: Optional[str] = Field(default=None, description="错设情形下的真值数据集文件")
    alternatives: Optional[list[int]] = None
    candidate: Optional[int] = Field(default=None, ge=0)
    n_grid: list[int] = Field(default_factory=list)
    replicates: int = Field(default=10_000, ge=1)
    seed: int = Field(default_factory=lambda: global_config.default_seed, ge=0)
    prior: Optional[list[float]] = None
    k: Optional[float] = None
    backend: Literal["analytic", "empirical"] = "analytic"
    sample_size: Optional[int] = Field(default=None, ge=1)
    with_enumeration: bool = False
    curves: list[str] = Field(default_factory=list)
    method: Optional[str] = None
    output: Optional[str] = None
    csv: Optional[str] = None
    long_csv: Optional[str] = Field(default=None, description="approx 的长格式曲线输出，供 report 合并")
    dump_lmgf: Optional[str] = None
    lmgf_grid: tuple[float, float, int] = (0.0, 1.0, 21)
    threads: Optional[int] = Field(default=None, ge=1)
    overrides: dict[str, float] = Field(default_factory=dict, description="模块配置项覆盖")

    @model_validator(mode="after")
    def _check_command(self) -> "RunConfig":
        if self.command == "example" and self.example is None:
            raise ValueError("example 子命令需要指定 gaussian 或 tumor")
        if self.prior is not None and self.k is not None:
            raise ValueError("--prior 与 --k 不能同时给出")
        if any(n < 1 for n in self.n_grid):
            raise ValueError("n 网格中的值必须 ≥ 1")
        return self

    def config_hash(self) -> str:
        payload = json.dumps(
            self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"), ensure_ascii=True
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def meta(self) -> ArtifactMeta:
        return ArtifactMeta(
            tool=TOOL_NAME,
            version=__version__,
            config_hash=self.config_hash(),
            seed=self.seed,
            config=self.model_dump(mode="json"),
        )


class Artifact(BaseModel):
    """JSON 产物"""

    meta: ArtifactMeta
    result: Any
