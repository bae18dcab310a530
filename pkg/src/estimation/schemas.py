# -*- coding: utf-8 -*-
"""
全局通用 Pydantic 模型

公开接口：
- `SeedState`：计数器型随机流的键（主种子 + 流编号）
- `ArtifactMeta`：每个输出产物携带的元信息（版本、配置哈希、种子）

内部方法：
- 无

说明：
- 跨模块轻量共享的数据模型放在此处
- CSV 产物以 `ArtifactMeta.csv_comment()` 作为首行注释，携带与 JSON 产物相同的元信息
"""

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field

CSV_META_PREFIX = "# meta: "


class SeedState(BaseModel):
    """随机流键：同一 (seed, stream) 始终得到同一序列"""

    model_config = ConfigDict(frozen=True)

    seed: int = Field(ge=0, lt=2**64, description="主种子")
    stream: int = Field(default=0, ge=0, lt=2**64, description="流编号（如重复实验序号）")


class ArtifactMeta(BaseModel):
    """输出产物头部"""

    tool: str
    version: str
    config_hash: str
    seed: Optional[int] = None
    config: dict[str, Any]

    def csv_comment(self) -> str:
        """CSV 产物首行：`# meta: {...}`（单行 JSON），读取方按 `#` 跳过。"""
        return f"{CSV_META_PREFIX}{self.model_dump_json()}"
