# -*- coding: utf-8 -*-
"""
全局配置：线程、种子、平局容差、日志级别与跨域来源

公开接口：
- `global_config`: 全局配置实例

内部方法：
- 无

说明：
- 支持 .env 与 .env.{APP_ENV} 加载
- 默认线程上限通过环境变量 WORKER_THREADS 覆盖
- ALLOWED_ORIGINS 支持 JSON 数组、逗号分隔或单个值
"""

import os
import json
from typing import List

from dotenv import load_dotenv
from loguru import logger
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# 先加载 .env 和 .env.{APP_ENV}
load_dotenv(".env")
app_env = os.getenv("APP_ENV", "dev")
load_dotenv(f".env.{app_env}", override=True)


class GlobalConfig(BaseSettings):
    """全局配置"""

    app_env: str = Field(default="dev", title="应用环境")

    log_level: str = Field(
        default="INFO",
        title="日志级别",
        description="loguru 输出到 stderr 的最低级别",
    )

    worker_threads: int = Field(
        default=4,
        ge=1,
        title="默认线程上限",
        description="并发计算（逐备选速率、重复抽样分块、计数向量分块）的默认线程数",
    )

    default_seed: int = Field(
        default=20240601,
        ge=0,
        title="默认随机种子",
        description="未显式提供种子时使用的主种子",
    )

    tie_tolerance: float = Field(
        default=1e-12,
        ge=0.0,
        title="平局相对容差",
        description="决策向量与最大值之差不超过 tol·max(1,|max|) 即视为并列最大",
    )

    cors_origins: str = Field(
        default="*",
        validation_alias="ALLOWED_ORIGINS",
        title="跨域来源",
        description="JSON 数组、逗号分隔或单个值；仅 HTTP 接口使用",
    )

    @property
    def allowed_origins(self) -> List[str]:
        """解析后的跨域来源列表，空值按 ["*"] 处理。"""
        raw = self.cors_origins.strip()
        if raw.startswith("["):
            try:
                return [str(item) for item in json.loads(raw)]
            except json.JSONDecodeError:
                logger.warning("ALLOWED_ORIGINS 不是合法的 JSON 数组，按逗号分隔解析：{}", raw)
                raw = raw.strip("[]")
        origins = [part.strip().strip("'\"") for part in raw.split(",")]
        return [origin for origin in origins if origin] or ["*"]

    model_config = SettingsConfigDict(
        env_file=None, env_file_encoding="utf-8", case_sensitive=False, extra="ignore"
    )


global_config = GlobalConfig()
