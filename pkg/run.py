#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
本地便捷启动脚本

公开接口：
- 直接运行该脚本启动 uvicorn（HTTP 接口）；APP_ENV=dev 时开启热重载

内部方法：
- 无
"""

import os
from pathlib import Path

import uvicorn
from dotenv import load_dotenv
from loguru import logger

if __name__ == "__main__":
    load_dotenv(Path.cwd() / ".env")
    app_env = os.getenv("APP_ENV", "dev")
    port = int(os.getenv("PORT", "8000"))
    logger.info("离散参数估计服务：环境 {}，端口 {}", app_env, port)

    uvicorn.run(
        "src.estimation.main:app",
        host="0.0.0.0",
        port=port,
        reload=app_env == "dev",
        log_level=os.getenv("LOG_LEVEL", "info").lower(),
    )
