# -*- coding: utf-8 -*-
"""
FastAPI 应用主入口。

负责应用的生命周期、CORS 中间件与各计算路由的挂载；所有端点与命令行共用同一服务层。
"""

from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from loguru import logger

from src.estimation import __version__
from src.estimation.config import global_config

# 路由模块
from src.estimation.bounds.router import router as bounds_router
from src.estimation.estimator.router import router as estimator_router
from src.estimation.rates.router import router as rates_router


# --- 应用生命周期 ---
@asynccontextmanager
async def lifespan(_: FastAPI):
    logger.info("离散参数估计服务启动中...（线程上限 {}）", global_config.worker_threads)
    yield
    logger.info("服务已关闭。")


# --- 应用实例与中间件 ---
fastapi_kwargs = {
    "title": "discrete-param",
    "description": "离散参数空间上的估计量、大偏差误差指数与信息不等式界。",
    "version": __version__,
    "lifespan": lifespan,
}

if global_config.app_env == "prod":
    fastapi_kwargs["docs_url"] = None
    fastapi_kwargs["redoc_url"] = None
    logger.info("生产环境：API 文档已禁用")

app = FastAPI(**fastapi_kwargs)  # type: ignore

app.add_middleware(
    CORSMiddleware,
    allow_origins=global_config.allowed_origins,
    allow_credentials=False,
    allow_methods=["GET", "POST"],
    allow_headers=["Content-Type"],
)


# --- API 路由 ---
@app.get("/api/health", summary="健康检查", tags=["系统"])
def health():
    """提供一个简单的健康检查端点，用于监控服务状态。"""
    return {"status": "ok"}


app.include_router(estimator_router)
app.include_router(rates_router)
app.include_router(bounds_router)
