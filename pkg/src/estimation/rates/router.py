# -*- coding: utf-8 -*-
"""
速率分析路由

公开接口：
- POST /api/rates/analyze

内部方法：
- 无
"""

from __future__ import annotations

from fastapi import APIRouter

from ..concurrency import run_in_thread
from ..exceptions import EstimationError, to_http_exception
from .schemas import AnalyzeRequest, RateReport
from .service import rate_report

router = APIRouter(prefix="/api/rates", tags=["误差指数"])


@router.post(
    "/analyze",
    response_model=RateReport,
    summary="计算误差指数",
    response_description="返回各备择点速率、对偶证书、支配点与总误差速率",
)
async def analyze_api(payload: AnalyzeRequest) -> RateReport:
    """对给定真值计算所有（或指定）备择点的大偏差误差指数。"""
    try:
        return await run_in_thread(
            lambda: rate_report(payload.model, payload.truth, payload.alternatives)
        )
    except EstimationError as exc:
        raise to_http_exception(exc) from exc
