# -*- coding: utf-8 -*-
"""
信息不等式路由

公开接口：
- POST /api/bounds/report

内部方法：
- 无
"""

from __future__ import annotations

from fastapi import APIRouter

from ..concurrency import run_in_thread
from ..exceptions import EstimationError, to_http_exception
from .schemas import BoundsReport, BoundsRequest
from .service import bounds_report

router = APIRouter(prefix="/api/bounds", tags=["信息不等式"])


@router.post(
    "/report",
    response_model=BoundsReport,
    summary="计算速率下界",
    response_description="返回 Chapman–Robbins 界、minimax 界、不准确率上限与成对 KL / Chernoff 矩阵",
)
async def report_api(payload: BoundsRequest) -> BoundsReport:
    try:
        return await run_in_thread(lambda: bounds_report(payload.model, payload.truth))
    except EstimationError as exc:
        raise to_http_exception(exc) from exc
