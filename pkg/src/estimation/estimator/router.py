# -*- coding: utf-8 -*-
"""
估计量路由

公开接口：
- POST /api/estimator/estimate

内部方法：
- `_spec_from_request`

文件功能：
- 以 HTTP 方式暴露估计服务，与 CLI 的 `estimate` 子命令共用服务层。
"""

from __future__ import annotations

from fastapi import APIRouter, HTTPException, status

from ..concurrency import run_in_thread
from ..exceptions import EstimationError, to_http_exception
from ..model.schemas import Prior
from .schemas import EstimateRequest, EstimationResult, EstimatorSpec
from .service import estimate

router = APIRouter(prefix="/api/estimator", tags=["估计量"])


def _spec_from_request(payload: EstimateRequest) -> EstimatorSpec:
    if payload.prior is not None and payload.k is not None:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail="prior 与 k 不能同时提供。",
        )
    if payload.prior is not None:
        try:
            prior = Prior(weights=payload.prior)
        except ValueError as exc:
            raise HTTPException(
                status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(exc)
            ) from exc
        return EstimatorSpec(kind="bayes", prior=prior)
    if payload.k is not None:
        return EstimatorSpec(kind="shifted", k=payload.k)
    if payload.model.prior is not None:
        return EstimatorSpec(kind="bayes", prior=payload.model.prior)
    return EstimatorSpec()


@router.post(
    "/estimate",
    response_model=EstimationResult,
    summary="计算估计值",
    response_description="返回所选参数点、目标值与可选后验对数权重",
)
async def estimate_api(payload: EstimateRequest) -> EstimationResult:
    """对提交的数据计算极大似然 / 贝叶斯 / 平移估计。"""
    spec = _spec_from_request(payload)
    try:
        return await run_in_thread(lambda: estimate(payload.model, payload.data, spec))
    except EstimationError as exc:
        raise to_http_exception(exc) from exc
