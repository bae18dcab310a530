# -*- coding: utf-8 -*-
"""
统一异常层级

公开接口：
- `EstimationError`：所有领域异常的基类，携带 `exit_code`
- `InvalidInputError`：输入非法（规格文件、索引、观测、先验等），退出码 2
- `MissingEmbeddingError`：参数点缺少数值嵌入，退出码 2
- `DegenerateCandidateError`：候选点不可区分（速率为 0，无支配点），退出码 2
- `CapabilityError`：模型族缺少所需能力（抽样、枚举、解析 Λ），退出码 2
- `EnumerationGuardError`：枚举规模超过保护上限，退出码 2
- `NumericalError`：数值失败基类，退出码 3
- `ConvergenceError`：优化或求根未收敛，退出码 3
- `DivergenceError`：需要有限值的位置出现 Λ = +∞，退出码 3
- `to_http_exception`：转换为 FastAPI 的 HTTPException

内部方法：
- 无
"""

from __future__ import annotations

from fastapi import HTTPException, status


class EstimationError(Exception):
    """离散参数估计的领域异常基类"""

    exit_code: int = 2


class InvalidInputError(EstimationError, ValueError):
    """输入校验失败"""


class MissingEmbeddingError(InvalidInputError):
    """参数点缺少数值嵌入"""


class DegenerateCandidateError(InvalidInputError):
    """候选点与真值不可区分"""


class CapabilityError(EstimationError):
    """模型族不具备所需能力"""


class EnumerationGuardError(EstimationError):
    """精确枚举规模超限"""


class NumericalError(EstimationError):
    """数值计算失败"""

    exit_code = 3


class ConvergenceError(NumericalError):
    """迭代算法在预算内未收敛"""


class DivergenceError(NumericalError):
    """对数矩母函数发散"""


def to_http_exception(exc: EstimationError) -> HTTPException:
    """按退出码映射 HTTP 状态：2 → 422，3 → 500。"""
    if exc.exit_code == 2:
        return HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(exc)
        )
    return HTTPException(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        detail=f"数值计算失败：{exc}",
    )
