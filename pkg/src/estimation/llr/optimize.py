# -*- coding: utf-8 -*-
"""
凸优化内核：阻尼（投影）牛顿法

公开接口：
- `OptimizeOutcome`：迭代结果
- `minimize_convex(func, grad, hess, x0)`：无约束凸极小化
- `minimize_on_orthant(func, grad, hess, x0)`：非负象限上的凸极小化

内部方法：
- `_newton_descent`
- `_line_search`

说明：
- 牛顿方向使用 Levenberg 阻尼 (H + ρI)，ρ 取当前（投影）梯度的 ∞-范数，
  Hessian 奇异（如一维观测生成的多维似然比）时步长仍有界。
- 象限约束采用 Bertsekas 投影牛顿：x_j ≈ 0 且 g_j > 0 的坐标固定，其余坐标做牛顿步，
  沿投影弧做 Armijo 回溯；回溯失败时退化为投影梯度步。
- 收敛判据：投影梯度 ∞-范数 ≤ tol；迭代点 ∞-范数超过 divergence_norm 时判定发散。
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import llr_config

ScalarFn = Callable[[np.ndarray], float]
VectorFn = Callable[[np.ndarray], np.ndarray]

_ROUNDOFF = 8.0 * np.finfo(float).eps
_MAX_HALVINGS = 60


@dataclass(frozen=True)
class OptimizeOutcome:
    """迭代结果"""

    x: np.ndarray
    value: float
    grad: np.ndarray
    iterations: int
    converged: bool
    diverged: bool


def _line_search(
    func: ScalarFn,
    x: np.ndarray,
    fx: float,
    g: np.ndarray,
    direction: np.ndarray,
    bounded: bool,
    armijo: float,
) -> tuple[np.ndarray, float] | None:
    def trial(step: float) -> tuple[np.ndarray, float, float]:
        candidate = x + step * direction
        if bounded:
            candidate = np.maximum(candidate, 0.0)
        return candidate, func(candidate), float(g @ (candidate - x))

    slack = _ROUNDOFF * max(1.0, abs(fx))
    step = 1.0
    for halving in range(_MAX_HALVINGS):
        candidate, f_new, decrease = trial(step)
        if np.isfinite(f_new) and f_new <= fx + armijo * decrease + slack:
            break
        step *= 0.5
    else:
        return None

    # 整步被接受时沿同一方向倍增，目标仍严格下降则继续（线性下降方向上迅速暴露发散）
    if halving == 0:
        for _ in range(_MAX_HALVINGS):
            longer, f_longer, decrease = trial(2.0 * step)
            if not (np.isfinite(f_longer) and f_longer < f_new):
                break
            if f_longer > fx + armijo * decrease:
                break
            candidate, f_new, step = longer, f_longer, 2.0 * step
    return candidate, f_new


def _newton_descent(
    func: ScalarFn,
    grad: VectorFn,
    hess: VectorFn,
    x0: np.ndarray,
    bounded: bool,
    tol: float,
    max_iter: int,
    divergence_norm: float,
    armijo: float,
) -> OptimizeOutcome:
    x = np.array(x0, dtype=float)
    if bounded:
        x = np.maximum(x, 0.0)
    fx = func(x)
    g = grad(x)
    for iteration in range(max_iter):
        projected = x - np.maximum(x - g, 0.0) if bounded else g
        norm = float(np.max(np.abs(projected))) if projected.size else 0.0
        if norm <= tol:
            return OptimizeOutcome(x, fx, g, iteration, True, False)

        if bounded:
            fixed = (x <= min(1e-12, norm)) & (g > 0.0)
        else:
            fixed = np.zeros(x.size, dtype=bool)
        free = ~fixed

        direction = np.zeros_like(x)
        h_free = hess(x)[np.ix_(free, free)]
        damping = norm + 1e-12 * (1.0 + float(np.trace(h_free)))
        try:
            direction[free] = -np.linalg.solve(
                h_free + damping * np.eye(int(free.sum())), g[free]
            )
        except np.linalg.LinAlgError:
            direction[free] = -g[free]
        if float(g @ direction) >= 0.0:
            direction = -g

        accepted = _line_search(func, x, fx, g, direction, bounded, armijo)
        if accepted is None and not np.array_equal(direction, -g):
            accepted = _line_search(func, x, fx, g, -g, bounded, armijo)
        if accepted is None:
            return OptimizeOutcome(x, fx, g, iteration, False, False)

        x, fx = accepted
        g = grad(x)
        if float(np.max(np.abs(x))) > divergence_norm:
            return OptimizeOutcome(x, fx, g, iteration + 1, False, True)
    return OptimizeOutcome(x, fx, g, max_iter, False, False)


def minimize_convex(
    func: ScalarFn,
    grad: VectorFn,
    hess: VectorFn,
    x0: np.ndarray,
    tol: float | None = None,
    max_iter: int | None = None,
) -> OptimizeOutcome:
    """无约束凸极小化。"""
    return _newton_descent(
        func,
        grad,
        hess,
        x0,
        bounded=False,
        tol=llr_config.llr_grad_tol if tol is None else tol,
        max_iter=llr_config.llr_max_iterations if max_iter is None else max_iter,
        divergence_norm=llr_config.llr_divergence_norm,
        armijo=llr_config.llr_armijo,
    )


def minimize_on_orthant(
    func: ScalarFn,
    grad: VectorFn,
    hess: VectorFn,
    x0: np.ndarray,
    tol: float | None = None,
    max_iter: int | None = None,
) -> OptimizeOutcome:
    """x ⪰ 0 上的凸极小化。"""
    return _newton_descent(
        func,
        grad,
        hess,
        x0,
        bounded=True,
        tol=llr_config.llr_grad_tol if tol is None else tol,
        max_iter=llr_config.llr_max_iterations if max_iter is None else max_iter,
        divergence_norm=llr_config.llr_divergence_norm,
        armijo=llr_config.llr_armijo,
    )
