# -*- coding: utf-8 -*-
"""
对数矩母函数内核

公开接口：
- `LmgfKernel`：内核抽象基类（value / grad / hess）
- `AffineGaussianKernel`：X = a·y + b，y ~ N(m, σ²)
- `AffinePoissonKernel`：X = a·y + b，y ~ Poisson(θ)
- `PointCloudKernel`：有限加权点集（有限支撑族、冻结样本、外部数据集）

内部方法：
- 无

说明：
- 所有内核在 λ = 0 处精确返回 0。
- 内核构造后不可变，可被并发调用。
"""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np
from scipy.special import logsumexp, softmax


class LmgfKernel(ABC):
    """Λ(λ) = ln E exp(λᵀX) 的求值接口"""

    dim: int

    @abstractmethod
    def value(self, lam: np.ndarray) -> float: ...

    @abstractmethod
    def grad(self, lam: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def hess(self, lam: np.ndarray) -> np.ndarray: ...


class AffineGaussianKernel(LmgfKernel):
    """Λ(λ) = λ·b + (λ·a)m + ½σ²(λ·a)²"""

    def __init__(self, slopes: np.ndarray, intercepts: np.ndarray, mean: float, sigma: float):
        self.slopes = np.asarray(slopes, dtype=float)
        self.intercepts = np.asarray(intercepts, dtype=float)
        self.mean = float(mean)
        self.variance = float(sigma) ** 2
        self.dim = self.slopes.size

    def value(self, lam: np.ndarray) -> float:
        if not np.any(lam):
            return 0.0
        s = float(lam @ self.slopes)
        return float(lam @ self.intercepts) + s * self.mean + 0.5 * self.variance * s * s

    def grad(self, lam: np.ndarray) -> np.ndarray:
        s = float(lam @ self.slopes)
        return self.intercepts + self.slopes * (self.mean + self.variance * s)

    def hess(self, lam: np.ndarray) -> np.ndarray:
        return self.variance * np.outer(self.slopes, self.slopes)


class AffinePoissonKernel(LmgfKernel):
    """Λ(λ) = λ·b + θ(e^{λ·a} − 1)"""

    def __init__(self, slopes: np.ndarray, intercepts: np.ndarray, rate: float):
        self.slopes = np.asarray(slopes, dtype=float)
        self.intercepts = np.asarray(intercepts, dtype=float)
        self.rate = float(rate)
        self.dim = self.slopes.size

    def value(self, lam: np.ndarray) -> float:
        if not np.any(lam):
            return 0.0
        s = float(lam @ self.slopes)
        return float(lam @ self.intercepts) + self.rate * float(np.expm1(s))

    def grad(self, lam: np.ndarray) -> np.ndarray:
        s = float(lam @ self.slopes)
        return self.intercepts + self.rate * np.exp(s) * self.slopes

    def hess(self, lam: np.ndarray) -> np.ndarray:
        s = float(lam @ self.slopes)
        return self.rate * np.exp(s) * np.outer(self.slopes, self.slopes)


class PointCloudKernel(LmgfKernel):
    """Λ(λ) = ln Σ_k w_k exp(λᵀx_k)，以 max 平移的 log-sum-exp 计算"""

    def __init__(self, values: np.ndarray, log_weights: np.ndarray):
        self.values = np.asarray(values, dtype=float)
        self.log_weights = np.asarray(log_weights, dtype=float)
        self.dim = self.values.shape[1]

    def _tilted(self, lam: np.ndarray) -> np.ndarray:
        return softmax(self.log_weights + self.values @ lam)

    def value(self, lam: np.ndarray) -> float:
        if not np.any(lam):
            return 0.0
        return float(logsumexp(self.log_weights + self.values @ lam))

    def grad(self, lam: np.ndarray) -> np.ndarray:
        return self._tilted(lam) @ self.values

    def hess(self, lam: np.ndarray) -> np.ndarray:
        weights = self._tilted(lam)
        centered = self.values - weights @ self.values
        return (centered * weights[:, None]).T @ centered
