# -*- coding: utf-8 -*-
"""
两点高斯模型的闭式结果

公开接口：
- `gaussian_model(alpha, sigma)`：θ₀ = +α、θ₁ = −α 的模型
- `gaussian_closed_form(alpha, sigma, n, k)`：平移估计量在两个真值下的误差概率
- `consistency_limit(alpha, sigma)`：2(α/σ)²
- `beats_cr(alpha, sigma, k)`：θ₀ 下的误差指数是否不低于 Chapman–Robbins 界

说明：
- 判决规则：θ₀ 当且仅当均值对数似然比 + k ≥ 0；k = 0 即极大似然。
- Φ 通过互补误差函数计算，对数值用 `norm.logcdf` 保持远尾精度。
"""

from __future__ import annotations

import math

from scipy.special import erfc
from scipy.stats import norm

from ...exceptions import InvalidInputError
from ...model.schemas import Model
from ..schemas import GaussianClosedForm


def _phi(x: float) -> float:
    return 0.5 * float(erfc(-x / math.sqrt(2.0)))


def _check(alpha: float, sigma: float) -> None:
    if not (alpha > 0.0 and sigma > 0.0):
        raise InvalidInputError(f"要求 α > 0 且 σ > 0：α={alpha} σ={sigma}")


def gaussian_model(alpha: float = 1.0, sigma: float = 1.0) -> Model:
    _check(alpha, sigma)
    return Model.model_validate(
        {
            "space": {
                "points": [
                    {"label": f"{alpha:g}", "value": [alpha]},
                    {"label": f"{-alpha:g}", "value": [-alpha]},
                ]
            },
            "family": {"name": "gaussian_known_var", "sigma": sigma},
        }
    )


def consistency_limit(alpha: float, sigma: float) -> float:
    _check(alpha, sigma)
    return 2.0 * (alpha / sigma) ** 2


def beats_cr(alpha: float, sigma: float, k: float) -> bool:
    """(k + 2r)² ≥ 16r²，r = (α/σ)²。"""
    r = (alpha / sigma) ** 2
    return (k + 2.0 * r) ** 2 >= 16.0 * r * r


def gaussian_closed_form(alpha: float, sigma: float, n: int, k: float = 0.0) -> GaussianClosedForm:
    """ℙ_{θ₀}(θ̃ⁿ = θ₁) = Φ(−(kσ² + 2α²)√n/(2ασ))，ℙ_{θ₁}(θ̃ⁿ = θ₀) = Φ((kσ² − 2α²)√n/(2ασ))。"""
    _check(alpha, sigma)
    if n < 1:
        raise InvalidInputError(f"样本量必须 ≥ 1：{n}")
    scale = 2.0 * alpha * sigma
    x0 = -(k * sigma**2 + 2.0 * alpha**2) * math.sqrt(n) / scale
    x1 = (k * sigma**2 - 2.0 * alpha**2) * math.sqrt(n) / scale
    limit = consistency_limit(alpha, sigma)

    def rate(shift: float, favorable: bool) -> float:
        return shift**2 / (2.0 * scale**2) if favorable else 0.0

    return GaussianClosedForm(
        alpha=alpha,
        sigma=sigma,
        n=n,
        k=k,
        error_under_theta0=_phi(x0),
        error_under_theta1=_phi(x1),
        log_error_under_theta0=float(norm.logcdf(x0)),
        log_error_under_theta1=float(norm.logcdf(x1)),
        rate_under_theta0=rate(k * sigma**2 + 2.0 * alpha**2, k > -limit),
        rate_under_theta1=rate(k * sigma**2 - 2.0 * alpha**2, k < limit),
        consistent=abs(k) < limit,
        beats_cr=beats_cr(alpha, sigma, k),
    )
