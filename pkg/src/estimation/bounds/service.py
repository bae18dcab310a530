# -*- coding: utf-8 -*-
"""
信息不等式服务层

公开接口：
- `chapman_robbins_bound(model, truth)`：−min_{θ₁≠θ₀} KL(θ₁‖θ₀)
- `minimax_bound(model)`：−min_{a≠b} C(a,b)
- `bounds_report(model, truth, max_workers, samples)`：汇总为 BoundsReport
- `fit_slope(probabilities)`：ln P 对 [1, n, ln n] 的回归斜率
- `efficiency_verdict(measured, bounds, estimator)`：效率判定
- `bayes_risk_sandwich(risks, prior, n)`：贝叶斯风险与最大风险的夹逼

内部方法：
- `_kl_against`

说明：
- 有限 n 的概率只能近似极限指数；判定协议为至少 4 个网格点、最小 n ≥ 25 的三参数最小二乘，
  截距与 ln n 项吸收多项式前因子。
- 概率为 0 的曲线斜率记为 −∞ 并打上 `zero_probability` 标记。
"""

from __future__ import annotations

import math
from typing import Mapping, Sequence

import numpy as np
from loguru import logger

from ..exceptions import InvalidInputError
from ..model.schemas import Model, Prior
from ..rates.service import (
    FrozenSamples,
    chernoff_information,
    kl_divergence,
    pairwise_matrices,
)
from .config import bounds_config
from .schemas import BoundsReport, EfficiencyVerdict, SandwichCheck, SlopeFit


def _check_truth(model: Model, truth: int) -> None:
    if model.space.size < 2:
        raise InvalidInputError("参数空间只有一个点（J = 0），界无定义")
    if not 0 <= truth < model.space.size:
        raise InvalidInputError(f"真值索引越界：{truth}")


def _kl_against(
    model: Model, truth: int, samples: FrozenSamples | None = None
) -> list[tuple[int, float]]:
    return [
        (j, kl_divergence(model, j, truth, samples))
        for j in range(model.space.size)
        if j != truth
    ]


def chapman_robbins_bound(
    model: Model, truth: int = 0, samples: FrozenSamples | None = None
) -> float:
    """强相合估计量在 θ₀ 处误差指数的下界 sup_{θ₁≠θ₀} E_{θ₁} ln(f₀/f₁)。"""
    _check_truth(model, truth)
    return -min(kl for _, kl in _kl_against(model, truth, samples))


def minimax_bound(model: Model, samples: FrozenSamples | None = None) -> float:
    """任意估计量最大误差指数的下界。"""
    _check_truth(model, 0)
    size = model.space.size
    return -min(
        chernoff_information(model, a, b, samples).value
        for a in range(size)
        for b in range(a + 1, size)
    )


def bounds_report(
    model: Model,
    truth: int = 0,
    max_workers: int | None = None,
    samples: FrozenSamples | None = None,
) -> BoundsReport:
    """计算 θ₀ 处的全部界与成对矩阵；empirical 族需要每个参数点的冻结样本。"""
    _check_truth(model, truth)
    size = model.space.size
    matrices = pairwise_matrices(model, max_workers, samples)

    against = [(j, matrices.kl[j][truth]) for j in range(size) if j != truth]
    cap = min(kl for _, kl in against)
    cutoff = cap + bounds_config.bounds_attain_tol * max(1.0, cap)
    per_truth = [
        -min(matrices.kl[j][t] for j in range(size) if j != t) for t in range(size)
    ]

    pairs = [(a, b) for a in range(size) for b in range(a + 1, size)]
    closest = min(pairs, key=lambda pair: matrices.chernoff[pair[0]][pair[1]])
    minimax = -matrices.chernoff[closest[0]][closest[1]]
    logger.info(
        "界计算完成：truth={} CR={} minimax={}",
        model.space.labels[truth],
        -cap,
        minimax,
    )
    return BoundsReport(
        truth=truth,
        truth_label=model.space.labels[truth],
        cr_rate_bound=-cap,
        cr_attaining=[j for j, kl in against if kl <= cutoff],
        per_truth_cr=per_truth,
        minimax_rate_bound=minimax,
        minimax_pair=closest,
        inaccuracy_cap=cap,
        bayes_risk_rate_bound=minimax,
        pairwise=matrices,
    )


def fit_slope(probabilities: Mapping[int, float], truth: int | None = None) -> SlopeFit:
    """最小二乘拟合 ln P = c₀ + slope·n + c₁·ln n。"""
    points = sorted(probabilities.items())
    if len(points) < bounds_config.bounds_min_points:
        raise InvalidInputError(
            f"至少需要 {bounds_config.bounds_min_points} 个 n，当前只有 {len(points)} 个"
        )
    ns = np.array([n for n, _ in points], dtype=float)
    probs = np.array([p for _, p in points], dtype=float)
    if np.any(probs < 0.0) or np.any(probs > 1.0):
        raise InvalidInputError("误差概率必须在 [0,1] 内")
    if ns.min() < bounds_config.bounds_min_n:
        logger.warning("网格最小 n = {} 低于协议要求的 {}", int(ns.min()), bounds_config.bounds_min_n)
    if np.any(probs == 0.0):
        return SlopeFit(
            truth=truth,
            slope=-math.inf,
            intercept=-math.inf,
            log_coefficient=0.0,
            points=len(points),
            zero_probability=True,
        )
    design = np.column_stack([np.ones_like(ns), ns, np.log(ns)])
    coef = np.linalg.lstsq(design, np.log(probs), rcond=None)[0]
    return SlopeFit(
        truth=truth,
        slope=float(coef[1]),
        intercept=float(coef[0]),
        log_coefficient=float(coef[2]),
        points=len(points),
    )


def efficiency_verdict(
    measured: Mapping[int, Mapping[int, float]],
    bounds: BoundsReport,
    estimator: str = "mle",
    tol: float | None = None,
) -> EfficiencyVerdict:
    """根据各真值下的误差概率曲线判定是否达到 Chapman–Robbins 界与 minimax 界。

    `measured[t][n]` 为真值 t、样本量 n 时的误差概率 ℙ_t(θ̂ⁿ ≠ θ_t)。
    """
    tolerance = bounds_config.bounds_verdict_tol if tol is None else tol
    if bounds.truth not in measured:
        raise InvalidInputError(f"缺少真值 {bounds.truth} 的误差概率曲线")
    size = len(bounds.per_truth_cr)
    for t in measured:
        if not 0 <= t < size:
            raise InvalidInputError(f"真值索引越界：{t}")

    per_truth = [fit_slope(measured[t], truth=t) for t in sorted(measured)]
    common = set.intersection(*(set(curve) for curve in measured.values()))
    worst = {n: max(measured[t][n] for t in measured) for n in common}
    max_fit = fit_slope(worst)

    flags: list[str] = []
    by_truth = {fit.truth: fit for fit in per_truth}
    own = by_truth[bounds.truth]
    if own.zero_probability:
        flags.append("zero_probability")
    if max_fit.zero_probability:
        flags.append("zero_probability_max")
    if len(measured) < size:
        flags.append("partial_truth_coverage")

    attains_cr = (not own.zero_probability) and abs(own.slope - bounds.cr_rate_bound) <= tolerance
    attains_minimax = (not max_fit.zero_probability) and abs(
        max_fit.slope - bounds.minimax_rate_bound
    ) <= tolerance
    no_superefficiency = all(
        fit.slope >= bounds.per_truth_cr[fit.truth] - tolerance
        for fit in per_truth
        if fit.truth is not None
    )
    return EfficiencyVerdict(
        estimator=estimator,
        truth=bounds.truth,
        tol=tolerance,
        cr_rate_bound=bounds.cr_rate_bound,
        minimax_rate_bound=bounds.minimax_rate_bound,
        slope_under_truth=own.slope,
        max_over_truth_slope=max_fit.slope,
        attains_cr=attains_cr,
        attains_minimax=attains_minimax,
        no_superefficiency=no_superefficiency,
        per_truth=per_truth,
        max_over_truth=max_fit,
        flags=flags,
    )


def bayes_risk_sandwich(risks: Sequence[float], prior: Prior, n: int) -> SandwichCheck:
    """min(π)·max_θ R₁ ≤ r₁ = Σ π_θ R₁(θ) ≤ max_θ R₁。"""
    if len(risks) != len(prior.weights):
        raise InvalidInputError("风险向量长度与先验长度不一致")
    if n < 1:
        raise InvalidInputError("n 必须 ≥ 1")
    bayes = math.fsum(w * r for w, r in zip(prior.weights, risks))
    worst = max(risks)
    lower = min(prior.weights) * worst
    slack = 1e-12 * worst
    holds = lower - slack <= bayes <= worst + slack
    if bayes > 0.0 and worst > 0.0:
        log_gap = abs(math.log(bayes) - math.log(worst)) / n
    else:
        log_gap = 0.0 if bayes == worst else math.inf
    return SandwichCheck(
        n=n,
        bayes_risk=bayes,
        max_risk=worst,
        lower=lower,
        holds=holds,
        log_gap=log_gap,
        cap=-math.log(min(prior.weights)) / n,
    )
