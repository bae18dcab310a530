# -*- coding: utf-8 -*-
"""
渐近近似服务层

公开接口：
- `crude_ld(rate, n)`：−n·I
- `bracket_lower(rate, n, J)` / `bracket_upper(rate, n)`：多项式阶括号（不含常数）
- `exact_asymptotic_two_point(sys, n, prior=None)`：J = 1 的精确渐近式
- `saddlepoint_leading(sys, n, prior=None)`：前导阶多维鞍点近似（J ≤ 3）
- `approximation_curve(model, truth, candidate, n_grid, ...)`：n 网格上的近似曲线

内部方法：
- `_sum_thresholds`
- `_find_root`
- `_orthant_probability`
- `_tilted_orthant_integral`

说明：
- 所有结果均为对数概率 ln ℙ₀(θ̂ⁿ = θ_i)。
- 先验版本把象限阈值 T_j = ln(π_j/π_i)（似然比之和）换算为均值阈值 T/n。
- 格点族（有限支撑、泊松）仍给出近似值，同时记录非格点条件不成立的警告。
"""

from __future__ import annotations

import math
from typing import Callable, Mapping, Sequence

import numpy as np
from loguru import logger
from scipy.optimize import root_scalar
from scipy.special import logsumexp, roots_laguerre
from scipy.stats import multivariate_normal, norm
from scipy.stats._multivariate import multivariate_normal_frozen

from ..concurrency import parallel_map
from ..estimator.schemas import EstimatorSpec
from ..exceptions import (
    CapabilityError,
    ConvergenceError,
    DegenerateCandidateError,
    InvalidInputError,
)
from ..llr.service import LlrSystem, build_system
from ..model.schemas import Model, Prior
from ..rates.service import alternative_rate, prior_thresholds
from .config import asymptotics_config
from .schemas import ApproxCurve, ApproxRow, SaddlepointResult, TwoPointAsymptotic


def _check_n(n: float) -> None:
    if n < 1:
        raise InvalidInputError(f"样本量必须 ≥ 1：{n}")


def crude_ld(rate: float, n: float) -> float:
    """粗略大偏差估计 ln P ≈ −n·I。"""
    _check_n(n)
    if rate < 0:
        raise InvalidInputError(f"速率必须非负：{rate}")
    if rate == 0:
        logger.warning("速率为 0，粗略估计不随 n 衰减")
        return 0.0
    return -n * rate


def bracket_lower(rate: float, n: float, J: int) -> float:
    """下括号 −nI − (J/2)ln n。"""
    return crude_ld(rate, n) - 0.5 * J * math.log(n)


def bracket_upper(rate: float, n: float) -> float:
    """上括号 −nI − ½ln n。"""
    return crude_ld(rate, n) - 0.5 * math.log(n)


def _sum_thresholds(sys: LlrSystem, prior: Prior | None) -> np.ndarray:
    if prior is None:
        return np.zeros(sys.dim)
    return prior_thresholds(sys, prior)


def _lattice_warning(sys: LlrSystem) -> None:
    if sys.lattice:
        logger.warning(
            "{} 族的似然比取值为格点 / 有限点集，非格点条件不成立，近似的前因子可能振荡",
            sys.model.family.name,
        )


def _find_root(func: Callable[[float], float], low: float, high: float, cap: float) -> float:
    if func(low) >= 0.0:
        low, high = 0.0, low
    else:
        while func(high) <= 0.0:
            high *= 2.0
            if high > cap:
                raise ConvergenceError(f"在 [{low}, {cap}] 内 Λ′ − t 没有变号")
    solution = root_scalar(func, bracket=(low, high), method="brentq", xtol=1e-15, rtol=1e-14)
    if not solution.converged:
        raise ConvergenceError(f"brentq 未收敛：{solution.flag}")
    return float(solution.root)


def exact_asymptotic_two_point(
    sys: LlrSystem, n: float, prior: Prior | None = None
) -> TwoPointAsymptotic:
    """ln P ≈ n[Λ(μ) − μt] − ln μ − ½ln(2πnΛ″(μ))，Λ′(μ) = t。"""
    if sys.dim != 1:
        raise InvalidInputError(f"两点精确渐近式要求 J = 1，当前 J = {sys.dim}")
    _check_n(n)
    t = float(_sum_thresholds(sys, prior)[0]) / n
    kernel = sys.kernel

    def derivative(x: float) -> float:
        return float(kernel.grad(np.array([x]))[0]) - t

    if derivative(0.0) >= 0.0:
        raise DegenerateCandidateError(
            f"候选点 {sys.candidate} 的 E₀X − t ≥ 0，不存在正根 μ（不可区分或错设）"
        )
    mu = _find_root(
        derivative,
        asymptotics_config.asymptotics_root_low,
        asymptotics_config.asymptotics_root_high,
        asymptotics_config.asymptotics_root_cap,
    )
    lam = np.array([mu])
    value = kernel.value(lam)
    curvature = float(kernel.hess(lam)[0, 0])
    if mu <= 0.0 or curvature <= 0.0:
        raise DegenerateCandidateError("Λ″(μ) 或 μ 非正，无法给出渐近式")
    _lattice_warning(sys)
    log_prob = n * (value - mu * t) - math.log(mu) - 0.5 * math.log(2.0 * math.pi * n * curvature)
    return TwoPointAsymptotic(
        log_prob=log_prob, mu=mu, lmgf_at_mu=value, curvature=curvature, lattice=sys.lattice
    )


def _orthant_probability(mean: np.ndarray, cov: np.ndarray, lower: np.ndarray) -> np.ndarray:
    """逐行计算 ℙ(Z > lower)，Z ~ N(mean[k], cov)；cov 可以退化。"""
    dim = lower.size
    if dim == 0:
        return np.ones(mean.shape[0])
    eigvals, eigvecs = np.linalg.eigh(cov)
    tol = asymptotics_config.asymptotics_degenerate_tol * max(1.0, float(eigvals.max()))
    rank = int(np.sum(eigvals > tol))
    if rank == 0:
        return np.all(mean > lower, axis=1).astype(float)
    if rank == dim:
        if dim == 1:
            return norm.cdf((mean[:, 0] - lower[0]) / math.sqrt(float(cov[0, 0])))
        gaussian = multivariate_normal_frozen(
            mean=np.zeros(dim),
            cov=cov,
            seed=0,
            maxpts=asymptotics_config.asymptotics_mvn_maxpts,
            abseps=asymptotics_config.asymptotics_mvn_abseps,
            releps=asymptotics_config.asymptotics_mvn_releps,
        )
        return np.atleast_1d(gaussian.cdf(mean - lower))
    if dim == 2 and rank == 1:
        # Z = mean + s·ξ·v：每个分量给出 ξ 的一个半直线约束
        scale = math.sqrt(float(eigvals[-1]))
        direction = eigvecs[:, -1] * scale
        low = np.full(mean.shape[0], -np.inf)
        high = np.full(mean.shape[0], np.inf)
        feasible = np.ones(mean.shape[0], dtype=bool)
        for k in range(dim):
            bound = lower[k] - mean[:, k]
            if abs(direction[k]) <= tol:
                feasible &= bound < 0.0
            elif direction[k] > 0:
                low = np.maximum(low, bound / direction[k])
            else:
                high = np.minimum(high, bound / direction[k])
        return np.where(feasible, np.clip(norm.cdf(high) - norm.cdf(low), 0.0, 1.0), 0.0)
    raise CapabilityError(f"不支持 {dim} 维、秩 {rank} 的条件协方差")


def _tilted_orthant_integral(
    u: np.ndarray, hess: np.ndarray, lower: np.ndarray, n: float
) -> tuple[float, list[int]]:
    """ln E[exp(−√n u·Z) 1{Z_F > 0, Z_I > lower_I}]，Z ~ N(0, hess)，返回值已含 Π 1/(√n u_j)。"""
    tol = asymptotics_config.asymptotics_degenerate_tol
    active = [j for j in range(u.size) if u[j] > tol]
    inactive = [j for j in range(u.size) if u[j] <= tol]
    root_n = math.sqrt(n)
    v_ff = hess[np.ix_(active, active)]
    if np.linalg.eigvalsh(v_ff).min() <= tol * max(1.0, float(np.abs(v_ff).max())):
        raise DegenerateCandidateError("倾斜协方差在活动坐标上奇异，鞍点近似不适用")

    nodes, weights = roots_laguerre(asymptotics_config.asymptotics_laguerre_nodes)
    grids = np.meshgrid(*([nodes] * len(active)), indexing="ij")
    w_points = np.stack([g.ravel() for g in grids], axis=1)
    log_weights = sum(
        np.log(g.ravel()) for g in np.meshgrid(*([weights] * len(active)), indexing="ij")
    )
    z_active = w_points / (root_n * u[active])
    log_density = np.atleast_1d(
        multivariate_normal(mean=np.zeros(len(active)), cov=v_ff).logpdf(z_active)
    )

    if inactive:
        v_if = hess[np.ix_(inactive, active)]
        regression = v_if @ np.linalg.inv(v_ff)
        cond_mean = z_active @ regression.T
        cond_cov = hess[np.ix_(inactive, inactive)] - regression @ v_if.T
        prob = _orthant_probability(cond_mean, 0.5 * (cond_cov + cond_cov.T), lower[inactive])
    else:
        prob = np.ones(w_points.shape[0])

    total, sign = logsumexp(log_weights + log_density, b=prob, return_sign=True)
    if sign <= 0 or not math.isfinite(float(total)):
        raise ConvergenceError("象限积分的求积结果非正")
    prefactor = -float(np.sum(np.log(root_n * u[active])))
    return float(total) + prefactor, active


def saddlepoint_leading(
    sys: LlrSystem, n: float, prior: Prior | None = None
) -> SaddlepointResult:
    """前导阶鞍点近似：−nI − Σ_F ln(√n u_j) + ln ∫ e^{−Σw} φ_V(z(w)) ℙ(Z_I | z) dw。

    J = 1 时积分取 Laplace 前导项 1/√(2πV)；J ∈ {2,3} 时用乘积 Gauss–Laguerre 求积。
    """
    _check_n(n)
    if sys.dim > asymptotics_config.asymptotics_max_dim:
        raise CapabilityError(
            f"鞍点象限积分只支持 J ≤ {asymptotics_config.asymptotics_max_dim}，当前 J = {sys.dim}"
        )
    thresholds = _sum_thresholds(sys, prior) / n
    rate = alternative_rate(sys, thresholds)
    if rate.misidentified or rate.unreachable or rate.rate <= 0.0:
        raise DegenerateCandidateError(f"候选点 {sys.candidate} 没有支配点（速率 {rate.rate}）")

    u = np.array(rate.lam)
    hess = sys.kernel.hess(u)
    dominating = np.array(rate.dominating_point)
    _lattice_warning(sys)

    if sys.dim == 1:
        variance = float(hess[0, 0])
        if u[0] <= 0.0 or variance <= 0.0:
            raise DegenerateCandidateError("支配点处 u 或 Λ″ 非正")
        log_integral = -math.log(u[0]) - 0.5 * math.log(2.0 * math.pi * n * variance)
        active = [0]
    else:
        lower = math.sqrt(n) * (thresholds - dominating)
        log_integral, active = _tilted_orthant_integral(u, hess, lower, n)

    return SaddlepointResult(
        log_prob=-n * rate.rate + log_integral,
        u=u.tolist(),
        active=active,
        hessian_det=float(np.linalg.det(hess)),
        rate=rate.rate,
        lattice=sys.lattice,
    )


def approximation_curve(
    model: Model,
    truth: int,
    candidate: int,
    n_grid: Sequence[int],
    prior: Prior | None = None,
    exact_log_probs: Mapping[int, float] | None = None,
    max_workers: int | None = None,
) -> ApproxCurve:
    """在 n 网格上计算 crude / exact_j1 / saddlepoint / 括号，可并入枚举得到的精确值。"""
    if not n_grid:
        raise InvalidInputError("n 网格不能为空")
    sys = build_system(model, truth, candidate)
    base = alternative_rate(sys)
    if base.misidentified or base.unreachable:
        raise DegenerateCandidateError(f"候选点 {candidate} 没有有限正速率")
    supports_saddlepoint = sys.dim <= asymptotics_config.asymptotics_max_dim

    def row(n: int) -> ApproxRow:
        return ApproxRow(
            n=n,
            crude=crude_ld(base.rate, n),
            exact_j1=exact_asymptotic_two_point(sys, n, prior).log_prob if sys.dim == 1 else None,
            saddlepoint=saddlepoint_leading(sys, n, prior).log_prob if supports_saddlepoint else None,
            bracket_lower=bracket_lower(base.rate, n, sys.dim),
            bracket_upper=bracket_upper(base.rate, n),
            exact_enum=None if exact_log_probs is None else exact_log_probs.get(n),
        )

    rows = parallel_map(row, sorted(set(int(n) for n in n_grid)), max_workers)
    mu = exact_asymptotic_two_point(sys, rows[0].n, prior).mu if sys.dim == 1 else None
    spec = EstimatorSpec() if prior is None else EstimatorSpec(kind="bayes", prior=prior)
    return ApproxCurve(
        truth=truth,
        candidate=candidate,
        candidate_label=model.space.labels[candidate],
        J=sys.dim,
        estimator=spec.label,
        rate=base.rate,
        u=base.lam,
        mu=mu,
        hessian_det=float(np.linalg.det(sys.kernel.hess(np.array(base.lam)))),
        lattice=sys.lattice,
        rows=rows,
    )
