# -*- coding: utf-8 -*-
"""
误差指数服务层

公开接口：
- `alternative_rate(sys, thresholds=None)`：I_i 与对偶证书、支配点、对偶间隙
- `rate_report(model, truth, ...)`：所有备择点的速率（并发）
- `total_error_rate(model, truth)`：I = min_i I_i 与 argmin 集合
- `kl_divergence(model, a, b, samples=None)`：KL(a‖b)
- `chernoff_information(model, a, b, samples=None)`：Chernoff 信息与 u*
- `bayes_rate_invariance(sys, prior, n=None)`：先验平移象限的速率差
- `bias_bound(model, truth, probability)`：偏差上界
- `pairwise_matrices(model, max_workers, samples)`：成对 KL / Chernoff 矩阵
- `FrozenSamples`：{参数索引: 该点下的冻结样本}，empirical 族的 KL / Chernoff 依赖它
- `reference_index(model, truth)`：真值索引或数据集的伪真值
- `prior_thresholds(sys, prior)`：后验众数的象限阈值 ln(π_j/π_i)（作用于似然比之和）

内部方法：
- `_orthant_rate`

说明：
- 速率用凸对偶计算：I_i = sup_{λ⪰0} [λ·t − Λ(λ)]，t 为象限阈值（默认 0）。
  每次调用都在 y* = ∇Λ(λ*) 处回算原始值 Λ*(y*)，并报告对偶间隙。
- E₀X − t 已在象限内的候选（错设、不可区分）返回速率 0 与警告，不抛异常。
- 象限与支撑凸包不相交时候选永不胜出，速率记为 +inf。
"""

from __future__ import annotations

import math
from typing import Any, Mapping, Sequence

import numpy as np
from loguru import logger
from scipy.optimize import minimize_scalar
from scipy.special import logsumexp

from ..concurrency import parallel_map
from ..exceptions import (
    CapabilityError,
    ConvergenceError,
    InvalidInputError,
    MissingEmbeddingError,
)
from ..llr.optimize import minimize_on_orthant
from ..llr.schemas import TruthSpec
from ..llr.service import (
    Backend,
    LlrSystem,
    build_system,
    cramer_transform,
    log_hellinger_transform,
)
from ..model.schemas import GaussianKnownVar, Model, PoissonFamily, Prior
from ..model.service import encode_observations, finite_law, log_density_matrix
from .config import rates_config
from .schemas import (
    AlternativeRate,
    BayesRateInvariance,
    ChernoffResult,
    PairwiseMatrices,
    RateReport,
)


def _orthant_rate(sys: LlrSystem, thresholds: np.ndarray) -> AlternativeRate:
    kernel = sys.kernel
    label = sys.model.space.points[sys.candidate].label
    mean = sys.mean()

    if np.all(mean - thresholds >= 0.0):
        logger.warning(
            "候选点 {} 的期望似然比已落在象限内，与真值 {} 不可区分，速率记为 0",
            label,
            sys.truth.label,
        )
        return AlternativeRate(
            candidate=sys.candidate,
            label=label,
            rate=0.0,
            lam=[0.0] * sys.dim,
            dominating_point=mean.tolist(),
            misidentified=True,
        )

    outcome = minimize_on_orthant(
        lambda lam: kernel.value(lam) - float(thresholds @ lam),
        lambda lam: kernel.grad(lam) - thresholds,
        kernel.hess,
        np.zeros(sys.dim),
    )
    if outcome.diverged:
        logger.warning("候选点 {} 的胜出象限与支撑凸包不相交，速率为 +inf", label)
        return AlternativeRate(
            candidate=sys.candidate,
            label=label,
            rate=math.inf,
            lam=outcome.x.tolist(),
            dominating_point=kernel.grad(outcome.x).tolist(),
            iterations=outcome.iterations,
            unreachable=True,
        )
    if not outcome.converged:
        raise ConvergenceError(
            f"候选点 {label} 的象限对偶问题未收敛（迭代 {outcome.iterations} 步）"
        )

    lam_star = outcome.x
    dual = max(-outcome.value, 0.0)
    dominating = kernel.grad(lam_star)
    slack = dominating - thresholds
    if float(slack.min()) < -rates_config.rates_kkt_slack:
        raise ConvergenceError(
            f"候选点 {label} 的支配点违反 KKT 条件：最小松弛 {float(slack.min()):.3e}"
        )

    primal = cramer_transform(sys, dominating, warm_start=lam_star).value
    # 阈值象限的原始值：Λ*(y*) − λ*·(y* − t)
    gap = abs(primal - float(lam_star @ (dominating - thresholds)) - dual)
    if gap > rates_config.rates_gap_cap:
        raise ConvergenceError(f"候选点 {label} 的对偶间隙 {gap:.3e} 超过上限")

    return AlternativeRate(
        candidate=sys.candidate,
        label=label,
        rate=dual,
        lam=lam_star.tolist(),
        dominating_point=dominating.tolist(),
        duality_gap=gap,
        iterations=outcome.iterations,
    )


def alternative_rate(
    sys: LlrSystem, thresholds: Sequence[float] | np.ndarray | None = None
) -> AlternativeRate:
    """候选点 θ_i 胜出事件 {X̄ ⪰ t} 的误差指数。"""
    if thresholds is None:
        shift = np.zeros(sys.dim)
    else:
        shift = np.asarray(thresholds, dtype=float).reshape(-1)
        if shift.size != sys.dim:
            raise InvalidInputError(f"阈值维数应为 {sys.dim}")
    return _orthant_rate(sys, shift)


def reference_index(model: Model, truth: int | TruthSpec) -> int:
    """真值索引；数据集真值取平均对数似然最大的参数点（伪真值，平局取最小索引）。"""
    spec = truth if isinstance(truth, TruthSpec) else TruthSpec(index=truth)
    if spec.index is not None:
        if not 0 <= spec.index < model.space.size:
            raise InvalidInputError(f"真值索引越界：{spec.index}")
        return spec.index
    assert spec.dataset is not None
    logq = log_density_matrix(model, encode_observations(model, list(spec.dataset)))
    return int(np.argmax(np.sort(logq, axis=0).sum(axis=0)))


def rate_report(
    model: Model,
    truth: int | TruthSpec = 0,
    alternatives: Sequence[int] | None = None,
    backend: Backend = "analytic",
    sample_size: int | None = None,
    seed: int | None = None,
    max_workers: int | None = None,
) -> RateReport:
    """计算每个备择点的速率，并汇总总误差速率与 argmin 集合。"""
    spec = truth if isinstance(truth, TruthSpec) else TruthSpec(index=truth)
    reference = reference_index(model, spec)
    size = model.space.size
    if size < 2:
        raise InvalidInputError("参数空间至少需要两个点")
    chosen = [i for i in range(size) if i != reference] if alternatives is None else list(alternatives)
    if not chosen:
        raise InvalidInputError("备择点集合为空")
    for i in chosen:
        if not 0 <= i < size or i == reference:
            raise InvalidInputError(f"非法备择点索引：{i}")

    def compute(candidate: int) -> AlternativeRate:
        return alternative_rate(
            build_system(model, spec, candidate, backend=backend, sample_size=sample_size, seed=seed)
        )

    per_alternative = parallel_map(compute, chosen, max_workers)
    total = min(item.rate for item in per_alternative)
    cutoff = total + rates_config.rates_argmin_tol * max(1.0, total)
    argmin = [item.candidate for item in per_alternative if item.rate <= cutoff]
    labels = model.space.labels
    logger.info("速率分析完成：truth={} 总速率={} argmin={}", spec.label, total, argmin)
    return RateReport(
        truth=spec.label,
        reference_index=reference,
        reference_label=labels[reference],
        backend="empirical" if spec.dataset is not None else backend,
        per_alternative=per_alternative,
        total_rate=total,
        argmin=argmin,
        argmin_labels=[labels[i] for i in argmin],
        duality_gap=max(item.duality_gap for item in per_alternative),
    )


def total_error_rate(model: Model, truth: int | TruthSpec = 0) -> tuple[float, list[int]]:
    """I = min_i I_i 与取到最小值的备择点集合。"""
    report = rate_report(model, truth)
    return report.total_rate, report.argmin


FrozenSamples = Mapping[int, Sequence[Any]]


def _frozen_log_ratio(
    model: Model, a: int, b: int, samples: FrozenSamples | None
) -> np.ndarray:
    """冻结样本 y ~ ℙ_a 上的 ln f_b(y) − ln f_a(y)。"""
    if samples is None or a not in samples or len(samples[a]) == 0:
        raise CapabilityError(
            f"{model.family.name} 族没有闭式 KL / Hellinger 积分，需要 θ_{a} 下的冻结样本"
        )
    logq = log_density_matrix(model, encode_observations(model, list(samples[a])))
    return logq[:, b] - logq[:, a]


def kl_divergence(
    model: Model,
    a: int,
    b: int,
    samples: FrozenSamples | None = None,
) -> float:
    """KL(ℙ_a‖ℙ_b) = E_a ln(f_a/f_b)；empirical 族取 `samples[a]` 上的样本均值。"""
    size = model.space.size
    if not (0 <= a < size and 0 <= b < size):
        raise InvalidInputError(f"参数索引越界：{a}, {b}")
    if a == b:
        return 0.0
    family = model.family
    if isinstance(family, GaussianKnownVar):
        means = model.scalar_values()
        return float((means[a] - means[b]) ** 2 / (2.0 * family.sigma**2))
    if isinstance(family, PoissonFamily):
        rates = model.scalar_values()
        return float(rates[b] - rates[a] + rates[a] * math.log(rates[a] / rates[b]))
    law = finite_law(model)
    if law is not None:
        log_table = np.log(law[1])
        return max(math.fsum(law[1][a] * (log_table[a] - log_table[b])), 0.0)
    ratio = _frozen_log_ratio(model, a, b, samples)
    return max(-math.fsum(ratio) / ratio.size, 0.0)


def chernoff_information(
    model: Model, a: int, b: int, samples: FrozenSamples | None = None
) -> ChernoffResult:
    """C(a,b) = −inf_{0<u<1} ln ∫ f_b^u f_a^{1−u} dμ。

    empirical 族用 `samples[a]` 估计 ln E_a[(f_b/f_a)^u]。
    """
    size = model.space.size
    if not (0 <= a < size and 0 <= b < size):
        raise InvalidInputError(f"参数索引越界：{a}, {b}")
    if a == b:
        return ChernoffResult(value=0.0, u=0.5)

    if model.capabilities.has_analytic_lmgf:

        def log_integral(u: float) -> float:
            gamma = np.zeros(size)
            gamma[a] = 1.0 - u
            gamma[b] = u
            return log_hellinger_transform(model, a, gamma)

    else:
        ratio = _frozen_log_ratio(model, a, b, samples)
        log_m = math.log(ratio.size)

        def log_integral(u: float) -> float:
            return float(logsumexp(u * ratio)) - log_m

    result = minimize_scalar(
        log_integral,
        bounds=(0.0, 1.0),
        method="bounded",
        options={"xatol": rates_config.rates_chernoff_xatol},
    )
    if not result.success:
        raise ConvergenceError(f"Chernoff 信息的一维极小化失败：{result.message}")
    return ChernoffResult(value=max(-float(result.fun), 0.0), u=float(result.x))


def prior_thresholds(sys: LlrSystem, prior: Prior) -> np.ndarray:
    """θ_i 胜出当且仅当 Σ_k X_j(y_k) > ln(π_j/π_i) 对所有 j ≠ i 成立。"""
    if len(prior.weights) != sys.model.space.size:
        raise InvalidInputError("先验长度与参数点个数不一致")
    log_weights = prior.log_weights()
    return np.array([log_weights[j] - log_weights[sys.candidate] for j in sys.components])


def bayes_rate_invariance(
    sys: LlrSystem, prior: Prior, n: float | None = None
) -> BayesRateInvariance:
    """比较象限 ∏(ln(π_j/π_i)/n, ∞) 与原象限的误差指数。

    n 缺省时取 `rates_invariance_horizon`；差值随 n 以 1/n 衰减。
    """
    horizon = rates_config.rates_invariance_horizon if n is None else float(n)
    if horizon <= 0:
        raise InvalidInputError("n 必须为正")
    thresholds = prior_thresholds(sys, prior) / horizon
    with_prior = alternative_rate(sys, thresholds).rate
    without = alternative_rate(sys).rate
    return BayesRateInvariance(
        candidate=sys.candidate,
        n=n,
        thresholds=thresholds.tolist(),
        rate_with_prior=with_prior,
        rate_without=without,
        difference=abs(with_prior - without) if math.isfinite(without) else 0.0,
    )


def bias_bound(
    model: Model,
    truth: int,
    probability: float | RateReport,
    n: int | None = None,
) -> float:
    """Bias ≤ sup_{j≠truth} ‖θ_j − θ_truth‖ · ℙ(θ̂ ≠ θ_truth)。

    传入 RateReport 时以 Chernoff 型上界 e^{−nI} 代替概率，此时需要 n。
    """
    if not model.space.has_embedding:
        raise MissingEmbeddingError("偏差上界需要参数点的数值嵌入")
    if isinstance(probability, RateReport):
        if n is None or n < 1:
            raise InvalidInputError("以速率报告计算偏差上界时需要 n ≥ 1")
        prob = math.exp(-n * probability.total_rate)
    else:
        prob = float(probability)
    if not 0.0 <= prob <= 1.0:
        raise InvalidInputError(f"概率必须在 [0,1] 内：{prob}")
    if prob == 0.0:
        return 0.0
    embedding = model.space.embedding()
    spread = np.linalg.norm(embedding - embedding[truth], axis=1)
    return float(spread.max()) * prob


def pairwise_matrices(
    model: Model,
    max_workers: int | None = None,
    samples: FrozenSamples | None = None,
) -> PairwiseMatrices:
    """成对 KL(a‖b) 与 Chernoff 信息 C(a,b)；empirical 族需要每个参数点的冻结样本。"""
    size = model.space.size
    if not model.capabilities.has_analytic_lmgf:
        missing = [i for i in range(size) if samples is None or len(samples.get(i, ())) == 0]
        if missing:
            raise CapabilityError(f"成对矩阵缺少以下参数点的冻结样本：{missing}")
    pairs = [(a, b) for a in range(size) for b in range(size)]
    kl = parallel_map(lambda pair: kl_divergence(model, *pair, samples), pairs, max_workers)
    chernoff = parallel_map(
        lambda pair: chernoff_information(model, *pair, samples), pairs, max_workers
    )
    return PairwiseMatrices(
        labels=model.space.labels,
        kl=[kl[a * size : (a + 1) * size] for a in range(size)],
        chernoff=[[c.value for c in chernoff[a * size : (a + 1) * size]] for a in range(size)],
        chernoff_u=[[c.u for c in chernoff[a * size : (a + 1) * size]] for a in range(size)],
    )
