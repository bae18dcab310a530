# -*- coding: utf-8 -*-
"""
似然比过程服务层

公开接口：
- `LlrSystem`：候选点 θ_i 的似然比向量 X^{(i)} 及其对数矩母函数
- `build_system(model, truth, candidate, backend, sample_size, seed)`：构造 LlrSystem
- `lmgf(sys, lam)` / `lmgf_grad(sys, lam)` / `lmgf_hess(sys, lam)`
- `cramer_transform(sys, y, warm_start)`：Λ*(y) 与对偶证书
- `log_hellinger_transform(model, truth, gamma)` / `hellinger_transform(model, truth, gamma)`
- `identity_gamma(sys, lam)`：λ → γ 的线性映射
- `check_hellinger_identity(sys, lam)`：|M(λ) − H_γ|
- `dump_lmgf_grid(sys, grid)`：(λ, Λ, ∇Λ) 诊断行

内部方法：
- `_analytic_kernel`
- `_cloud_kernel`
- `_as_vector`

说明：
- X^{(i)}_j = ln q(y;θ_i) − ln q(y;θ_j)，分量按 j ≠ i 递增排列，下游所有象限表述沿用该顺序。
- 解析后端：高斯为 λ 的二次式，泊松为指数仿射式，有限支撑族为精确的 log-sum-exp。
- 经验后端：每个 LlrSystem 一次性冻结一份带种子的样本（流编号取真值索引，
  各候选共享同一份样本），Λ̂ 因此是 λ 的确定性光滑函数。
- 外部数据集作为真值时（错设 / 经验情形），速率是经验速率的估计而非总体速率。
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Literal, Sequence

import numpy as np
from loguru import logger
from scipy.special import logsumexp

from ..config import global_config
from ..exceptions import CapabilityError, ConvergenceError, DivergenceError, InvalidInputError
from ..model.schemas import GaussianKnownVar, Model, PoissonFamily
from ..model.service import encode_observations, finite_law, log_density_matrix, sample
from ..schemas import SeedState
from .config import llr_config
from .kernels import (
    AffineGaussianKernel,
    AffinePoissonKernel,
    LmgfKernel,
    PointCloudKernel,
)
from .optimize import minimize_convex
from .schemas import CramerResult, HellingerCheck, TruthSpec

Backend = Literal["analytic", "empirical"]


@dataclass(frozen=True)
class LlrSystem:
    """候选点 θ_i 的似然比系统（构造后不可变）"""

    model: Model
    truth: TruthSpec
    candidate: int
    components: tuple[int, ...]
    backend: Backend
    sample_size: int | None
    kernel: LmgfKernel

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def lattice(self) -> bool:
        """似然比取值落在格点 / 有限点集上时为 True（非格点假设不成立）。"""
        return not (
            isinstance(self.model.family, GaussianKnownVar)
            and isinstance(self.kernel, AffineGaussianKernel)
        )

    def mean(self) -> np.ndarray:
        """E₀X^{(i)}。"""
        return self.kernel.grad(np.zeros(self.dim))


def _as_vector(sys: LlrSystem, lam: Sequence[float] | np.ndarray) -> np.ndarray:
    vector = np.asarray(lam, dtype=float).reshape(-1)
    if vector.size != sys.dim:
        raise InvalidInputError(f"λ 维数应为 {sys.dim}，实际为 {vector.size}")
    if not np.all(np.isfinite(vector)):
        raise InvalidInputError("λ 必须为有限实数")
    return vector


def _analytic_kernel(model: Model, truth: int, candidate: int, others: list[int]) -> LmgfKernel:
    family = model.family
    if isinstance(family, GaussianKnownVar):
        means = model.scalar_values()
        var = family.sigma**2
        slopes = (means[candidate] - means[others]) / var
        intercepts = (means[others] ** 2 - means[candidate] ** 2) / (2.0 * var)
        return AffineGaussianKernel(slopes, intercepts, means[truth], family.sigma)
    if isinstance(family, PoissonFamily):
        rates = model.scalar_values()
        slopes = np.log(rates[candidate] / rates[others])
        intercepts = rates[others] - rates[candidate]
        return AffinePoissonKernel(slopes, intercepts, rates[truth])
    law = finite_law(model)
    if law is None:
        raise CapabilityError(f"{family.name} 族没有解析的对数矩母函数")
    log_table = np.log(law[1])
    values = (log_table[candidate][:, None] - log_table[others].T)
    return PointCloudKernel(values, log_table[truth])


def _cloud_kernel(model: Model, observations: np.ndarray, candidate: int, others: list[int]) -> LmgfKernel:
    logq = log_density_matrix(model, observations)
    values = logq[:, [candidate]] - logq[:, others]
    m = values.shape[0]
    return PointCloudKernel(values, np.full(m, -math.log(m)))


def build_system(
    model: Model,
    truth: int | TruthSpec,
    candidate: int,
    backend: Backend = "analytic",
    sample_size: int | None = None,
    seed: int | None = None,
) -> LlrSystem:
    """构造候选点 θ_candidate 在给定真值下的似然比系统。"""
    size = model.space.size
    if size < 2:
        raise InvalidInputError("参数空间至少需要两个点")
    if not 0 <= candidate < size:
        raise InvalidInputError(f"候选索引越界：{candidate}")
    spec = truth if isinstance(truth, TruthSpec) else TruthSpec(index=truth)
    others = [j for j in range(size) if j != candidate]

    if spec.dataset is not None:
        observations = encode_observations(model, list(spec.dataset))
        kernel = _cloud_kernel(model, observations, candidate, others)
        return LlrSystem(model, spec, candidate, tuple(others), "empirical", len(observations), kernel)

    assert spec.index is not None
    if not 0 <= spec.index < size:
        raise InvalidInputError(f"真值索引越界：{spec.index}")
    if backend == "analytic":
        kernel = _analytic_kernel(model, spec.index, candidate, others)
        return LlrSystem(model, spec, candidate, tuple(others), "analytic", None, kernel)

    m = sample_size or llr_config.llr_empirical_sample_size
    state = SeedState(seed=global_config.default_seed if seed is None else seed, stream=spec.index)
    observations = sample(model, spec.index, state, m)
    logger.info(
        "经验后端冻结样本：truth={} candidate={} m={} seed={}",
        spec.index,
        candidate,
        m,
        state.seed,
    )
    kernel = _cloud_kernel(model, observations, candidate, others)
    return LlrSystem(model, spec, candidate, tuple(others), "empirical", m, kernel)


def lmgf(sys: LlrSystem, lam: Sequence[float] | np.ndarray) -> float:
    """Λ^{(i)}(λ) = ln E₀ exp(λᵀX^{(i)})。"""
    vector = _as_vector(sys, lam)
    value = sys.kernel.value(vector)
    if math.isnan(value):
        raise DivergenceError(f"Λ 在 λ={vector.tolist()} 处无定义")
    return value


def lmgf_grad(sys: LlrSystem, lam: Sequence[float] | np.ndarray) -> np.ndarray:
    """倾斜均值 ∇Λ(λ)。"""
    return sys.kernel.grad(_as_vector(sys, lam))


def lmgf_hess(sys: LlrSystem, lam: Sequence[float] | np.ndarray) -> np.ndarray:
    """倾斜协方差 ∇²Λ(λ)（对称半正定）。"""
    return sys.kernel.hess(_as_vector(sys, lam))


def cramer_transform(
    sys: LlrSystem,
    y: Sequence[float] | np.ndarray,
    warm_start: Sequence[float] | np.ndarray | None = None,
) -> CramerResult:
    """Λ*(y) = sup_λ [⟨y,λ⟩ − Λ(λ)]，以阻尼牛顿上升求解。"""
    target = _as_vector(sys, y)
    start = np.zeros(sys.dim) if warm_start is None else _as_vector(sys, warm_start)
    kernel = sys.kernel

    outcome = minimize_convex(
        lambda lam: kernel.value(lam) - float(target @ lam),
        lambda lam: kernel.grad(lam) - target,
        kernel.hess,
        start,
    )
    if outcome.diverged:
        return CramerResult(
            value=math.inf, lam=outcome.x.tolist(), iterations=outcome.iterations, diverged=True
        )
    if not outcome.converged:
        raise ConvergenceError(
            f"Cramér 变换未收敛：梯度范数 {float(np.max(np.abs(outcome.grad))):.3e}，"
            f"迭代 {outcome.iterations} 步"
        )
    return CramerResult(
        value=max(-outcome.value, 0.0),
        lam=outcome.x.tolist(),
        iterations=outcome.iterations,
    )


def log_hellinger_transform(
    model: Model, truth: int, gamma: Sequence[float] | np.ndarray
) -> float:
    """ln H_γ = ln E_truth[Π_j (f_j/f_truth)^{γ_j}] = ln ∫ Π_j f_j^{γ_j} dμ。"""
    size = model.space.size
    if not 0 <= truth < size:
        raise InvalidInputError(f"真值索引越界：{truth}")
    weights = np.asarray(gamma, dtype=float).reshape(-1)
    if weights.size != size:
        raise InvalidInputError(f"γ 长度应为 {size}")
    if abs(math.fsum(weights) - 1.0) > llr_config.llr_identity_sum_tol * max(
        1.0, float(np.abs(weights).sum())
    ):
        raise InvalidInputError("γ 之和必须为 1")

    family = model.family
    if isinstance(family, GaussianKnownVar):
        means = model.scalar_values()
        spread = float(weights @ means**2) - float(weights @ means) ** 2
        return -spread / (2.0 * family.sigma**2)
    if isinstance(family, PoissonFamily):
        rates = model.scalar_values()
        return math.exp(float(weights @ np.log(rates))) - float(weights @ rates)
    law = finite_law(model)
    if law is None:
        raise CapabilityError(f"{family.name} 族无法计算 Hellinger 变换")
    log_table = np.log(law[1])
    exponent = log_table[truth] + weights @ (log_table - log_table[truth])
    return float(logsumexp(exponent))


def hellinger_transform(
    model: Model, truth: int, gamma: Sequence[float] | np.ndarray
) -> float:
    """H_γ = ∫ Π_j f_j^{γ_j} dμ。"""
    return math.exp(log_hellinger_transform(model, truth, gamma))


def identity_gamma(sys: LlrSystem, lam: Sequence[float] | np.ndarray) -> np.ndarray:
    """γ_i = Σλ，γ_truth = 1 − λ_truth，其余 γ_j = −λ_j。"""
    vector = _as_vector(sys, lam)
    truth = sys.truth.index
    assert truth is not None
    gamma = np.zeros(sys.model.space.size)
    gamma[sys.candidate] = vector.sum()
    for position, j in enumerate(sys.components):
        gamma[j] = 1.0 - vector[position] if j == truth else -vector[position]
    return gamma


def check_hellinger_identity(sys: LlrSystem, lam: Sequence[float] | np.ndarray) -> HellingerCheck:
    """比较 M^{(i)}(λ) 与 H_γ(λ)，仅对正确设定且候选 ≠ 真值的解析系统定义。"""
    truth = sys.truth.index
    if truth is None:
        raise CapabilityError("错设（数据集真值）下 Hellinger 恒等式无定义")
    if sys.backend != "analytic":
        raise CapabilityError("Hellinger 恒等式只对解析后端定义")
    if sys.candidate == truth:
        raise InvalidInputError("Hellinger 恒等式只对候选 ≠ 真值提供")
    gamma = identity_gamma(sys, lam)
    mgf = math.exp(lmgf(sys, lam))
    hellinger = hellinger_transform(sys.model, truth, gamma)
    return HellingerCheck(
        residual=abs(mgf - hellinger), mgf=mgf, hellinger=hellinger, gamma=gamma.tolist()
    )


def dump_lmgf_grid(sys: LlrSystem, grid: np.ndarray) -> list[dict[str, Any]]:
    """对每个 λ 网格点输出 (λ, Λ, ∇Λ)。"""
    rows: list[dict[str, Any]] = []
    for lam in np.atleast_2d(np.asarray(grid, dtype=float)):
        row: dict[str, Any] = {f"lam_{j}": float(v) for j, v in zip(sys.components, lam)}
        row["lmgf"] = lmgf(sys, lam)
        row.update(
            {f"grad_{j}": float(v) for j, v in zip(sys.components, lmgf_grad(sys, lam))}
        )
        rows.append(row)
    return rows
