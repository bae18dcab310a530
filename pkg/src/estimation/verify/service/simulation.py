# -*- coding: utf-8 -*-
"""
蒙特卡罗模拟

功能：
- 在真值下重复抽样并应用估计量，统计各参数点被选中的频率

公开接口：
- `wilson_interval(count, total, z)`
- `binomial_se(p, total)`
- `simulate(model, spec, truth, n, replicates, seed)`
- `simulate_with_retry(model, spec, truth, n, replicates, seed, expected)`

内部方法：
- `_replicate_chunk`

说明：
- 第 r 次重复使用 Philox 键 (seed, r)；重复按固定大小分块，块内计数逐块相加，
  结果与线程数逐位无关。
- 一致性判定半径为 4 倍二项标准误；失败时以 seed + 1 自动重跑一次并记录。
"""

from __future__ import annotations

import math

import numpy as np
from loguru import logger

from ...concurrency import parallel_map
from ...estimator.schemas import EstimatorSpec
from ...estimator.service import decide_batch, decision_offsets
from ...exceptions import CapabilityError, InvalidInputError
from ...model.schemas import Model
from ...model.service import log_density_matrix, sample
from ...schemas import SeedState
from ..config import verify_config
from ..schemas import RetryOutcome, SimulationResult


def wilson_interval(count: int, total: int, z: float | None = None) -> tuple[float, float]:
    """二项比例的 Wilson 得分区间。"""
    z = verify_config.verify_wilson_z if z is None else z
    p = count / total
    denom = 1.0 + z * z / total
    center = (p + z * z / (2 * total)) / denom
    half = z * math.sqrt(p * (1.0 - p) / total + z * z / (4 * total * total)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def binomial_se(p: float, total: int) -> float:
    return math.sqrt(p * (1.0 - p) / total)


def _replicate_chunk(
    model: Model,
    truth: int,
    n: int,
    seed: int,
    offsets: np.ndarray,
    start: int,
    stop: int,
) -> np.ndarray:
    data = np.stack(
        [sample(model, truth, SeedState(seed=seed, stream=r), n) for r in range(start, stop)]
    )
    logq = log_density_matrix(model, data)
    objective = np.sort(logq, axis=1).sum(axis=1) / n
    chosen, _ = decide_batch(objective + offsets)
    return np.bincount(chosen, minlength=model.space.size)


def simulate(
    model: Model,
    spec: EstimatorSpec,
    truth: int,
    n: int,
    replicates: int,
    seed: int,
    max_workers: int | None = None,
) -> SimulationResult:
    """R 次独立重复，每次在真值下抽取 n 个观测并应用估计量。"""
    if replicates < 1:
        raise InvalidInputError(f"重复次数必须 ≥ 1：{replicates}")
    if n < 1:
        raise InvalidInputError(f"样本量必须 ≥ 1：{n}")
    size = model.space.size
    if not 0 <= truth < size:
        raise InvalidInputError(f"真值索引越界：{truth}")
    if not model.capabilities.can_sample:
        raise CapabilityError(f"{model.family.name} 族不支持抽样")
    if spec.prior is not None and len(spec.prior.weights) != size:
        raise InvalidInputError("先验长度与参数点个数不一致")
    offsets = decision_offsets(spec, size, n)

    step = verify_config.verify_replicate_chunk
    bounds = [(start, min(start + step, replicates)) for start in range(0, replicates, step)]
    partial = parallel_map(
        lambda span: _replicate_chunk(model, truth, n, seed, offsets, *span),
        bounds,
        max_workers,
    )
    counts = np.sum(partial, axis=0)
    intervals = [wilson_interval(int(c), replicates) for c in counts]
    errors = replicates - int(counts[truth])
    logger.debug(
        "模拟完成：n={} R={} seed={} 误判={}", n, replicates, seed, errors
    )
    return SimulationResult(
        n=n,
        truth=truth,
        estimator=spec.label,
        replicates=replicates,
        seed=seed,
        counts=[int(c) for c in counts],
        p_hat=[int(c) / replicates for c in counts],
        wilson_lower=[lo for lo, _ in intervals],
        wilson_upper=[hi for _, hi in intervals],
        error_count=errors,
        error_rate=errors / replicates,
    )


def simulate_with_retry(
    model: Model,
    spec: EstimatorSpec,
    truth: int,
    n: int,
    replicates: int,
    seed: int,
    expected: float,
    index: int | None = None,
    retry_seed: int | None = None,
    max_workers: int | None = None,
) -> RetryOutcome:
    """比较模拟频率与参考概率，超出 4·SE 时以新种子重跑一次。

    `index` 为 None 时比较误判频率，否则比较 θ̂ⁿ = θ_index 的频率。
    """
    if not 0.0 <= expected <= 1.0:
        raise InvalidInputError(f"参考概率必须在 [0,1] 内：{expected}")
    seeds = [seed, seed + 1 if retry_seed is None else retry_seed]
    se = binomial_se(expected, replicates)
    radius = verify_config.verify_se_radius * se

    used: list[int] = []
    for attempt, current in enumerate(seeds, start=1):
        used.append(current)
        result = simulate(model, spec, truth, n, replicates, current, max_workers)
        observed = result.error_rate if index is None else result.p_hat[index]
        passed = abs(observed - expected) <= radius
        if passed or attempt == len(seeds):
            break
        logger.warning(
            "模拟频率超出 {} 倍标准误：observed={} expected={} seed={}，改用 seed={} 重跑",
            verify_config.verify_se_radius,
            observed,
            expected,
            current,
            seeds[attempt],
        )
    return RetryOutcome(
        result=result,
        index=index,
        expected=expected,
        observed=observed,
        standard_error=se,
        passed=passed,
        attempts=len(used),
        seeds=used,
    )
