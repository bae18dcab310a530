# -*- coding: utf-8 -*-
"""
精确枚举

功能：
- 对有限支撑模型枚举所有计数向量，得到估计量在真值下的精确分布

公开接口：
- `count_vectors(n, symbols)`：计数向量个数 C(n+|S|−1, |S|−1)
- `enumerate_exact(model, spec, truth, n)`

内部方法：
- `_iter_chunks`
- `_chunk_log_mass`

说明：
- 估计量只通过各符号计数依赖数据，因此按多项式计数向量枚举而非 |S|ⁿ 条序列。
- 计数向量按固定大小分块，各块结果按块序用 logsumexp 归约，结果与线程数无关。
"""

from __future__ import annotations

import itertools
import math
from typing import Iterator

import numpy as np
from loguru import logger
from scipy.special import gammaln, logsumexp, xlogy

from ...concurrency import parallel_map, resolve_workers
from ...estimator.schemas import EstimatorSpec
from ...estimator.service import decide_batch, decision_offsets
from ...exceptions import EnumerationGuardError, InvalidInputError
from ...model.schemas import Model
from ...model.service import enumerate_support
from ..config import verify_config
from ..schemas import ExactDistribution


def count_vectors(n: int, symbols: int) -> int:
    return math.comb(n + symbols - 1, symbols - 1)


def _iter_chunks(n: int, symbols: int, chunk: int) -> Iterator[np.ndarray]:
    """隔板法生成计数向量，每次产出 (m, |S|) 的整数数组。"""
    bars = itertools.combinations(range(n + symbols - 1), symbols - 1)
    while True:
        block = list(itertools.islice(bars, chunk))
        if not block:
            return
        positions = np.array(block, dtype=np.int64).reshape(len(block), symbols - 1)
        edges = np.column_stack(
            [np.full(len(block), -1), positions, np.full(len(block), n + symbols - 1)]
        )
        yield np.diff(edges, axis=1) - 1


def _chunk_log_mass(
    counts: np.ndarray,
    table: np.ndarray,
    truth: int,
    offsets: np.ndarray,
) -> np.ndarray:
    """返回本块中各参数点被选中的对数概率。"""
    n = int(counts[0].sum())
    size = table.shape[0]
    log_coef = gammaln(n + 1) - gammaln(counts + 1).sum(axis=1)
    log_lik = xlogy(counts[:, None, :], table[None, :, :]).sum(axis=2)
    log_mass = log_coef + log_lik[:, truth]

    support = np.isfinite(log_mass)
    if not support.any():
        return np.full(size, -np.inf)
    decision = log_lik[support] / n + offsets
    chosen, _ = decide_batch(decision)
    mass = log_mass[support]
    out = np.full(size, -np.inf)
    for index in range(size):
        picked = mass[chosen == index]
        if picked.size:
            out[index] = logsumexp(picked)
    return out


def enumerate_exact(
    model: Model,
    spec: EstimatorSpec,
    truth: int,
    n: int,
    max_workers: int | None = None,
) -> ExactDistribution:
    """枚举 ℙ_truth(θ̂ⁿ = θ_i)，i 取遍参数空间。"""
    if n < 1:
        raise InvalidInputError(f"样本量必须 ≥ 1：{n}")
    size = model.space.size
    if not 0 <= truth < size:
        raise InvalidInputError(f"真值索引越界：{truth}")
    _, table = enumerate_support(model)
    symbols = table.shape[1]
    total = count_vectors(n, symbols)
    if total > verify_config.verify_enum_guard:
        raise EnumerationGuardError(
            f"计数向量个数 {total} 超过保护上限 {verify_config.verify_enum_guard}"
        )
    if spec.prior is not None and len(spec.prior.weights) != size:
        raise InvalidInputError("先验长度与参数点个数不一致")
    offsets = decision_offsets(spec, size, n)

    workers = resolve_workers(max_workers)
    partials: list[np.ndarray] = []
    chunks = _iter_chunks(n, symbols, verify_config.verify_enum_chunk)
    while True:
        batch = list(itertools.islice(chunks, 4 * workers))
        if not batch:
            break
        partials.extend(
            parallel_map(lambda c: _chunk_log_mass(c, table, truth, offsets), batch, workers)
        )

    log_prob = logsumexp(np.vstack(partials), axis=0)
    deviation = abs(float(np.expm1(logsumexp(log_prob))))
    if deviation > verify_config.verify_normalization_tol:
        logger.warning("枚举概率之和偏离 1：deviation={} n={}", deviation, n)
    wrong = np.delete(log_prob, truth)
    logger.debug("枚举完成：n={} 计数向量={} 估计量={}", n, total, spec.label)
    return ExactDistribution(
        n=n,
        truth=truth,
        estimator=spec.label,
        log_prob=log_prob.tolist(),
        log_misclassification=float(logsumexp(wrong)),
        count_vectors=total,
    )
