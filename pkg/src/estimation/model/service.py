# -*- coding: utf-8 -*-
"""
模型服务层

公开接口：
- `parse_model_spec(payload)`：从字典构造 `Model`
- `load_model_spec(path)`：读取 JSON 规格文件
- `encode_observations(model, data)`：校验并编码观测序列
- `load_observations(model, path)`：读取每行一个观测的数据文件
- `log_density(model, i, y)`：ln q(y;θ_i)
- `log_density_matrix(model, observations)`：对所有参数点批量求对数密度
- `finite_law(model)`：有限支撑族的 (符号, 概率表)，否则为 None
- `make_generator(state)`：由 (seed, stream) 构造计数器型随机数发生器
- `sample(model, i, rng_state, count)`：在 θ_i 下独立同分布抽样
- `enumerate_support(model)`：分类族的共享支撑与概率表
- `total_mass(model, i)`：exp(ln q) 的总质量（归一化自检）

内部方法：
- `_check_index`
- `_parse_observation`

说明：
- 观测域随模型族而定：高斯为实数，泊松为非负整数，bernoulli_power 为 0/1，
  分类族为符号索引（也接受符号标签），empirical 族接受任意对象。
- 随机数使用 Philox，键为 (主种子, 流编号)，不存在隐藏的可变状态。
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Sequence

import numpy as np
from loguru import logger
from pydantic import ValidationError
from scipy import integrate, stats

from ..exceptions import CapabilityError, InvalidInputError
from ..schemas import SeedState
from .schemas import (
    BernoulliPower,
    Categorical,
    Empirical,
    GaussianKnownVar,
    Model,
    PoissonFamily,
)

BERNOULLI_SYMBOLS = ["failure", "success"]
POISSON_TAIL = 1e-15


def parse_model_spec(payload: dict[str, Any]) -> Model:
    """校验规格字典；pydantic 的校验错误统一转为 InvalidInputError。"""
    try:
        return Model.model_validate(payload)
    except ValidationError as exc:
        raise InvalidInputError(f"模型规格非法：{exc}") from exc


def load_model_spec(path: str | Path) -> Model:
    """读取 JSON 模型规格文件。"""
    file_path = Path(path)
    try:
        text = file_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInputError(f"无法读取模型规格文件：{file_path}") from exc
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(
            f"模型规格 JSON 解析失败：{file_path} 第 {exc.lineno} 行第 {exc.colno} 列：{exc.msg}"
        ) from exc
    if not isinstance(payload, dict):
        raise InvalidInputError(f"模型规格顶层必须是对象：{file_path}")
    model = parse_model_spec(payload)
    logger.info("已加载模型规格：path={} family={}", file_path, model.family.name)
    return model


def _check_index(model: Model, i: int) -> None:
    if not 0 <= i < model.space.size:
        raise InvalidInputError(f"参数索引越界：{i}（J={model.space.J}）")


def _parse_observation(model: Model, raw: Any) -> Any:
    family = model.family
    if isinstance(family, GaussianKnownVar):
        try:
            value = float(raw)
        except (TypeError, ValueError):
            raise InvalidInputError(f"高斯观测必须为实数：{raw!r}") from None
        if not math.isfinite(value):
            raise InvalidInputError(f"高斯观测必须有限：{raw!r}")
        return value
    if isinstance(family, PoissonFamily):
        try:
            value = float(raw)
        except (TypeError, ValueError):
            raise InvalidInputError(f"泊松观测必须为非负整数：{raw!r}") from None
        if not value.is_integer() or value < 0:
            raise InvalidInputError(f"泊松观测必须为非负整数：{raw!r}")
        return int(value)
    if isinstance(family, BernoulliPower):
        if isinstance(raw, str):
            token = raw.strip()
            if token in BERNOULLI_SYMBOLS:
                return BERNOULLI_SYMBOLS.index(token)
            if token in {"0", "1"}:
                return int(token)
        elif isinstance(raw, (int, float, np.integer, np.floating)) and raw in (0, 1):
            return int(raw)
        raise InvalidInputError(f"bernoulli_power 观测必须为 0/1：{raw!r}")
    if isinstance(family, Categorical):
        if isinstance(raw, str):
            symbol = raw.strip()
            if symbol in family.support:
                return family.support.index(symbol)
            if symbol.isdigit():
                raw = int(symbol)
        if isinstance(raw, (int, np.integer)) and not isinstance(raw, bool):
            if 0 <= int(raw) < len(family.support):
                return int(raw)
        raise InvalidInputError(f"分类观测不在支撑内：{raw!r}")
    return raw


def encode_observations(model: Model, data: Sequence[Any]) -> np.ndarray:
    """校验观测域并编码为 numpy 数组（empirical 族为 object 数组）。"""
    parsed = [_parse_observation(model, raw) for raw in data]
    family = model.family
    if isinstance(family, GaussianKnownVar):
        return np.array(parsed, dtype=float)
    if isinstance(family, Empirical):
        encoded = np.empty(len(parsed), dtype=object)
        encoded[:] = parsed
        return encoded
    return np.array(parsed, dtype=np.int64)


def load_observations(model: Model, path: str | Path) -> np.ndarray:
    """读取数据文件：每行一个观测，空行与 # 注释行忽略。"""
    file_path = Path(path)
    try:
        lines = file_path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InvalidInputError(f"无法读取数据文件：{file_path}") from exc
    raw = [line.strip() for line in lines]
    raw = [line for line in raw if line and not line.startswith("#")]
    observations = encode_observations(model, raw)
    logger.info("已读取观测：path={} n={}", file_path, len(observations))
    return observations


def finite_law(model: Model) -> tuple[list[str], np.ndarray] | None:
    """有限支撑族返回 (符号, (J+1)×|S| 概率表)，其他族返回 None。"""
    family = model.family
    if isinstance(family, Categorical):
        return list(family.support), family.table()
    if isinstance(family, BernoulliPower):
        success = family.k ** model.scalar_values()
        return list(BERNOULLI_SYMBOLS), np.column_stack([1.0 - success, success])
    return None


def log_density_matrix(model: Model, observations: np.ndarray) -> np.ndarray:
    """返回形状为 observations.shape + (J+1,) 的对数密度数组。"""
    family = model.family
    if isinstance(family, GaussianKnownVar):
        means = model.scalar_values()
        return stats.norm.logpdf(observations[..., None], loc=means, scale=family.sigma)
    if isinstance(family, PoissonFamily):
        rates = model.scalar_values()
        return stats.poisson.logpmf(observations[..., None], rates)
    if isinstance(family, BernoulliPower):
        thetas = model.scalar_values()
        log_success = thetas * math.log(family.k)
        log_failure = np.log1p(-np.exp(log_success))
        return np.where(observations[..., None] == 1, log_success, log_failure)
    if isinstance(family, Categorical):
        log_table = np.log(family.table())
        return log_table.T[observations]
    points = model.space.points
    flat = [
        [float(family.callback(y, point)) for point in points]
        for y in np.asarray(observations, dtype=object).ravel()
    ]
    return np.array(flat, dtype=float).reshape(np.shape(observations) + (len(points),))


def log_density(model: Model, i: int, y: Any) -> float:
    """ln q(y;θ_i)。"""
    _check_index(model, i)
    encoded = encode_observations(model, [y])
    return float(log_density_matrix(model, encoded)[0, i])


def make_generator(state: SeedState) -> np.random.Generator:
    """计数器型发生器：同一 (seed, stream) 在任意线程中产生同一序列。"""
    key = np.array([state.seed, state.stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample(model: Model, i: int, rng_state: SeedState, count: int) -> np.ndarray:
    """在 θ_i 下抽取 count 个独立同分布观测（已编码）。"""
    _check_index(model, i)
    if count < 0:
        raise InvalidInputError(f"样本量必须非负：{count}")
    if not model.capabilities.can_sample:
        raise CapabilityError(f"{model.family.name} 族不支持抽样")
    rng = make_generator(rng_state)
    family = model.family
    if isinstance(family, GaussianKnownVar):
        return rng.normal(model.scalar_values()[i], family.sigma, size=count)
    if isinstance(family, PoissonFamily):
        return rng.poisson(model.scalar_values()[i], size=count).astype(np.int64)
    law = finite_law(model)
    assert law is not None
    _, table = law
    return rng.choice(table.shape[1], size=count, p=table[i]).astype(np.int64)


def enumerate_support(model: Model) -> tuple[list[str], np.ndarray]:
    """分类族的共享支撑与概率表。"""
    if not model.capabilities.can_enumerate:
        raise CapabilityError(f"{model.family.name} 族不支持支撑枚举")
    family = model.family
    assert isinstance(family, Categorical)
    return list(family.support), family.table()


def total_mass(model: Model, i: int) -> float:
    """exp(ln q(·;θ_i)) 的总质量。

    高斯族在 μ ± 40σ 上做自适应求积；泊松族截断到尾概率 < 1e-15 的分位点。
    """
    _check_index(model, i)
    family = model.family
    if isinstance(family, GaussianKnownVar):
        mean = model.scalar_values()[i]
        value, _ = integrate.quad(
            lambda y: math.exp(stats.norm.logpdf(y, loc=mean, scale=family.sigma)),
            mean - 40.0 * family.sigma,
            mean + 40.0 * family.sigma,
            epsabs=1e-13,
            epsrel=1e-13,
            limit=200,
        )
        return float(value)
    if isinstance(family, PoissonFamily):
        rate = model.scalar_values()[i]
        upper = int(stats.poisson.isf(POISSON_TAIL, rate)) + 20
        support = np.arange(upper + 1)
        return math.fsum(np.exp(stats.poisson.logpmf(support, rate)))
    law = finite_law(model)
    if law is None:
        raise CapabilityError(f"{model.family.name} 族无法计算总质量")
    return math.fsum(law[1][i])
