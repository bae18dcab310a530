# -*- coding: utf-8 -*-
"""
命令行服务层

公开接口：
- `run(config)`：执行一个子命令，写出产物并返回退出码
- `execute(config)`：执行子命令并返回结果对象（不写 JSON）
- `tumor_model()`：移植成活模型
- `apply_overrides(overrides)`：临时覆盖模块配置项

内部方法：
- `_cmd_*`：各子命令
- `_spec_from_config` / `_load_model` / `_write_artifact`

说明：
- 每个产物的 `meta` 字段记录工具版本、配置哈希与种子；同一 RunConfig 产生相同产物。
- 退出码：0 成功，2 输入 / 能力错误，3 数值未收敛。
"""

from __future__ import annotations

import csv
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Callable, Iterator

import numpy as np
from loguru import logger

from ..asymptotics.config import asymptotics_config
from ..asymptotics.service import approximation_curve
from ..bounds.config import bounds_config
from ..bounds.service import bounds_report, efficiency_verdict
from ..estimator.schemas import EstimatorSpec
from ..estimator.service import estimate
from ..exceptions import EnumerationGuardError, EstimationError, InvalidInputError
from ..llr.config import llr_config
from ..llr.schemas import TruthSpec
from ..llr.service import build_system, dump_lmgf_grid
from ..model.schemas import Model, Prior
from ..model.service import load_model_spec, load_observations
from ..rates.config import rates_config
from ..rates.service import pairwise_matrices, rate_report
from ..verify.config import verify_config
from ..verify.service import (
    enumerate_exact,
    gaussian_closed_form,
    gaussian_model,
    measured_from_rows,
    merge_curve_rows,
    read_curve_rows,
    rows_from_approximation,
    rows_from_closed_form,
    rows_from_exact,
    rows_from_simulation,
    simulate,
    simulate_with_retry,
    write_curve_rows,
)
from .schemas import Artifact, RunConfig

MODULE_CONFIGS = [llr_config, rates_config, asymptotics_config, bounds_config, verify_config]
DEFAULT_EXAMPLE_GRID = [25, 50, 100, 200]


@contextmanager
def apply_overrides(overrides: dict[str, float]) -> Iterator[None]:
    """在运行期间覆盖形如 `rates_kkt_slack` 的模块配置项，结束后恢复。"""
    saved: list[tuple[Any, str, Any]] = []
    try:
        for key, value in overrides.items():
            owner = next((c for c in MODULE_CONFIGS if key in type(c).model_fields), None)
            if owner is None:
                raise InvalidInputError(f"未知的配置项：{key}")
            current = getattr(owner, key)
            saved.append((owner, key, current))
            setattr(owner, key, type(current)(value))
        yield
    finally:
        for owner, key, value in reversed(saved):
            setattr(owner, key, value)


def tumor_model() -> Model:
    """成功概率 (3/4)^θ，θ ∈ {1,…,5}。"""
    return Model.model_validate(
        {
            "space": {
                "points": [
                    {"label": f"theta={theta}", "value": [float(theta)]} for theta in range(1, 6)
                ]
            },
            "family": {"name": "bernoulli_power", "k": 0.75},
        }
    )


def _load_model(config: RunConfig) -> Model:
    if config.model_path is None:
        raise InvalidInputError(f"{config.command} 需要 --model")
    return load_model_spec(config.model_path)


def _spec_from_config(config: RunConfig, model: Model) -> EstimatorSpec:
    if config.prior is not None:
        try:
            prior = Prior(weights=config.prior)
        except ValueError as exc:
            raise InvalidInputError(f"先验非法：{exc}") from exc
        if len(prior.weights) != model.space.size:
            raise InvalidInputError("先验长度与参数点个数不一致")
        return EstimatorSpec(kind="bayes", prior=prior)
    if config.k is not None:
        if model.space.J != 1:
            raise InvalidInputError("--k 只适用于两点参数空间（J = 1）")
        return EstimatorSpec(kind="shifted", k=config.k)
    if model.prior is not None:
        logger.info("使用模型规格中的先验：{}", model.prior.weights)
        return EstimatorSpec(kind="bayes", prior=model.prior)
    return EstimatorSpec()


def _require_grid(config: RunConfig) -> list[int]:
    if not config.n_grid:
        raise InvalidInputError(f"{config.command} 需要 --n")
    return sorted(set(config.n_grid))


def _cmd_estimate(config: RunConfig) -> Any:
    model = _load_model(config)
    if config.data_path is None:
        raise InvalidInputError("estimate 需要 --data")
    data = load_observations(model, config.data_path)
    return estimate(model, data, _spec_from_config(config, model))


def _write_lmgf_dump(config: RunConfig, model: Model, truth: int | TruthSpec, report: Any) -> None:
    assert config.dump_lmgf is not None
    start, stop, count = config.lmgf_grid
    scales = np.linspace(start, stop, int(count))
    target = Path(config.dump_lmgf)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", newline="", encoding="utf-8") as handle:
        handle.write(config.meta().csv_comment() + "\n")
        writer = csv.writer(handle)
        writer.writerow(["candidate", "row", "component", "lam", "lmgf", "grad"])
        for entry in report.per_alternative:
            sys_ = build_system(
                model, truth, entry.candidate, config.backend, config.sample_size, config.seed
            )
            grid = np.outer(scales, np.ones(sys_.dim))
            for row, values in enumerate(dump_lmgf_grid(sys_, grid)):
                for j in sys_.components:
                    writer.writerow(
                        [
                            entry.candidate,
                            row,
                            j,
                            repr(values[f"lam_{j}"]),
                            repr(values["lmgf"]),
                            repr(values[f"grad_{j}"]),
                        ]
                    )
    logger.info("已写出 Λ 网格：{}", target)


def _cmd_analyze(config: RunConfig) -> Any:
    model = _load_model(config)
    truth: int | TruthSpec = config.truth
    if config.truth_data is not None:
        dataset = load_observations(model, config.truth_data)
        truth = TruthSpec(dataset=tuple(dataset.tolist()))
    report = rate_report(
        model,
        truth,
        config.alternatives,
        config.backend,
        config.sample_size,
        config.seed,
        config.threads,
    )
    if config.csv is not None:
        pairwise_matrices(model, config.threads).to_csv(config.csv, config.meta())
    if config.dump_lmgf is not None:
        _write_lmgf_dump(config, model, truth, report)
    return report


def _cmd_bounds(config: RunConfig) -> Any:
    model = _load_model(config)
    report = bounds_report(model, config.truth, config.threads)
    if config.csv is not None:
        report.pairwise.to_csv(config.csv, config.meta())
    return report


def _cmd_approx(config: RunConfig) -> Any:
    model = _load_model(config)
    if config.candidate is None:
        raise InvalidInputError("approx 需要 --alt")
    if config.k is not None:
        raise InvalidInputError("approx 不支持 --k（渐近近似针对极大似然与贝叶斯阈值）")
    grid = _require_grid(config)
    spec = _spec_from_config(config, model)
    exact: dict[int, float] | None = None
    if config.with_enumeration:
        exact = {}
        for n in grid:
            try:
                dist = enumerate_exact(model, spec, config.truth, n, config.threads)
            except EnumerationGuardError as exc:
                logger.warning("n={} 跳过枚举：{}", n, exc)
                continue
            exact[n] = dist.log_prob[config.candidate]
    curve = approximation_curve(
        model, config.truth, config.candidate, grid, spec.prior, exact, config.threads
    )
    if config.csv is not None:
        curve.to_csv(config.csv, config.meta())
    if config.long_csv is not None:
        write_curve_rows(rows_from_approximation(curve), config.long_csv, config.meta())
    return curve


def _cmd_simulate(config: RunConfig) -> Any:
    model = _load_model(config)
    spec = _spec_from_config(config, model)
    results = [
        simulate(model, spec, config.truth, n, config.replicates, config.seed, config.threads)
        for n in _require_grid(config)
    ]
    if config.csv is not None:
        write_curve_rows(
            [row for r in results for row in rows_from_simulation(r)], config.csv, config.meta()
        )
    return results


def _cmd_enumerate(config: RunConfig) -> Any:
    model = _load_model(config)
    spec = _spec_from_config(config, model)
    results = [
        enumerate_exact(model, spec, config.truth, n, config.threads)
        for n in _require_grid(config)
    ]
    if config.csv is not None:
        write_curve_rows(
            [row for r in results for row in rows_from_exact(r)], config.csv, config.meta()
        )
    return results


def _cmd_report(config: RunConfig) -> Any:
    if not config.curves:
        raise InvalidInputError("report 需要至少一个 --curves 文件")
    if config.csv is None:
        raise InvalidInputError("report 需要 --csv 输出路径")
    merged = merge_curve_rows(*(read_curve_rows(path) for path in config.curves))
    write_curve_rows(merged, config.csv, config.meta())
    return {
        "rows": len(merged),
        "methods": sorted({row.method for row in merged}),
        "sources": list(config.curves),
        "csv": config.csv,
    }


def _cmd_verdict(config: RunConfig) -> Any:
    model = _load_model(config)
    if not config.curves:
        raise InvalidInputError("verdict 需要 --curves")
    rows = merge_curve_rows(*(read_curve_rows(path) for path in config.curves))
    methods = sorted({row.method for row in rows if row.alt is None})
    method = config.method
    if method is None:
        if len(methods) != 1:
            raise InvalidInputError(f"曲线中包含多个方法，请用 --method 指定：{methods}")
        method = methods[0]
    bounds = bounds_report(model, config.truth, config.threads)
    estimator = method.split(":", 1)[-1]
    return efficiency_verdict(measured_from_rows(rows, method), bounds, estimator)


def _example_gaussian(config: RunConfig) -> Any:
    """θ₀ = +1、θ₁ = −1、σ = 1：闭式、模拟、速率与界。"""
    model = gaussian_model(1.0, 1.0)
    n = config.n_grid[0] if config.n_grid else 4
    k = 1.0 if config.k is None else config.k
    checks = []
    forms = {}
    for spec in (EstimatorSpec(), EstimatorSpec(kind="shifted", k=k)):
        form = gaussian_closed_form(1.0, 1.0, n, spec.k)
        forms[spec.label] = form
        for truth, expected in ((0, form.error_under_theta0), (1, form.error_under_theta1)):
            checks.append(
                simulate_with_retry(
                    model,
                    spec,
                    truth,
                    n,
                    config.replicates,
                    config.seed,
                    expected,
                    max_workers=config.threads,
                )
            )
    for outcome in checks:
        if not outcome.passed:
            logger.error(
                "模拟频率与闭式概率不一致：estimator={} truth={} observed={} expected={}",
                outcome.result.estimator,
                outcome.result.truth,
                outcome.observed,
                outcome.expected,
            )
    bounds = bounds_report(model, 0, config.threads)
    curve_rows = [
        row
        for size in DEFAULT_EXAMPLE_GRID
        for label, form in forms.items()
        for row in rows_from_closed_form(gaussian_closed_form(1.0, 1.0, size, form.k), label)
    ]
    if config.csv is not None:
        write_curve_rows(curve_rows, config.csv, config.meta())
    verdicts = {
        label: efficiency_verdict(measured_from_rows(curve_rows, f"closed:{label}"), bounds, label)
        for label in forms
    }
    return {
        "n": n,
        "closed_form": forms,
        "simulation": checks,
        "rates": rate_report(model, 0, max_workers=config.threads),
        "bounds": bounds,
        "verdicts": verdicts,
    }


def _example_tumor(config: RunConfig) -> Any:
    model = tumor_model()
    report = rate_report(model, config.truth, max_workers=config.threads)
    result: dict[str, Any] = {
        "rates": report,
        "bounds": bounds_report(model, config.truth, config.threads),
    }
    if config.n_grid:
        result["approximations"] = [
            approximation_curve(model, config.truth, j, sorted(set(config.n_grid)))
            for j in report.argmin
        ]
    return result


def _cmd_example(config: RunConfig) -> Any:
    if config.example == "gaussian":
        return _example_gaussian(config)
    return _example_tumor(config)


COMMANDS: dict[str, Callable[[RunConfig], Any]] = {
    "estimate": _cmd_estimate,
    "analyze": _cmd_analyze,
    "bounds": _cmd_bounds,
    "approx": _cmd_approx,
    "simulate": _cmd_simulate,
    "enumerate": _cmd_enumerate,
    "report": _cmd_report,
    "verdict": _cmd_verdict,
    "example": _cmd_example,
}


def execute(config: RunConfig) -> Any:
    with apply_overrides(config.overrides):
        return COMMANDS[config.command](config)


def _write_artifact(config: RunConfig, result: Any) -> None:
    text = Artifact(meta=config.meta(), result=result).model_dump_json(indent=2)
    if config.output is None:
        sys.stdout.write(text + "\n")
        return
    target = Path(config.output)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text + "\n", encoding="utf-8")
    logger.info("已写出产物：{}", target)


def run(config: RunConfig) -> int:
    """执行子命令；领域异常转为退出码并记录到 stderr。"""
    try:
        result = execute(config)
    except EstimationError as exc:
        logger.error("{} 失败（退出码 {}）：{}", config.command, exc.exit_code, exc)
        return exc.exit_code
    _write_artifact(config, result)
    return 0
