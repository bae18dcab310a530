# -*- coding: utf-8 -*-
"""
命令行入口（prog 名 `discrete-param`）

用法：
- discrete-param estimate --model spec.json --data obs.txt [--prior 0.5,0.5 | --k 1]
- discrete-param analyze --model spec.json --truth 2 [--csv pairwise.csv] [--dump-lmgf lmgf.csv]
- discrete-param bounds --model spec.json --truth 0
- discrete-param approx --model spec.json --truth 0 --alt 1 --n 10,20,50:60
- discrete-param simulate --model spec.json --truth 0 --n 4 --reps 200000 --seed 7
- discrete-param enumerate --model spec.json --truth 0 --n 1:20 --csv exact.csv
- discrete-param report --curves a.csv b.csv --csv merged.csv
- discrete-param verdict --model spec.json --curves merged.csv --method enumerate:mle
- discrete-param example gaussian --n 4 --reps 200000 --seed 7

公开接口：
- `build_parser()`
- `config_from_args(args)`
- `setup_logging(level, serialize)`
- `main(argv)`

内部方法：
- `_int_list` / `_float_list` / `_overrides` / `_lmgf_grid`
"""

from __future__ import annotations

import argparse
import sys
from typing import Any, Sequence

from loguru import logger
from pydantic import ValidationError

from .. import __version__
from ..config import global_config
from .schemas import TOOL_NAME, RunConfig
from .service import run


def _int_list(text: str) -> list[int]:
    """`1,2,5:8` → [1, 2, 5, 6, 7, 8]"""
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            start, stop = part.split(":", 1)
            values.extend(range(int(start), int(stop) + 1))
        else:
            values.append(int(part))
    if not values:
        raise argparse.ArgumentTypeError("列表不能为空")
    return values


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"无法解析数值列表：{text}") from exc


def _overrides(items: Sequence[str]) -> dict[str, float]:
    result: dict[str, float] = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"配置覆盖应为 KEY=VALUE：{item}")
        result[key.strip()] = float(value)
    return result


def _lmgf_grid(text: str) -> tuple[float, float, int]:
    try:
        start, stop, count = text.split(":")
        return float(start), float(stop), int(count)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"Λ 网格应为 start:stop:count：{text}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME, description="离散参数估计：估计量、误差指数、信息不等式与验证"
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", help="JSON 产物路径（默认写到 stdout）")
    common.add_argument("--seed", type=int, default=global_config.default_seed, help="主种子")
    common.add_argument("--threads", type=int, help="线程上限（默认读取 WORKER_THREADS）")
    common.add_argument("--log-json", action="store_true", help="stderr 日志输出为 JSON 行")
    common.add_argument("--log-level", default=global_config.log_level, help="日志级别")
    common.add_argument(
        "--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
        help="覆盖模块配置项，例如 rates_kkt_slack=1e-6",
    )

    model_args = argparse.ArgumentParser(add_help=False)
    model_args.add_argument("--model", dest="model_path", help="模型规格 JSON 文件")
    model_args.add_argument("--truth", type=int, default=0, help="真值索引")

    estimator_args = argparse.ArgumentParser(add_help=False)
    estimator_args.add_argument("--prior", type=_float_list, help="先验权重，逗号分隔")
    estimator_args.add_argument("--k", type=float, help="平移估计量的阈值（仅 J = 1）")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", parents=[common, model_args, estimator_args], help="计算估计值")
    p.add_argument("--data", dest="data_path", required=True, help="每行一个观测的数据文件")

    p = sub.add_parser("analyze", parents=[common, model_args], help="误差指数报告")
    p.add_argument("--truth-data", help="错设情形：真值数据集文件")
    p.add_argument("--alternatives", type=_int_list, help="备择点索引，逗号分隔")
    p.add_argument("--backend", choices=["analytic", "empirical"], default="analytic")
    p.add_argument("--sample-size", type=int, help="empirical 后端的样本量")
    p.add_argument("--csv", help="成对 KL / Chernoff 矩阵 CSV")
    p.add_argument("--dump-lmgf", help="Λ 与 ∇Λ 的诊断网格 CSV")
    p.add_argument("--lmgf-grid", type=_lmgf_grid, default=(0.0, 1.0, 21), help="start:stop:count")

    p = sub.add_parser("bounds", parents=[common, model_args], help="信息不等式下界")
    p.add_argument("--csv", help="成对 KL / Chernoff 矩阵 CSV")

    p = sub.add_parser("approx", parents=[common, model_args, estimator_args], help="渐近近似曲线")
    p.add_argument(
        "--alt", "--candidate", dest="candidate", type=int, required=True,
        help="备择点索引（--candidate 为旧写法）",
    )
    p.add_argument("--n", dest="n_grid", type=_int_list, required=True, help="n 网格")
    p.add_argument("--with-enumeration", action="store_true", help="并入精确枚举结果")
    p.add_argument("--csv", help="宽格式近似曲线 CSV")
    p.add_argument("--long-csv", help="长格式曲线 CSV（供 report 合并）")

    for name, helptext in (("simulate", "蒙特卡罗模拟"), ("enumerate", "精确枚举")):
        p = sub.add_parser(name, parents=[common, model_args, estimator_args], help=helptext)
        p.add_argument("--n", dest="n_grid", type=_int_list, required=True, help="n 网格")
        p.add_argument("--csv", help="长格式曲线 CSV")
        if name == "simulate":
            p.add_argument("--reps", dest="replicates", type=int, default=10_000)

    p = sub.add_parser("report", parents=[common], help="合并曲线文件")
    p.add_argument("--curves", nargs="+", required=True)
    p.add_argument("--csv", required=True)

    p = sub.add_parser("verdict", parents=[common, model_args], help="效率判定")
    p.add_argument("--curves", nargs="+", required=True)
    p.add_argument("--method", help="曲线方法名，例如 enumerate:mle")

    p = sub.add_parser("example", parents=[common], help="内置示例")
    p.add_argument("example", choices=["gaussian", "tumor"])
    p.add_argument("--truth", type=int, default=0)
    p.add_argument("--n", dest="n_grid", type=_int_list)
    p.add_argument("--reps", dest="replicates", type=int, default=200_000)
    p.add_argument("--k", type=float)
    p.add_argument("--csv", help="长格式曲线 CSV")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = set(RunConfig.model_fields)
    payload: dict[str, Any] = {
        key: value
        for key, value in vars(args).items()
        if key in fields and value is not None and key != "overrides"
    }
    payload["overrides"] = _overrides(args.overrides)
    return RunConfig.model_validate(payload)


def setup_logging(level: str = "INFO", serialize: bool = False) -> None:
    logger.remove()
    logger.add(sys.stderr, level=level.upper(), serialize=serialize)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level, args.log_json)
    try:
        config = config_from_args(args)
    except (ValidationError, argparse.ArgumentTypeError) as exc:
        logger.error("参数非法：{}", exc)
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
