# -*- coding: utf-8 -*-
"""
长格式曲线文件

公开接口：
- `rows_from_exact` / `rows_from_simulation` / `rows_from_approximation` / `rows_from_closed_form`
- `write_curve_rows(rows, path, meta=None)` / `read_curve_rows(path)`
- `merge_curve_rows(*groups)`：按 (method, truth, alt, n) 去重排序，后出现者覆盖
- `measured_from_rows(rows, method)`：取误判行，得到 {truth: {n: P}}

内部方法：
- `_parse_row`

说明：
- 列为 n, method, truth, alt, log_prob；alt 为空表示误判概率 ln ℙ(θ̂ⁿ ≠ θ_truth)。
- 浮点数按 repr 写出，读回逐位一致。
- 给出 `meta` 时首行写 `# meta: {...}`；读取时跳过所有以 `#` 开头的行。
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable, Optional

from ...asymptotics.schemas import ApproxCurve
from ...exceptions import InvalidInputError
from ...schemas import ArtifactMeta
from ..schemas import (
    CURVE_COLUMNS,
    CurveRow,
    ExactDistribution,
    GaussianClosedForm,
    SimulationResult,
)


def _log(p: float) -> float:
    return math.log(p) if p > 0.0 else -math.inf


def rows_from_exact(dist: ExactDistribution) -> list[CurveRow]:
    method = f"enumerate:{dist.estimator}"
    rows = [CurveRow(n=dist.n, method=method, truth=dist.truth, log_prob=dist.log_misclassification)]
    rows.extend(
        CurveRow(n=dist.n, method=method, truth=dist.truth, alt=j, log_prob=value)
        for j, value in enumerate(dist.log_prob)
        if j != dist.truth
    )
    return rows


def rows_from_simulation(result: SimulationResult) -> list[CurveRow]:
    method = f"simulate:{result.estimator}"
    rows = [CurveRow(n=result.n, method=method, truth=result.truth, log_prob=_log(result.error_rate))]
    rows.extend(
        CurveRow(n=result.n, method=method, truth=result.truth, alt=j, log_prob=_log(p))
        for j, p in enumerate(result.p_hat)
        if j != result.truth
    )
    return rows


def rows_from_closed_form(form: GaussianClosedForm, estimator: str) -> list[CurveRow]:
    method = f"closed:{estimator}"
    return [
        CurveRow(n=form.n, method=method, truth=0, log_prob=form.log_error_under_theta0),
        CurveRow(n=form.n, method=method, truth=1, log_prob=form.log_error_under_theta1),
    ]


def rows_from_approximation(curve: ApproxCurve) -> list[CurveRow]:
    rows: list[CurveRow] = []
    for row in curve.rows:
        for column in ("crude", "exact_j1", "saddlepoint"):
            value = getattr(row, column)
            if value is not None:
                rows.append(
                    CurveRow(
                        n=row.n,
                        method=f"approx:{column}",
                        truth=curve.truth,
                        alt=curve.candidate,
                        log_prob=value,
                    )
                )
    return rows


def write_curve_rows(
    rows: Iterable[CurveRow], path: str | Path, meta: Optional[ArtifactMeta] = None
) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", newline="", encoding="utf-8") as handle:
        if meta is not None:
            handle.write(meta.csv_comment() + "\n")
        writer = csv.writer(handle)
        writer.writerow(CURVE_COLUMNS)
        for row in rows:
            writer.writerow(
                [row.n, row.method, row.truth, "" if row.alt is None else row.alt, repr(row.log_prob)]
            )
    return target


def _parse_row(record: dict[str, str], line: int) -> CurveRow:
    try:
        return CurveRow(
            n=int(record["n"]),
            method=record["method"],
            truth=int(record["truth"]),
            alt=int(record["alt"]) if record["alt"] else None,
            log_prob=float(record["log_prob"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"曲线文件第 {line} 行格式错误：{exc}") from exc


def read_curve_rows(path: str | Path) -> list[CurveRow]:
    source = Path(path)
    if not source.exists():
        raise InvalidInputError(f"曲线文件不存在：{source}")
    with source.open(newline="", encoding="utf-8") as handle:
        lines = handle.readlines()
    body = [line for line in lines if not line.startswith("#")]
    skipped = len(lines) - len(body)
    reader = csv.DictReader(body)
    if reader.fieldnames != CURVE_COLUMNS:
        raise InvalidInputError(f"曲线文件表头应为 {','.join(CURVE_COLUMNS)}")
    return [_parse_row(record, line) for line, record in enumerate(reader, start=2 + skipped)]


def merge_curve_rows(*groups: Iterable[CurveRow]) -> list[CurveRow]:
    merged: dict[tuple[str, int, int, int], CurveRow] = {}
    for group in groups:
        for row in group:
            merged[(row.method, row.truth, -1 if row.alt is None else row.alt, row.n)] = row
    return [merged[key] for key in sorted(merged)]


def measured_from_rows(rows: Iterable[CurveRow], method: str) -> dict[int, dict[int, float]]:
    measured: dict[int, dict[int, float]] = {}
    for row in rows:
        if row.method == method and row.alt is None:
            measured.setdefault(row.truth, {})[row.n] = math.exp(row.log_prob)
    if not measured:
        raise InvalidInputError(f"曲线中没有方法 {method} 的误判行")
    return measured
