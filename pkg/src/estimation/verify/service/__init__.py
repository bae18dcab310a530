# -*- coding: utf-8 -*-
"""
验证服务模块

此模块提供精确枚举、蒙特卡罗模拟、高斯闭式与风险评估。
"""

from .closed_form import beats_cr, consistency_limit, gaussian_closed_form, gaussian_model
from .curves import (
    measured_from_rows,
    merge_curve_rows,
    read_curve_rows,
    rows_from_approximation,
    rows_from_closed_form,
    rows_from_exact,
    rows_from_simulation,
    write_curve_rows,
)
from .enumeration import count_vectors, enumerate_exact
from .risk import estimator_bias, estimator_law, mean_squared_error, risk_table
from .simulation import binomial_se, simulate, simulate_with_retry, wilson_interval

__all__ = [
    "beats_cr",
    "consistency_limit",
    "gaussian_closed_form",
    "gaussian_model",
    "measured_from_rows",
    "merge_curve_rows",
    "read_curve_rows",
    "rows_from_approximation",
    "rows_from_closed_form",
    "rows_from_exact",
    "rows_from_simulation",
    "write_curve_rows",
    "count_vectors",
    "enumerate_exact",
    "estimator_bias",
    "estimator_law",
    "mean_squared_error",
    "risk_table",
    "binomial_se",
    "simulate",
    "simulate_with_retry",
    "wilson_interval",
]
