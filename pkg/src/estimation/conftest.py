# -*- coding: utf-8 -*-
"""
pytest 公共 fixtures

功能：
- 统一测试环境变量
- 提供各测试共用的模型（高斯两点 / 三点、泊松、分类、移植成活）
- 提供 FastAPI TestClient

公开接口：
- `gaussian_pair`
- `gaussian_three_point`
- `gaussian_symmetric`
- `poisson_pair`
- `two_symbol`
- `five_symbol_three_point`
- `tumor_model`
- `test_client`
"""

from __future__ import annotations

import os
from typing import Iterator

import pytest
from fastapi.testclient import TestClient

# 测试环境配置
os.environ.setdefault("APP_ENV", "test")
os.environ.setdefault("ALLOWED_ORIGINS", '["http://localhost:3000"]')

from src.estimation.model.schemas import Model  # noqa: E402


def _scalar_space(values: list[float]) -> dict:
    return {
        "points": [{"label": f"{value:g}", "value": [value]} for value in values]
    }


@pytest.fixture(scope="session")
def gaussian_pair() -> Model:
    """θ₀ = +1、θ₁ = −1，σ = 1 的两点高斯模型。"""
    return Model.model_validate(
        {
            "space": _scalar_space([1.0, -1.0]),
            "family": {"name": "gaussian_known_var", "sigma": 1.0},
        }
    )


@pytest.fixture(scope="session")
def gaussian_three_point() -> Model:
    """均值 {0, 1, 5}、σ = 1。"""
    return Model.model_validate(
        {
            "space": _scalar_space([0.0, 1.0, 5.0]),
            "family": {"name": "gaussian_known_var", "sigma": 1.0},
        }
    )


@pytest.fixture(scope="session")
def gaussian_symmetric() -> Model:
    """均值 {−1, 0, 1}、σ = 1。"""
    return Model.model_validate(
        {
            "space": _scalar_space([-1.0, 0.0, 1.0]),
            "family": {"name": "gaussian_known_var", "sigma": 1.0},
        }
    )


@pytest.fixture(scope="session")
def poisson_pair() -> Model:
    """强度 {2, 1} 的泊松模型。"""
    return Model.model_validate(
        {"space": _scalar_space([2.0, 1.0]), "family": {"name": "poisson"}}
    )


@pytest.fixture(scope="session")
def two_symbol() -> Model:
    """两符号分类模型：(0.5, 0.5) 与 (0.9, 0.1)。"""
    return Model.model_validate(
        {
            "space": {"points": [{"label": "fair"}, {"label": "biased"}]},
            "family": {
                "name": "categorical",
                "support": ["a", "b"],
                "pmf": [[0.5, 0.5], [0.9, 0.1]],
            },
        }
    )


@pytest.fixture(scope="session")
def five_symbol_three_point() -> Model:
    """五符号、三参数点的分类模型（J = 2，似然比非格点）。"""
    return Model.model_validate(
        {
            "space": {
                "points": [
                    {"label": "p0", "value": [0.0]},
                    {"label": "p1", "value": [1.0]},
                    {"label": "p2", "value": [2.0]},
                ]
            },
            "family": {
                "name": "categorical",
                "support": ["a", "b", "c", "d", "e"],
                "pmf": [
                    [0.30, 0.25, 0.20, 0.15, 0.10],
                    [0.17, 0.21, 0.23, 0.19, 0.20],
                    [0.11, 0.16, 0.22, 0.24, 0.27],
                ],
            },
        }
    )


@pytest.fixture(scope="session")
def tumor_model() -> Model:
    """移植成活模型：成功概率 (3/4)^θ，θ ∈ {1,…,5}。"""
    return Model.model_validate(
        {
            "space": {
                "points": [
                    {"label": f"theta={theta}", "value": [float(theta)]}
                    for theta in range(1, 6)
                ]
            },
            "family": {"name": "bernoulli_power", "k": 0.75},
        }
    )


@pytest.fixture(scope="function")
def test_client() -> Iterator[TestClient]:
    """提供 FastAPI TestClient。"""
    from src.estimation.main import app

    with TestClient(app) as client:
        yield client
