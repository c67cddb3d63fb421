"""
@FileName: conftest.py
@Description: 测试公共配置：项目根目录加入 sys.path，注册 slow 标记，提供常用作用与随机数发生器
@Author: HengLine
@Time: 2026/10
"""
import os
import sys

import numpy as np
import pytest

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from soficlab.action.action_core import ActionMode, FiniteAction  # noqa: E402
from soficlab.build.profinite import build_profinite  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 大规模蒙特卡罗验收检查")


def random_involution(rng: np.random.Generator, n: int, fixed_share: float = 0.2) -> np.ndarray:
    """随机对合：打乱后前一部分为不动点，其余两两配对"""
    perm = rng.permutation(n)
    n_fixed = int(round(fixed_share * n))
    if (n - n_fixed) % 2:
        n_fixed += 1
    g = np.arange(n)
    paired = perm[n_fixed:]
    g[paired[0::2]] = paired[1::2]
    g[paired[1::2]] = paired[0::2]
    return g


def random_involution_action(seed: int, n: int, d: int, k: int) -> FiniteAction:
    rng = np.random.default_rng(seed)
    gens = [random_involution(rng, n) for _ in range(d)]
    labels = rng.integers(0, 2, size=(n, k), dtype=np.uint8)
    return FiniteAction(n, d, k, ActionMode.INVOLUTION, tuple(gens), labels)


def random_free_action(seed: int, n: int, d: int, k: int) -> FiniteAction:
    rng = np.random.default_rng(seed)
    gens = [rng.permutation(n) for _ in range(d)]
    labels = rng.integers(0, 2, size=(n, k), dtype=np.uint8)
    return FiniteAction(n, d, k, ActionMode.FREE, tuple(gens), labels)


@pytest.fixture
def cyclic5():
    return build_profinite("cyclic", 5)


@pytest.fixture
def cyclic_labeled():
    """C_50，4 位全零标号，足够计算到半径 4 的统计"""
    return build_profinite("cyclic", 50, k=4)


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)
