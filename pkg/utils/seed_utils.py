"""
@FileName: seed_utils.py
@Description: 随机种子派生工具：一个根种子按阶段标签拆分出互不干扰的随机流
@Author: HengLine
@Time: 2026/10
"""
import hashlib

import numpy as np

SEED_MASK = (1 << 64) - 1


def label_words(*labels) -> tuple:
    """每个标签取 sha256 前 4 字节作为 spawn_key 的一个分量"""
    words = []
    for label in labels:
        digest = hashlib.sha256(str(label).encode('utf-8')).digest()
        words.append(int.from_bytes(digest[:4], 'little'))
    return tuple(words)


def derive_seed_sequence(root_seed: int, *labels) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=int(root_seed) & SEED_MASK, spawn_key=label_words(*labels))


def derive_rng(root_seed: int, *labels) -> np.random.Generator:
    """
    派生某个构造阶段专用的随机数发生器

    Args:
        root_seed: 64 位根种子
        labels: 阶段标签，例如 ("treeable", "i=2")

    Returns:
        numpy Generator；相同 (root_seed, labels) 总是得到相同的随机流
    """
    return np.random.default_rng(derive_seed_sequence(root_seed, *labels))
