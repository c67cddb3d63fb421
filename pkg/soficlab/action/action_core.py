"""
@FileName: action_core.py
@Description: 有限作用核心：生成元字、有限标号作用（自由群或对合自由积）、字的求值、
            生成元限制、sofic 缺陷检查与重着色为对合
@Author: HengLine
@Time: 2026/10
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

import networkx as nx
import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from soficlab.core.exceptions import InputError, ModeError
from soficlab.logger import debug, info


class ActionMode(Enum):
    FREE = "free"
    INVOLUTION = "involution"

    @classmethod
    def parse(cls, text: str) -> "ActionMode":
        for mode in cls:
            if text == mode.value or text == mode.short:
                return mode
        raise InputError(f"unknown action mode '{text}' (expected free or involution)")

    @property
    def short(self) -> str:
        return "f" if self is ActionMode.FREE else "i"

    def letter_count(self, d: int) -> int:
        """字母表大小：自由模式 γ_i 与 γ_i^{-1}，对合模式只有 S_i"""
        return 2 * d if self is ActionMode.FREE else d


# ---------------------------------------------------------------- 字母编号
# 自由模式: γ1 → 0, γ1^{-1} → 1, γ2 → 2, ...；对合模式: S_i → i-1

def letter_index(letter: tuple, mode: ActionMode) -> int:
    i, sign = letter
    if mode is ActionMode.FREE:
        return 2 * (i - 1) + (0 if sign > 0 else 1)
    return i - 1


def letter_from_index(idx: int, mode: ActionMode) -> tuple:
    if mode is ActionMode.FREE:
        return idx // 2 + 1, (1 if idx % 2 == 0 else -1)
    return idx + 1, 1


def inverse_letter_index(idx: int, mode: ActionMode) -> int:
    return idx ^ 1 if mode is ActionMode.FREE else idx


@dataclass(frozen=True)
class GeneratorWord:
    """生成元字，letters 为 (i, sign) 序列；写法与作用顺序一致，最右边的字母最先作用"""
    letters: tuple = ()

    def __post_init__(self):
        letters = tuple((int(i), int(s)) for i, s in self.letters)
        for i, s in letters:
            if i < 1 or s not in (1, -1):
                raise InputError(f"invalid letter ({i}, {s}) in generator word")
        object.__setattr__(self, 'letters', letters)

    @classmethod
    def parse(cls, text: str) -> "GeneratorWord":
        """"1,-2" 表示 γ1 γ2^{-1}；"e" 或空串表示空字"""
        text = text.strip()
        if text in ("", "e"):
            return cls(())
        letters = []
        for token in text.split(","):
            token = token.strip()
            try:
                value = int(token)
            except ValueError:
                raise InputError(f"invalid letter '{token}' in word '{text}'") from None
            if value == 0:
                raise InputError(f"generator index 0 in word '{text}'")
            letters.append((abs(value), 1 if value > 0 else -1))
        return cls(tuple(letters))

    @classmethod
    def of(cls, *values: int) -> "GeneratorWord":
        """GeneratorWord.of(1, -2) 等价于 parse("1,-2")"""
        return cls(tuple((abs(v), 1 if v > 0 else -1) for v in values))

    def __str__(self):
        if not self.letters:
            return "e"
        return ",".join(str(i * s) for i, s in self.letters)

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "GeneratorWord") -> "GeneratorWord":
        return GeneratorWord(self.letters + other.letters)

    @property
    def max_generator(self) -> int:
        return max((i for i, _ in self.letters), default=0)

    def normalized(self, mode: ActionMode) -> "GeneratorWord":
        if mode is ActionMode.INVOLUTION:
            return GeneratorWord(tuple((i, 1) for i, _ in self.letters))
        return self

    def reduced(self, mode: ActionMode) -> "GeneratorWord":
        """自由约化；对合模式下相邻相同字母相消"""
        stack = []
        for i, s in self.normalized(mode).letters:
            if stack and stack[-1][0] == i and (mode is ActionMode.INVOLUTION or stack[-1][1] == -s):
                stack.pop()
            else:
                stack.append((i, s))
        return GeneratorWord(tuple(stack))

    def is_reduced(self, mode: ActionMode) -> bool:
        return self.reduced(mode) == self.normalized(mode)

    def inverse(self, mode: ActionMode) -> "GeneratorWord":
        if mode is ActionMode.INVOLUTION:
            return GeneratorWord(tuple((i, 1) for i, _ in reversed(self.letters)))
        return GeneratorWord(tuple((i, -s) for i, s in reversed(self.letters)))

    def letter_indices(self, mode: ActionMode) -> tuple:
        return tuple(letter_index(letter, mode) for letter in self.normalized(mode).letters)


EMPTY_WORD = GeneratorWord(())


def parse_word(text: str) -> GeneratorWord:
    return GeneratorWord.parse(text)


def format_word(w: GeneratorWord) -> str:
    return str(w)


def reduce_word(w: GeneratorWord, mode: ActionMode) -> GeneratorWord:
    return w.reduced(mode)


# ---------------------------------------------------------------- W_r 枚举

@dataclass(frozen=True, eq=False)
class WordTree:
    """
    W_r 的固定枚举：先按长度，再按字母序（γ1, γ1^{-1}, γ2, ...）。
    每个非空字 a·w' 记录首字母 a 与后缀 w' 的位置，后缀总是先出现。
    """
    d: int
    r: int
    mode: ActionMode
    words: tuple
    first: np.ndarray
    parent: np.ndarray
    lengths: np.ndarray

    def __len__(self):
        return len(self.words)

    def prefix_size(self, q: int) -> int:
        """W_q 在枚举中恰好是前缀"""
        return int(np.searchsorted(self.lengths, q, side='right'))

    @cached_property
    def index(self) -> dict:
        return {w: j for j, w in enumerate(self.words)}

    def generator_word(self, j: int) -> GeneratorWord:
        return GeneratorWord(tuple(letter_from_index(a, self.mode) for a in self.words[j]))


def _can_precede(a: int, b: int, mode: ActionMode) -> bool:
    return b != inverse_letter_index(a, mode)


@lru_cache(maxsize=64)
def word_tree(d: int, r: int, mode: ActionMode) -> WordTree:
    if d < 0 or r < 0:
        raise InputError(f"word enumeration needs d >= 0 and r >= 0, got d={d}, r={r}")
    n_letters = mode.letter_count(d)
    words = [()]
    first = [-1]
    parent = [-1]
    lengths = [0]
    level = [0]
    for length in range(1, r + 1):
        next_level = []
        for a in range(n_letters):
            for j in level:
                w = words[j]
                if w and not _can_precede(a, w[0], mode):
                    continue
                next_level.append(len(words))
                words.append((a,) + w)
                first.append(a)
                parent.append(j)
                lengths.append(length)
        level = next_level
    tree = WordTree(d, r, mode, tuple(words), np.asarray(first, dtype=np.int64),
                    np.asarray(parent, dtype=np.int64), np.asarray(lengths, dtype=np.int64))
    for arr in (tree.first, tree.parent, tree.lengths):
        arr.setflags(write=False)
    return tree


def enumerate_words(d: int, r: int, mode: ActionMode) -> tuple:
    """W_r：长度不超过 r 的约化字，按固定顺序"""
    tree = word_tree(d, r, mode)
    return tuple(tree.generator_word(j) for j in range(len(tree)))


def word_pairs(d: int, max_len: int, mode: ActionMode) -> list:
    """长度 1..max_len 的非空约化字的全部有序对"""
    words = enumerate_words(d, max_len, mode)[1:]
    return [(e, f) for e in words for f in words]


def walk_word_tree(tables: Sequence[np.ndarray], tree: WordTree, vertices: np.ndarray) -> np.ndarray:
    """
    ends[j, c] = θ(W_r[j], vertices[c])，按枚举顺序逐层计算

    tables 可以多出一个吸收点（球外的汇点），只要字不离开表的定义域即可。
    """
    vertices = np.asarray(vertices, dtype=np.int64)
    ends = np.empty((len(tree), vertices.size), dtype=np.int64)
    ends[0] = vertices
    for j in range(1, len(tree)):
        ends[j] = tables[tree.first[j]][ends[tree.parent[j]]]
    return ends


# ---------------------------------------------------------------- 有限作用

def _coerce_labels(labels, n: int, k: Optional[int]) -> np.ndarray:
    if labels is None:
        return np.zeros((n, k or 0), dtype=np.uint8)
    if isinstance(labels, np.ndarray) and labels.ndim == 2:
        arr = labels.astype(np.uint8, copy=True)
    else:
        rows = list(labels)
        if rows and isinstance(rows[0], str):
            width = len(rows[0])
            if any(len(s) != width or set(s) - {"0", "1"} for s in rows):
                raise InputError("labels must be bit strings of one common length")
            arr = np.array([[int(ch) for ch in s] for s in rows], dtype=np.uint8).reshape(len(rows), width)
        else:
            arr = np.asarray(rows, dtype=np.uint8).reshape(len(rows), -1)
    if arr.shape[0] != n:
        raise InputError(f"expected {n} labels, got {arr.shape[0]}")
    if k is not None and arr.shape[1] != k:
        raise InputError(f"labels have length {arr.shape[1]}, declared k = {k}")
    if arr.size and arr.max() > 1:
        raise InputError("labels must be bits")
    return arr


@dataclass(frozen=True, eq=False)
class FiniteAction:
    """
    有限 X-集合上的作用：n 个顶点，d 个生成元置换，每个顶点带 k 位标号。

    对合模式下每个生成元都满足 S_i∘S_i = id。构造后数组只读。
    """
    n: int
    d: int
    k: int
    mode: ActionMode
    gens: tuple
    labels: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"action needs at least one vertex, got n = {self.n}")
        if len(self.gens) != self.d:
            raise InputError(f"declared d = {self.d} but {len(self.gens)} generators given")
        identity = np.arange(self.n)
        gens = []
        for i, g in enumerate(self.gens, start=1):
            g = np.array(g, dtype=np.int64).reshape(-1)
            if g.size != self.n:
                raise InputError(f"generator {i} has {g.size} images, expected {self.n}")
            if g.min(initial=0) < 0 or g.max(initial=0) >= self.n:
                raise InputError(f"generator {i} maps outside 0..{self.n - 1}")
            # 每个顶点恰有一条该颜色的入边
            if not np.all(np.bincount(g, minlength=self.n) == 1):
                raise InputError(f"generator {i} is not a bijection")
            if self.mode is ActionMode.INVOLUTION and not np.array_equal(g[g], identity):
                raise InputError(f"generator {i} is not an involution")
            g.setflags(write=False)
            gens.append(g)
        labels = _coerce_labels(self.labels, self.n, self.k)
        labels.setflags(write=False)
        object.__setattr__(self, 'gens', tuple(gens))
        object.__setattr__(self, 'labels', labels)

    @classmethod
    def build(cls, gens: Sequence, labels=None, mode: ActionMode = ActionMode.FREE,
              k: Optional[int] = None) -> "FiniteAction":
        gens = [np.asarray(g, dtype=np.int64) for g in gens]
        if not gens and labels is None:
            raise InputError("cannot infer n without generators or labels")
        n = gens[0].size if gens else len(labels)
        label_arr = _coerce_labels(labels, n, k)
        return cls(n, len(gens), label_arr.shape[1], mode, tuple(gens), label_arr)

    def __eq__(self, other):
        if not isinstance(other, FiniteAction):
            return NotImplemented
        return (self.n == other.n and self.d == other.d and self.k == other.k and self.mode is other.mode
                and all(np.array_equal(a, b) for a, b in zip(self.gens, other.gens))
                and np.array_equal(self.labels, other.labels))

    __hash__ = None

    @cached_property
    def letter_tables(self) -> tuple:
        """按字母编号排列的置换表；自由模式含逆置换"""
        if self.mode is ActionMode.INVOLUTION:
            return self.gens
        tables = []
        for g in self.gens:
            inv = np.empty_like(g)
            inv[g] = np.arange(self.n)
            inv.setflags(write=False)
            tables.extend([g, inv])
        return tuple(tables)

    @cached_property
    def orbit_labels(self) -> np.ndarray:
        return orbit_partition(self)

    def label_str(self, v: int) -> str:
        return "".join(str(int(b)) for b in self.labels[v])

    def with_labels(self, labels) -> "FiniteAction":
        label_arr = _coerce_labels(labels, self.n, None)
        return FiniteAction(self.n, self.d, label_arr.shape[1], self.mode, self.gens, label_arr)

    def check_word(self, w: GeneratorWord):
        if w.max_generator > self.d:
            raise InputError(f"word '{w}' uses generator {w.max_generator} but d = {self.d}")


def apply_word(action: FiniteAction, w: GeneratorWord, v: int) -> int:
    """θ(w, v)，最右边的字母最先作用"""
    if not 0 <= v < action.n:
        raise InputError(f"vertex {v} out of range 0..{action.n - 1}")
    action.check_word(w)
    tables = action.letter_tables
    for idx in reversed(w.letter_indices(action.mode)):
        v = int(tables[idx][v])
    return v


def word_permutation(action: FiniteAction, w: GeneratorWord) -> np.ndarray:
    """φ(w)：对所有顶点同时求 θ(w, ·)"""
    action.check_word(w)
    tables = action.letter_tables
    perm = np.arange(action.n)
    for idx in reversed(w.letter_indices(action.mode)):
        perm = tables[idx][perm]
    return perm


def restrict_generators(action: FiniteAction, r: int) -> FiniteAction:
    """只保留前 r 个生成元，顶点与标号不变"""
    if not 1 <= r <= action.d:
        raise InputError(f"restriction needs 1 <= r <= d = {action.d}, got r = {r}")
    return FiniteAction(action.n, r, action.k, action.mode, action.gens[:r], action.labels)


def orbit_partition(action: FiniteAction) -> np.ndarray:
    """轨道划分；标签按首次出现的顶点编号，便于直接比较两个划分"""
    n = action.n
    if action.d == 0:
        return np.arange(n)
    rows = np.concatenate([np.arange(n)] * action.d)
    cols = np.concatenate(action.gens)
    graph = sparse.csr_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(n, n))
    _, labels = connected_components(graph, directed=True, connection='weak')
    _, first_seen = np.unique(labels, return_index=True)
    remap = np.empty(first_seen.size, dtype=np.int64)
    remap[np.argsort(first_seen)] = np.arange(first_seen.size)
    return remap[labels]


# ---------------------------------------------------------------- sofic 缺陷

@dataclass(frozen=True)
class SoficDefectReport:
    pairs: tuple
    eps_mult: Fraction
    eps_free: Fraction

    def to_dict(self):
        return {
            "pairs": [[str(w) for w in pair] for pair in self.pairs],
            "eps_mult": self.eps_mult,
            "eps_free": self.eps_free,
        }


def _fixed_count(perm: np.ndarray) -> int:
    return int(np.count_nonzero(perm == np.arange(perm.size)))


def sofic_defect(action: FiniteAction, pairs: Iterable, relations: Iterable = ()) -> SoficDefectReport:
    """
    eps_mult = max 1 - #fix(φ(e)φ(f)φ(g)^{-1})/n，g 缺省为 e·f；
    三元组 (e, f, g) 允许用群中相等的另一个字表示乘积。
    eps_free = max #fix(φ(e))/n，跳过约化后为空的字。
    """
    n = action.n
    cache = {}

    def perm_of(w: GeneratorWord) -> np.ndarray:
        key = w.reduced(action.mode)
        if key not in cache:
            cache[key] = word_permutation(action, key)
        return cache[key]

    tested = []
    worst_mult = Fraction(0)
    for pair in pairs:
        if len(pair) not in (2, 3):
            raise InputError("sofic defect pairs must be (e, f) or (e, f, ef)")
        e, f = pair[0], pair[1]
        g = pair[2] if len(pair) == 3 else e * f
        pe, pf, pg = perm_of(e), perm_of(f), perm_of(g)
        inv_g = np.empty_like(pg)
        inv_g[pg] = np.arange(n)
        defect = 1 - Fraction(_fixed_count(pe[pf[inv_g]]), n)
        worst_mult = max(worst_mult, defect)
        tested.append(tuple(pair))

    worst_free = Fraction(0)
    for w in relations:
        if len(w.reduced(action.mode)) == 0:
            continue
        worst_free = max(worst_free, Fraction(_fixed_count(perm_of(w)), n))

    debug(f"sofic 缺陷: n={n}, 测试 {len(tested)} 对, eps_mult={float(worst_mult):.4g}, eps_free={float(worst_free):.4g}")
    return SoficDefectReport(tuple(tested), worst_mult, worst_free)


# ---------------------------------------------------------------- 重着色

def _edge_key(edge) -> tuple:
    u, v = edge
    return min(u, v), max(u, v)


def recolor_to_involutions(action: FiniteAction) -> FiniteAction:
    """
    底层简单图（合并重边，去掉环）按排序后的边依次贪心正常边着色，
    每个颜色类成为一个对合；未匹配的顶点是不动点。无边时返回单个恒等对合。
    """
    if action.mode is not ActionMode.FREE:
        raise ModeError("recolor_to_involutions expects a free-mode action")
    n = action.n
    if action.d:
        src = np.concatenate([np.arange(n)] * action.d)
        dst = np.concatenate(action.gens)
        keep = src != dst
        edges = np.unique(np.stack([np.minimum(src[keep], dst[keep]), np.maximum(src[keep], dst[keep])], axis=1),
                          axis=0)
    else:
        edges = np.empty((0, 2), dtype=np.int64)

    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(edges.tolist())
    # 线图上的贪心着色就是边着色：每条边取两端都没用过的最小颜色
    coloring = nx.greedy_color(nx.line_graph(graph), strategy=lambda lg, _: sorted(lg, key=_edge_key))

    n_colors = max(coloring.values(), default=-1) + 1
    gens = [np.arange(n) for _ in range(max(n_colors, 1))]
    for (u, v), c in coloring.items():
        gens[c][u] = v
        gens[c][v] = u

    info(f"重着色完成: {len(edges)} 条简单边, {len(gens)} 个对合生成元 (贪心上界 {max(4 * action.d - 1, 1)})")
    return FiniteAction(n, len(gens), action.k, ActionMode.INVOLUTION, tuple(gens), action.labels)
