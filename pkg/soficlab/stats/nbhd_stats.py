"""
@FileName: nbhd_stats.py
@Description: r-标号 r-邻域的规范编码、邻域类型频率 p_α 与成对频率 p_{αiβ}、
            类型限制 α|_q、统计距离 d_s，以及基于 networkx 的同构校验
@Author: HengLine
@Time: 2026/10
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence, Union

import networkx as nx
import numpy as np

from soficlab.action.action_core import (ActionMode, FiniteAction, GeneratorWord, inverse_letter_index,
                                         walk_word_tree, word_tree)
from soficlab.core.exceptions import GuardRefusedError, InputError, InvariantViolation, ModeError
from soficlab.logger import debug
from utils.config_utils import get_chunk_size, get_guard, get_numeric


def forward_letter(i: int, mode: ActionMode) -> int:
    """颜色 i（从 0 开始）的正向字母编号"""
    return 2 * i if mode is ActionMode.FREE else i


@dataclass(frozen=True)
class NeighborhoodType:
    """
    U^{r,r} 中的一个元素。word_classes[j] 是 W_r 第 j 个字到达的顶点类，类号按首次出现编号；
    class_labels[c] 是类 c 的前 r 位标号；class_edges[c][i] 是类 c 沿颜色 i 正向到达的类，
    不在球内时为 -1。因此编码描述的是 θ(W_r, x) 张成的子图，边界点之间的边也记录在内。
    """
    r: int
    d: int
    mode: ActionMode
    word_classes: tuple
    class_labels: tuple
    class_edges: tuple

    @property
    def size(self) -> int:
        return len(self.class_labels)

    @cached_property
    def code(self) -> str:
        classes = ".".join(map(str, self.word_classes))
        labels = ".".join(self.class_labels)
        edges = ".".join("/".join("x" if t < 0 else str(t) for t in row) for row in self.class_edges)
        return f"{self.r}:{self.d}:{self.mode.short}:{classes}:{labels}:{edges}"

    def code_string(self) -> str:
        return self.code

    @property
    def sort_key(self) -> tuple:
        return self.r, self.code

    def __str__(self):
        return self.code

    @classmethod
    def from_code_string(cls, text: str) -> "NeighborhoodType":
        parts = text.strip().split(":")
        if len(parts) != 6:
            raise InputError(f"malformed type code '{text}'")
        try:
            r, d = int(parts[0]), int(parts[1])
            mode = ActionMode.parse(parts[2])
            word_classes = tuple(int(x) for x in parts[3].split("."))
            labels = tuple(parts[4].split("."))
            edge_rows = parts[5].split(".")
            edges = tuple(
                tuple(-1 if t == "x" else int(t) for t in row.split("/")) if d else ()
                for row in edge_rows)
        except ValueError:
            raise InputError(f"malformed type code '{text}'") from None
        size = max(word_classes) + 1
        if len(word_classes) != len(word_tree(d, r, mode)) or len(labels) != size or len(edges) != size:
            raise InputError(f"inconsistent type code '{text}'")
        if any(len(row) != d for row in edges) or any(len(lab) not in (0, r) for lab in labels):
            raise InputError(f"inconsistent type code '{text}'")
        return cls(r, d, mode, word_classes, labels, edges)

    @cached_property
    def class_depths(self) -> tuple:
        """每个类到根的距离，即首个到达该类的字的长度"""
        lengths = word_tree(self.d, self.r, self.mode).lengths
        depths = [None] * self.size
        for j, c in enumerate(self.word_classes):
            if depths[c] is None:
                depths[c] = int(lengths[j])
        return tuple(depths)

    def class_word(self, c: int) -> GeneratorWord:
        """最短且字典序最小的到达类 c 的字"""
        return word_tree(self.d, self.r, self.mode).generator_word(self.word_classes.index(c))

    def is_tree(self) -> bool:
        """是否与相应 Cayley 球（自由群或对合自由积）同构，标号不计"""
        tree = word_tree(self.d, self.r, self.mode)
        if self.word_classes != tuple(range(len(tree))):
            return False
        for j, w in enumerate(tree.words):
            for i in range(self.d):
                a = forward_letter(i, self.mode)
                ext = w[1:] if w and w[0] == inverse_letter_index(a, self.mode) else (a,) + w
                if self.class_edges[j][i] != tree.index.get(ext, -1):
                    return False
        return True

    def forget_labels(self) -> "NeighborhoodType":
        return dataclasses.replace(self, class_labels=("",) * self.size)

    def with_labels(self, labels: Sequence[str]) -> "NeighborhoodType":
        return dataclasses.replace(self, class_labels=tuple(labels))


def forget_labels(alpha: NeighborhoodType) -> NeighborhoodType:
    """U^{r,r} → U^r"""
    return alpha.forget_labels()


# ---------------------------------------------------------------- 向量化编码

def _code_rows(tables: Sequence[np.ndarray], labels: np.ndarray, n_univ: int, vertices: np.ndarray,
               r: int, d: int, mode: ActionMode, label_bits: int):
    """
    每个顶点一行定长整数：[各字的类号 | 各字终点的前 label_bits 位标号 | 各字终点沿各颜色的目标类]。
    两行相等当且仅当两个顶点的 r-邻域（带标号）有根同构。
    """
    tree = word_tree(d, r, mode)
    m = len(tree)
    ends = walk_word_tree(tables, tree, vertices)
    n_cols = ends.shape[1]
    word_pos = np.arange(m)[:, None]

    # 稳定排序后每组的首元素就是最早到达该顶点的字
    order = np.argsort(ends, axis=0, kind="stable")
    sorted_ends = np.take_along_axis(ends, order, axis=0)
    starts = np.ones(sorted_ends.shape, dtype=bool)
    starts[1:] = sorted_ends[1:] != sorted_ends[:-1]
    start_pos = np.maximum.accumulate(np.where(starts, word_pos, 0), axis=0)
    leader = np.take_along_axis(order, start_pos, axis=0)
    first_idx = np.empty_like(ends)
    np.put_along_axis(first_idx, order, leader, axis=0)
    rep_rank = np.cumsum(first_idx == word_pos, axis=0) - 1
    classes = np.take_along_axis(rep_rank, first_idx, axis=0)

    blocks = [classes.T]
    if label_bits:
        blocks.append(labels[ends, :label_bits].transpose(1, 0, 2).reshape(n_cols, m * label_bits))

    if d:
        cols = np.arange(n_cols, dtype=np.int64)[None, :]
        keys = (cols * n_univ + ends).ravel()
        key_order = np.argsort(keys, kind="stable")
        sorted_keys = keys[key_order]
        sorted_classes = classes.ravel()[key_order]
        targets = np.empty((m, n_cols, d), dtype=np.int64)
        for i in range(d):
            lookup = (cols * n_univ + tables[forward_letter(i, mode)][ends]).ravel()
            pos = np.minimum(np.searchsorted(sorted_keys, lookup), sorted_keys.size - 1)
            found = sorted_keys[pos] == lookup
            targets[:, :, i] = np.where(found, sorted_classes[pos], -1).reshape(m, n_cols)
        blocks.append(targets.transpose(1, 0, 2).reshape(n_cols, m * d))

    return np.concatenate(blocks, axis=1).astype(np.int32), ends


def _decode_row(row: np.ndarray, r: int, d: int, mode: ActionMode, m: int, label_bits: int):
    word_classes = tuple(int(x) for x in row[:m])
    reps = []
    for j, c in enumerate(word_classes):
        if c == len(reps):
            reps.append(j)
    base = m
    labels = []
    for j in reps:
        bits = row[base + j * label_bits: base + (j + 1) * label_bits]
        labels.append("".join("1" if b else "0" for b in bits))
    base += m * label_bits
    edges = tuple(tuple(int(t) for t in row[base + j * d: base + (j + 1) * d]) for j in reps)
    return NeighborhoodType(r, d, mode, word_classes, tuple(labels), edges), reps


def _check_label_length(k: int, r: int):
    if k < r:
        raise InputError(f"label length < r (label length {k}, r = {r})")


def classify_vertices(tables: Sequence[np.ndarray], labels: np.ndarray, n_univ: int, vertices: np.ndarray,
                      r: int, d: int, mode: ActionMode, label_bits: Optional[int] = None):
    """
    对一组顶点分类。返回 (每个顶点的类型序号, 按 (r, code) 排序的类型列表, 每个类型的一个代表顶点)。
    按配置的分块大小逐块编码，以 bytes 为键合并各块结果。
    """
    label_bits = r if label_bits is None else label_bits
    vertices = np.asarray(vertices, dtype=np.int64)
    m = len(word_tree(d, r, mode))
    chunk = max(1, get_chunk_size())
    key_to_id = {}
    rows_by_id = []
    sample = []
    ids = np.empty(vertices.size, dtype=np.int64)
    for start in range(0, vertices.size, chunk):
        part = vertices[start:start + chunk]
        rows, _ = _code_rows(tables, labels, n_univ, part, r, d, mode, label_bits)
        uniq, first, inverse = np.unique(rows, axis=0, return_index=True, return_inverse=True)
        local = np.empty(uniq.shape[0], dtype=np.int64)
        for u in range(uniq.shape[0]):
            key = uniq[u].tobytes()
            if key not in key_to_id:
                key_to_id[key] = len(rows_by_id)
                rows_by_id.append(uniq[u])
                sample.append(int(part[first[u]]))
            local[u] = key_to_id[key]
        ids[start:start + part.size] = local[inverse.reshape(-1)]

    types = [_decode_row(row, r, d, mode, m, label_bits)[0] for row in rows_by_id]
    order = sorted(range(len(types)), key=lambda t: types[t].sort_key)
    rank = np.empty(len(types), dtype=np.int64)
    rank[order] = np.arange(len(types))
    return rank[ids], [types[t] for t in order], [sample[t] for t in order]


def vertex_types(action: FiniteAction, r: int, vertices: Optional[np.ndarray] = None):
    """每个顶点的 r-邻域类型序号与类型列表"""
    if r < 0:
        raise InputError(f"radius must be >= 0, got {r}")
    _check_label_length(action.k, r)
    if vertices is None:
        vertices = np.arange(action.n)
    ids, types, _ = classify_vertices(action.letter_tables, action.labels, action.n, vertices,
                                      r, action.d, action.mode)
    return ids, types


def neighborhood_code(action: FiniteAction, v: int, r: int) -> NeighborhoodType:
    """顶点 v 的 r-标号 r-邻域的规范编码"""
    if not 0 <= v < action.n:
        raise InputError(f"vertex {v} out of range 0..{action.n - 1}")
    _, types = vertex_types(action, r, np.array([v]))
    return types[0]


# ---------------------------------------------------------------- 类型球

@dataclass(frozen=True, eq=False)
class TypeBall:
    """把类型 α 还原成一个有限结构：类是顶点，外加一个吸收的汇点表示球外"""
    alpha: NeighborhoodType
    tables: tuple
    labels: np.ndarray

    @property
    def sink(self) -> int:
        return self.alpha.size

    @property
    def n_univ(self) -> int:
        return self.alpha.size + 1

    def walk(self, w: GeneratorWord, start: int = 0) -> int:
        v = start
        for idx in reversed(w.letter_indices(self.alpha.mode)):
            v = int(self.tables[idx][v])
        return v


@lru_cache(maxsize=4096)
def type_ball(alpha: NeighborhoodType) -> TypeBall:
    size, sink = alpha.size, alpha.size
    tables = []
    for i in range(alpha.d):
        fwd = np.full(size + 1, sink, dtype=np.int64)
        for c, row in enumerate(alpha.class_edges):
            if row[i] >= 0:
                fwd[c] = row[i]
        tables.append(fwd)
        if alpha.mode is ActionMode.FREE:
            inv = np.full(size + 1, sink, dtype=np.int64)
            for c, row in enumerate(alpha.class_edges):
                if row[i] >= 0:
                    inv[row[i]] = c
            tables.append(inv)
    labels = np.zeros((size + 1, alpha.r), dtype=np.uint8)
    for c, lab in enumerate(alpha.class_labels):
        for b, ch in enumerate(lab):
            labels[c, b] = 1 if ch == "1" else 0
    for arr in tables:
        arr.setflags(write=False)
    labels.setflags(write=False)
    return TypeBall(alpha, tuple(tables), labels)


def code_at(tables: Sequence[np.ndarray], labels: np.ndarray, n_univ: int, vertex: int, r: int, d: int,
            mode: ActionMode, label_bits: Optional[int] = None):
    """单个顶点的编码与每个类的代表顶点；label_bits = 0 时只取结构"""
    label_bits = r if label_bits is None else label_bits
    m = len(word_tree(d, r, mode))
    rows, ends = _code_rows(tables, labels, n_univ, np.array([vertex]), r, d, mode, label_bits)
    code, reps = _decode_row(rows[0], r, d, mode, m, label_bits)
    return code, [int(ends[j, 0]) for j in reps]


def code_in_ball(ball: TypeBall, vertex: int, q: int, label_bits: Optional[int] = None):
    """球内某个类的 q-邻域编码；调用方保证深度 + q 不超过球半径"""
    alpha = ball.alpha
    return code_at(ball.tables, ball.labels, ball.n_univ, vertex, q, alpha.d, alpha.mode, label_bits)


def reroot(alpha: NeighborhoodType, w: GeneratorWord, q: int) -> NeighborhoodType:
    """从 α 的根沿 w 到达的顶点的 q-类型，在 α 内部读出（需要 |w| + q ≤ r）"""
    if len(w) + q > alpha.r:
        raise InputError(f"reroot needs |w| + q <= r, got |w| = {len(w)}, q = {q}, r = {alpha.r}")
    ball = type_ball(alpha)
    vertex = ball.walk(w.reduced(alpha.mode))
    if vertex == ball.sink:
        raise InvariantViolation(f"word {w} leaves the ball of type {alpha.code}")
    labelled = all(len(lab) == alpha.r for lab in alpha.class_labels)
    code, _ = code_in_ball(ball, vertex, q, q if labelled else 0)
    return code


@lru_cache(maxsize=65536)
def restrict_type(alpha: NeighborhoodType, q: int) -> NeighborhoodType:
    """α|_q：限制到 W_q，标号截到前 q 位，类号重新按首次出现编号"""
    if q < 0 or q > alpha.r:
        raise InputError(f"cannot restrict a radius-{alpha.r} type to radius {q}")
    if q == alpha.r:
        return alpha
    mq = word_tree(alpha.d, alpha.r, alpha.mode).prefix_size(q)
    remap = {}
    for c in alpha.word_classes[:mq]:
        if c not in remap:
            remap[c] = len(remap)
    kept = sorted(remap, key=remap.get)
    labels = tuple(alpha.class_labels[c][:q] for c in kept)
    edges = tuple(tuple(remap.get(t, -1) for t in alpha.class_edges[c]) for c in kept)
    word_classes = tuple(remap[c] for c in alpha.word_classes[:mq])
    return NeighborhoodType(q, alpha.d, alpha.mode, word_classes, labels, edges)


# ---------------------------------------------------------------- 频率统计

Number = Union[Fraction, float]


def _is_exact(values: Iterable) -> bool:
    return all(isinstance(v, (Fraction, int)) for v in values)


@dataclass(frozen=True, eq=False)
class StatVector:
    """α ↦ p_α，取值之和恰为 1（浮点目标允许配置的容差）"""
    r: int
    entries: dict

    def __post_init__(self):
        entries = {}
        for alpha, value in self.entries.items():
            if alpha.r != self.r:
                raise InputError(f"type of radius {alpha.r} in a radius-{self.r} statistic")
            if isinstance(value, int):
                value = Fraction(value)
            if value < 0 or value > 1 + get_numeric("float_sum_tol"):
                raise InputError(f"statistic value {value} outside [0, 1]")
            entries[alpha] = value
        total = sum(entries.values(), Fraction(0))
        if _is_exact(entries.values()):
            if total != 1:
                raise InputError(f"statistic values sum to {total}, not 1")
        elif abs(float(total) - 1.0) > get_numeric("float_sum_tol"):
            raise InputError(f"statistic values sum to {float(total)}, not 1")
        object.__setattr__(self, "entries", entries)

    @property
    def exact(self) -> bool:
        return _is_exact(self.entries.values())

    def get(self, alpha: NeighborhoodType) -> Number:
        return self.entries.get(alpha, Fraction(0))

    def support(self) -> list:
        return sorted((a for a, v in self.entries.items() if v > 0), key=lambda a: a.sort_key)

    def items(self):
        """按 (r, code) 排序的 (类型, 值)"""
        return [(a, self.entries[a]) for a in sorted(self.entries, key=lambda a: a.sort_key)]

    def restrict(self, q: int) -> "StatVector":
        """半径 q 上的边缘分布"""
        out = {}
        for alpha, value in self.entries.items():
            beta = restrict_type(alpha, q)
            out[beta] = out.get(beta, 0) + value
        return StatVector(q, out)

    def forget_labels(self) -> "StatVector":
        out = {}
        for alpha, value in self.entries.items():
            beta = alpha.forget_labels()
            out[beta] = out.get(beta, 0) + value
        return StatVector(self.r, out)

    def to_dict(self):
        return {"r": self.r, "entries": {a.code: v for a, v in self.items()}}


def unlabeled_stats(stat: StatVector) -> StatVector:
    return stat.forget_labels()


@dataclass(frozen=True, eq=False)
class PairStatVector:
    """(α, i, β) ↦ p_{αiβ}，i 从 1 开始"""
    r: int
    d: int
    entries: dict

    def __post_init__(self):
        entries = {}
        for (alpha, i, beta), value in self.entries.items():
            if not 1 <= i <= self.d:
                raise InputError(f"pair statistic uses generator {i} but d = {self.d}")
            entries[(alpha, int(i), beta)] = Fraction(value) if isinstance(value, int) else value
        object.__setattr__(self, "entries", entries)

    @property
    def exact(self) -> bool:
        return _is_exact(self.entries.values())

    def get(self, alpha, i, beta) -> Number:
        return self.entries.get((alpha, i, beta), Fraction(0))

    def items(self):
        return sorted(self.entries.items(), key=lambda kv: (kv[0][0].sort_key, kv[0][1], kv[0][2].sort_key))

    def to_dict(self):
        return {"r": self.r, "d": self.d,
                "entries": [[a.code, i, b.code, v] for (a, i, b), v in self.items()]}


def stat_vector(action: FiniteAction, r: int) -> StatVector:
    """p_α = |T(θ, α)| / n，精确有理数"""
    ids, types = vertex_types(action, r)
    counts = np.bincount(ids, minlength=len(types))
    debug(f"邻域统计: n={action.n}, r={r}, 类型数={len(types)}")
    return StatVector(r, {alpha: Fraction(int(c), action.n) for alpha, c in zip(types, counts)})


def stat_counts(action: FiniteAction, r: int) -> list:
    """(类型, 计数) 列表，按 (r, code) 排序"""
    ids, types = vertex_types(action, r)
    counts = np.bincount(ids, minlength=len(types))
    return [(alpha, int(c)) for alpha, c in zip(types, counts)]


def stat_family(action: FiniteAction, r: int) -> list:
    """半径 0..r 的统计向量族"""
    return [stat_vector(action, q) for q in range(r + 1)]


def pair_counts(action: FiniteAction, r: int) -> list:
    """((α, i, β), 计数) 列表"""
    if action.mode is not ActionMode.INVOLUTION:
        raise ModeError("pair statistics need an involution-mode action")
    ids, types = vertex_types(action, r)
    t = len(types)
    out = []
    for i, g in enumerate(action.gens, start=1):
        keys, counts = np.unique(ids * t + ids[g], return_counts=True)
        for key, c in zip(keys.tolist(), counts.tolist()):
            out.append(((types[key // t], i, types[key % t]), c))
    return out


def pair_stats(action: FiniteAction, r: int) -> PairStatVector:
    """p_{αiβ} = |{x ∈ T(θ,α): S_i x ∈ T(θ,β)}| / n"""
    entries = {key: Fraction(c, action.n) for key, c in pair_counts(action, r)}
    return PairStatVector(r, action.d, entries)


def _close(a: Number, b: Number, tol: float) -> bool:
    if _is_exact((a, b)):
        return a == b
    return abs(float(a) - float(b)) <= tol


def check_pair_equations(stat: StatVector, pair: PairStatVector, tol: Optional[float] = None) -> list:
    """
    检查三组等式：Σ_α p_α = 1；Σ_β p_{αiβ} = p_α；p_{αiβ} = p_{βiα}。
    精确值零容差比较；返回不成立的等式说明，空列表表示全部成立。
    """
    tol = get_numeric("float_sum_tol") if tol is None else tol
    failures = []
    total = sum(stat.entries.values(), Fraction(0))
    if not _close(total, Fraction(1), tol):
        failures.append(f"sum of p_alpha is {total}")

    marginals = {}
    for (alpha, i, beta), value in pair.entries.items():
        marginals[(alpha, i)] = marginals.get((alpha, i), 0) + value
        mirror = pair.get(beta, i, alpha)
        if not _close(value, mirror, tol):
            failures.append(f"p({alpha.code},{i},{beta.code}) = {value} but mirror is {mirror}")
    for alpha, value in stat.entries.items():
        if value == 0:
            continue
        for i in range(1, pair.d + 1):
            got = marginals.get((alpha, i), 0)
            if not _close(got, value, tol):
                failures.append(f"sum over beta of p({alpha.code},{i},beta) = {got} but p = {value}")
    for (alpha, i), got in marginals.items():
        if alpha not in stat.entries and got != 0:
            failures.append(f"pair mass {got} on type {alpha.code} missing from the statistic")
    return failures


# ---------------------------------------------------------------- 统计距离

StatSide = Union[StatVector, Sequence[StatVector]]


def _flatten(side: StatSide) -> dict:
    vectors = [side] if isinstance(side, StatVector) else list(side)
    flat = {}
    for vec in vectors:
        flat.update(vec.entries)
    return flat


def default_ordering(*sides: StatSide) -> list:
    """所有支撑的并，按 (半径, code) 排序"""
    union = set()
    for side in sides:
        union.update(a for a, v in _flatten(side).items() if v > 0)
    return sorted(union, key=lambda a: a.sort_key)


def statistical_distance(s1: StatSide, s2: StatSide, ordering: Optional[Sequence[NeighborhoodType]] = None):
    """
    d_s = Σ_i |p_{α_i}(s1) - p_{α_i}(s2)| / 2^i，位置 i 从 1 开始。
    两侧可以是单个统计向量，也可以是不同半径的统计向量族。
    """
    left, right = _flatten(s1), _flatten(s2)
    if ordering is None:
        ordering = default_ordering(s1, s2)
    position = {}
    for i, alpha in enumerate(ordering, start=1):
        position.setdefault(alpha, i)
    missing = [a.code for side in (left, right) for a, v in side.items() if v > 0 and a not in position]
    if missing:
        raise InputError(f"ordering does not cover type {missing[0]}")

    exact = _is_exact(left.values()) and _is_exact(right.values())
    total = Fraction(0) if exact else 0.0
    for alpha, i in position.items():
        diff = abs(left.get(alpha, 0) - right.get(alpha, 0))
        if diff:
            total += Fraction(diff) / (1 << i) if exact else float(diff) / 2.0 ** i
    return total


# ---------------------------------------------------------------- 同构校验

def type_graph(alpha: NeighborhoodType) -> nx.DiGraph:
    """类型 α 的有根、着色、带标号有向图"""
    graph = nx.DiGraph(radius=alpha.r)
    for c, lab in enumerate(alpha.class_labels):
        graph.add_node(c, label=lab, root=(c == 0))
    for c, row in enumerate(alpha.class_edges):
        for i, t in enumerate(row, start=1):
            if t >= 0:
                _add_colored_edge(graph, c, t, i)
    return graph


def ball_graph(action: FiniteAction, v: int, r: int) -> nx.DiGraph:
    """直接在作用上广度优先搜索得到 B_r(v) 张成的子图，不经过规范编码"""
    _check_label_length(action.k, r)
    seen = {v}
    frontier = [v]
    for _ in range(r):
        nxt = []
        for u in frontier:
            for table in action.letter_tables:
                t = int(table[u])
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    graph = nx.DiGraph(radius=r)
    for u in seen:
        graph.add_node(u, label=action.label_str(u)[:r], root=(u == v))
    for u in seen:
        for i, g in enumerate(action.gens, start=1):
            t = int(g[u])
            if t in seen:
                _add_colored_edge(graph, u, t, i)
    return graph


def _add_colored_edge(graph: nx.DiGraph, u, t, color: int):
    if graph.has_edge(u, t):
        graph[u][t]["colors"] = tuple(sorted(set(graph[u][t]["colors"]) | {color}))
    else:
        graph.add_edge(u, t, colors=(color,))


def iso_bruteforce(alpha: Union[NeighborhoodType, nx.DiGraph], beta: Union[NeighborhoodType, nx.DiGraph]) -> bool:
    """穷举回溯（VF2）判断是否存在保根、保色、保标号的双射"""
    g1 = type_graph(alpha) if isinstance(alpha, NeighborhoodType) else alpha
    g2 = type_graph(beta) if isinstance(beta, NeighborhoodType) else beta
    max_radius, max_classes = get_guard("iso_max_radius"), get_guard("iso_max_classes")
    for g in (g1, g2):
        if g.graph.get("radius", 0) > max_radius or g.number_of_nodes() > max_classes:
            raise GuardRefusedError(
                f"isomorphism oracle limited to radius <= {max_radius} and <= {max_classes} classes")
    if g1.number_of_nodes() != g2.number_of_nodes() or g1.number_of_edges() != g2.number_of_edges():
        return False
    return nx.is_isomorphic(
        g1, g2,
        node_match=lambda a, b: a["label"] == b["label"] and a["root"] == b["root"],
        edge_match=lambda a, b: a["colors"] == b["colors"])
