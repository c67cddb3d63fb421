"""
@FileName: finite_type.py
@Description: 有限型算子规格 (α, w) → 块矩阵，它在有限作用上的实例化 K_n，
            规格层面的加法、乘法、伴随，解析迹以及逼近缺陷的度量
@Author: HengLine
@Time: 2026/10
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy import sparse

from soficlab.action.action_core import ActionMode, FiniteAction, GeneratorWord, word_permutation
from soficlab.core.exceptions import InputError, InvariantViolation
from soficlab.logger import debug
from soficlab.operator.kernel import (BlockKernel, hs_norm, kernel_add, kernel_adjoint, kernel_mul, kernel_sub,
                                      op_norm)
from soficlab.stats.nbhd_stats import NeighborhoodType, StatVector, reroot, restrict_type, type_ball, vertex_types


def as_block(value, d_block: int) -> np.ndarray:
    """标量或嵌套列表 → d_block×d_block 数组；整数 int64，含分数 object，含复数 complex128，否则 float64"""
    arr = np.array(value, dtype=object)
    if arr.ndim == 0:
        arr = np.array([[value if i == j else 0 for j in range(d_block)] for i in range(d_block)], dtype=object)
    if arr.shape != (d_block, d_block):
        raise InputError(f"block has shape {arr.shape}, expected {(d_block, d_block)}")
    flat = arr.ravel().tolist()
    if all(isinstance(v, (int, np.integer)) for v in flat):
        return arr.astype(np.int64)
    if all(isinstance(v, (int, np.integer, Fraction)) for v in flat):
        return np.array([[Fraction(v) for v in row] for row in arr.tolist()], dtype=object)
    if any(isinstance(v, (complex, np.complexfloating)) for v in flat):
        return arr.astype(np.complex128)
    return arr.astype(np.float64)


def complex_block(block: np.ndarray) -> np.ndarray:
    return np.array([[complex(v) for v in row] for row in block.tolist()], dtype=np.complex128)


def _block_kind(block: np.ndarray) -> str:
    if block.dtype == object:
        return "rational"
    return {"i": "integer", "u": "integer", "f": "float", "c": "complex"}[block.dtype.kind]


@dataclass(frozen=True, eq=False)
class FiniteTypeOperatorSpec:
    """
    table 的键是 (α, w)：α 为半径 r 的类型，None 表示任意类型；w 为长度不超过 r 的约化字。
    同一个 (α, w) 只出现一次；到达同一端点的不同字在实例化时相加。
    """
    r: int
    d_block: int
    table: dict

    def __post_init__(self):
        if self.r < 0 or self.d_block < 1:
            raise InputError(f"spec needs r >= 0 and d_block >= 1, got r={self.r}, d_block={self.d_block}")
        table = {}
        for (alpha, w), value in self.table.items():
            if alpha is not None and alpha.r != self.r:
                raise InputError(f"spec of radius {self.r} keyed by a radius-{alpha.r} type")
            mode = alpha.mode if alpha is not None else None
            key_word = w.reduced(mode) if mode is not None else w
            if len(key_word) > self.r:
                raise InputError(f"word '{w}' is longer than the spec radius {self.r}")
            block = as_block(value, self.d_block)
            key = (alpha, key_word)
            table[key] = block if key not in table else _add_blocks(table[key], block)
        object.__setattr__(self, "table", table)

    @property
    def typed(self) -> bool:
        return any(alpha is not None for alpha, _ in self.table)

    @property
    def kind(self) -> str:
        kinds = {_block_kind(b) for b in self.table.values()}
        for kind in ("complex", "float", "rational"):
            if kind in kinds:
                return kind
        return "integer"

    @property
    def is_integer(self) -> bool:
        return self.kind == "integer"

    def entries(self):
        return sorted(self.table.items(), key=lambda kv: (kv[0][0] is not None,
                                                          kv[0][0].sort_key if kv[0][0] else (), str(kv[0][1])))


def _add_blocks(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == object or b.dtype == object:
        return np.array(a.tolist(), dtype=object) + np.array(b.tolist(), dtype=object)
    return a + b


def identity_spec(d_block: int = 1) -> FiniteTypeOperatorSpec:
    return FiniteTypeOperatorSpec(0, d_block, {(None, GeneratorWord()): 1})


def word_sum_spec(words: Sequence, coeffs: Optional[Sequence] = None, d_block: int = 1) -> FiniteTypeOperatorSpec:
    """Σ c_w·w，与类型无关；例如 word_sum_spec(["1", "-1"]) 是 γ1 + γ1^{-1}"""
    words = [GeneratorWord.parse(w) if isinstance(w, str) else w for w in words]
    coeffs = [1] * len(words) if coeffs is None else list(coeffs)
    if len(coeffs) != len(words):
        raise InputError("word_sum_spec needs one coefficient per word")
    r = max((len(w) for w in words), default=0)
    table = {}
    for w, c in zip(words, coeffs):
        key = (None, w)
        table[key] = c if key not in table else table[key] + c
    return FiniteTypeOperatorSpec(r, d_block, table)


def spec_norm_bound(spec: FiniteTypeOperatorSpec) -> float:
    """Σ_w max_α ‖B_{α,w}‖，对任意有限作用上的实例化都是算子范数的上界"""
    best = {}
    for (alpha, w), block in spec.table.items():
        norm = float(np.linalg.norm(complex_block(block), 2))
        best.setdefault(w, {})
        best[w][alpha] = best[w].get(alpha, 0.0) + norm
    total = 0.0
    for per_type in best.values():
        untyped = per_type.pop(None, 0.0)
        total += untyped + max(per_type.values(), default=0.0)
    return total


# ---------------------------------------------------------------- 实例化

def _kernel_from_triples(action: FiniteAction, d_block: int, kind: str, triples) -> BlockKernel:
    """triples: (目标顶点数组, 源顶点数组, 块)；相同位置的值相加"""
    size = action.n * d_block
    entries = []
    for q, p, block in triples:
        if q.size == 0:
            continue
        for a in range(d_block):
            for b in range(d_block):
                if block[a, b] != 0:
                    entries.append((q * d_block + a, p * d_block + b, block[a, b]))
    denominator = 1
    scalars = [value for _, _, value in entries]
    if kind == "rational":
        denominator = math.lcm(*(Fraction(v).denominator for v in scalars))
        scalars = [int(Fraction(v) * denominator) for v in scalars]
    dtype = {"integer": np.int64, "rational": np.int64, "float": np.float64, "complex": np.complex128}[kind]
    if entries:
        data = np.concatenate([np.full(rows.size, s, dtype=dtype) for (rows, _, _), s in zip(entries, scalars)])
        rows = np.concatenate([rows for rows, _, _ in entries])
        cols = np.concatenate([cols for _, cols, _ in entries])
        matrix = sparse.coo_matrix((data, (rows, cols)), shape=(size, size)).tocsr()
    else:
        matrix = sparse.csr_matrix((size, size), dtype=dtype)
    return BlockKernel(action, d_block, matrix, denominator)


def instantiate(spec: FiniteTypeOperatorSpec, action: FiniteAction) -> BlockKernel:
    """K_n(q, p) = Σ_w table(α, w)，其中 p 的类型为 α 且 q = θ(w, p)"""
    type_index = None
    if spec.typed:
        ids, types = vertex_types(action, spec.r)
        type_index = {alpha: t for t, alpha in enumerate(types)}
    everyone = np.arange(action.n)
    triples = []
    for (alpha, w), block in spec.entries():
        action.check_word(w)
        if alpha is None:
            sources = everyone
        else:
            if alpha.d != action.d or alpha.mode is not action.mode:
                raise InputError(f"spec type {alpha.code} does not match the action's generators")
            t = type_index.get(alpha)
            if t is None:
                continue
            sources = np.flatnonzero(ids == t)
        targets = word_permutation(action, w)[sources]
        triples.append((targets, sources, block))
    kernel = _kernel_from_triples(action, spec.d_block, spec.kind, triples)
    debug(f"实例化: n={action.n}, 规格项 {len(spec.table)} 个, nnz={kernel.matrix.nnz}")
    return kernel


# ---------------------------------------------------------------- 规格运算

def _merge(table: dict, key, block):
    table[key] = block if key not in table else _add_blocks(table[key], block)


def _need_support(support, *specs):
    if support is None and any(s.typed for s in specs):
        raise InputError("typed specs need an explicit support of types at the result radius")


def _matching(spec: FiniteTypeOperatorSpec, wanted: NeighborhoodType):
    """类型 wanted（或任意类型）下的全部 (w, 块)"""
    for (alpha, w), block in spec.table.items():
        if alpha is None or alpha == wanted:
            yield w, block


def spec_add(K: FiniteTypeOperatorSpec, L: FiniteTypeOperatorSpec, support=None) -> FiniteTypeOperatorSpec:
    """半径 max(r, s)；类型化时只在 support 的类型上定义"""
    if K.d_block != L.d_block:
        raise InputError(f"block dimensions differ: {K.d_block} vs {L.d_block}")
    radius = max(K.r, L.r)
    _need_support(support, K, L)
    table = {}
    if support is None:
        for spec in (K, L):
            for (_, w), block in spec.table.items():
                _merge(table, (None, w), block)
        return FiniteTypeOperatorSpec(radius, K.d_block, table)
    for beta in support:
        for spec in (K, L):
            for w, block in _matching(spec, restrict_type(beta, spec.r)):
                _merge(table, (beta, w), block)
    return FiniteTypeOperatorSpec(radius, K.d_block, table)


def spec_mul(K: FiniteTypeOperatorSpec, L: FiniteTypeOperatorSpec, support=None) -> FiniteTypeOperatorSpec:
    """
    半径 r + s。x 的类型为 β：L 的项 (β|_s, v) 把 x 送到 y = v·x，
    y 的 r-类型在 β 内部读出，再接 K 的项 (type(y), u)，合成字为 u·v。
    """
    if K.d_block != L.d_block:
        raise InputError(f"block dimensions differ: {K.d_block} vs {L.d_block}")
    radius = K.r + L.r
    _need_support(support, K, L)
    table = {}
    if support is None:
        for (_, v), lb in L.table.items():
            for (_, u), kb in K.table.items():
                _merge(table, (None, u * v), _matmul(kb, lb))
        return FiniteTypeOperatorSpec(radius, K.d_block, table)
    for beta in support:
        for v, lb in _matching(L, restrict_type(beta, L.r)):
            y_type = reroot(beta, v, K.r)
            for u, kb in _matching(K, y_type):
                _merge(table, (beta, (u * v).reduced(beta.mode)), _matmul(kb, lb))
    return FiniteTypeOperatorSpec(radius, K.d_block, table)


def spec_adjoint(K: FiniteTypeOperatorSpec, support=None) -> FiniteTypeOperatorSpec:
    """半径 2r。K*(z, x) ≠ 0 要求 x = u·z，且 z = u^{-1}·x 的 r-类型与 K 的项一致"""
    radius = 2 * K.r
    _need_support(support, K)
    table = {}
    if support is None:
        for (_, u), block in K.table.items():
            # 对合模式忽略符号，按自由模式取逆同样成立
            _merge(table, (None, u.inverse(ActionMode.FREE)), _conj_t(block))
        return FiniteTypeOperatorSpec(radius, K.d_block, table)
    for beta in support:
        for (alpha, u), block in K.table.items():
            u_inv = u.inverse(beta.mode)
            if alpha is None or alpha == reroot(beta, u_inv, K.r):
                _merge(table, (beta, u_inv.reduced(beta.mode)), _conj_t(block))
    return FiniteTypeOperatorSpec(radius, K.d_block, table)


def _matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == object or b.dtype == object:
        return np.array(a.tolist(), dtype=object) @ np.array(b.tolist(), dtype=object)
    return a @ b


def _conj_t(block: np.ndarray) -> np.ndarray:
    if block.dtype == object:
        return block.T.copy()
    return block.conj().T.copy()


# ---------------------------------------------------------------- 解析迹

def _exact_zero_block(spec: FiniteTypeOperatorSpec) -> np.ndarray:
    if spec.kind in ("integer", "rational"):
        return np.array([[Fraction(0)] * spec.d_block for _ in range(spec.d_block)], dtype=object)
    return np.zeros((spec.d_block, spec.d_block), dtype=np.complex128)


def _root_column(spec: FiniteTypeOperatorSpec, alpha: NeighborhoodType, power: int) -> np.ndarray:
    """在类型 α 的球内计算 K^power 在根处的对角块"""
    ball = type_ball(alpha)
    exact = spec.kind in ("integer", "rational")
    identity = _exact_zero_block(spec)
    for a in range(spec.d_block):
        identity[a, a] = Fraction(1) if exact else 1.0
    column = {0: identity}
    local_types = {}
    for _ in range(power):
        nxt = {}
        for c, vec in column.items():
            if c not in local_types:
                local_types[c] = reroot(alpha, alpha.class_word(c), spec.r) if spec.typed else None
            for (beta, w), block in spec.table.items():
                if beta is not None and beta != local_types[c]:
                    continue
                target = ball.walk(w.reduced(alpha.mode), c)
                if target == ball.sink:
                    raise InvariantViolation(f"word {w} leaves the ball of {alpha.code}")
                blk = np.array(block.tolist(), dtype=object) if exact else complex_block(block)
                contribution = _matmul(blk, vec)
                nxt[target] = contribution if target not in nxt else nxt[target] + contribution
        column = nxt
    return column.get(0, _exact_zero_block(spec))


def analytic_trace(spec: FiniteTypeOperatorSpec, power: int, targets: StatVector):
    """Σ_α p_α·Tr(K^power)(root, root)/d_block，targets 的半径至少为 power·r"""
    if power < 1:
        raise InputError(f"power must be >= 1, got {power}")
    if targets.r < power * spec.r:
        raise InputError(f"analytic trace of power {power} needs statistics of radius >= {power * spec.r}, "
                         f"got {targets.r}")
    exact = spec.kind in ("integer", "rational") and targets.exact
    total = Fraction(0) if exact else 0.0
    for alpha, p in targets.items():
        if p == 0:
            continue
        root = _root_column(spec, alpha, power)
        trace = sum((root[a, a] for a in range(spec.d_block)), Fraction(0) if exact else 0.0)
        if exact:
            total += Fraction(p) * Fraction(trace) / spec.d_block
        else:
            total += complex(p) * complex(trace) / spec.d_block
    if exact:
        return total
    total = complex(total)
    return total.real if abs(total.imag) <= 1e-12 else total


# ---------------------------------------------------------------- 逼近缺陷

def negligible_fraction(K: BlockKernel) -> Fraction:
    """1 - |Q_n|/n，Q_n 为核触及的顶点"""
    coo = K.matrix.tocoo()
    touched = np.union1d(coo.row // K.d_block, coo.col // K.d_block)
    return 1 - Fraction(int(touched.size), K.n)


def _default_support(action: FiniteAction, radius: int, support, *specs):
    if support is not None or not any(s.typed for s in specs):
        return support
    _, types = vertex_types(action, radius)
    return types


def approximation_defect(specK: FiniteTypeOperatorSpec, specL: Optional[FiniteTypeOperatorSpec],
                         action: FiniteAction, op: str, support=None) -> float:
    """
    ‖(运算后实例化) − (实例化后运算)‖ 的 HS 范数。support 缺省时取作用上实际出现的类型，
    此时类型化规格的缺陷恒为 0；传入极限对象的支撑才会暴露非树顶点上的差异。
    """
    if op == "adjoint":
        support = _default_support(action, 2 * specK.r, support, specK)
        composed = instantiate(spec_adjoint(specK, support), action)
        direct = kernel_adjoint(instantiate(specK, action))
    elif op in ("add", "mul"):
        if specL is None:
            raise InputError(f"operation '{op}' needs two specs")
        radius = max(specK.r, specL.r) if op == "add" else specK.r + specL.r
        support = _default_support(action, radius, support, specK, specL)
        K, L = instantiate(specK, action), instantiate(specL, action)
        if op == "add":
            composed, direct = instantiate(spec_add(specK, specL, support), action), kernel_add(K, L)
        else:
            composed, direct = instantiate(spec_mul(specK, specL, support), action), kernel_mul(K, L)
    else:
        raise InputError(f"unknown operation '{op}' (expected add, mul or adjoint)")
    return hs_norm(kernel_sub(composed, direct))


@dataclass(frozen=True)
class EmbeddingReport:
    add_defect: float
    mul_defect: float
    adjoint_defect: float
    norm: float
    norm_bound: float

    @property
    def norm_ok(self) -> bool:
        return self.norm <= self.norm_bound + 1e-9

    def to_dict(self):
        return {"add_defect": self.add_defect, "mul_defect": self.mul_defect,
                "adjoint_defect": self.adjoint_defect, "norm": self.norm, "norm_bound": self.norm_bound,
                "norm_ok": self.norm_ok}


def embedding_report(specK: FiniteTypeOperatorSpec, specL: FiniteTypeOperatorSpec, action: FiniteAction,
                     support=None) -> EmbeddingReport:
    """ψ_n(K) = K_n 的四个条件一次测完：加法、乘法、伴随缺陷与一致范数界"""
    add_support = mul_support = adj_support = None
    if support is not None:
        add_support = sorted({restrict_type(b, max(specK.r, specL.r)) for b in support}, key=lambda a: a.sort_key)
        mul_support = sorted({restrict_type(b, specK.r + specL.r) for b in support}, key=lambda a: a.sort_key)
        adj_support = sorted({restrict_type(b, 2 * specK.r) for b in support}, key=lambda a: a.sort_key)
    return EmbeddingReport(
        add_defect=approximation_defect(specK, specL, action, "add", add_support),
        mul_defect=approximation_defect(specK, specL, action, "mul", mul_support),
        adjoint_defect=approximation_defect(specK, None, action, "adjoint", adj_support),
        norm=op_norm(instantiate(specK, action), check_bound=False),
        norm_bound=spec_norm_bound(specK),
    )
