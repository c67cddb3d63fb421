"""
@FileName: kernel.py
@Description: 有限作用上的块稀疏核 K(q, p)：加法、卷积乘法、伴随、归一化迹、HS 范数、
            幂迭代算子范数与迹矩
@Author: HengLine
@Time: 2026/10
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
from scipy import sparse

from soficlab.action.action_core import FiniteAction
from soficlab.core.exceptions import GuardRefusedError, InputError, InvariantViolation, NumericalError
from soficlab.logger import debug, warning
from utils.config_utils import get_guard, get_numeric
from utils.seed_utils import derive_rng

INT64_LIMIT = 2 ** 62


@dataclass(frozen=True, eq=False)
class BlockKernel:
    """
    按块存储的核：matrix[q·d_block + a, p·d_block + b] = K(q, p)[a, b]。
    整数矩阵配合 denominator 表示精确有理数核，实际值为 matrix / denominator。
    """
    action: FiniteAction
    d_block: int
    matrix: sparse.csr_matrix
    denominator: int = 1

    def __post_init__(self):
        size = self.action.n * self.d_block
        matrix = sparse.csr_matrix(self.matrix)
        if matrix.shape != (size, size):
            raise InputError(f"kernel matrix has shape {matrix.shape}, expected {(size, size)}")
        if self.denominator < 1:
            raise InputError(f"kernel denominator must be >= 1, got {self.denominator}")
        if self.denominator != 1 and matrix.dtype.kind not in "iu":
            raise InputError("a kernel denominator needs an integer matrix")
        matrix.eliminate_zeros()
        matrix.sum_duplicates()
        object.__setattr__(self, "matrix", matrix)
        coo = matrix.tocoo()
        orbits = self.action.orbit_labels
        if np.any(orbits[coo.row // self.d_block] != orbits[coo.col // self.d_block]):
            raise InvariantViolation("kernel has entries between different orbits")

    @property
    def n(self) -> int:
        return self.action.n

    @property
    def size(self) -> int:
        return self.action.n * self.d_block

    @property
    def exact(self) -> bool:
        return self.matrix.dtype.kind in "iu"

    @property
    def is_integer(self) -> bool:
        return self.exact and self.denominator == 1

    def float_matrix(self) -> sparse.csr_matrix:
        if self.exact:
            return self.matrix.astype(np.float64) / self.denominator
        return self.matrix

    def dense(self) -> np.ndarray:
        return self.float_matrix().toarray()

    @cached_property
    def _block_pattern(self):
        coo = self.matrix.tocoo()
        keys = np.unique((coo.row // self.d_block).astype(np.int64) * self.n + coo.col // self.d_block)
        return keys // self.n, keys % self.n

    @cached_property
    def width(self) -> int:
        """w_K：每个块行、块列中非零块个数的最大值"""
        rows, cols = self._block_pattern
        if rows.size == 0:
            return 0
        return int(max(np.bincount(rows).max(), np.bincount(cols).max()))

    @cached_property
    def sup(self) -> float:
        """s_K：块的算子范数的最大值"""
        if self.matrix.nnz == 0:
            return 0.0
        values = self.float_matrix().tocoo()
        db = self.d_block
        if db == 1:
            return float(np.abs(values.data).max())
        keys = (values.row // db).astype(np.int64) * self.n + values.col // db
        uniq, slot = np.unique(keys, return_inverse=True)
        blocks = np.zeros((uniq.size, db, db), dtype=values.data.dtype)
        np.add.at(blocks, (slot.reshape(-1), values.row % db, values.col % db), values.data)
        return float(np.linalg.norm(blocks, ord=2, axis=(1, 2)).max())

    def block(self, q: int, p: int) -> np.ndarray:
        db = self.d_block
        values = self.matrix[q * db:(q + 1) * db, p * db:(p + 1) * db].toarray()
        return values / self.denominator if self.denominator != 1 else values


def zero_kernel(action: FiniteAction, d_block: int = 1) -> BlockKernel:
    size = action.n * d_block
    return BlockKernel(action, d_block, sparse.csr_matrix((size, size), dtype=np.int64))


def identity_kernel(action: FiniteAction, d_block: int = 1) -> BlockKernel:
    return BlockKernel(action, d_block, sparse.identity(action.n * d_block, dtype=np.int64, format="csr"))


def _check_compatible(K: BlockKernel, L: BlockKernel):
    if K.action is not L.action and K.action != L.action:
        raise InputError("kernels live on different actions")
    if K.d_block != L.d_block:
        raise InputError(f"block dimensions differ: {K.d_block} vs {L.d_block}")


def _as_common(K: BlockKernel, L: BlockKernel):
    """两个核换到同一个分母；非精确时都转成浮点"""
    if K.exact and L.exact:
        den = math.lcm(K.denominator, L.denominator)
        return K.matrix * (den // K.denominator), L.matrix * (den // L.denominator), den
    return K.float_matrix(), L.float_matrix(), 1


def kernel_add(K: BlockKernel, L: BlockKernel) -> BlockKernel:
    _check_compatible(K, L)
    a, b, den = _as_common(K, L)
    return BlockKernel(K.action, K.d_block, a + b, den)


def kernel_sub(K: BlockKernel, L: BlockKernel) -> BlockKernel:
    _check_compatible(K, L)
    a, b, den = _as_common(K, L)
    return BlockKernel(K.action, K.d_block, a - b, den)


def kernel_scale(K: BlockKernel, c) -> BlockKernel:
    if K.exact and isinstance(c, (int, Fraction)):
        c = Fraction(c)
        return BlockKernel(K.action, K.d_block, K.matrix * c.numerator, K.denominator * c.denominator)
    return BlockKernel(K.action, K.d_block, K.float_matrix() * c)


def _abs_max(K: BlockKernel) -> int:
    return int(np.abs(K.matrix.data).max()) if K.matrix.nnz else 0


def kernel_mul(K: BlockKernel, L: BlockKernel) -> BlockKernel:
    """KL(x, y) = Σ_z K(x, z) L(z, y)"""
    _check_compatible(K, L)
    if K.exact and L.exact:
        col_sum = int(abs(L.matrix).sum(axis=0).max()) if L.matrix.nnz else 0
        if _abs_max(K) * col_sum >= INT64_LIMIT:
            raise GuardRefusedError("exact kernel product would overflow 64-bit integers")
        return BlockKernel(K.action, K.d_block, K.matrix @ L.matrix, K.denominator * L.denominator)
    return BlockKernel(K.action, K.d_block, K.float_matrix() @ L.float_matrix())


def kernel_adjoint(K: BlockKernel) -> BlockKernel:
    """K*(x, y) = K(y, x) 的共轭转置"""
    return BlockKernel(K.action, K.d_block, K.matrix.conj().T.tocsr(), K.denominator)


def _real_if_close(value, scale: float = 1.0):
    if isinstance(value, complex) or np.iscomplexobj(value):
        if abs(value.imag) <= 1e-12 * max(1.0, scale):
            return float(value.real)
        return complex(value)
    return float(value)


def normalized_trace(K: BlockKernel):
    """Tr_*(K) = Σ_v Tr K(v, v) / (d_block·n)；精确核返回 Fraction"""
    diag_sum = K.matrix.diagonal().sum()
    if K.exact:
        return Fraction(int(diag_sum), K.denominator * K.size)
    return _real_if_close(complex(diag_sum) / K.size if np.iscomplexobj(diag_sum) else float(diag_sum) / K.size)


def hs_norm(K: BlockKernel) -> float:
    """sqrt(Tr_*(K*K))，即 sqrt(Σ|K(q,p)_{ab}|² / (d_block·n))"""
    data = K.float_matrix().data
    return math.sqrt(float(np.sum(np.abs(data) ** 2)) / K.size)


def op_norm(K: BlockKernel, tol: float = None, max_iter: int = None, check_bound: bool = True) -> float:
    """
    幂迭代求 K*K 的最大特征值（Rayleigh 商），返回其平方根。
    d_block = 1 时断言 ‖K‖ ≤ w_K·s_K。
    """
    tol = get_numeric("power_iter_tol") if tol is None else tol
    max_iter = get_numeric("power_iter_max") if max_iter is None else max_iter
    if tol <= 0:
        raise InputError(f"tolerance must be positive, got {tol}")
    if K.matrix.nnz == 0:
        return 0.0
    M = K.float_matrix()
    MH = M.conj().T.tocsr()
    rng = derive_rng(0, "op_norm", K.size)
    x = rng.standard_normal(K.size)
    if np.iscomplexobj(M.data):
        x = x + 1j * rng.standard_normal(K.size)
    x /= np.linalg.norm(x)
    estimate = 0.0
    for it in range(1, max_iter + 1):
        y = MH @ (M @ x)
        value = float(np.real(np.vdot(x, y)))
        norm_y = np.linalg.norm(y)
        if norm_y == 0.0:
            estimate = 0.0
            break
        if it > 1 and abs(value - estimate) <= tol * max(value, 1e-300):
            estimate = value
            break
        estimate = value
        x = y / norm_y
    else:
        raise NumericalError(f"power iteration did not converge in {max_iter} steps",
                             estimate=math.sqrt(max(estimate, 0.0)))
    norm = math.sqrt(max(estimate, 0.0))
    debug(f"幂迭代: {it} 步, ‖K‖≈{norm:.10g}")
    if check_bound and K.d_block == 1:
        bound = K.width * K.sup
        if norm > bound + 1e-9:
            raise InvariantViolation(f"operator norm {norm} exceeds w_K·s_K = {bound}")
    return norm


def moments(K: BlockKernel, i_max: int) -> list:
    """[Tr_*(K^i)]，i = 1..i_max；非零元超过保护阈值时拒绝并带回已算出的部分"""
    if i_max < 1:
        raise InputError(f"i_max must be >= 1, got {i_max}")
    limit = get_guard("moment_max_nnz")
    complex_entries = not K.exact and np.iscomplexobj(K.matrix.data)
    achieved = []
    power = K
    for i in range(1, i_max + 1):
        value = normalized_trace(power)
        if complex_entries and isinstance(value, complex):
            warning(f"第 {i} 阶迹矩虚部 {value.imag:.3g} 未能忽略")
        achieved.append(value)
        if i == i_max:
            break
        if power.matrix.nnz * max(K.width, 1) > limit:
            raise GuardRefusedError(f"moment {i + 1} would exceed {limit} nonzeros", achieved=achieved)
        try:
            power = kernel_mul(power, K)
        except GuardRefusedError as e:
            raise GuardRefusedError(e.message, achieved=achieved) from None
    return achieved
