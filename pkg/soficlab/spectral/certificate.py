"""
@FileName: certificate.py
@Description: 整数矩阵的精确证书：非零特征值之积（分数无关消元 + 整数行列式）与模素数秩
@Author: HengLine
@Time: 2026/10
"""
import numpy as np
from sympy.polys.domains import GF, QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from soficlab.core.exceptions import GuardRefusedError, InputError, InvariantViolation
from soficlab.logger import debug
from soficlab.operator.kernel import BlockKernel, kernel_adjoint, kernel_mul
from utils.config_utils import get_guard, get_numeric


def _integer_dense(K: BlockKernel) -> np.ndarray:
    if not K.is_integer:
        raise InputError("exact certificates need a kernel with integer entries")
    return K.matrix.toarray().astype(np.int64)


def _domain_matrix(dense: np.ndarray) -> DomainMatrix:
    rows = [[ZZ(int(v)) for v in row] for row in dense.tolist()]
    return DomainMatrix(rows, dense.shape, ZZ)


def exact_rank_and_product(dense: np.ndarray):
    """
    对称整数矩阵 G 的 (秩 ρ, 非零特征值之积)。

    非零特征值之积就是特征多项式 det(λI - G) 最低非零项 λ^{n-ρ} 的系数的绝对值。
    G 对称时它等于 det(BᵀGB) / det(BᵀB)，B 取 G 的主元列（列空间的一组基）：
    主元由稀疏 rref 给出，两个行列式在 ZZ 上做分数无关消元，比整条特征多项式便宜得多。
    """
    if not np.array_equal(dense, dense.T):
        raise InputError("exact eigenvalue product needs a symmetric integer matrix")
    n = dense.shape[0]
    if n == 0 or not dense.any():
        return 0, 1
    G = _domain_matrix(dense)
    _, pivots = G.to_sparse().convert_to(QQ).rref()
    pivots = list(pivots)
    B = G.extract(list(range(n)), pivots)
    Bt = B.transpose()
    numerator = int((Bt * G * B).det())
    denominator = int((Bt * B).det())
    product, remainder = divmod(numerator, denominator)
    if remainder:
        raise InvariantViolation("eigenvalue product is not an integer")
    return len(pivots), abs(product)


def exact_integer_certificate(A: BlockKernel, of_gram: bool = True) -> int:
    """
    AA*（of_gram=False 时为 A 本身，须对称）的非零特征值之积，精确整数，恒 ≥ 1
    """
    rank, product = certificate_with_rank(A, of_gram)
    debug(f"精确证书: size={A.size}, rank={rank}, 位数={product.bit_length()}")
    if product < 1:
        raise InvariantViolation(f"certificate {product} < 1 for an integer kernel")
    return product


def certificate_with_rank(A: BlockKernel, of_gram: bool = True):
    """(精确秩, 非零特征值之积)"""
    limit = get_guard("certificate_max_size")
    if A.size > limit:
        raise GuardRefusedError(f"exact certificate limited to n·d_block <= {limit}, got {A.size}")
    target = kernel_mul(A, kernel_adjoint(A)) if of_gram else A
    return exact_rank_and_product(_integer_dense(target))


def rank_mod_p(matrix: np.ndarray, p: int) -> int:
    """GF(p) 上的秩（稀疏 rref）"""
    if matrix.size == 0:
        return 0
    return _domain_matrix(np.mod(matrix, p)).to_sparse().convert_to(GF(p)).rank()


def modular_rank(matrix) -> int:
    """整数矩阵在配置的各个大素数下的秩取最大值（不会超过有理秩）"""
    if isinstance(matrix, BlockKernel):
        matrix = _integer_dense(matrix)
    matrix = np.asarray(matrix, dtype=np.int64)
    return max(rank_mod_p(matrix, int(p)) for p in get_numeric("rank_primes"))
