"""
@FileName: spectral_det.py
@Description: AA* 的谱分布 F(λ)、Fuglede–Kadison 行列式（对数形式）以及行列式猜想的逐规模检查
@Author: HengLine
@Time: 2026/10
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from soficlab.action.action_core import FiniteAction
from soficlab.build.bernoulli import bernoulli_labeling, cyclic_word_table
from soficlab.build.profinite import build_profinite
from soficlab.core.exceptions import GuardRefusedError, InputError, InvariantViolation, NumericalError
from soficlab.logger import debug, info, warning
from soficlab.operator.finite_type import FiniteTypeOperatorSpec, instantiate, spec_norm_bound
from soficlab.operator.kernel import BlockKernel, kernel_adjoint, kernel_mul, moments, op_norm
from soficlab.spectral.certificate import certificate_with_rank, modular_rank
from utils.config_utils import get_guard, get_numeric


@dataclass
class SpectralReport:
    """升序特征值与归一化数据；行列式字段由 fk_determinant 填入"""
    eigs: np.ndarray
    d_block: int
    n: int
    zero_tol: Optional[float] = None
    rank: Optional[int] = None
    log_det: Optional[float] = None
    det: Optional[float] = None
    exact_product: Optional[int] = None

    @property
    def size(self) -> int:
        return self.d_block * self.n

    def F(self, lam: float) -> float:
        """#{特征值 ≤ λ} / (d_block·n)"""
        return float(np.searchsorted(self.eigs, lam, side="right")) / self.size

    def first_moment(self) -> float:
        """∫ λ dF(λ)"""
        return float(np.sum(self.eigs)) / self.size

    def check_exact_product(self, rel_tol: float = 1e-6):
        """det^{d_block·n} 与精确积的相对误差，用对数比较以免溢出"""
        if self.exact_product is None or self.log_det is None:
            return
        diff = abs(self.log_det * self.size - math.log(self.exact_product))
        if diff > math.log1p(rel_tol):
            raise InvariantViolation(f"floating determinant disagrees with the exact product (log gap {diff:.3g})")

    def to_dict(self):
        return {"n": self.n, "d_block": self.d_block, "rank": self.rank, "zero_tol": self.zero_tol,
                "log_det": self.log_det, "det": self.det, "certificate": self.exact_product}


def gram(A: BlockKernel) -> BlockKernel:
    """AA*，断言 Hermite 与半正定"""
    G = kernel_mul(A, kernel_adjoint(A))
    diff = G.matrix - G.matrix.conj().T
    if G.exact:
        if diff.count_nonzero():
            raise InvariantViolation("gram kernel is not symmetric")
    else:
        scale = max(1.0, float(np.abs(G.matrix.data).max(initial=0.0)))
        if diff.nnz and float(np.abs(diff.data).max()) > get_numeric("hermitian_tol") * scale:
            raise InvariantViolation("gram kernel is not Hermitian")
    if G.size <= get_guard("dense_max_size") and G.matrix.nnz:
        eigs = np.linalg.eigvalsh(G.dense())
        lowest = float(eigs[0])
        if lowest < -get_numeric("psd_tol_factor") * max(1.0, float(eigs[-1])):
            raise InvariantViolation(f"gram kernel has eigenvalue {lowest} < 0")
    return G


def spectrum(G: BlockKernel, tol: Optional[float] = None) -> SpectralReport:
    """
    稠密对称特征值分解；超出规模保护时拒绝。
    tol 是零特征值阈值，记在报告上供 fk_determinant 使用，缺省时由 fk_determinant 按最大特征值定标。
    """
    limit = get_guard("dense_max_size")
    if G.size > limit:
        raise GuardRefusedError(f"dense spectrum limited to n·d_block <= {limit}, got {G.size}")
    if tol is not None and tol < 0:
        raise InputError(f"zero tolerance must be >= 0, got {tol}")
    try:
        eigs = np.linalg.eigvalsh(G.dense())
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"eigensolver failed: {e}") from None
    return SpectralReport(np.sort(eigs), G.d_block, G.n, zero_tol=tol)


def fk_determinant(report: SpectralReport, zero_tol: Optional[float] = None,
                   rank: Optional[int] = None) -> SpectralReport:
    """
    det = exp( Σ_{λ>0} ln λ / (d_block·n) )。给出精确秩时取最大的 rank 个特征值作为非零部分，
    否则以 zero_tol（缺省取 spectrum 记下的阈值）为界；没有非零特征值时 det = 1。
    """
    eigs = report.eigs
    top = float(eigs[-1]) if eigs.size else 0.0
    if zero_tol is None:
        zero_tol = report.zero_tol
    if zero_tol is None:
        zero_tol = get_numeric("zero_tol_factor") * max(1.0, top)
    if eigs.size and float(eigs[0]) < -zero_tol:
        raise InputError(f"operator is not positive semidefinite (eigenvalue {float(eigs[0])})")
    if rank is None:
        nonzero = eigs[eigs > zero_tol]
    else:
        if not 0 <= rank <= eigs.size:
            raise InputError(f"rank {rank} out of range for {eigs.size} eigenvalues")
        nonzero = eigs[eigs.size - rank:]
        if nonzero.size and float(nonzero[0]) <= 0:
            raise InvariantViolation("exact rank exceeds the number of positive eigenvalues")
    log_det = float(np.sum(np.log(nonzero))) / report.size
    report.zero_tol = zero_tol
    report.rank = int(nonzero.size)
    report.log_det = log_det
    report.det = math.exp(log_det)
    return report


# ---------------------------------------------------------------- 行列式猜想检查

@dataclass(frozen=True)
class BuilderSpec:
    """按规模生成作用：cyclic / torus / free-random，以及带 Bernoulli 标号的 bernoulli-cyclic"""
    preset: str
    d: int = 2
    k: int = 0
    seed: int = 0

    def __call__(self, n: int) -> FiniteAction:
        if self.preset == "bernoulli-cyclic":
            base = build_profinite("cyclic", n)
            return bernoulli_labeling(base, cyclic_word_table(self.k), self.k, self.seed)
        return build_profinite(self.preset, n, d=self.d, seed=self.seed, k=self.k)


@dataclass
class DetCheckRow:
    n: int
    d_block: int
    rank: Optional[int]
    log_det: Optional[float]
    det: Optional[float]
    certificate: Optional[int]
    op_norm: float
    moments: list
    eigs: Optional[np.ndarray] = None

    def to_dict(self):
        return {"n": self.n, "d_block": self.d_block, "rank": self.rank, "log_det": self.log_det,
                "det": self.det, "certificate": self.certificate, "op_norm": self.op_norm,
                "moments": self.moments}


@dataclass
class DetCheckReport:
    """
    certificates_ok 是三态：True 每个规模都有证书且 ≥ 1；False 出现 < 1 的证书；
    None 没有任何失败，但有规模未做精确证书（列在 uncertified_sizes）或规格不是整数
    """
    rows: list = field(default_factory=list)
    norm_bound: float = 0.0
    certificates_ok: Optional[bool] = None
    uncertified_sizes: list = field(default_factory=list)
    dets_ok: bool = True
    norms_bounded: bool = True
    moments_cauchy: bool = True
    moment_spread: list = field(default_factory=list)

    def to_dict(self):
        return {"rows": [row.to_dict() for row in self.rows], "norm_bound": self.norm_bound,
                "certificates_ok": self.certificates_ok, "uncertified_sizes": self.uncertified_sizes,
                "dets_ok": self.dets_ok, "norms_bounded": self.norms_bounded,
                "moments_cauchy": self.moments_cauchy, "moment_spread": self.moment_spread}


def _integer_rank(A: BlockKernel, G: BlockKernel, certify: bool):
    """(秩, 证书)；在证书规模保护之内做精确消元，否则只用模素数秩"""
    if certify and A.size <= get_guard("certificate_max_size"):
        return certificate_with_rank(A)
    if G.size <= get_guard("dense_max_size"):
        return modular_rank(G), None
    return None, None


def det_row(spec: FiniteTypeOperatorSpec, action: FiniteAction, m_max: int, certify: bool = True,
            keep_eigs: bool = False) -> DetCheckRow:
    A = instantiate(spec, action)
    G = gram(A)
    moment_values = moments(G, m_max)
    rank = certificate = eigs = None
    if A.is_integer:
        rank, certificate = _integer_rank(A, G, certify)
    log_det = det = None
    if G.size <= get_guard("dense_max_size"):
        report = spectrum(G)
        norm = float(np.abs(report.eigs).max(initial=0.0))
        fk_determinant(report, rank=rank)
        report.exact_product = certificate
        report.check_exact_product()
        log_det, det, rank = report.log_det, report.det, report.rank
        if keep_eigs:
            eigs = report.eigs
    else:
        warning(f"n·d_block = {G.size} 超出稠密谱的规模保护，只计算迹矩")
        try:
            norm = op_norm(G, check_bound=False)
        except NumericalError as e:
            warning(f"幂迭代未收敛，使用最后的估计 {e.estimate}")
            norm = e.estimate
    return DetCheckRow(action.n, A.d_block, rank, log_det, det, certificate, norm, moment_values, eigs)


def det_conjecture_check(spec: FiniteTypeOperatorSpec, builder: Union[Callable[[int], FiniteAction], BuilderSpec],
                         sizes: Sequence[int], m_max: int = 4, certify: bool = True,
                         keep_eigs: bool = False) -> DetCheckReport:
    """
    对每个规模实例化 A_i 并检查：精确证书 ≥ 1，‖A_iA_i*‖ 一致有界，Tr_*((A_iA_i*)^m) 在各规模间的差，
    并给出归一化行列式。

    整数规格在 n·d_block ≤ certificate_max_size 时逐规模做精确证书；certify=False 或超出保护的规模
    不算通过，记入 uncertified_sizes。keep_eigs 时每行保留 AA* 的特征值。
    """
    if not sizes:
        raise InputError("det check needs at least one size")
    if m_max < 1:
        raise InputError(f"m_max must be >= 1, got {m_max}")
    report = DetCheckReport(norm_bound=spec_norm_bound(spec) ** 2)
    for n in sizes:
        row = det_row(spec, builder(n), m_max, certify=certify, keep_eigs=keep_eigs)
        report.rows.append(row)
        debug(f"行列式检查: n={n}, det={row.det}, 证书={'有' if row.certificate is not None else '无'}")

    if spec.is_integer:
        report.uncertified_sizes = [row.n for row in report.rows if row.certificate is None]
        if any(row.certificate < 1 for row in report.rows if row.certificate is not None):
            report.certificates_ok = False
        elif not report.uncertified_sizes:
            report.certificates_ok = True
        else:
            warning(f"以下规模没有精确证书: {report.uncertified_sizes}")
        report.dets_ok = all(row.det is None or row.det >= 1 - 1e-6 for row in report.rows)
    report.norms_bounded = all(row.op_norm <= report.norm_bound + 1e-9 for row in report.rows)
    tol = get_numeric("moment_cauchy_tol")
    for m in range(m_max):
        values = [float(row.moments[m]) if not isinstance(row.moments[m], complex) else abs(row.moments[m])
                  for row in report.rows]
        report.moment_spread.append(max(values) - min(values))
    report.moments_cauchy = all(spread <= tol for spread in report.moment_spread)
    verdict = {True: "通过", False: "失败", None: "不完整"}[report.certificates_ok]
    info(f"行列式猜想检查完成: 规模 {list(sizes)}, 证书 {verdict}")
    return report
