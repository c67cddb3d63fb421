"""
@FileName: test_spectral.py
@Description: 精确证书、模素数秩、谱分布、Fuglede–Kadison 行列式与逐规模检查
@Author: HengLine
@Time: 2026/10
"""
import math
from fractions import Fraction

import numpy as np
import pytest
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from soficlab.action.action_core import ActionMode, enumerate_words
from soficlab.build.profinite import build_profinite
from soficlab.core.exceptions import GuardRefusedError, InputError, InvariantViolation
from soficlab.operator.finite_type import FiniteTypeOperatorSpec, identity_spec, instantiate, word_sum_spec
from soficlab.operator.kernel import identity_kernel, kernel_scale, normalized_trace
from soficlab.spectral.certificate import (certificate_with_rank, exact_integer_certificate, exact_rank_and_product,
                                           modular_rank, rank_mod_p)
from soficlab.spectral.spectral_det import (BuilderSpec, SpectralReport, det_conjecture_check, fk_determinant, gram,
                                            spectrum)

from conftest import random_free_action

LAPLACIAN = word_sum_spec(["e", "1", "-1"], [2, -1, -1])


def _laplacian(n: int):
    return instantiate(LAPLACIAN, build_profinite("cyclic", n))


def test_certificates_of_small_kernels():
    assert exact_integer_certificate(_laplacian(4), of_gram=False) == 16
    assert exact_integer_certificate(_laplacian(4)) == 256
    assert exact_integer_certificate(instantiate(identity_spec(), build_profinite("cyclic", 7))) == 1
    doubled = kernel_scale(identity_kernel(build_profinite("cyclic", 5)), 2)
    assert exact_integer_certificate(doubled) == 4 ** 5


def test_cycle_laplacian_gram_certificate_counts_spanning_trees():
    for n in (5, 8, 11):
        rank, product = certificate_with_rank(_laplacian(n))
        assert (rank, product) == (n - 1, n ** 4)


def test_exact_rank_and_product_on_plain_matrices():
    assert exact_rank_and_product(np.array([[2, 2], [2, 2]])) == (1, 4)
    assert exact_rank_and_product(np.zeros((3, 3), dtype=np.int64)) == (0, 1)
    with pytest.raises(InputError):
        exact_rank_and_product(np.array([[1, 2], [0, 1]]))


def test_modular_rank_matches_the_exact_rank():
    assert modular_rank(np.array([[2, 4], [1, 2]])) == 1
    assert modular_rank(np.array([[1, 0], [0, 0]])) == 1
    G = gram(_laplacian(9))
    assert modular_rank(G) == certificate_with_rank(_laplacian(9))[0] == 8


def test_certificates_need_integer_kernels():
    halved = instantiate(word_sum_spec(["1"], [0.5]), build_profinite("cyclic", 4))
    with pytest.raises(InputError):
        exact_integer_certificate(halved)


def test_size_guards():
    big = identity_kernel(build_profinite("cyclic", 2001))
    with pytest.raises(GuardRefusedError):
        spectrum(big)
    with pytest.raises(GuardRefusedError):
        certificate_with_rank(big)


def test_spectrum_and_distribution_function():
    n = 8
    report = spectrum(gram(_laplacian(n)))
    assert report.size == n
    assert report.F(-1.0) == 0.0
    assert report.F(1e-6) == pytest.approx(1 / n)
    assert report.F(float(report.eigs[-1]) + 1) == 1.0
    assert report.first_moment() == pytest.approx(6.0)


def test_fk_determinant_of_the_cycle_laplacian():
    n = 8
    report = fk_determinant(spectrum(gram(_laplacian(n))))
    assert report.rank == n - 1
    assert report.det == pytest.approx(n ** (4 / n), rel=1e-9)
    report.exact_product = n ** 4
    report.check_exact_product()


def test_fk_determinant_with_a_given_rank():
    report = fk_determinant(SpectralReport(np.array([0.0, 1e-3, 4.0]), 1, 3), rank=1)
    assert report.det == pytest.approx(4 ** (1 / 3))
    with pytest.raises(InvariantViolation):
        fk_determinant(SpectralReport(np.array([0.0, 0.0, 4.0]), 1, 3), rank=2)


def test_fk_determinant_edge_cases():
    assert fk_determinant(SpectralReport(np.zeros(4), 1, 4)).det == 1.0
    with pytest.raises(InputError):
        fk_determinant(SpectralReport(np.array([-1.0, 2.0]), 1, 2))


def test_exact_product_mismatch_is_reported():
    report = fk_determinant(SpectralReport(np.array([2.0, 8.0]), 1, 2))
    report.exact_product = 16
    report.check_exact_product()
    report.exact_product = 17
    with pytest.raises(InvariantViolation):
        report.check_exact_product()


def test_det_check_on_cycle_laplacians():
    sizes = (8, 12, 16)
    report = det_conjecture_check(LAPLACIAN, BuilderSpec("cyclic"), sizes, m_max=2)
    assert report.norm_bound == 16.0
    assert report.certificates_ok and report.dets_ok and report.norms_bounded
    assert report.moments_cauchy
    for row, n in zip(report.rows, sizes):
        assert row.certificate == n ** 4
        assert row.rank == n - 1
        assert row.det == pytest.approx(n ** (4 / n), rel=1e-9)
        assert row.moments == [6, 70]
    dets = [row.det for row in report.rows]
    assert dets == sorted(dets, reverse=True)


def test_det_check_arguments():
    with pytest.raises(InputError):
        det_conjecture_check(LAPLACIAN, BuilderSpec("cyclic"), [])
    with pytest.raises(InputError):
        det_conjecture_check(LAPLACIAN, BuilderSpec("cyclic"), [8], m_max=0)


def test_builder_spec_presets():
    labelled = BuilderSpec("bernoulli-cyclic", k=2, seed=1)(10)
    assert (labelled.n, labelled.k) == (10, 2)
    assert BuilderSpec("torus")(9).d == 2
    assert BuilderSpec("free-random", d=3, seed=5)(20) == build_profinite("free-random", 20, d=3, seed=5)


def test_det_check_row_serializes():
    report = det_conjecture_check(LAPLACIAN, BuilderSpec("cyclic"), [6], m_max=1)
    row = report.to_dict()["rows"][0]
    assert row["n"] == 6 and row["certificate"] == 6 ** 4
    assert math.isfinite(row["log_det"])


def test_det_check_certifies_every_size_within_the_guard():
    # 几百阶的规模也逐个给出证书
    report = det_conjecture_check(LAPLACIAN, BuilderSpec("cyclic"), [8, 260], m_max=1)
    assert [row.certificate for row in report.rows] == [8 ** 4, 260 ** 4]
    assert report.certificates_ok is True
    assert report.uncertified_sizes == []


def test_skipped_certificates_are_not_a_pass():
    report = det_conjecture_check(LAPLACIAN, BuilderSpec("cyclic"), [8, 12], m_max=1, certify=False)
    assert [row.certificate for row in report.rows] == [None, None]
    # 模素数秩照样给出核的维数
    assert [row.rank for row in report.rows] == [7, 11]
    assert report.uncertified_sizes == [8, 12]
    assert report.certificates_ok is None
    assert report.to_dict()["certificates_ok"] is None


def test_det_check_of_a_rational_spec_has_no_certificates():
    half = word_sum_spec(["e", "1"], [Fraction(1, 2), 1])
    report = det_conjecture_check(half, BuilderSpec("cyclic"), [6], m_max=1)
    assert report.rows[0].certificate is None
    assert report.certificates_ok is None and report.uncertified_sizes == []


def test_det_check_keeps_eigenvalues_on_request():
    report = det_conjecture_check(LAPLACIAN, BuilderSpec("cyclic"), [6, 9], m_max=1, keep_eigs=True)
    assert [len(row.eigs) for row in report.rows] == [6, 9]
    assert "eigs" not in report.rows[0].to_dict()
    assert det_conjecture_check(LAPLACIAN, BuilderSpec("cyclic"), [6], m_max=1).rows[0].eigs is None


def test_rank_mod_p_works_over_the_prime_field():
    assert rank_mod_p(np.array([[2, 0], [0, 2]]), 2) == 0
    assert rank_mod_p(np.array([[2, 0], [0, 3]]), 3) == 1
    assert rank_mod_p(np.array([[2, 0], [0, 3]]), 5) == 2
    assert rank_mod_p(np.zeros((0, 0), dtype=np.int64), 7) == 0


def test_exact_product_is_the_lowest_characteristic_coefficient():
    rng = np.random.default_rng(31)
    for _ in range(20):
        m = rng.integers(-2, 3, size=(6, int(rng.integers(1, 7))))
        G = m @ m.T
        rank, product = exact_rank_and_product(G)
        coefficients = [int(c) for c in DomainMatrix.from_list(G.tolist(), ZZ).charpoly()]
        # det(λI - G) = λ^6 + … + c·λ^{6-ρ}，其后各项为 0
        assert all(c == 0 for c in coefficients[rank + 1:])
        assert product == abs(coefficients[rank])
        assert rank == np.linalg.matrix_rank(G)


def test_spectrum_records_the_zero_tolerance():
    G = gram(_laplacian(8))
    report = spectrum(G, tol=0.1)
    assert report.zero_tol == 0.1
    assert fk_determinant(report).rank == 7
    # 阈值大于最小的非零特征值时，它被当成零
    smallest_nonzero = float(report.eigs[1])
    coarse = fk_determinant(spectrum(G, tol=smallest_nonzero + 1e-9))
    assert coarse.rank < 7
    with pytest.raises(InputError):
        spectrum(G, tol=-1.0)


def test_spectral_sums_match_the_normalized_trace():
    rng = np.random.default_rng(404)
    for case in range(30):
        d_block = int(rng.integers(1, 3))
        table = {}
        for w in enumerate_words(2, 1, ActionMode.FREE):
            block = rng.integers(-2, 3, size=(d_block, d_block))
            table[(None, w)] = [[int(x) for x in row] for row in block]
        A = instantiate(FiniteTypeOperatorSpec(1, d_block, table), random_free_action(case, 4 + case, 2, 0))
        G = gram(A)
        trace = float(normalized_trace(G))
        report = spectrum(G)
        assert float(np.sum(report.eigs)) == pytest.approx(report.size * trace, rel=1e-9, abs=1e-9)
        assert report.first_moment() == pytest.approx(trace, rel=1e-9, abs=1e-12)
