import numpy as np
import pytest

from quonweyl import (
    FockSpace,
    build_params,
    check_bozejko_speicher,
    encode_index,
    gram_matrix,
    gram_projector,
    operator_matrix,
    partial_dual,
    cross_op,
    q_factorial,
    quadratic_kernel,
    scalar_product,
)
from quonweyl.errors import SizeCapError
from quonweyl.gram import occupation_monomials
from quonweyl.rewrite import Generator, NormalPolynomial

from helpers import max_abs, monomial_poly, random_params


def test_projector_base_cases():
    rng = np.random.default_rng(3)
    p = random_params(rng, 2)
    assert np.allclose(gram_projector(p, 0).matrix, [[1.0]])
    assert np.allclose(gram_projector(p, 1).matrix, np.eye(2))
    expected = np.eye(4, dtype=complex) + partial_dual(cross_op(p)).matrix
    assert np.allclose(gram_projector(p, 2).matrix, expected)


def test_projector_single_mode_factorials():
    for q in (-0.9, -0.5, 0.0, 0.5, 0.9):
        p = build_params(1, [q], [[1.0]])
        for n in range(1, 9):
            value = gram_projector(p, n).matrix[0, 0].real
            assert abs(value - q_factorial(n, q)) < 1e-12 * max(
                1.0, abs(q_factorial(n, q))
            )


def test_scalar_product_orthonormal_degree_one():
    rng = np.random.default_rng(5)
    p = random_params(rng, 2)
    x1 = monomial_poly((1, 0))
    x2 = monomial_poly((0, 1))
    assert abs(scalar_product(p, x1, x1) - 1.0) < 1e-14
    assert abs(scalar_product(p, x1, x2)) < 1e-14


def test_scalar_product_cross_degree_vanishes():
    p = build_params(1, [0.5], [[1.0]])
    assert scalar_product(p, monomial_poly((1,)), monomial_poly((2,))) == 0


def test_scalar_product_is_sesquilinear_in_first_slot():
    rng = np.random.default_rng(7)
    p = random_params(rng, 2)
    s = monomial_poly((1, 1)).scale(2.0 - 1.0j)
    t = monomial_poly((1, 1))
    direct = scalar_product(p, s, t)
    base = scalar_product(p, monomial_poly((1, 1)), t)
    assert abs(direct - (2.0 - 1.0j).conjugate() * base) < 1e-12


def test_scalar_product_factorial_law():
    for q in (-0.9, -0.5, 0.0, 0.5, 0.9):
        p = build_params(1, [q], [[1.0]])
        previous = 1.0
        for n in range(1, 9):
            xn = monomial_poly((n,))
            value = scalar_product(p, xn, xn).real
            closed = q_factorial(n, q)
            assert abs(value - closed) <= 1e-12 * max(1.0, abs(closed))
            if previous != 0:
                from quonweyl import q_number

                ratio = value / previous
                assert abs(ratio - q_number(n, q)) < 1e-12 * max(1.0, abs(ratio))
            previous = value


def test_gram_single_mode_examples():
    p = build_params(1, [0.5], [[1.0]])
    report = gram_matrix(p, 2)
    assert report.matrix.shape == (1, 1)
    assert abs(report.matrix[0, 0] - 1.5) < 1e-14
    assert report.verdict == "positive_definite"

    p_f = build_params(1, [-1.0], [[1.0]])
    report = gram_matrix(p_f, 2)
    assert abs(report.matrix[0, 0]) < 1e-14
    assert report.verdict == "positive_semidefinite"
    assert report.kernel_dim == 1


def test_gram_two_mode_phase_block():
    theta = 0.7
    b12 = np.exp(1j * theta)
    p = build_params(2, [0.0, 0.0], [[1, b12], [np.conj(b12), 1]])
    report = gram_matrix(p, 2)
    i12 = encode_index((1, 2), 2)
    i21 = encode_index((2, 1), 2)
    block = report.matrix[np.ix_([i12, i21], [i12, i21])]
    assert abs(block[0, 0] - 1.0) < 1e-14
    assert abs(block[0, 1] - np.conj(b12)) < 1e-14
    assert abs(block[1, 0] - b12) < 1e-14
    eigs = np.linalg.eigvalsh(block)
    assert max_abs(eigs - np.array([0.0, 2.0])) < 1e-12
    kernel = np.array([1.0, -b12]) / np.sqrt(2.0)
    assert max_abs(block @ kernel) < 1e-12
    assert report.verdict == "positive_semidefinite"
    occ = gram_matrix(p, 2, basis="occupation")
    assert occ.verdict == "positive_definite"


def test_gram_kernel_matches_quadratic_relations():
    rng = np.random.default_rng(11)
    for _ in range(10):
        n = int(rng.integers(1, 4))
        p = random_params(rng, n)
        report = gram_matrix(p, 2)
        assert report.kernel_dim == quadratic_kernel(p).dimension


def test_gram_hermiticity_negative_case():
    p = build_params(2, [0.0, 0.0], [[1, 2], [0.5, 1]])
    report = gram_matrix(p, 2)
    assert report.hermiticity_residual > 1e-6
    assert report.verdict == "not_applicable"
    assert not report.hermitian_applicable
    rng = np.random.default_rng(43)
    for _ in range(5):
        p_rand = random_params(rng, 2, hermitian=False)
        assert gram_matrix(p_rand, 2).hermiticity_residual > 1e-6


def test_gram_occupation_equals_fock_expectations():
    rng = np.random.default_rng(13)
    for _ in range(6):
        n = int(rng.integers(1, 3))
        p = random_params(rng, n, hermitian=True)
        for degree in range(1, 5):
            occ = gram_matrix(p, degree, basis="occupation")
            monos = occupation_monomials(n, degree)
            space = FockSpace(p, degree)
            vac = space.index[(0,) * n]
            fock = np.zeros((len(monos), len(monos)), dtype=complex)
            for a, sa in enumerate(monos):
                for b_, sb in enumerate(monos):
                    word = []
                    for mode in range(n, 0, -1):
                        word.extend([Generator(mode, True)] * sa[mode - 1])
                    for mode in range(1, n + 1):
                        word.extend([Generator(mode, False)] * sb[mode - 1])
                    op = operator_matrix(space, tuple(word))
                    fock[a, b_] = op.matrix[vac, vac]
            assert max_abs(occ.matrix - fock) < 1e-10


def test_gram_normalized_diagnostics():
    p = build_params(1, [0.5], [[1.0]])
    report = gram_matrix(p, 3, normalized=True)
    assert report.normalized_min is not None
    assert abs(report.normalized_min - 1.0) < 1e-12


def test_gram_size_cap():
    p = build_params(3, [0, 0, 0], np.ones((3, 3)))
    with pytest.raises(SizeCapError):
        gram_matrix(p, 9)


def test_positivity_conditions_hermitian_unimodular():
    rng = np.random.default_rng(17)
    for n in (1, 2, 3):
        p = random_params(rng, n, hermitian=True)
        report = check_bozejko_speicher(p)
        assert report.passed
        expected_norm = max(
            float(np.max(np.abs(p.q))), 1.0 if n > 1 else float(np.abs(p.q[0]))
        )
        assert abs(report.spectral_norm - expected_norm) < 1e-12


def test_positivity_conditions_flag_nonunimodular_phases():
    p = build_params(2, [0.0, 0.0], [[1, 2], [0.5, 1]])
    report = check_bozejko_speicher(p)
    assert not report.self_adjoint
    assert abs(report.spectral_norm - 2.0) < 1e-12
    assert not report.norm_le_one
    assert not report.passed


def test_positivity_conditions_classical_boundary():
    p = build_params(2, [0.0, 0.0], np.ones((2, 2)))
    report = check_bozejko_speicher(p)
    assert report.passed
    assert abs(report.spectral_norm - 1.0) < 1e-12


def test_scalar_product_rejects_starred_input():
    p = build_params(1, [0.5], [[1.0]])
    starred = NormalPolynomial.monomial(
        __import__("quonweyl").NormalMonomial((0,), (1,))
    )
    with pytest.raises(ValueError):
        scalar_product(p, starred, starred)
