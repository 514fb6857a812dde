import json

import numpy as np
import pytest

from quonweyl import (
    CommFactorError,
    DimensionError,
    QDomainError,
    ThetaError,
    build_params,
    build_params_theta,
    load_params,
    monomial_grade,
    params_from_dict,
    params_to_dict,
)
from quonweyl.errors import QuonWeylError

from helpers import random_params


def test_single_mode_assembly():
    p = build_params(1, [0.5], [[1.0]])
    assert p.c[0, 0] == 0.5
    assert p.hermitian_b


def test_two_mode_plus_minus():
    p = build_params(2, [0.3, -0.7], [[1, -1], [-1, 1]])
    expected = np.array([[0.3, -1.0], [-1.0, -0.7]], dtype=complex)
    assert np.allclose(p.c, expected)
    assert p.hermitian_b


def test_reciprocal_nonunimodular_pair_is_valid():
    p = build_params(2, [0.0, 0.0], [[1, 2], [0.5, 1]])
    assert not p.hermitian_b
    assert p.c[0, 1] == 2.0 and p.c[1, 0] == 0.5


def test_q_domain_error():
    with pytest.raises(QDomainError):
        build_params(1, [1.0000001], [[1.0]])
    with pytest.raises(QDomainError):
        build_params(2, [0.0, -1.5], np.ones((2, 2)))


def test_comm_factor_errors():
    with pytest.raises(CommFactorError):
        build_params(2, [0, 0], [[1, 2], [0.499, 1]])
    with pytest.raises(CommFactorError):
        build_params(2, [0, 0], [[1.5, 1], [1, 1]])


def test_dimension_errors():
    with pytest.raises(DimensionError):
        build_params(2, [0.0], np.ones((2, 2)))
    with pytest.raises(DimensionError):
        build_params(2, [0.0, 0.0], np.ones((3, 3)))
    with pytest.raises(DimensionError):
        build_params(0, [], np.ones((0, 0)))


def test_cross_reciprocity_for_random_draws():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(1, 5))
        p = random_params(rng, n, hermitian=bool(rng.integers(0, 2)))
        for i in range(n):
            for j in range(n):
                if i != j:
                    assert abs(p.c[i, j] * p.b[j, i] - 1.0) < 1e-12


def test_endpoint_flags():
    p = build_params(2, [-1.0, 0.5], np.ones((2, 2)))
    assert p.endpoint_modes == (1,)
    p = build_params(2, [1.0, -1.0], np.ones((2, 2)))
    assert p.endpoint_modes == (1, 2)


def test_theta_quarter_turn():
    p = build_params_theta(2, [0.0, 0.0], [[0, 1], [-1, 0]], 4)
    assert abs(p.b[0, 1] - 1j) < 1e-12
    assert abs(p.b[1, 0] + 1j) < 1e-12
    assert abs(p.b[0, 1] * p.b[1, 0] - 1.0) < 1e-12
    assert p.hermitian_b


def test_theta_half_turn_gives_minus_one():
    p = build_params_theta(2, [0.0, 0.0], [[0, 2], [-2, 0]], 4)
    assert abs(p.b[0, 1] + 1.0) < 1e-12


def test_theta_zero_matrix_any_order():
    for order in (1, 3, 7):
        p = build_params_theta(3, [0.1, 0.2, 0.3], np.zeros((3, 3), dtype=int), order)
        assert np.allclose(p.b, np.ones((3, 3)))


def test_theta_antisymmetric_mod_order():
    # 3 = -1 mod 4 is fine, 2 is not the negation of 1 mod 4
    build_params_theta(2, [0, 0], [[0, 1], [3, 0]], 4)
    with pytest.raises(ThetaError):
        build_params_theta(2, [0, 0], [[0, 1], [2, 0]], 4)
    with pytest.raises(ThetaError):
        build_params_theta(2, [0, 0], [[0, 1], [-1, 0]], 0)


def test_theta_axioms_hold_for_random_draws():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(2, 5))
        order = int(rng.integers(1, 12))
        upper = rng.integers(-2 * order, 2 * order, (n, n))
        theta = np.triu(upper, 1)
        theta = theta - theta.T
        p = build_params_theta(n, np.zeros(n), theta, order)
        assert p.hermitian_b
        prod = p.b * p.b.T
        assert np.max(np.abs(prod - 1.0)) < 1e-12


def test_monomial_grade():
    g = monomial_grade((2, 0), (0, 1))
    assert g.delta == (2, -1)
    assert monomial_grade((1, 2), (1, 2)).delta == (0, 0)
    assert monomial_grade((0, 0, 0), (0, 0, 0)).delta == (0, 0, 0)
    with pytest.raises(DimensionError):
        monomial_grade((1, 0), (0,))


def test_grade_additivity():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a_p, a_s = rng.integers(0, 4, 3), rng.integers(0, 4, 3)
        b_p, b_s = rng.integers(0, 4, 3), rng.integers(0, 4, 3)
        left = monomial_grade(a_p, a_s) + monomial_grade(b_p, b_s)
        combined = monomial_grade(a_p + b_p, a_s + b_s)
        assert left.delta == combined.delta


def test_params_key_is_stable():
    p1 = build_params(2, [0.1, 0.2], np.ones((2, 2)))
    p2 = build_params(2, [0.1, 0.2], np.ones((2, 2)))
    p3 = build_params(2, [0.1, 0.3], np.ones((2, 2)))
    assert p1 == p2 and p1.key == p2.key
    assert p1 != p3


def test_params_file_b_form(tmp_path):
    doc = {
        "n_modes": 2,
        "q": [0.5, -0.5],
        "b": [[[1, 0], [0, 1]], [[0, -1], [1, 0]]],
    }
    path = tmp_path / "params.json"
    path.write_text(json.dumps(doc))
    p = load_params(path)
    assert abs(p.b[0, 1] - 1j) < 1e-15
    echo = params_to_dict(p)
    assert echo["n_modes"] == 2
    assert echo["b"][0][1] == [0.0, 1.0]


def test_params_file_theta_form(tmp_path):
    doc = {"n_modes": 2, "q": [0, 0], "theta": [[0, 1], [-1, 0]], "order": 4}
    path = tmp_path / "params.json"
    path.write_text(json.dumps(doc))
    p = load_params(path)
    assert abs(p.b[0, 1] - 1j) < 1e-12


def test_params_file_exactly_one_form():
    with pytest.raises(QuonWeylError):
        params_from_dict(
            {"n_modes": 1, "q": [0], "b": [[1]], "theta": [[0]], "order": 2}
        )
    with pytest.raises(QuonWeylError):
        params_from_dict({"n_modes": 1, "q": [0]})
    with pytest.raises(QuonWeylError):
        params_from_dict({"n_modes": 1, "q": [0], "theta": [[0]]})


def test_params_file_reports_line_on_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"n_modes": 1,\n "q": [0],,}')
    with pytest.raises(QuonWeylError, match="line"):
        load_params(path)
