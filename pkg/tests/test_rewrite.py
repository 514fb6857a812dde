import numpy as np
import pytest

from quonweyl import (
    CapError,
    WordSyntaxError,
    adjoint,
    build_params,
    format_polynomial,
    normal_order,
    parse_word,
    poly_multiply,
    rewrite_step,
    word_grade,
)
from quonweyl.rewrite import (
    Generator,
    NormalMonomial,
    NormalPolynomial,
    _find_redex,
    format_word,
)

from helpers import monomial_poly, random_params, random_word


def star(mode):
    return Generator(mode, True)


def plain(mode):
    return Generator(mode, False)


def test_parse_and_format_word():
    word = parse_word("a1 a*2  a3", 3)
    assert word == (plain(1), star(2), plain(3))
    assert format_word(word) == "a1 a*2 a3"
    assert parse_word("", 3) == ()


def test_parse_word_errors_carry_columns():
    with pytest.raises(WordSyntaxError) as info:
        parse_word("a1 b2", 3)
    assert info.value.column == 4
    with pytest.raises(WordSyntaxError) as info:
        parse_word("a*9", 2)
    assert info.value.column == 1
    with pytest.raises(WordSyntaxError):
        parse_word("a0", 2)


def test_rewrite_step_diagonal_pair():
    p = build_params(1, [0.5], [[1.0]])
    out = rewrite_step(p, (star(1), plain(1)), 0)
    assert out == [((), 1.0 + 0j), ((plain(1), star(1)), 0.5 + 0j)]


def test_rewrite_step_mixed_pair():
    rng = np.random.default_rng(3)
    p = random_params(rng, 2)
    out = rewrite_step(p, (star(1), plain(2)), 0)
    assert out == [((plain(2), star(1)), p.b[1, 0])]


def test_rewrite_step_sorting_pairs():
    rng = np.random.default_rng(5)
    p = random_params(rng, 2)
    out = rewrite_step(p, (plain(2), plain(1)), 0)
    assert out == [((plain(1), plain(2)), p.b[1, 0])]
    out = rewrite_step(p, (star(2), star(1)), 0)
    assert out == [((star(1), star(2)), p.b[1, 0])]


def test_rewrite_step_no_redex_and_bounds():
    p = build_params(2, [0, 0], np.ones((2, 2)))
    assert rewrite_step(p, (plain(1), plain(2)), 0) is None
    assert rewrite_step(p, (plain(1), star(1)), 0) is None
    with pytest.raises(IndexError):
        rewrite_step(p, (plain(1), plain(2)), 1)


def test_normal_order_single_mode_example():
    p = build_params(1, [0.5], [[1.0]])
    poly = normal_order(p, parse_word("a*1 a1 a1", 1))
    expected = monomial_poly((1,)).scale(1.5) + monomial_poly((2,), (1,)).scale(0.25)
    assert poly.allclose(expected, 1e-15)


def test_normal_order_trivial_words():
    p = build_params(2, [0.3, 0.4], np.ones((2, 2)))
    unit = normal_order(p, ())
    assert unit.allclose(NormalPolynomial.unit(2), 0)
    sorted_word = parse_word("a1 a2", 2)
    poly = normal_order(p, sorted_word)
    assert poly.allclose(monomial_poly((1, 1)), 0)


def test_normal_order_word_cap():
    p = build_params(1, [0.5], [[1.0]])
    with pytest.raises(CapError):
        normal_order(p, (plain(1),) * 17)


def test_normal_order_term_cap():
    p = build_params(1, [0.5], [[1.0]])
    word = parse_word("a*1 a1 " * 4, 1)
    with pytest.raises(CapError):
        normal_order(p, word, term_cap=2)


def test_rewrite_measure_strictly_decreases():
    def measure(word):
        sp = sum(
            1
            for a in range(len(word))
            for b in range(a + 1, len(word))
            if word[a].starred and not word[b].starred
        )
        def inversions(letters):
            return sum(
                1
                for a in range(len(letters))
                for b in range(a + 1, len(letters))
                if letters[a].mode > letters[b].mode
            )
        plains = [g for g in word if not g.starred]
        stars = [g for g in word if g.starred]
        return (sp, inversions(plains), inversions(stars))

    rng = np.random.default_rng(7)
    for _ in range(50):
        n = int(rng.integers(1, 4))
        p = random_params(rng, n)
        pending = [random_word(rng, n, 6)]
        steps = 0
        while pending:
            w = pending.pop()
            pos = _find_redex(w, "leftmost")
            if pos is None:
                continue
            before = measure(w)
            for w2, _coeff in rewrite_step(p, w, pos):
                assert measure(w2) < before
                pending.append(w2)
            steps += 1
            assert steps < 10_000


def test_confluence_on_random_words():
    rng = np.random.default_rng(11)
    for _ in range(60):
        n = int(rng.integers(1, 4))
        p = random_params(rng, n, hermitian=bool(rng.integers(0, 2)))
        word = random_word(rng, n, 8)
        left = normal_order(p, word, "leftmost")
        right = normal_order(p, word, "rightmost")
        assert left.max_coeff_diff(right) < 1e-12


def test_grade_preservation():
    rng = np.random.default_rng(13)
    for _ in range(40):
        n = int(rng.integers(1, 4))
        p = random_params(rng, n)
        word = random_word(rng, n, 7)
        target = word_grade(word, n).delta
        poly = normal_order(p, word)
        for mono in poly.terms:
            assert mono.grade().delta == target


def test_poly_multiply_examples():
    p = build_params(1, [0.5], [[1.0]])
    unit = NormalPolynomial.unit(1)
    x = monomial_poly((1,))
    xs = monomial_poly((0,), (1,))
    assert poly_multiply(p, unit, x).allclose(x, 0)
    assert poly_multiply(p, x, xs).allclose(monomial_poly((1,), (1,)), 0)
    expected = NormalPolynomial.unit(1) + monomial_poly((1,), (1,)).scale(0.5)
    assert poly_multiply(p, xs, x).allclose(expected, 1e-15)


def test_poly_multiply_associative():
    rng = np.random.default_rng(17)
    for _ in range(25):
        n = int(rng.integers(1, 4))
        p = random_params(rng, n)
        polys = []
        for _ in range(3):
            word = random_word(rng, n, 3)
            polys.append(normal_order(p, word))
        a, b, c = polys
        left = poly_multiply(p, poly_multiply(p, a, b), c)
        right = poly_multiply(p, a, poly_multiply(p, b, c))
        assert left.max_coeff_diff(right) < 1e-12


def test_adjoint_basics():
    rng = np.random.default_rng(19)
    p = random_params(rng, 2)
    x1 = monomial_poly((1, 0))
    assert adjoint(p, x1).allclose(monomial_poly((0, 0), (1, 0)), 0)
    alpha = 0.3 - 0.2j
    unit_scaled = NormalPolynomial.unit(2).scale(alpha)
    assert adjoint(p, unit_scaled).allclose(
        NormalPolynomial.unit(2).scale(alpha.conjugate()), 0
    )


def test_adjoint_of_sorted_pair_picks_up_sorting_phase():
    # (x1 x2)* = x*2 x*1, which canonicalizes with coefficient b_21
    rng = np.random.default_rng(23)
    p = random_params(rng, 2)
    result = adjoint(p, monomial_poly((1, 1)))
    expected = NormalPolynomial.monomial(
        NormalMonomial((0, 0), (1, 1)), p.b[1, 0]
    )
    assert result.allclose(expected, 1e-15)


def test_adjoint_is_involutive_for_hermitian_phases():
    rng = np.random.default_rng(29)
    for _ in range(20):
        n = int(rng.integers(1, 4))
        p = random_params(rng, n, hermitian=True)
        poly = normal_order(p, random_word(rng, n, 5))
        twice = adjoint(p, adjoint(p, poly))
        assert twice.max_coeff_diff(poly) < 1e-12


def test_polynomial_pruning_and_formatting():
    p = build_params(1, [0.5], [[1.0]])
    poly = normal_order(p, parse_word("a*1 a1", 1))
    assert format_polynomial(poly) == "1 + 0.5·a1 a*1"
    cancel = poly - poly
    assert cancel.terms == {}
    assert format_polynomial(cancel) == "0"
    assert format_polynomial(NormalPolynomial.unit(1)) == "1"
