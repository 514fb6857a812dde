"""Shared draws and independent oracles for the test suite."""

import numpy as np

from quonweyl import build_params
from quonweyl.rewrite import Generator, NormalMonomial, NormalPolynomial, normal_order
from quonweyl.tensorops import braid_op


def random_params(rng, n_modes, hermitian=True, q_range=(-0.95, 0.95)):
    """Draw a valid parameter set; non-hermitian draws get random moduli."""
    q = rng.uniform(*q_range, n_modes)
    a = rng.uniform(0.0, 2.0 * np.pi, (n_modes, n_modes))
    b = np.exp(1j * (a - a.T))
    if not hermitian:
        for i in range(n_modes):
            for j in range(i + 1, n_modes):
                r = rng.uniform(0.5, 2.0)
                b[i, j] *= r
                b[j, i] /= r
    return build_params(n_modes, q, b)


def random_word(rng, n_modes, max_len):
    length = int(rng.integers(0, max_len + 1))
    return tuple(
        Generator(int(rng.integers(1, n_modes + 1)), bool(rng.integers(0, 2)))
        for _ in range(length)
    )


def monomial_poly(plain, star=None):
    plain = tuple(plain)
    star = tuple(star) if star is not None else (0,) * len(plain)
    return NormalPolynomial.monomial(NormalMonomial(plain, star))


def single_mode_poly(mode, n_modes):
    plain = tuple(1 if m == mode else 0 for m in range(1, n_modes + 1))
    return monomial_poly(plain)


# ------------------------------------------------------------- oracles


def ev_oracle(params, star_mode, modes):
    """Recursive right-evaluation of one star generator into a plain
    tensor word, written independently of the package internals.

    Returns a dict mapping shorter mode tuples to coefficients:
    ev(x*_i (x) x_j (x) rest) = delta_ij rest + c_ji x_j (x) ev(x*_i (x) rest).
    """
    if not modes:
        return {}
    j = modes[0]
    out = {}
    if j == star_mode:
        out[modes[1:]] = out.get(modes[1:], 0j) + 1.0
    inner = ev_oracle(params, star_mode, modes[1:])
    cji = params.c[j - 1, star_mode - 1]
    for rest, coeff in inner.items():
        key = (j,) + rest
        out[key] = out.get(key, 0j) + cji * coeff
    return out


def quotient_of_tensor(params, tensor_terms):
    """Map a plain tensor combination to occupation amplitudes.

    Each mode word is sorted through the rewrite engine so the phases of
    the quotient are exactly the sorting phases.
    """
    out = {}
    for modes, coeff in tensor_terms.items():
        word = tuple(Generator(m, False) for m in modes)
        poly = normal_order(params, word)
        assert len(poly.terms) == 1
        ((mono, phase),) = poly.terms.items()
        key = mono.plain
        out[key] = out.get(key, 0j) + coeff * phase
    return {k: v for k, v in out.items() if abs(v) > 1e-15}


def reduced_word_of_permutation(perm):
    """Adjacent-swap positions bubble-sorting the permutation; its length
    equals the inversion count, so the word is reduced."""
    word = []
    p = list(perm)
    changed = True
    while changed:
        changed = False
        for m in range(len(p) - 1):
            if p[m] > p[m + 1]:
                p[m], p[m + 1] = p[m + 1], p[m]
                word.append(m)
                changed = True
    return word


def lift_two_slot(mat, dim, n_slots, pos):
    """Embed a two-slot matrix at 1-based slot position pos."""
    left = np.eye(dim ** (pos - 1), dtype=complex)
    right = np.eye(dim ** (n_slots - pos - 1), dtype=complex)
    return np.kron(np.kron(left, mat), right)


def symmetrizer_by_enumeration(params, k):
    """Sum of braided lifts over all k! permutations, one reduced word
    each; the independent oracle for the recursive product form."""
    from itertools import permutations

    n = params.n_modes
    bmat = braid_op(params).matrix
    dim = n**k
    total = np.zeros((dim, dim), dtype=complex)
    for perm in permutations(range(k)):
        mat = np.eye(dim, dtype=complex)
        for pos in reduced_word_of_permutation(perm):
            mat = mat @ lift_two_slot(bmat, n, k, pos + 1)
        total += mat
    return total


def max_abs(arr):
    arr = np.asarray(arr)
    return float(np.max(np.abs(arr))) if arr.size else 0.0
