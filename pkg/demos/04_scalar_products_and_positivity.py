"""Deformed scalar products, Gram spectra, and positivity.

The degree-n metric operator P_n is assembled recursively from the
partial-dual cross operator.  For one mode its value on x**n is the
q-factorial [n]_q!; for several modes the full tensor-basis Gram matrix
is only semidefinite (its kernel encodes the quadratic relations) while
the occupation-basis Gram matrix is the genuine Fock-space metric.
"""

import numpy as np

from quonweyl import (
    build_params,
    check_bozejko_speicher,
    gram_matrix,
    q_factorial,
    scalar_product,
)
from quonweyl.rewrite import NormalMonomial, NormalPolynomial

# %% One mode: norms are q-factorials, for any q in (-1, 1).
for q in (-0.9, 0.0, 0.5):
    p = build_params(1, [q], [[1.0]])
    norms = []
    for n in range(1, 6):
        xn = NormalPolynomial.monomial(NormalMonomial((n,), (0,)))
        norms.append(scalar_product(p, xn, xn).real)
    closed = [q_factorial(n, q) for n in range(1, 6)]
    print(f"q={q:+.1f}: <x^n, x^n> =", np.round(norms, 6), " max dev",
          np.max(np.abs(np.array(norms) - closed)))

# %% The fermionic endpoint q = -1 produces a null direction at degree 2.
p_f = build_params(1, [-1.0], [[1.0]])
report = gram_matrix(p_f, 2)
print("q=-1 degree-2 Gram:", report.matrix.real, "->", report.verdict)

# %% Two modes with a complex exchange phase.
theta = 0.8
p2 = build_params(2, [0.3, 0.3], [[1, np.exp(1j * theta)],
                                  [np.exp(-1j * theta), 1]])
full = gram_matrix(p2, 3, basis="tensor")
occ = gram_matrix(p2, 3, basis="occupation")
print(
    f"degree 3: tensor basis {full.matrix.shape[0]}x{full.matrix.shape[0]} "
    f"-> {full.verdict} (kernel {full.kernel_dim}); "
    f"occupation basis {occ.matrix.shape[0]}x{occ.matrix.shape[0]} "
    f"-> {occ.verdict}, min eig {occ.min_eigenvalue:.4f}"
)

# %% The operator conditions behind positivity.
cond = check_bozejko_speicher(p2)
print(
    f"self-adjoint residual {cond.self_adjoint_residual:.2e}, "
    f"norm {cond.spectral_norm:.6f}, "
    f"braid residual {cond.yang_baxter_residual:.2e} -> passed={cond.passed}"
)

# %% Non-unimodular phases are valid algebraically but break positivity.
p_bad = build_params(2, [0.0, 0.0], [[1, 2], [0.5, 1]])
cond = check_bozejko_speicher(p_bad)
print(
    f"reciprocal pair b_12=2: self-adjoint={cond.self_adjoint}, "
    f"norm={cond.spectral_norm}, verdict="
    + gram_matrix(p_bad, 2).verdict
)
