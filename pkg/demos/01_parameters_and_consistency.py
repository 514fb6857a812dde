"""Building parameter sets and verifying the structural conditions.

A model is (N, q, b): one deformation parameter q_i in [-1, 1] per mode
and unit-product exchange phases b_ij between modes.  The derived cross
coefficients c (q on the diagonal, b off it) are the unique choice that
makes the braid, mixed, and relation conditions hold simultaneously.
"""

from quonweyl import (
    braid_op,
    build_params,
    build_params_theta,
    check_consistency,
    cross_op,
    encode_index,
)
from quonweyl.tensorops import E, ESTAR, TensorOperator

# %% A single q-deformed mode: the classic one-parameter oscillator.
p1 = build_params(1, q=[0.5], b=[[1.0]])
print("single mode, q = 0.5, cross coefficients:", p1.c)

# %% Two modes that commute up to a sign, each with its own q.
p2 = build_params(2, q=[0.4, -0.6], b=[[1, -1], [-1, 1]])
print("two modes, c =")
print(p2.c)

# %% Anyon-style phases from an integer matrix: b_ij = exp(2*pi*1j*theta_ij/order).
p3 = build_params_theta(2, q=[0.0, 0.0], theta=[[0, 1], [-1, 0]], order=4)
print("quarter-turn phases: b_12 =", p3.b[0, 1], " b_21 =", p3.b[1, 0])
print("hermitian phase matrix:", p3.hermitian_b)

# %% The three consistency conditions hold to machine precision...
for name, p in (("one mode", p1), ("sign pair", p2), ("anyon pair", p3)):
    verdict = check_consistency(braid_op(p), cross_op(p), tol=1e-12)
    print(
        f"{name}: braid {verdict.braid_residual:.2e}, "
        f"mixed {verdict.mixed_residual:.2e}, "
        f"relation {verdict.relation_residual:.2e} -> passed={verdict.passed}"
    )

# %% ...and fail loudly when a cross coefficient is tampered with.
mat = cross_op(p2).matrix.copy()
mat[encode_index((1, 2), 2), encode_index((2, 1), 2)] += 1e-3
tampered = TensorOperator((ESTAR, E), (E, ESTAR), 2, mat)
verdict = check_consistency(braid_op(p2), tampered)
print(f"perturbed c_12 by 1e-3: relation residual {verdict.relation_residual:.3e}")
