"""Braidings on slot products and the kernel of the quadratic form.

Braidings between tensor blocks are assembled from the four base cases
by the hexagon recursions; on plain slots they are involutive and act
by pure products of exchange phases.  The kernel of id + partial dual
counts the quadratic relations: one per unordered mode pair, plus one
per fermion-like mode with q_i = -1.
"""

import numpy as np

from quonweyl import braiding, build_params, encode_index, quadratic_kernel
from quonweyl.tensorops import E, ESTAR

p = build_params(3, q=[0.5, 0.2, -0.4],
                 b=[[1, 1j, -1], [-1j, 1, 1j], [-1, -1j, 1]])
n = 3

# %% Moving one mode past a block multiplies the exchange phases.
psi = braiding(p, [E], [E, E])
col = encode_index((1, 2, 3), n)
row = encode_index((2, 3, 1), n)
print("psi(x1 (x) x2 (x) x3) phase:", psi.matrix[row, col],
      " = b_12*b_13 =", p.b[0, 1] * p.b[0, 2])

# %% Hexagon splits agree no matter how a block is cut.
lhs = braiding(p, [E, E], [E]).matrix
rhs = np.kron(braiding(p, [E], [E]).matrix, np.eye(n)) @ np.kron(
    np.eye(n), braiding(p, [E], [E]).matrix
)
print("hexagon residual (2+1 plain slots):", np.max(np.abs(lhs - rhs)))

# %% Plain-slot braidings are involutive.
fwd = braiding(p, [E, E], [E]).matrix
bwd = braiding(p, [E], [E, E]).matrix
print("double swap deviation from identity:", np.max(np.abs(bwd @ fwd - np.eye(27))))

# %% Mixed slots use the cross operator and its inverse.
cross = braiding(p, [ESTAR], [E]).matrix
inv = braiding(p, [E], [ESTAR]).matrix
print("cross * inverse deviation:", np.max(np.abs(inv @ cross - np.eye(9))))

# %% Quadratic relations: N(N-1)/2 generically, one more per q_i = -1.
report = quadratic_kernel(p)
print(f"N=3 generic kernel dimension: {report.dimension} (expect 3)")
p_f = build_params(3, q=[-1.0, 0.2, -1.0], b=np.ones((3, 3)))
print("with two fermion-like modes:", quadratic_kernel(p_f).dimension, "(expect 5)")
