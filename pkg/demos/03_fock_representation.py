"""The truncated occupation-number representation.

States |n1,...,nN> live below a total-degree truncation D.  Creation
and annihilation act with exchange phases and deformed numbers [n]_q,
and the commutation relations of the algebra hold exactly on every
state far enough from the truncation boundary.
"""

import numpy as np

from quonweyl import (
    FockSpace,
    FockVector,
    annihilate,
    build_params,
    check_theorem_a,
    create,
    format_state,
    operator_matrix,
    parse_word,
    q_number,
)

p = build_params(2, q=[0.5, -0.3], b=[[1, 1j], [-1j, 1]])
space = FockSpace(p, truncation=6)
print(f"basis: {space.dim} states of degree <= 6;", "first few:",
      [format_state(s) for s in space.basis[:5]])

# %% Ladder action: phases appear when a mode crosses occupied lower modes.
vec = FockVector({(2, 0): 1.0})
up = create(space, 2, vec)
print("a2 |2,0> =", up)          # phase b_21**2
down = annihilate(space, 2, up)
print("a*2 a2 |2,0> =", down)    # the phases cancel, eigenvalue [1]

# %% Deformed occupation numbers.
for n in range(5):
    print(f"[{n}]_0.5 = {q_number(n, 0.5):.6f}", end="  ")
print()

# %% Word matrices on the truncated basis carry a validity mask:
# columns that would create past the top degree are flagged, not zeroed.
op = operator_matrix(space, parse_word("a1", 2))
print("creation word a1:", int(np.sum(~op.valid)), "boundary-invalid columns")

# the number word a1 a*1 is diagonal with entries [n1]_q1
num = operator_matrix(space, parse_word("a1 a*1", 2))
off_diagonal = num.matrix - np.diag(np.diag(num.matrix))
print("a1 a*1 off-diagonal magnitude:", np.max(np.abs(off_diagonal)))

# %% The commutation relations of the algebra hold on degree <= D-2.
report = check_theorem_a(space)
print(
    f"relation residuals: mixed {report.mixed:.2e}, plain {report.plain:.2e}, "
    f"star {report.star:.2e} on {report.n_columns} states"
)
