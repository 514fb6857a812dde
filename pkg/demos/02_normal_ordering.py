"""Normal ordering words of creation and annihilation generators.

Plain tokens a1..aN multiply on the left (creation); starred tokens
a*1..a*N annihilate.  Normal ordering moves every starred generator to
the right and sorts modes ascending inside each block, accumulating the
exchange phases and the q-deformed contractions along the way.
"""

from quonweyl import (
    adjoint,
    build_params,
    format_polynomial,
    normal_order,
    parse_word,
    poly_multiply,
)

p = build_params(2, q=[0.5, -0.3], b=[[1, 1j], [-1j, 1]])

# %% The defining relation in one mode: a*1 a1 = 1 + q1 a1 a*1.
word = parse_word("a*1 a1", 2)
print("a*1 a1          ->", format_polynomial(normal_order(p, word)))

# %% A longer word branches: each diagonal contraction splits in two.
word = parse_word("a*1 a1 a1", 2)
print("a*1 a1 a1       ->", format_polynomial(normal_order(p, word)))

# %% Cross-mode moves only pick up phases.
word = parse_word("a*1 a2", 2)
print("a*1 a2          ->", format_polynomial(normal_order(p, word)))

# %% Leftmost and rightmost strategies reach the same canonical form.
word = parse_word("a*2 a1 a*1 a2 a1", 2)
left = normal_order(p, word, "leftmost")
right = normal_order(p, word, "rightmost")
print("a*2 a1 a*1 a2 a1 ->", format_polynomial(left))
print("strategy difference:", left.max_coeff_diff(right))

# %% Multiplication and the star conjugation work on canonical forms.
x1 = normal_order(p, parse_word("a1", 2))
x2 = normal_order(p, parse_word("a2", 2))
prod = poly_multiply(p, x2, x1)
print("a2 * a1         ->", format_polynomial(prod), "  (sorting phase b_21)")
print("(a1 a2)*        ->", format_polynomial(adjoint(p, poly_multiply(p, x1, x2))))
