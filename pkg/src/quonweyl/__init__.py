"""Numerical engine for multi-mode q-deformed Weyl algebras.

The package builds the algebra of N coupled deformed oscillator modes
with per-mode parameters q_i and pairwise exchange phases b_ij, normal
orders words of its generators, represents them on a truncated
occupation basis, and certifies positivity of the deformed scalar
product.
"""

from .errors import (
    CapError,
    CommFactorError,
    DimensionError,
    QDomainError,
    QuonWeylError,
    SingularError,
    SizeCapError,
    SlotError,
    ThetaError,
    TruncationError,
    WordSyntaxError,
)
from .fock import (
    FockSpace,
    FockVector,
    LeibnizReport,
    OperatorMatrix,
    RelationResiduals,
    annihilate,
    check_leibniz,
    check_theorem_a,
    create,
    fock_to_poly,
    format_state,
    operator_matrix,
    parse_state,
    poly_on_vacuum,
    poly_to_fock,
    q_factorial,
    q_number,
)
from .gram import (
    GramReport,
    PositivityConditions,
    check_bozejko_speicher,
    gram_matrix,
    gram_projector,
    occupation_monomials,
    scalar_product,
)
from .params import (
    GradeVector,
    QuonParams,
    build_params,
    build_params_theta,
    load_params,
    monomial_grade,
    params_from_dict,
    params_to_dict,
)
from .rewrite import (
    Generator,
    NormalMonomial,
    NormalPolynomial,
    adjoint,
    format_polynomial,
    format_word,
    normal_order,
    parse_word,
    poly_multiply,
    rewrite_step,
    word_grade,
)
from .tensorops import (
    ConsistencyVerdict,
    KernelReport,
    TensorOperator,
    braid_op,
    braid_symmetrizer,
    braiding,
    check_consistency,
    cross_op,
    decode_index,
    encode_index,
    insertion_sum,
    partial_dual,
    quadratic_kernel,
)

__version__ = "0.1.0"
