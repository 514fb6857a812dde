"""Deformed scalar products, Gram matrices, and positivity certification.

The degree-n metric operator is built by the recursive product form
P_n = (id (x) P_{n-1}) . R_n with P_1 = id, where R_n is the staircase
insertion sum of the partial-dual cross operator.  For a single mode
this collapses to the scalar q-factorial [n]_q!, which is the oracle
that pins down the recursion indexing.  The Gram matrix of degree n is
the matrix of P_n in the orthonormal tensor basis; restricted to the
occupation monomials it is the metric of the actual Fock space.
"""

from dataclasses import dataclass

import numpy as np

from .errors import SizeCapError
from .params import QuonParams
from .rewrite import NormalPolynomial
from .tensorops import (
    DEFAULT_SIZE_CAP,
    E,
    TensorOperator,
    _cached,
    check_size_cap,
    encode_index,
    insertion_sum,
)

HERMITICITY_TOL = 1e-12
KERNEL_WINDOW = 1e-10


def gram_projector(
    params: QuonParams, n: int, size_cap: int = DEFAULT_SIZE_CAP
) -> TensorOperator:
    """Metric operator on n plain slots; degree 0 gives the scalar 1."""
    if n < 0:
        raise SizeCapError(f"degree must be nonnegative, got {n}")
    dim = params.n_modes ** n
    check_size_cap(dim, size_cap)

    def build():
        if n == 0:
            return np.eye(1, dtype=complex)
        if n == 1:
            return np.eye(params.n_modes, dtype=complex)
        prev = gram_projector(params, n - 1, size_cap).matrix
        rn = insertion_sum(params, n, size_cap).matrix
        return np.kron(np.eye(params.n_modes, dtype=complex), prev) @ rn

    mat = _cached((params.key, "gramP", n), build)
    slots = (E,) * n
    return TensorOperator(slots, slots, params.n_modes, mat)


def _degree_vectors(params: QuonParams, poly: NormalPolynomial) -> dict:
    """Lift a star-free polynomial to tensor vectors, one per degree.

    A monomial lifts to the single tensor word with its modes ascending.
    """
    n_modes = params.n_modes
    out: dict[int, np.ndarray] = {}
    for mono, coeff in poly.terms.items():
        if not mono.is_star_free:
            raise ValueError(f"scalar product needs star-free input, got {mono}")
        degree = sum(mono.plain)
        modes = []
        for mode, k in enumerate(mono.plain, start=1):
            modes.extend([mode] * k)
        vec = out.setdefault(degree, np.zeros(n_modes**degree, dtype=complex))
        vec[encode_index(modes, n_modes)] += coeff
    return out


def scalar_product(
    params: QuonParams,
    s: NormalPolynomial,
    t: NormalPolynomial,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> complex:
    """Deformed pairing <s, t>; zero across distinct degrees.

    Sesquilinear with the conjugation on the first argument; within one
    degree it is the plain tensor inner product against P_n t.
    """
    vs = _degree_vectors(params, s)
    vt = _degree_vectors(params, t)
    total = 0j
    for degree, tv in vt.items():
        sv = vs.get(degree)
        if sv is None:
            continue
        check_size_cap(tv.size, size_cap)
        pn = gram_projector(params, degree, size_cap).matrix
        total += complex(np.vdot(sv, pn @ tv))
    return total


def occupation_monomials(n_modes: int, degree: int):
    """Occupation tuples of the given total degree, basis order."""
    def rec(total, parts):
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in rec(total - first, parts - 1):
                yield (first,) + rest

    return sorted(rec(degree, n_modes), key=lambda s: tuple(reversed(s)))


def _representative_index(state, n_modes: int) -> int:
    modes = []
    for mode, k in enumerate(state, start=1):
        modes.extend([mode] * k)
    return encode_index(modes, n_modes)


@dataclass(frozen=True)
class GramReport:
    """Spectral summary of a degree-n Gram matrix."""

    degree: int
    basis: str  # "tensor" or "occupation"
    matrix: np.ndarray
    hermiticity_residual: float
    hermitian_applicable: bool
    min_eigenvalue: float
    max_eigenvalue: float
    kernel_dim: int
    verdict: str
    normalized_min: float | None = None
    normalized_max: float | None = None

    def to_json(self, include_matrix: bool = False) -> dict:
        out = {
            "degree": self.degree,
            "basis": self.basis,
            "dim": int(self.matrix.shape[0]),
            "hermiticity_residual": self.hermiticity_residual,
            "hermitian_applicable": self.hermitian_applicable,
            "min_eigenvalue": self.min_eigenvalue,
            "max_eigenvalue": self.max_eigenvalue,
            "kernel_dim": self.kernel_dim,
            "verdict": self.verdict,
        }
        if self.normalized_min is not None:
            out["normalized_min"] = self.normalized_min
            out["normalized_max"] = self.normalized_max
        if include_matrix:
            out["matrix"] = [
                [[float(z.real), float(z.imag)] for z in row] for row in self.matrix
            ]
        return out


def _spectral_verdict(matrix: np.ndarray, applicable: bool):
    if applicable:
        eigs = np.linalg.eigvalsh((matrix + matrix.conj().T) / 2.0)
        scale = float(np.max(np.abs(eigs))) if eigs.size else 0.0
        window = KERNEL_WINDOW * scale
        kernel = int(np.sum(np.abs(eigs) <= window))
        if np.any(eigs < -window):
            verdict = "indefinite"
        elif kernel > 0:
            verdict = "positive_semidefinite"
        else:
            verdict = "positive_definite"
        return float(eigs.min()), float(eigs.max()), kernel, verdict
    eigs = np.linalg.eigvals(matrix)
    svals = np.linalg.svd(matrix, compute_uv=False)
    scale = float(svals.max()) if svals.size else 0.0
    kernel = int(np.sum(svals <= KERNEL_WINDOW * scale)) if scale else matrix.shape[0]
    return float(eigs.real.min()), float(eigs.real.max()), kernel, "not_applicable"


def gram_matrix(
    params: QuonParams,
    degree: int,
    basis: str = "tensor",
    size_cap: int = DEFAULT_SIZE_CAP,
    normalized: bool = False,
) -> GramReport:
    """Gram matrix of the deformed product at one degree.

    basis="tensor" uses the full slot-product basis (its kernel carries
    the quadratic relations); basis="occupation" restricts rows and
    columns to the ascending representatives of occupation monomials,
    which is the metric of the quotient Fock space.
    """
    if basis not in ("tensor", "occupation"):
        raise ValueError(f"unknown basis {basis!r}")
    pn = gram_projector(params, degree, size_cap).matrix
    if basis == "occupation":
        reps = [
            _representative_index(state, params.n_modes)
            for state in occupation_monomials(params.n_modes, degree)
        ]
        g = pn[np.ix_(reps, reps)].copy()
    else:
        g = pn.copy()
    residual = float(np.max(np.abs(g - g.conj().T))) if g.size else 0.0
    applicable = params.hermitian_b and residual <= HERMITICITY_TOL
    mn, mx, kernel, verdict = _spectral_verdict(g, applicable)
    norm_mn = norm_mx = None
    if normalized and applicable:
        diag = np.real(np.diag(g)).copy()
        good = diag > 0
        scale = np.ones_like(diag)
        scale[good] = 1.0 / np.sqrt(diag[good])
        gn = g * scale[:, None] * scale[None, :]
        eigs = np.linalg.eigvalsh((gn + gn.conj().T) / 2.0)
        norm_mn, norm_mx = float(eigs.min()), float(eigs.max())
    return GramReport(
        degree=degree,
        basis=basis,
        matrix=g,
        hermiticity_residual=residual,
        hermitian_applicable=applicable,
        min_eigenvalue=mn,
        max_eigenvalue=mx,
        kernel_dim=kernel,
        verdict=verdict,
        normalized_min=norm_mn,
        normalized_max=norm_mx,
    )


@dataclass(frozen=True)
class PositivityConditions:
    """The three operator conditions guaranteeing a positive product."""

    self_adjoint_residual: float
    spectral_norm: float
    yang_baxter_residual: float
    tol: float

    @property
    def self_adjoint(self) -> bool:
        return self.self_adjoint_residual < self.tol

    @property
    def norm_le_one(self) -> bool:
        return self.spectral_norm <= 1.0 + self.tol

    @property
    def yang_baxter(self) -> bool:
        return self.yang_baxter_residual < self.tol

    @property
    def passed(self) -> bool:
        return self.self_adjoint and self.norm_le_one and self.yang_baxter


def check_bozejko_speicher(
    params: QuonParams, tol: float = 1e-10
) -> PositivityConditions:
    """Check self-adjointness, norm bound, and the braid relation for the
    partial-dual cross operator; together they certify positivity of the
    deformed scalar product."""
    from .tensorops import _partial_dual_matrix

    ct = _partial_dual_matrix(params)
    residual_sa = float(np.max(np.abs(ct - ct.conj().T)))
    norm = float(np.linalg.norm(ct, 2))
    n = params.n_modes
    eye = np.eye(n, dtype=complex)
    t1 = np.kron(ct, eye)
    t2 = np.kron(eye, ct)
    residual_yb = float(np.linalg.norm(t1 @ t2 @ t1 - t2 @ t1 @ t2))
    return PositivityConditions(residual_sa, norm, residual_yb, tol)
