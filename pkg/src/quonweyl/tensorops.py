"""Dense operators on tensor powers of the mode space and its dual.

Slot products are encoded row-major with 1-based mode indices: the basis
vector with modes (i_1, ..., i_k) sits at flat index
sum((i_m - 1) * N**(k - m)).  Every operator carries explicit input and
output slot signatures over {"E", "E*"}; composition and the structural
checks validate them.  All matrices are plain complex ndarrays, so every
construction here also accepts user-supplied non-diagonal operators.
"""

import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularError, SizeCapError, SlotError
from .params import QuonParams

E = "E"
ESTAR = "E*"

DEFAULT_SIZE_CAP = 4096

_cache_lock = threading.Lock()
_op_cache: dict[tuple, np.ndarray] = {}


def _cached(key, builder):
    # idempotent inserts; concurrent duplicate computation is harmless
    hit = _op_cache.get(key)
    if hit is None:
        hit = builder()
        hit.setflags(write=False)
        with _cache_lock:
            _op_cache.setdefault(key, hit)
    return hit


def check_size_cap(dim: int, size_cap: int = DEFAULT_SIZE_CAP):
    if dim > size_cap:
        raise SizeCapError(f"operator dimension {dim} exceeds size cap {size_cap}")


@dataclass(frozen=True)
class TensorOperator:
    """A linear map between slot products, stored as a dense matrix."""

    slots_in: tuple[str, ...]
    slots_out: tuple[str, ...]
    dim: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        expected = self.dim ** len(self.slots_in)
        if self.matrix.shape != (self.dim ** len(self.slots_out), expected):
            raise SlotError(
                f"matrix shape {self.matrix.shape} does not match slots "
                f"{self.slots_in} -> {self.slots_out} at dim {self.dim}"
            )

    def compose(self, other: "TensorOperator") -> "TensorOperator":
        """self after other; slot signatures must chain."""
        if self.dim != other.dim or self.slots_in != other.slots_out:
            raise SlotError(
                f"cannot compose {other.slots_out} -> into -> {self.slots_in}"
            )
        return TensorOperator(
            other.slots_in, self.slots_out, self.dim, self.matrix @ other.matrix
        )

    def __matmul__(self, other):
        return self.compose(other)


def encode_index(modes, dim: int) -> int:
    """Flat index of a 1-based mode tuple, row-major."""
    idx = 0
    for m in modes:
        idx = idx * dim + (m - 1)
    return idx


def decode_index(idx: int, dim: int, n_slots: int) -> tuple[int, ...]:
    """Inverse of :func:`encode_index`."""
    modes = []
    for _ in range(n_slots):
        modes.append(idx % dim + 1)
        idx //= dim
    return tuple(reversed(modes))


def identity_op(dim: int, slots) -> TensorOperator:
    slots = tuple(slots)
    return TensorOperator(slots, slots, dim, np.eye(dim ** len(slots), dtype=complex))


def _braid_matrix(params: QuonParams) -> np.ndarray:
    n = params.n_modes
    mat = np.zeros((n * n, n * n), dtype=complex)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            mat[encode_index((j, i), n), encode_index((i, j), n)] = params.b[
                i - 1, j - 1
            ]
    return mat


def _cross_matrix(params: QuonParams) -> np.ndarray:
    n = params.n_modes
    mat = np.zeros((n * n, n * n), dtype=complex)
    for i in range(1, n + 1):  # star slot
        for j in range(1, n + 1):  # plain slot
            mat[encode_index((j, i), n), encode_index((i, j), n)] = params.c[
                j - 1, i - 1
            ]
    return mat


def braid_op(params: QuonParams) -> TensorOperator:
    """Exchange operator on two plain slots: x_i (x) x_j -> b_ij x_j (x) x_i."""
    mat = _cached((params.key, "B"), lambda: _braid_matrix(params))
    return TensorOperator((E, E), (E, E), params.n_modes, mat)


def cross_op(params: QuonParams) -> TensorOperator:
    """Cross operator E* (x) E -> E (x) E*.

    Maps x*_i (x) x_j to c_ji x_j (x) x*_i; the first index of c is the
    plain mode the star passes over.
    """
    mat = _cached((params.key, "C"), lambda: _cross_matrix(params))
    return TensorOperator((ESTAR, E), (E, ESTAR), params.n_modes, mat)


def partial_dual(c_op_: TensorOperator) -> TensorOperator:
    """Partial dual of a cross operator, acting on two plain slots.

    In index form ct[(k,l),(i,j)] = c[(l,j),(k,i)]: the star slot of the
    cross operator is traded against the pairing.  For the diagonal
    quon operator this gives x_i (x) x_j -> c_ij x_j (x) x_i.
    """
    if c_op_.slots_in != (ESTAR, E) or c_op_.slots_out != (E, ESTAR):
        raise SlotError(
            f"partial dual needs signature (E*, E) -> (E, E*), got "
            f"{c_op_.slots_in} -> {c_op_.slots_out}"
        )
    n = c_op_.dim
    c4 = c_op_.matrix.reshape(n, n, n, n)  # [out1, out2, in1, in2]
    ct4 = np.einsum("ljki->klij", c4)
    return TensorOperator((E, E), (E, E), n, ct4.reshape(n * n, n * n).copy())


def _partial_dual_matrix(params: QuonParams) -> np.ndarray:
    return _cached(
        (params.key, "Ctilde"), lambda: partial_dual(cross_op(params)).matrix
    )


def _lift(mat: np.ndarray, dim: int, n_slots: int, pos: int) -> np.ndarray:
    """Embed a two-slot matrix at slots (pos, pos+1) of an n_slots product."""
    left = np.eye(dim ** (pos - 1), dtype=complex)
    right = np.eye(dim ** (n_slots - pos - 1), dtype=complex)
    return np.kron(np.kron(left, mat), right)


@dataclass(frozen=True)
class ConsistencyVerdict:
    """Residuals of the three structural conditions tying B and C together."""

    braid_residual: float
    mixed_residual: float
    relation_residual: float
    tol: float

    @property
    def braid_ok(self):
        return self.braid_residual < self.tol

    @property
    def mixed_ok(self):
        return self.mixed_residual < self.tol

    @property
    def relation_ok(self):
        return self.relation_residual < self.tol

    @property
    def passed(self):
        return self.braid_ok and self.mixed_ok and self.relation_ok


def check_consistency(
    b_op_: TensorOperator, c_op_: TensorOperator, tol: float = 1e-10
) -> ConsistencyVerdict:
    """Verify the three compatibility conditions for arbitrary B, C.

    (a) the braid relation for B on three plain slots,
    (b) B(1) C(2) C(1) = C(2) C(1) B(2) on E* (x) E (x) E, the unique
        slot typing under which both sides are well-formed,
    (c) (id + partial_dual(C)) (id - B) = 0 on E (x) E.

    Residuals are Frobenius norms.
    """
    if b_op_.slots_in != (E, E) or b_op_.slots_out != (E, E):
        raise SlotError(f"B must act on (E, E), got {b_op_.slots_in}")
    if c_op_.slots_in != (ESTAR, E) or c_op_.slots_out != (E, ESTAR):
        raise SlotError(f"C must map (E*, E) to (E, E*), got {c_op_.slots_in}")
    if b_op_.dim != c_op_.dim:
        raise SlotError("B and C have different slot dimensions")
    n = b_op_.dim
    B = b_op_.matrix
    C = c_op_.matrix
    eye = np.eye(n, dtype=complex)
    b1 = np.kron(B, eye)
    b2 = np.kron(eye, B)
    c1 = np.kron(C, eye)
    c2 = np.kron(eye, C)
    res_a = np.linalg.norm(b1 @ b2 @ b1 - b2 @ b1 @ b2)
    res_b = np.linalg.norm(b1 @ c2 @ c1 - c2 @ c1 @ b2)
    ct = partial_dual(c_op_).matrix
    eye2 = np.eye(n * n, dtype=complex)
    res_c = np.linalg.norm((eye2 + ct) @ (eye2 - B))
    return ConsistencyVerdict(float(res_a), float(res_b), float(res_c), tol)


def insertion_sum(
    params: QuonParams, n: int, size_cap: int = DEFAULT_SIZE_CAP
) -> TensorOperator:
    """Staircase sum id + T(1) + T(1)T(2) + ... + T(1)...T(n-1) on n plain
    slots, where T is the partial dual of the cross operator at adjacent
    slots.  For a single mode this is the scalar 1 + q + ... + q**(n-1).
    """
    if n < 1:
        raise SizeCapError(f"slot count must be >= 1, got {n}")
    dim = params.n_modes**n
    check_size_cap(dim, size_cap)

    def build():
        ct = _partial_dual_matrix(params)
        total = np.eye(dim, dtype=complex)
        term = np.eye(dim, dtype=complex)
        for k in range(1, n):
            term = term @ _lift(ct, params.n_modes, n, k)
            total += term
        return total

    mat = _cached((params.key, "R", n), build)
    slots = (E,) * n
    return TensorOperator(slots, slots, params.n_modes, mat)


@dataclass(frozen=True)
class KernelReport:
    """Numerical kernel of the two-slot staircase sum."""

    dimension: int
    basis: np.ndarray  # columns span the kernel in the two-slot space
    singular_values: np.ndarray


def quadratic_kernel(
    params: QuonParams, rel_tol: float = 1e-10
) -> KernelReport:
    """Kernel of id + partial_dual(C) on two plain slots.

    Its vectors are exactly the quadratic relations available among the
    plain generators: one per unordered mode pair, plus one per mode
    with q_i = -1.
    """
    r2 = insertion_sum(params, 2).matrix
    _, svals, vh = np.linalg.svd(r2)
    smax = svals[0] if svals.size else 0.0
    if smax == 0.0:
        null_rows = np.arange(vh.shape[0])
    else:
        null_rows = np.nonzero(svals < rel_tol * smax)[0]
    basis = vh[null_rows].conj().T
    return KernelReport(int(null_rows.size), basis, svals)


def braid_symmetrizer(
    params: QuonParams, k: int, size_cap: int = DEFAULT_SIZE_CAP
) -> TensorOperator:
    """Exchange-symmetrizer on k plain slots.

    Built by the recursive product form P_k = (id (x) P_{k-1}) . S_k with
    S_k the staircase sum of adjacent exchange operators; it equals the
    sum of the braided lifts of all k! permutations.
    """
    if k < 1:
        raise SizeCapError(f"slot count must be >= 1, got {k}")
    dim = params.n_modes**k
    check_size_cap(dim, size_cap)

    def build():
        if k == 1:
            return np.eye(params.n_modes, dtype=complex)
        bmat = _cached((params.key, "B"), lambda: _braid_matrix(params))
        total = np.eye(dim, dtype=complex)
        term = np.eye(dim, dtype=complex)
        for m in range(1, k):
            term = term @ _lift(bmat, params.n_modes, k, m)
            total += term
        prev = braid_symmetrizer(params, k - 1, size_cap).matrix
        return np.kron(np.eye(params.n_modes, dtype=complex), prev) @ total

    mat = _cached((params.key, "P", k), build)
    slots = (E,) * k
    return TensorOperator(slots, slots, params.n_modes, mat)


def _base_braiding(params: QuonParams, left: str, right: str) -> np.ndarray:
    n = params.n_modes
    if left == E and right == E:
        return _cached((params.key, "B"), lambda: _braid_matrix(params))
    if left == ESTAR and right == E:
        return _cached((params.key, "C"), lambda: _cross_matrix(params))
    if left == ESTAR and right == ESTAR:
        # same sorting phases as on plain slots
        return _cached((params.key, "Bstar"), lambda: _braid_matrix(params))
    # left == E, right == E*: inverse of the cross operator
    def build():
        mat = np.zeros((n * n, n * n), dtype=complex)
        for i in range(1, n + 1):  # star mode
            for j in range(1, n + 1):  # plain mode
                coeff = params.c[j - 1, i - 1]
                if coeff == 0:
                    raise SingularError(
                        f"cross operator is singular (c[{j},{i}] = 0, q_{i} = 0); "
                        "the E over E* braiding does not exist"
                    )
                mat[encode_index((i, j), n), encode_index((j, i), n)] = 1.0 / coeff
        return mat

    return _cached((params.key, "Cinv"), build)


def braiding(
    params: QuonParams, left, right, size_cap: int = DEFAULT_SIZE_CAP
) -> TensorOperator:
    """Braiding from (left (x) right) to (right (x) left) slot products.

    Single-slot cases use the exchange operator, the cross operator, its
    inverse, or the starred exchange; longer products are assembled with
    the two hexagon recursions.  Slot kinds are the strings "E" and "E*".
    """
    left = tuple(left)
    right = tuple(right)
    for s in left + right:
        if s not in (E, ESTAR):
            raise SlotError(f"unknown slot kind {s!r}")
    n = params.n_modes
    check_size_cap(n ** (len(left) + len(right)), size_cap)

    def build(lft, rgt) -> np.ndarray:
        if not lft or not rgt:
            return np.eye(n ** (len(lft) + len(rgt)), dtype=complex)
        if len(lft) == 1 and len(rgt) == 1:
            return _base_braiding(params, lft[0], rgt[0])
        if len(lft) > 1:
            u, v = lft[:1], lft[1:]
            psi_uw = build(u, rgt)
            psi_vw = build(v, rgt)
            iu = np.eye(n ** len(u), dtype=complex)
            iv = np.eye(n ** len(v), dtype=complex)
            return np.kron(psi_uw, iv) @ np.kron(iu, psi_vw)
        v, w = rgt[:1], rgt[1:]
        psi_uv = build(lft, v)
        psi_uw = build(lft, w)
        iv = np.eye(n ** len(v), dtype=complex)
        iw = np.eye(n ** len(w), dtype=complex)
        return np.kron(iv, psi_uw) @ np.kron(psi_uv, iw)

    return TensorOperator(left + right, right + left, n, build(left, right))
