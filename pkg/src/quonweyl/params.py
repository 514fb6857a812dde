"""Parameter sets for multi-mode deformed Weyl algebras.

A model is specified by the number of modes N, one real deformation
parameter q_i in [-1, 1] per mode, and an N x N matrix b of nonzero
complex exchange phases with b_ij * b_ji = 1 and b_ii = 1.  The derived
cross-coefficient matrix c has c_ii = q_i on the diagonal and c_ij = b_ij
off the diagonal; it is the unique choice making all operator
consistency conditions hold (see :mod:`quonweyl.tensorops`).
"""

import cmath
import hashlib
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    CommFactorError,
    DimensionError,
    QDomainError,
    QuonWeylError,
    ThetaError,
)

AXIOM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class QuonParams:
    """Validated model parameters.

    Attributes
    ----------
    n_modes : int
        Number of modes N.
    q : ndarray, shape (N,)
        Real diagonal deformation parameters, each in [-1, 1].
    b : ndarray, shape (N, N)
        Complex exchange phases, b_ij * b_ji = 1, b_ii = 1.
    c : ndarray, shape (N, N)
        Cross coefficients: c_ii = q_i, c_ij = b_ij for i != j.
    hermitian_b : bool
        True iff conj(b_ij) == b_ji entrywise (within 1e-12), which
        forces |b_ij| = 1 and is required for positivity statements.
    """

    n_modes: int
    q: np.ndarray
    b: np.ndarray
    c: np.ndarray
    hermitian_b: bool

    @cached_property
    def key(self) -> bytes:
        """Stable fingerprint used as an operator-cache key."""
        h = hashlib.sha256()
        h.update(self.n_modes.to_bytes(4, "little"))
        h.update(np.ascontiguousarray(self.q).tobytes())
        h.update(np.ascontiguousarray(self.b).tobytes())
        return h.digest()

    @property
    def endpoint_modes(self) -> tuple[int, ...]:
        """1-based modes with q_i = +1 or q_i = -1 (degenerate corners)."""
        return tuple(i + 1 for i in range(self.n_modes) if abs(self.q[i]) == 1.0)

    def __eq__(self, other):
        return isinstance(other, QuonParams) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


@dataclass(frozen=True)
class GradeVector:
    """Net rotation count per mode; the grade of a monomial."""

    delta: tuple[int, ...]

    def __add__(self, other):
        if len(self.delta) != len(other.delta):
            raise DimensionError("grade vectors have different lengths")
        return GradeVector(tuple(a + b for a, b in zip(self.delta, other.delta)))


def build_params(n_modes: int, q, b) -> QuonParams:
    """Validate (N, q, b) and assemble the cross coefficients.

    Raises QDomainError, CommFactorError or DimensionError when an
    axiom is violated; tolerance for the phase axioms is 1e-12.
    """
    if not isinstance(n_modes, (int, np.integer)) or n_modes < 1:
        raise DimensionError(f"n_modes must be a positive integer, got {n_modes!r}")
    n = int(n_modes)
    q = np.asarray(q, dtype=float)
    b = np.asarray(b, dtype=complex)
    if q.shape != (n,):
        raise DimensionError(f"q has shape {q.shape}, expected ({n},)")
    if b.shape != (n, n):
        raise DimensionError(f"b has shape {b.shape}, expected ({n}, {n})")
    if not np.all(np.isfinite(q)) or not np.all(np.isfinite(b)):
        raise DimensionError("parameter entries must be finite")
    bad = [i for i in range(n) if not -1.0 <= q[i] <= 1.0]
    if bad:
        raise QDomainError(
            f"q[{bad[0]}] = {q[bad[0]]!r} outside [-1, 1] (0-based mode index)"
        )
    for i in range(n):
        if abs(b[i, i] - 1.0) > AXIOM_TOL:
            raise CommFactorError(f"b[{i + 1},{i + 1}] = {b[i, i]} but must equal 1")
    for i in range(n):
        for j in range(i + 1, n):
            prod = b[i, j] * b[j, i]
            if abs(prod - 1.0) > AXIOM_TOL:
                raise CommFactorError(
                    f"b[{i + 1},{j + 1}] * b[{j + 1},{i + 1}] = {prod} but must equal 1"
                )
    hermitian = bool(np.max(np.abs(np.conj(b) - b.T)) <= AXIOM_TOL)
    c = b.copy()
    np.fill_diagonal(c, q.astype(complex))
    q = q.copy()
    for arr in (q, b, c):
        arr.setflags(write=False)
    return QuonParams(n_modes=n, q=q, b=b, c=c, hermitian_b=hermitian)


def build_params_theta(n_modes: int, q, theta, order: int) -> QuonParams:
    """Build parameters from an integer phase matrix.

    The exchange phases are b_ij = exp(2*pi*1j*theta_ij / order).  The
    imaginary unit in the exponent is this package's convention; it is
    what makes every b_ij unimodular and b_ij * b_ji = 1.  theta must be
    antisymmetric modulo order.
    """
    if not isinstance(order, (int, np.integer)) or order < 1:
        raise ThetaError(f"order must be a positive integer, got {order!r}")
    theta = np.asarray(theta)
    if theta.shape != (n_modes, n_modes):
        raise DimensionError(
            f"theta has shape {theta.shape}, expected ({n_modes}, {n_modes})"
        )
    if not np.issubdtype(theta.dtype, np.integer):
        if not np.all(theta == np.round(theta)):
            raise ThetaError("theta entries must be integers")
        theta = theta.astype(int)
    if np.any((theta + theta.T) % order != 0):
        raise ThetaError(f"theta is not antisymmetric modulo {order}")
    b = np.empty((n_modes, n_modes), dtype=complex)
    for i in range(n_modes):
        for j in range(n_modes):
            b[i, j] = cmath.exp(2j * cmath.pi * int(theta[i, j]) / order)
    return build_params(n_modes, q, b)


def monomial_grade(exponents_plain, exponents_star) -> GradeVector:
    """Grade of a normal monomial: plain exponents minus star exponents."""
    plain = tuple(int(v) for v in exponents_plain)
    star = tuple(int(v) for v in exponents_star)
    if len(plain) != len(star):
        raise DimensionError(
            f"exponent vectors have lengths {len(plain)} and {len(star)}"
        )
    return GradeVector(tuple(p - s for p, s in zip(plain, star)))


def _complex_from_json(value):
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise QuonWeylError(f"cannot read complex entry {value!r}; expected [re, im]")


def params_from_dict(data: dict) -> QuonParams:
    """Build parameters from a decoded parameter-file dictionary.

    Exactly one of the keys "b" or the pair ("theta", "order") must be
    present alongside "n_modes" and "q".  Complex b entries are encoded
    as two-element [re, im] lists.
    """
    if "n_modes" not in data or "q" not in data:
        raise QuonWeylError('parameter file needs "n_modes" and "q"')
    n = data["n_modes"]
    q = data["q"]
    has_b = "b" in data
    has_theta = "theta" in data or "order" in data
    if has_b == has_theta:
        raise QuonWeylError(
            'parameter file must contain exactly one of "b" or ("theta", "order")'
        )
    if has_b:
        b = [[_complex_from_json(v) for v in row] for row in data["b"]]
        return build_params(n, q, b)
    if "theta" not in data or "order" not in data:
        raise QuonWeylError('the theta form needs both "theta" and "order"')
    return build_params_theta(n, q, data["theta"], data["order"])


def load_params(path) -> QuonParams:
    """Read and validate a JSON parameter file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise QuonWeylError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise QuonWeylError(f"{path}: top-level JSON value must be an object")
    try:
        return params_from_dict(data)
    except QuonWeylError as exc:
        raise type(exc)(f"{path}: {exc}") from exc


def params_to_dict(params: QuonParams) -> dict:
    """Canonical JSON-ready echo of a parameter set (b as [re, im] pairs)."""
    return {
        "n_modes": params.n_modes,
        "q": [float(v) for v in params.q],
        "b": [
            [[float(v.real), float(v.imag)] for v in row] for row in params.b
        ],
        "c": [
            [[float(v.real), float(v.imag)] for v in row] for row in params.c
        ],
        "hermitian_b": params.hermitian_b,
        "endpoint_modes": list(params.endpoint_modes),
    }
