"""Truncated occupation-basis representation of the deformed algebra.

States are occupation tuples (n_1, ..., n_N) with total degree at most
the truncation D.  Creation in mode i multiplies by the exchange phases
picked up while the new generator is sorted into place,
prod_{k<i} b_ik**n_k, and annihilation by prod_{k<i} b_ki**n_k together
with the deformed occupation number [n_i].  Both phase laws, including
the occupancy exponents and the index order of the annihilation phase,
are derived from the normal-ordering engine and from the recursive
evaluation map; the test suite rederives them independently.

The basis is enumerated by total degree ascending, then by the reversed
occupation tuple ascending, so matrices are reproducible across runs.
"""

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import CapError, TruncationError, WordSyntaxError
from .params import QuonParams
from .rewrite import (
    DEFAULT_WORD_CAP,
    Generator,
    NormalMonomial,
    NormalPolynomial,
    PRUNE_TOL,
    Word,
    poly_multiply,
)

OccupationState = tuple  # tuple[int, ...]


def q_number(n: int, q: float) -> float:
    """Deformed occupation number (1 - q**n) / (1 - q), with [n]_1 = n."""
    if n < 0:
        raise ValueError(f"occupation number must be nonnegative, got {n}")
    if q == 1.0:
        return float(n)
    return (1.0 - q**n) / (1.0 - q)


def q_factorial(n: int, q: float) -> float:
    out = 1.0
    for m in range(1, n + 1):
        out *= q_number(m, q)
    return out


def _phase_power(base: complex, exponent: int) -> complex:
    # left-associated repeated product, matching the rewrite engine
    out = 1.0 + 0j
    for _ in range(exponent):
        out *= base
    return out


class FockVector:
    """Sparse complex combination of occupation states, zero-pruned."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes=None):
        self.amplitudes: dict[OccupationState, complex] = {}
        if amplitudes:
            items = (
                amplitudes.items() if isinstance(amplitudes, dict) else amplitudes
            )
            for state, amp in items:
                self._add(tuple(state), amp)

    def _add(self, state: OccupationState, amp: complex):
        value = self.amplitudes.get(state, 0j) + amp
        if abs(value) <= PRUNE_TOL:
            self.amplitudes.pop(state, None)
        else:
            self.amplitudes[state] = value

    def __add__(self, other: "FockVector") -> "FockVector":
        out = FockVector(dict(self.amplitudes))
        for state, amp in other.amplitudes.items():
            out._add(state, amp)
        return out

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + other.scale(-1.0)

    def scale(self, factor: complex) -> "FockVector":
        return FockVector({s: factor * a for s, a in self.amplitudes.items()})

    def max_amp_diff(self, other: "FockVector") -> float:
        keys = set(self.amplitudes) | set(other.amplitudes)
        if not keys:
            return 0.0
        return float(
            max(
                abs(self.amplitudes.get(k, 0j) - other.amplitudes.get(k, 0j))
                for k in keys
            )
        )

    def norm_inf(self) -> float:
        return float(max((abs(a) for a in self.amplitudes.values()), default=0.0))

    def __repr__(self):
        body = ", ".join(
            f"{s}: {a}" for s, a in sorted(self.amplitudes.items())
        )
        return f"FockVector({{{body}}})"


@dataclass(frozen=True)
class FockSpace:
    """All occupation states of a parameter set up to total degree D."""

    params: QuonParams
    truncation: int

    def __post_init__(self):
        if self.truncation < 0:
            raise ValueError("truncation must be nonnegative")

    @cached_property
    def basis(self) -> tuple[OccupationState, ...]:
        n = self.params.n_modes
        states = []
        for degree in range(self.truncation + 1):
            block = sorted(
                _compositions(degree, n), key=lambda s: tuple(reversed(s))
            )
            states.extend(block)
        return tuple(states)

    @cached_property
    def index(self) -> dict[OccupationState, int]:
        return {state: k for k, state in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vacuum(self) -> FockVector:
        return FockVector({(0,) * self.params.n_modes: 1.0 + 0j})


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def create(space: FockSpace, mode: int, vec: FockVector) -> FockVector:
    """Add one quantum in the given 1-based mode, with sorting phases."""
    b = space.params.b
    i = mode - 1
    out = FockVector()
    for state, amp in vec.amplitudes.items():
        if sum(state) >= space.truncation:
            raise TruncationError(
                f"creation in mode {mode} leaves the degree-{space.truncation} space"
            )
        phase = 1.0 + 0j
        for k in range(i):
            phase *= _phase_power(b[i, k], state[k])
        new_state = state[:i] + (state[i] + 1,) + state[i + 1 :]
        out._add(new_state, phase * amp)
    return out


def annihilate(space: FockSpace, mode: int, vec: FockVector) -> FockVector:
    """Remove one quantum in the given 1-based mode.

    Each occupied state contributes the deformed number [n_i] and the
    cross phases prod_{k<i} b_ki**n_k; the vacuum maps to zero.
    """
    params = space.params
    i = mode - 1
    out = FockVector()
    for state, amp in vec.amplitudes.items():
        if state[i] == 0:
            continue
        phase = 1.0 + 0j
        for k in range(i):
            phase *= _phase_power(params.b[k, i], state[k])
        factor = q_number(state[i], float(params.q[i]))
        new_state = state[:i] + (state[i] - 1,) + state[i + 1 :]
        out._add(new_state, phase * factor * amp)
    return out


def apply_generator(space: FockSpace, gen: Generator, vec: FockVector) -> FockVector:
    if gen.starred:
        return annihilate(space, gen.mode, vec)
    return create(space, gen.mode, vec)


@dataclass(frozen=True)
class OperatorMatrix:
    """Word action on the truncated basis with a per-column validity mask.

    Columns whose evaluation would create past the top degree are zeroed
    and flagged invalid rather than silently truncated.
    """

    matrix: np.ndarray
    valid: np.ndarray
    basis: tuple[OccupationState, ...]

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def operator_matrix(
    space: FockSpace, word: Word, word_cap: int = DEFAULT_WORD_CAP
) -> OperatorMatrix:
    """Matrix of a generator word, rightmost letter applied first."""
    if len(word) > word_cap:
        raise CapError(f"word length {len(word)} exceeds cap {word_cap}")
    dim = space.dim
    matrix = np.zeros((dim, dim), dtype=complex)
    valid = np.ones(dim, dtype=bool)
    for col, state in enumerate(space.basis):
        vec = FockVector({state: 1.0 + 0j})
        try:
            for gen in reversed(word):
                vec = apply_generator(space, gen, vec)
        except TruncationError:
            valid[col] = False
            continue
        for out_state, amp in vec.amplitudes.items():
            matrix[space.index[out_state], col] = amp
    return OperatorMatrix(matrix, valid, space.basis)


def poly_to_fock(space: FockSpace, poly: NormalPolynomial) -> FockVector:
    """Map a star-free polynomial to its occupation-state vector."""
    out = FockVector()
    for mono, coeff in poly.terms.items():
        if not mono.is_star_free:
            raise ValueError(f"polynomial has a starred monomial: {mono}")
        if sum(mono.plain) > space.truncation:
            raise CapError(
                f"monomial degree {sum(mono.plain)} exceeds truncation "
                f"{space.truncation}"
            )
        out._add(mono.plain, coeff)
    return out


def fock_to_poly(vec: FockVector, n_modes: int) -> NormalPolynomial:
    terms = {
        NormalMonomial(state, (0,) * n_modes): amp
        for state, amp in vec.amplitudes.items()
    }
    return NormalPolynomial(terms)


def poly_on_vacuum(space: FockSpace, poly: NormalPolynomial) -> FockVector:
    """Vacuum image of a normal-ordered polynomial acting as an operator.

    Monomials with a nonempty star block kill the vacuum; a star-free
    monomial fills its occupation state with phase exactly one, because
    modes are created in descending order.
    """
    out = FockVector()
    for mono, coeff in poly.terms.items():
        if not mono.is_star_free:
            continue
        if sum(mono.plain) > space.truncation:
            raise CapError(
                f"monomial degree {sum(mono.plain)} exceeds truncation "
                f"{space.truncation}"
            )
        out._add(mono.plain, coeff)
    return out


@dataclass(frozen=True)
class RelationResiduals:
    """Worst-case residuals of the representation commutation relations.

    mixed:  a*_i a_j - c_ji a_j a*_i - delta_ij
    plain:  a_i a_j - b_ij a_j a_i
    star:   a*_i a*_j - b_ij a*_j a*_i

    evaluated on basis states of total degree at most D - 2, where no
    truncation-invalid column can contribute.
    """

    mixed: float
    plain: float
    star: float
    tol: float
    n_columns: int

    @property
    def max_residual(self) -> float:
        return max(self.mixed, self.plain, self.star)

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tol


def check_theorem_a(space: FockSpace, tol: float = 1e-10) -> RelationResiduals:
    """Verify the deformed commutation relations on the truncated basis."""
    if space.truncation < 2:
        raise ValueError("need truncation >= 2 to test the relations")
    params = space.params
    n = params.n_modes
    cols = [
        k for k, state in enumerate(space.basis) if sum(state) <= space.truncation - 2
    ]
    creators = [
        operator_matrix(space, (Generator(i, False),)).matrix for i in range(1, n + 1)
    ]
    annihilators = [
        operator_matrix(space, (Generator(i, True),)).matrix for i in range(1, n + 1)
    ]
    eye = np.eye(space.dim, dtype=complex)
    res_mixed = res_plain = res_star = 0.0
    for i in range(n):
        for j in range(n):
            mixed = (
                annihilators[i] @ creators[j]
                - params.c[j, i] * creators[j] @ annihilators[i]
                - (1.0 if i == j else 0.0) * eye
            )
            plain = creators[i] @ creators[j] - params.b[i, j] * (
                creators[j] @ creators[i]
            )
            star = annihilators[i] @ annihilators[j] - params.b[i, j] * (
                annihilators[j] @ annihilators[i]
            )
            res_mixed = max(res_mixed, float(np.max(np.abs(mixed[:, cols]))))
            res_plain = max(res_plain, float(np.max(np.abs(plain[:, cols]))))
            res_star = max(res_star, float(np.max(np.abs(star[:, cols]))))
    return RelationResiduals(res_mixed, res_plain, res_star, tol, len(cols))


@dataclass(frozen=True)
class LeibnizReport:
    """Residuals of the twisted product rule and the star-pair exchange."""

    product_residual: float
    star_exchange_residual: float

    @property
    def residual(self) -> float:
        return max(self.product_residual, self.star_exchange_residual)


def _braid_factor(params: QuonParams, mode: int, mono: NormalMonomial) -> complex:
    # phase for braiding a star generator of `mode` past a plain monomial
    out = 1.0 + 0j
    for k, exponent in enumerate(mono.plain, start=1):
        out *= _phase_power(params.c[k - 1, mode - 1], exponent)
    return out


def check_leibniz(
    space: FockSpace, mode: int, f: NormalPolynomial, g: NormalPolynomial
) -> LeibnizReport:
    """Check the deformed product rule for annihilation in a given mode.

    annihilate(i, f * g) must equal annihilate(i, f) * g plus the
    braid-twisted term sum_m tau_i(m) m * annihilate(i, g) over the
    monomials m of f, where tau is the cross-phase of moving the star
    generator past m.  Also checks the starred-pair exchange relation on
    the state f * g for every partner mode.
    """
    params = space.params
    if not (f.is_star_free and g.is_star_free):
        raise ValueError("both factors must be star-free")
    fg = poly_multiply(params, f, g)
    lhs = annihilate(space, mode, poly_to_fock(space, fg))
    left_term = poly_multiply(
        params,
        fock_to_poly(annihilate(space, mode, poly_to_fock(space, f)), params.n_modes),
        g,
    )
    rhs = poly_to_fock(space, left_term)
    ag = fock_to_poly(annihilate(space, mode, poly_to_fock(space, g)), params.n_modes)
    for mono, coeff in f.terms.items():
        tau = _braid_factor(params, mode, mono)
        piece = poly_multiply(params, NormalPolynomial.monomial(mono), ag)
        rhs = rhs + poly_to_fock(space, piece).scale(coeff * tau)
    product_residual = lhs.max_amp_diff(rhs)

    state = poly_to_fock(space, fg)
    star_residual = 0.0
    for j in range(1, params.n_modes + 1):
        lhs2 = annihilate(space, mode, annihilate(space, j, state))
        rhs2 = annihilate(space, j, annihilate(space, mode, state)).scale(
            params.b[mode - 1, j - 1]
        )
        star_residual = max(star_residual, lhs2.max_amp_diff(rhs2))
    return LeibnizReport(product_residual, star_residual)


_STATE = re.compile(r"^\|([0-9,\s]*)(?:>|⟩)$")


def parse_state(text: str, n_modes: int) -> OccupationState:
    """Parse a state written as ``|n1,n2,...,nN>``."""
    m = _STATE.match(text.strip())
    if not m:
        raise WordSyntaxError(f"bad state syntax {text!r}; expected |n1,...,nN>")
    body = m.group(1).strip()
    entries = [s.strip() for s in body.split(",")] if body else []
    if len(entries) != n_modes:
        raise WordSyntaxError(
            f"state has {len(entries)} entries, expected {n_modes}"
        )
    values = tuple(int(s) for s in entries)
    if any(v < 0 for v in values):
        raise WordSyntaxError("occupation numbers must be nonnegative")
    return values


def format_state(state: OccupationState) -> str:
    return "|" + ",".join(str(v) for v in state) + ">"


def matrix_to_json(op: OperatorMatrix) -> dict:
    """JSON export: nested [re, im] entries plus the basis enumeration."""
    return {
        "basis": [list(state) for state in op.basis],
        "valid_columns": [bool(v) for v in op.valid],
        "matrix": [
            [[float(z.real), float(z.imag)] for z in row] for row in op.matrix
        ],
    }


def number_expectations(space: FockSpace, mode: int) -> np.ndarray:
    """Diagonal of create-then-annihilate in one mode: [n_i] per state."""
    values = np.empty(space.dim, dtype=float)
    for k, state in enumerate(space.basis):
        values[k] = q_number(state[mode - 1], float(space.params.q[mode - 1]))
    return values
