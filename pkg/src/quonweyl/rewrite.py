"""Free words in the generators and their canonical normal ordering.

A word is a tuple of generators, each a (mode, starred) pair.  The
defining relations are used as rewrite rules oriented toward the normal
form "plain block, modes ascending, then star block, modes ascending":

    star_i plain_i  ->  1 + q_i * (plain_i star_i)
    star_i plain_j  ->  b_ji * (plain_j star_i)        for i != j
    plain_i plain_j ->  b_ij * (plain_j plain_i)       for i > j
    star_i star_j   ->  b_ij * (star_j star_i)         for i > j

Each step strictly decreases (star-before-plain inversions, plain-block
inversions, star-block inversions) lexicographically, so rewriting
terminates; agreement of the leftmost and rightmost strategies is a
tested property, not an assumption.
"""

import re
from dataclasses import dataclass
from typing import NamedTuple

from .errors import CapError, WordSyntaxError
from .params import GradeVector, QuonParams, monomial_grade

DEFAULT_WORD_CAP = 16
DEFAULT_TERM_CAP = 100_000
PRUNE_TOL = 1e-15


class Generator(NamedTuple):
    mode: int  # 1-based
    starred: bool

    def __str__(self):
        return f"a*{self.mode}" if self.starred else f"a{self.mode}"


Word = tuple  # tuple[Generator, ...]

_TOKEN = re.compile(r"a(\*?)(\d+)$")


def parse_word(text: str, n_modes: int) -> Word:
    """Parse whitespace-separated tokens like ``a3`` and ``a*3``.

    Raises WordSyntaxError with the 1-based column of the bad token.
    """
    letters = []
    pos = 0
    for chunk in text.split():
        column = text.index(chunk, pos) + 1
        pos = column - 1 + len(chunk)
        m = _TOKEN.match(chunk)
        if not m:
            raise WordSyntaxError(
                f"bad token {chunk!r} at column {column}", column=column
            )
        mode = int(m.group(2))
        if mode < 1 or mode > n_modes:
            raise WordSyntaxError(
                f"mode {mode} out of range 1..{n_modes} at column {column}",
                column=column,
            )
        letters.append(Generator(mode, m.group(1) == "*"))
    return tuple(letters)


def format_word(word: Word) -> str:
    return " ".join(str(g) for g in word)


def word_grade(word: Word, n_modes: int) -> GradeVector:
    plain = [0] * n_modes
    star = [0] * n_modes
    for g in word:
        (star if g.starred else plain)[g.mode - 1] += 1
    return monomial_grade(plain, star)


@dataclass(frozen=True)
class NormalMonomial:
    """Canonical monomial: plain exponents then star exponents, per mode."""

    plain: tuple[int, ...]
    star: tuple[int, ...]

    @classmethod
    def unit(cls, n_modes: int) -> "NormalMonomial":
        return cls((0,) * n_modes, (0,) * n_modes)

    @property
    def n_modes(self) -> int:
        return len(self.plain)

    @property
    def degree(self) -> int:
        return sum(self.plain) + sum(self.star)

    @property
    def is_star_free(self) -> bool:
        return not any(self.star)

    def grade(self) -> GradeVector:
        return monomial_grade(self.plain, self.star)

    def as_word(self) -> Word:
        letters = []
        for mode, k in enumerate(self.plain, start=1):
            letters.extend([Generator(mode, False)] * k)
        for mode, k in enumerate(self.star, start=1):
            letters.extend([Generator(mode, True)] * k)
        return tuple(letters)

    def sort_key(self):
        return (self.degree, self.plain, self.star)

    def __str__(self):
        parts = []
        for mode, k in enumerate(self.plain, start=1):
            if k == 1:
                parts.append(f"a{mode}")
            elif k > 1:
                parts.append(f"a{mode}^{k}")
        for mode, k in enumerate(self.star, start=1):
            if k == 1:
                parts.append(f"a*{mode}")
            elif k > 1:
                parts.append(f"a*{mode}^{k}")
        return " ".join(parts) if parts else "1"


class NormalPolynomial:
    """Finite complex combination of normal monomials, zero-pruned."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: dict[NormalMonomial, complex] = {}
        if terms:
            for mono, coeff in terms.items() if isinstance(terms, dict) else terms:
                self._add(mono, coeff)

    def _add(self, mono: NormalMonomial, coeff: complex):
        value = self.terms.get(mono, 0j) + coeff
        if abs(value) <= PRUNE_TOL:
            self.terms.pop(mono, None)
        else:
            self.terms[mono] = value

    @classmethod
    def unit(cls, n_modes: int) -> "NormalPolynomial":
        return cls({NormalMonomial.unit(n_modes): 1.0 + 0j})

    @classmethod
    def monomial(cls, mono: NormalMonomial, coeff=1.0 + 0j) -> "NormalPolynomial":
        return cls({mono: coeff})

    def __add__(self, other: "NormalPolynomial") -> "NormalPolynomial":
        out = NormalPolynomial(dict(self.terms))
        for mono, coeff in other.terms.items():
            out._add(mono, coeff)
        return out

    def __sub__(self, other: "NormalPolynomial") -> "NormalPolynomial":
        return self + other.scale(-1.0)

    def scale(self, factor: complex) -> "NormalPolynomial":
        return NormalPolynomial(
            {m: factor * c for m, c in self.terms.items()}
        )

    @property
    def is_star_free(self) -> bool:
        return all(m.is_star_free for m in self.terms)

    def max_coeff_diff(self, other: "NormalPolynomial") -> float:
        keys = set(self.terms) | set(other.terms)
        if not keys:
            return 0.0
        return float(
            max(abs(self.terms.get(k, 0j) - other.terms.get(k, 0j)) for k in keys)
        )

    def allclose(self, other: "NormalPolynomial", tol: float = 1e-12) -> bool:
        return self.max_coeff_diff(other) <= tol

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __repr__(self):
        body = " + ".join(f"{c}*{m}" for m, c in self.sorted_terms())
        return f"NormalPolynomial({body or '0'})"


def _is_redex(left: Generator, right: Generator) -> bool:
    if left.starred and not right.starred:
        return True
    if left.starred == right.starred:
        return left.mode > right.mode
    return False


def rewrite_step(params: QuonParams, word: Word, position: int):
    """Apply the relation matching the pair at (position, position + 1).

    Returns a list of (word, coefficient) pairs, or None when the pair
    is already in canonical order (no redex).
    """
    if position < 0 or position >= len(word) - 1:
        raise IndexError(f"position {position} has no adjacent pair")
    left, right = word[position], word[position + 1]
    if not _is_redex(left, right):
        return None
    head, tail = word[:position], word[position + 2 :]
    swapped = head + (right, left) + tail
    if left.starred and not right.starred:
        if left.mode == right.mode:
            qi = complex(params.q[left.mode - 1])
            return [(head + tail, 1.0 + 0j), (swapped, qi)]
        return [(swapped, params.b[right.mode - 1, left.mode - 1])]
    # same-kind sort, larger mode on the left
    return [(swapped, params.b[left.mode - 1, right.mode - 1])]


def _find_redex(word: Word, strategy: str):
    positions = range(len(word) - 1)
    if strategy == "rightmost":
        positions = reversed(positions)
    elif strategy != "leftmost":
        raise ValueError(f"unknown strategy {strategy!r}")
    for p in positions:
        if _is_redex(word[p], word[p + 1]):
            return p
    return None


def _monomial_of_normal_word(word: Word, n_modes: int) -> NormalMonomial:
    plain = [0] * n_modes
    star = [0] * n_modes
    for g in word:
        (star if g.starred else plain)[g.mode - 1] += 1
    return NormalMonomial(tuple(plain), tuple(star))


def normal_order(
    params: QuonParams,
    word: Word,
    strategy: str = "leftmost",
    word_cap: int = DEFAULT_WORD_CAP,
    term_cap: int = DEFAULT_TERM_CAP,
) -> NormalPolynomial:
    """Rewrite a free word into its canonical normal-ordered polynomial."""
    if len(word) > word_cap:
        raise CapError(f"word length {len(word)} exceeds cap {word_cap}")
    for g in word:
        if g.mode < 1 or g.mode > params.n_modes:
            raise WordSyntaxError(f"mode {g.mode} out of range 1..{params.n_modes}")
    result = NormalPolynomial()
    pending = [(word, 1.0 + 0j)]
    while pending:
        if len(pending) + len(result.terms) > term_cap:
            raise CapError(f"normal ordering exceeded term cap {term_cap}")
        w, coeff = pending.pop()
        pos = _find_redex(w, strategy)
        if pos is None:
            result._add(_monomial_of_normal_word(w, params.n_modes), coeff)
            continue
        for w2, c2 in rewrite_step(params, w, pos):
            pending.append((w2, coeff * c2))
    return result


def poly_multiply(
    params: QuonParams,
    p: NormalPolynomial,
    r: NormalPolynomial,
    strategy: str = "leftmost",
    word_cap: int = DEFAULT_WORD_CAP,
    term_cap: int = DEFAULT_TERM_CAP,
) -> NormalPolynomial:
    """Bilinear product; concatenates monomial words and renormal-orders."""
    out = NormalPolynomial()
    for m1, c1 in p.terms.items():
        w1 = m1.as_word()
        for m2, c2 in r.terms.items():
            w = w1 + m2.as_word()
            part = normal_order(params, w, strategy, word_cap, term_cap)
            for mono, coeff in part.terms.items():
                out._add(mono, c1 * c2 * coeff)
    return out


def adjoint(
    params: QuonParams,
    p: NormalPolynomial,
    word_cap: int = DEFAULT_WORD_CAP,
    term_cap: int = DEFAULT_TERM_CAP,
) -> NormalPolynomial:
    """Star conjugate: reverse each word, flip stars, conjugate coefficients.

    An involution whenever the exchange phases are hermitian and q real.
    """
    out = NormalPolynomial()
    for mono, coeff in p.terms.items():
        flipped = tuple(
            Generator(g.mode, not g.starred) for g in reversed(mono.as_word())
        )
        part = normal_order(params, flipped, "leftmost", word_cap, term_cap)
        for m2, c2 in part.terms.items():
            out._add(m2, coeff.conjugate() * c2)
    return out


def _format_complex(value: complex) -> str:
    if abs(value.imag) <= PRUNE_TOL * max(1.0, abs(value.real)):
        return f"{value.real:.17g}"
    return f"({value.real:.17g}{value.imag:+.17g}j)"


def format_polynomial(p: NormalPolynomial) -> str:
    """Human-readable canonical form, terms sorted by monomial."""
    if not p.terms:
        return "0"
    out = []
    for mono, coeff in p.sorted_terms():
        sign = ""
        if abs(coeff.imag) <= PRUNE_TOL * max(1.0, abs(coeff.real)) and coeff.real < 0:
            coeff = -coeff
            sign = "-"
        cs = _format_complex(coeff)
        if str(mono) == "1":
            term = cs
        elif cs == "1":
            term = str(mono)
        else:
            term = f"{cs}·{mono}"
        if not out:
            out.append(f"-{term}" if sign else term)
        else:
            out.append(f" {sign or '+'} {term}")
    return "".join(out)


def polynomial_to_json(p: NormalPolynomial) -> list:
    """JSON twin of the canonical form: sorted term records."""
    return [
        {
            "plain": list(mono.plain),
            "star": list(mono.star),
            "coeff": [coeff.real, coeff.imag],
        }
        for mono, coeff in p.sorted_terms()
    ]
