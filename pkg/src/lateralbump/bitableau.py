"""Bitableaux as products of determinantal minors, and RSK operator blocks.

A polynomial in the variables ``z[i,j]`` is a :class:`SparsePoly` keyed by its
exponent matrix, flattened row-major. Two independent routes produce a
coefficient ``[z^beta][P|Q]``: full expansion of the product of minors
(:func:`bitableau`) and a pruned factor-by-factor search (:func:`coefficient`)
that never materialises the product.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Sequence

from .core import (
    ExponentMatrix,
    MarginPair,
    Tableau,
    enumerate_margin_matrices,
    format_matrix,
    matrix_of_permutation,
)
from .errors import (
    BlockTooLarge,
    BoundExceeded,
    CoefficientOverflow,
    MarginMismatch,
    ShapeMismatch,
)
from .insertion import has_lateral_bump, rsk

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1
MAX_BLOCK_SIZE = 10**4
POLY_CENSUS_BOUND = 6
BUMP_CENSUS_BOUND = 10


def _checked(v: int) -> int:
    if not INT64_MIN <= v <= INT64_MAX:
        raise CoefficientOverflow(f"coefficient {v} does not fit in 64 bits")
    return v


class SparsePoly:
    """Integer polynomial in ``z[i,j]``, ``1 <= i <= p``, ``1 <= j <= q``."""

    __slots__ = ("p", "q", "terms")

    def __init__(self, p: int, q: int, terms: dict[tuple[int, ...], int] | None = None):
        self.p = p
        self.q = q
        self.terms: dict[tuple[int, ...], int] = {}
        for key, c in (terms or {}).items():
            if len(key) != p * q:
                raise ValueError("exponent key does not match ambient dimensions")
            if c:
                self.terms[key] = _checked(c)

    @classmethod
    def one(cls, p: int, q: int) -> SparsePoly:
        return cls(p, q, {(0,) * (p * q): 1})

    @classmethod
    def monomial(cls, m: ExponentMatrix, coeff: int = 1) -> SparsePoly:
        return cls(m.p, m.q, {m.entries: coeff})

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return (self.p, self.q, self.terms) == (other.p, other.q, other.terms)

    def _compatible(self, other: SparsePoly):
        if (self.p, self.q) != (other.p, other.q):
            raise ValueError("polynomials live in different ambient rings")

    def __add__(self, other: SparsePoly) -> SparsePoly:
        self._compatible(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = _checked(out.get(k, 0) + c)
        return SparsePoly(self.p, self.q, out)

    def __neg__(self) -> SparsePoly:
        return SparsePoly(self.p, self.q, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: SparsePoly) -> SparsePoly:
        return self + (-other)

    def __mul__(self, other: SparsePoly) -> SparsePoly:
        self._compatible(other)
        out: dict[tuple[int, ...], int] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(k1, k2))
                out[key] = _checked(out.get(key, 0) + _checked(c1 * c2))
        return SparsePoly(self.p, self.q, out)

    def coefficient(self, beta: ExponentMatrix) -> int:
        if (beta.p, beta.q) != (self.p, self.q):
            beta = _embed(beta, self.p, self.q)
            if beta is None:
                return 0
        return self.terms.get(beta.entries, 0)

    def degrees(self) -> set[int]:
        return {sum(k) for k in self.terms}

    def exponents(self) -> list[ExponentMatrix]:
        return [ExponentMatrix(self.p, self.q, k) for k in sorted(self.terms)]

    def format(self) -> str:
        lines = []
        for key in sorted(self.terms):
            factors = []
            for idx, e in enumerate(key):
                if e:
                    i, j = divmod(idx, self.q)
                    factors.append(f"z[{i + 1},{j + 1}]^{e}")
            lines.append(" * ".join([str(self.terms[key])] + factors))
        return "\n".join(lines)

    def __repr__(self):
        return f"SparsePoly(p={self.p}, q={self.q}, terms={len(self.terms)})"


def _embed(m: ExponentMatrix, p: int, q: int) -> ExponentMatrix | None:
    """Pad or trim ``m`` to ``p x q``; None if a nonzero entry falls outside."""
    entries = [0] * (p * q)
    for i in range(m.p):
        for j in range(m.q):
            v = m[i, j]
            if v:
                if i >= p or j >= q:
                    return None
                entries[i * q + j] = v
    return ExponentMatrix(p, q, tuple(entries))


@dataclass(frozen=True)
class MinorSpec:
    row_indices: tuple[int, ...]
    col_indices: tuple[int, ...]

    def __post_init__(self):
        for idx in (self.row_indices, self.col_indices):
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValueError(f"minor indices must strictly increase: {idx}")
        if len(self.row_indices) != len(self.col_indices):
            raise ShapeMismatch("minor must be square")

    @property
    def size(self) -> int:
        return len(self.row_indices)


def _sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def _leibniz(h: int) -> tuple[tuple[int, tuple[int, ...]], ...]:
    return tuple((_sign(s), s) for s in permutations(range(h)))


def minor_terms(spec: MinorSpec) -> list[tuple[int, tuple[tuple[int, int], ...]]]:
    """Leibniz terms as ``(sign, ((row, col), ...))`` with 1-based indices."""
    rows, cols = spec.row_indices, spec.col_indices
    return [
        (sign, tuple((rows[i], cols[s[i]]) for i in range(len(rows))))
        for sign, s in _leibniz(spec.size)
    ]


def minor_poly(spec: MinorSpec, p: int | None = None, q: int | None = None) -> SparsePoly:
    """Full determinant expansion of the minor; ``h!`` terms, coefficients +-1."""
    if spec.size < 1:
        raise ValueError("minor must have size at least 1")
    p = p or max(spec.row_indices)
    q = q or max(spec.col_indices)
    terms = {}
    for sign, cells in minor_terms(spec):
        key = [0] * (p * q)
        for r, c in cells:
            key[(r - 1) * q + (c - 1)] += 1
        terms[tuple(key)] = sign
    return SparsePoly(p, q, terms)


def minor_specs(P: Tableau, Q: Tableau) -> list[MinorSpec]:
    if P.shape != Q.shape:
        raise ShapeMismatch(f"shapes {P.shape} and {Q.shape} differ")
    return [MinorSpec(a, b) for a, b in zip(P.columns(), Q.columns())]


def _dims(P: Tableau, Q: Tableau) -> tuple[int, int]:
    return max(P.entries(), default=0), max(Q.entries(), default=0)


def bitableau(P: Tableau, Q: Tableau, p: int | None = None, q: int | None = None) -> SparsePoly:
    """``[P|Q]``: product over columns of the minors they index, fully expanded."""
    specs = minor_specs(P, Q)
    dp, dq = _dims(P, Q)
    p = max(p or 0, dp)
    q = max(q or 0, dq)
    out = SparsePoly.one(p, q)
    for spec in specs:
        out = out * minor_poly(spec, p, q)
    return out


def coefficient(P: Tableau, Q: Tableau, beta: ExponentMatrix) -> int:
    """``[z^beta][P|Q]`` by depth-first search over one Leibniz term per minor.

    Each chosen term is subtracted from the residual exponent; a branch is
    cut as soon as a cell would go negative.
    """
    specs = minor_specs(P, Q)
    if beta.total() != P.n:
        return 0
    residual: dict[tuple[int, int], int] = {}
    for i in range(beta.p):
        for j in range(beta.q):
            if beta[i, j]:
                residual[(i + 1, j + 1)] = beta[i, j]
    # only terms whose every cell is in the support can ever fit
    factors = []
    for spec in specs:
        terms = [(s, cells) for s, cells in minor_terms(spec) if all(c in residual for c in cells)]
        if not terms:
            return 0
        factors.append(terms)

    def search(idx: int) -> int:
        if idx == len(factors):
            return 1
        total = 0
        for sign, cells in factors[idx]:
            if all(residual[c] > 0 for c in cells):
                for c in cells:
                    residual[c] -= 1
                total += sign * search(idx + 1)
                for c in cells:
                    residual[c] += 1
        return _checked(total)

    # degrees match, so a full descent exhausts the residual exactly
    return search(0)


def rsk_entry(beta: ExponentMatrix, alpha: ExponentMatrix) -> int:
    """``RSK_{sigma,pi}(beta, alpha) = [z^beta][P_alpha | Q_alpha]``."""
    if beta.margins() != alpha.margins():
        raise MarginMismatch(
            f"{format_matrix(beta)} and {format_matrix(alpha)} have different margins"
        )
    P, Q, _ = rsk(alpha)
    return coefficient(P, Q, beta)


def diagonal_entry(w: Sequence[int]) -> int:
    """``RSK_{1^n,1^n}(alpha_w, alpha_w)`` for a permutation ``w``."""
    a = matrix_of_permutation(w)
    return rsk_entry(a, a)


@dataclass(frozen=True)
class BlockMatrix:
    margin: MarginPair
    basis: tuple[ExponentMatrix, ...]
    entries: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.basis)

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.entries[i][i] for i in range(self.size))

    def trace(self) -> int:
        return sum(self.diagonal())

    def to_dict(self) -> dict:
        return {
            "sigma": list(self.margin.sigma),
            "pi": list(self.margin.pi),
            "basis": [format_matrix(b) for b in self.basis],
            "entries": [list(r) for r in self.entries],
            "trace": self.trace(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _block_column(alpha: ExponentMatrix, basis: Sequence[ExponentMatrix]) -> list[int]:
    P, Q, _ = rsk(alpha)
    poly = bitableau(P, Q, alpha.p, alpha.q)
    return [poly.coefficient(b) for b in basis]


def block(m: MarginPair, max_size: int = MAX_BLOCK_SIZE, workers: int = 1) -> BlockMatrix:
    """The block ``RSK_{sigma,pi}`` over the canonical monomial basis.

    Column ``a`` is read off the full expansion of ``[P_a|Q_a]``.
    """
    basis = enumerate_margin_matrices(m)
    if len(basis) > max_size:
        raise BlockTooLarge(f"block dimension {len(basis)} exceeds {max_size}")
    if workers > 1 and len(basis) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as ex:
            cols = list(ex.map(_block_column, basis, [basis] * len(basis)))
    else:
        cols = [_block_column(a, basis) for a in basis]
    entries = tuple(tuple(cols[a][b] for a in range(len(basis))) for b in range(len(basis)))
    return BlockMatrix(m, tuple(basis), entries)


@dataclass(frozen=True)
class DiagonalCensus:
    n: int
    v_count: int
    c_count: int
    plus: int | None = None
    minus: int | None = None
    method: str = "poly"
    zero_witnesses: tuple[tuple[int, ...], ...] = field(default=(), repr=False)


def diagonal_zero_census(n: int, method: str = "poly") -> DiagonalCensus:
    """Count vanishing diagonal entries of ``RSK_{1^n,1^n}``.

    ``method="poly"`` extracts each coefficient and records signs;
    ``method="bump"`` counts lateral bumps instead.
    """
    from itertools import permutations as perms

    bound = POLY_CENSUS_BOUND if method == "poly" else BUMP_CENSUS_BOUND
    if method not in ("poly", "bump"):
        raise ValueError(f"unknown method {method!r}")
    if n > bound:
        raise BoundExceeded(f"n={n} exceeds the {method} census bound {bound}")
    plus = minus = zero = 0
    witnesses = []
    for w in perms(range(1, n + 1)):
        if method == "poly":
            d = diagonal_entry(w)
            if d not in (-1, 0, 1):
                raise AssertionError(f"diagonal entry {d} outside {{-1,0,1}} at {w}")
            if d == 0:
                zero += 1
                witnesses.append(w)
            elif d == 1:
                plus += 1
            else:
                minus += 1
        else:
            if has_lateral_bump(w):
                zero += 1
    total = factorial(n)
    v = total - zero
    assert v + zero == total
    if method == "poly":
        return DiagonalCensus(n, v, zero, plus, minus, method, tuple(witnesses))
    return DiagonalCensus(n, v, zero, None, None, method)
