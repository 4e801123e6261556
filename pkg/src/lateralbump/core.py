"""Passive combinatorial data: partitions, tableaux, words, exponent matrices.

Tableaux use French notation: ``rows[0]`` is the bottom row and columns grow
upward. Permutations and injective words are plain tuples of ints; the
helpers here validate and encode them. A half-integer letter ``k + 1/2`` is
represented exactly by doubling the whole word, see :func:`with_star`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import (
    InvalidPartition,
    InvalidTableau,
    MarginMismatch,
    NonInjectiveWord,
    NotAPermutationMatrix,
)

MAX_DEGREE = 64

Permutation = tuple[int, ...]
InjectiveWord = tuple[int, ...]


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        for a, b in zip(parts, parts[1:]):
            if b > a:
                raise InvalidPartition(f"parts not weakly decreasing: {parts}")
        if parts and parts[-1] < 1:
            raise InvalidPartition(f"parts must be positive: {parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def first_row(self) -> int:
        """Length of the first row, ``L(lambda)``; 0 for the empty partition."""
        return self.parts[0] if self.parts else 0

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def conjugate(self) -> Partition:
        return Partition(column_heights(self))

    def __str__(self):
        return format_partition(self)

    @classmethod
    def parse(cls, text: str) -> Partition:
        text = text.strip()
        if not text:
            return cls(())
        return cls(tuple(int(t) for t in text.split(",")))


def column_heights(lam: Partition | Sequence[int]) -> tuple[int, ...]:
    """Conjugate partition: ``heights[j]`` counts rows of length > j."""
    parts = tuple(lam)
    if not parts:
        return ()
    heights = []
    k = len(parts)
    for j in range(1, parts[0] + 1):
        while parts[k - 1] < j:
            k -= 1
        heights.append(k)
    return tuple(heights)


def partitions(n: int) -> Iterator[Partition]:
    """All partitions of ``n`` in reverse lexicographic order."""

    def rec(remaining, largest):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, largest), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest

    for parts in rec(n, n):
        yield Partition(parts)


def format_partition(lam: Partition | Sequence[int]) -> str:
    return ",".join(str(p) for p in lam)


@dataclass(frozen=True)
class Tableau:
    """A semistandard filling of a Young diagram, bottom row first."""

    rows: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if any(not r for r in rows):
            raise InvalidTableau("empty row inside tableau")
        Partition(tuple(len(r) for r in rows))
        for r in rows:
            for a, b in zip(r, r[1:]):
                if b < a:
                    raise InvalidTableau(f"row not weakly increasing: {r}")
        for lower, upper in zip(rows, rows[1:]):
            for a, b in zip(lower, upper):
                if b <= a:
                    raise InvalidTableau(f"column not strictly increasing at {a} < {b}")

    @property
    def shape(self) -> Partition:
        return Partition(tuple(len(r) for r in self.rows))

    @property
    def n(self) -> int:
        return sum(len(r) for r in self.rows)

    def columns(self) -> tuple[tuple[int, ...], ...]:
        """Columns read bottom to top, left to right."""
        return tuple(
            tuple(r[j] for r in self.rows[:h])
            for j, h in enumerate(column_heights(self.shape))
        )

    def entries(self) -> list[int]:
        return [x for r in self.rows for x in r]

    def is_standard(self) -> bool:
        return sorted(self.entries()) == list(range(1, self.n + 1))

    def weight(self) -> tuple[int, ...]:
        return weight(self)

    def __str__(self):
        # French: bottom row printed last
        return "\n".join(" ".join(str(x) for x in r) for r in reversed(self.rows))


def weight(t: Tableau) -> tuple[int, ...]:
    """Multiplicities ``(c_1, c_2, ...)`` up to the largest entry."""
    entries = t.entries()
    if not entries:
        return ()
    counts = [0] * max(entries)
    for x in entries:
        counts[x - 1] += 1
    return tuple(counts)


def check_injective(word: Sequence[int]) -> InjectiveWord:
    w = tuple(word)
    if len(set(w)) != len(w):
        raise NonInjectiveWord(f"repeated letter in {w}")
    return w


def is_permutation(word: Sequence[int]) -> bool:
    return sorted(word) == list(range(1, len(word) + 1))


def check_permutation(word: Sequence[int]) -> Permutation:
    w = tuple(word)
    if not is_permutation(w):
        raise NonInjectiveWord(f"{w} is not a permutation of 1..{len(w)}")
    return w


def with_star(v: Sequence[int], k: int) -> InjectiveWord:
    """The word ``v k*`` with ``k* = k + 1/2``, in doubled encoding."""
    return tuple(2 * x for x in v) + (2 * k + 1,)


def format_word(word: Sequence[int]) -> str:
    if len(word) <= 9 and all(0 <= x <= 9 for x in word):
        return "".join(str(x) for x in word)
    return ",".join(str(x) for x in word)


def parse_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if "," in text:
        return tuple(int(t) for t in text.split(","))
    return tuple(int(c) for c in text)


@dataclass(frozen=True)
class ExponentMatrix:
    """A ``p x q`` matrix over the naturals, stored flat in row-major order."""

    p: int
    q: int
    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(x) for x in self.entries)
        object.__setattr__(self, "entries", entries)
        if len(entries) != self.p * self.q:
            raise ValueError(f"expected {self.p * self.q} entries, got {len(entries)}")
        if any(x < 0 for x in entries):
            raise ValueError("exponent matrix entries must be non-negative")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> ExponentMatrix:
        rows = [tuple(r) for r in rows]
        p = len(rows)
        q = len(rows[0]) if rows else 0
        if any(len(r) != q for r in rows):
            raise ValueError("ragged matrix")
        return cls(p, q, tuple(x for r in rows for x in r))

    @classmethod
    def zeros(cls, p: int, q: int) -> ExponentMatrix:
        return cls(p, q, (0,) * (p * q))

    @classmethod
    def parse(cls, text: str) -> ExponentMatrix:
        return cls.from_rows([[int(x) for x in r.split(",")] for r in text.strip().split(";")])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.q + j]

    def rows(self) -> tuple[tuple[int, ...], ...]:
        q = self.q
        return tuple(self.entries[i * q:(i + 1) * q] for i in range(self.p))

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(r) for r in self.rows())

    def col_sums(self) -> tuple[int, ...]:
        return tuple(sum(self.entries[j::self.q]) for j in range(self.q)) if self.p else (0,) * self.q

    def total(self) -> int:
        return sum(self.entries)

    def margins(self) -> MarginPair:
        return MarginPair(self.row_sums(), self.col_sums())

    def __str__(self):
        return format_matrix(self)


def format_matrix(m: ExponentMatrix) -> str:
    return ";".join(",".join(str(x) for x in r) for r in m.rows())


@dataclass(frozen=True)
class MarginPair:
    sigma: tuple[int, ...]
    pi: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(int(x) for x in self.sigma))
        object.__setattr__(self, "pi", tuple(int(x) for x in self.pi))
        if any(x < 0 for x in self.sigma + self.pi):
            raise ValueError("margins must be non-negative")
        if sum(self.sigma) != sum(self.pi):
            raise MarginMismatch(f"|sigma|={sum(self.sigma)} != |pi|={sum(self.pi)}")

    @property
    def n(self) -> int:
        return sum(self.sigma)


@dataclass(frozen=True)
class Biword:
    top: tuple[int, ...]
    bottom: tuple[int, ...]

    def __post_init__(self):
        if len(self.top) != len(self.bottom):
            raise ValueError("biword rows must have equal length")

    def __len__(self):
        return len(self.top)

    def __iter__(self):
        return zip(self.top, self.bottom)

    def __str__(self):
        return f"({format_word(self.top)} | {format_word(self.bottom)})"


def biword(alpha: ExponentMatrix) -> Biword:
    """Read ``alpha`` down the columns, left to right."""
    top, bottom = [], []
    for j in range(alpha.q):
        for i in range(alpha.p):
            c = alpha[i, j]
            top.extend([i + 1] * c)
            bottom.extend([j + 1] * c)
    return Biword(tuple(top), tuple(bottom))


def matrix_of_permutation(w: Sequence[int]) -> ExponentMatrix:
    w = check_permutation(w)
    n = len(w)
    entries = [0] * (n * n)
    for i, wi in enumerate(w):
        entries[(wi - 1) * n + i] = 1
    return ExponentMatrix(n, n, tuple(entries))


def permutation_of_matrix(alpha: ExponentMatrix) -> Permutation:
    """``w_i`` is the row of the single 1 in column ``i``."""
    n = alpha.p
    if (
        alpha.q != n
        or any(x not in (0, 1) for x in alpha.entries)
        or any(s != 1 for s in alpha.row_sums())
        or any(s != 1 for s in alpha.col_sums())
    ):
        raise NotAPermutationMatrix(f"{format_matrix(alpha)} is not a permutation matrix")
    return tuple(next(i + 1 for i in range(n) if alpha[i, j]) for j in range(n))


def enumerate_margin_matrices(m: MarginPair) -> list[ExponentMatrix]:
    """Every matrix with row sums ``sigma`` and column sums ``pi``.

    Rows are filled top to bottom and each cell tries its largest feasible
    value first, so the output is in decreasing lexicographic order of the
    row-major entry sequence.
    """
    if sum(m.sigma) != sum(m.pi):
        raise MarginMismatch(f"|sigma|={sum(m.sigma)} != |pi|={sum(m.pi)}")
    p, q = len(m.sigma), len(m.pi)
    out: list[ExponentMatrix] = []
    cols = list(m.pi)
    cells: list[int] = []

    def fill_row(i, j, left):
        if j == q:
            if left == 0:
                fill(i + 1)
            return
        # capacity of the columns after j bounds how little we may place here
        rest_cap = sum(cols[j + 1:])
        lo = max(0, left - rest_cap)
        hi = min(left, cols[j])
        for v in range(hi, lo - 1, -1):
            cols[j] -= v
            cells.append(v)
            fill_row(i, j + 1, left - v)
            cells.pop()
            cols[j] += v

    def fill(i):
        if i == p:
            if not any(cols):
                out.append(ExponentMatrix(p, q, tuple(cells)))
            return
        fill_row(i, 0, m.sigma[i])

    fill(0)
    return out
