"""Row insertion with bump classification, Schensted insertion and RSK.

Rows and columns in positions are 1-based with row 1 at the bottom. A bump
carries a value from row ``r`` to row ``r + 1``; it is *vertical* when the
value keeps its column and *lateral* when it lands strictly to the left.

The public functions return immutable :class:`~lateralbump.core.Tableau`
values. The underscore kernels work on ``list[list[int]]`` in place and are
what the enumeration and sampling code call in their inner loops.
"""

from __future__ import annotations

import enum
from bisect import bisect_right
from dataclasses import dataclass
from typing import Sequence

from .core import (
    Biword,
    ExponentMatrix,
    Partition,
    Permutation,
    Tableau,
    biword,
    check_injective,
    format_word,
    with_star,
)


class BumpKind(enum.Enum):
    VERTICAL = "V"
    LATERAL = "L"


@dataclass(frozen=True)
class BumpEvent:
    value: int
    from_row: int
    from_col: int
    to_row: int
    to_col: int

    @property
    def kind(self) -> BumpKind:
        return BumpKind.VERTICAL if self.to_col == self.from_col else BumpKind.LATERAL

    @property
    def lateral(self) -> bool:
        return self.to_col != self.from_col

    def __str__(self):
        return (
            f"({self.value},{self.from_row},{self.from_col})"
            f"->({self.to_row},{self.to_col}):{self.kind.value}"
        )


@dataclass(frozen=True)
class InsertionStep:
    letter: int
    record: int | None
    bumps: tuple[BumpEvent, ...]
    new_box: tuple[int, int]

    @property
    def lateral(self) -> bool:
        return any(b.lateral for b in self.bumps)


@dataclass(frozen=True)
class InsertionTrace:
    steps: tuple[InsertionStep, ...] = ()

    def __iter__(self):
        return iter(self.steps)

    def __len__(self):
        return len(self.steps)

    @property
    def lateral(self) -> bool:
        return any(s.lateral for s in self.steps)

    def classification(self) -> tuple[tuple[tuple[int, int, int, int, str], ...], ...]:
        """Bump positions and kinds per step, with the moved values erased."""
        return tuple(
            tuple((b.from_row, b.from_col, b.to_row, b.to_col, b.kind.value) for b in s.bumps)
            for s in self.steps
        )

    def format(self) -> str:
        lines = []
        for i, s in enumerate(self.steps, 1):
            bumps = ",".join(str(b) for b in s.bumps)
            lines.append(
                f"step={i} insert={s.letter} record={s.record} "
                f"bumps=[{bumps}] newbox=({s.new_box[0]},{s.new_box[1]})"
            )
        return "\n".join(lines)


def _insert(rows: list[list[int]], x: int) -> tuple[list[BumpEvent], tuple[int, int]]:
    """Row-insert ``x`` into ``rows`` in place; return bumps and the new box."""
    bumps = []
    r = 0
    while True:
        if r == len(rows):
            rows.append([x])
            return bumps, (r + 1, 1)
        row = rows[r]
        j = bisect_right(row, x)
        if j == len(row):
            row.append(x)
            return bumps, (r + 1, j + 1)
        y = row[j]
        row[j] = x
        above = rows[r + 1] if r + 1 < len(rows) else ()
        j2 = bisect_right(above, y)
        bumps.append(BumpEvent(y, r + 1, j + 1, r + 2, j2 + 1))
        x = y
        r += 1


def _insert_lateral(rows: list[list[int]], x: int) -> bool:
    """Row-insert ``x`` in place, stopping at the first lateral bump.

    Returns True when a lateral bump occurred; ``rows`` is then left partly
    updated and must be discarded.
    """
    r = 0
    prev = -1
    while r < len(rows):
        row = rows[r]
        j = bisect_right(row, x)
        if j < prev:
            return True
        if j == len(row):
            row.append(x)
            return False
        row[j], x = x, row[j]
        prev = j
        r += 1
    if prev > 0:
        return True
    rows.append([x])
    return False


def _insert_shape(rows: list[list[int]], x: int) -> None:
    for row in rows:
        j = bisect_right(row, x)
        if j == len(row):
            row.append(x)
            return
        row[j], x = x, row[j]
    rows.append([x])


def lateral_probe(rows: Sequence[Sequence[int]], x: int) -> bool:
    """Would row-inserting ``x`` cause a lateral bump? ``rows`` is not modified.

    Each row is changed at most once on the way up, so every comparison can be
    made against the untouched rows.
    """
    prev = -1
    for row in rows:
        j = bisect_right(row, x)
        if j < prev:
            return True
        if j == len(row):
            return False
        x = row[j]
        prev = j
    return prev > 0


def row_insert(t: Tableau, x: int, record: int | None = None) -> tuple[Tableau, InsertionStep]:
    rows = [list(r) for r in t.rows]
    bumps, box = _insert(rows, x)
    return Tableau(tuple(tuple(r) for r in rows)), InsertionStep(x, record, tuple(bumps), box)


def schensted(word: Sequence[int]) -> tuple[Tableau, InsertionTrace]:
    """Insertion tableau of an injective word with the full bump trace.

    The recording partner of the ``i``-th letter is ``i``.
    """
    w = check_injective(word)
    rows: list[list[int]] = []
    steps = []
    for i, x in enumerate(w, 1):
        bumps, box = _insert(rows, x)
        steps.append(InsertionStep(x, i, tuple(bumps), box))
    return Tableau(tuple(tuple(r) for r in rows)), InsertionTrace(tuple(steps))


def insertion_tableau(word: Sequence[int]) -> Tableau:
    rows: list[list[int]] = []
    for x in word:
        _insert_shape(rows, x)
    return Tableau(tuple(tuple(r) for r in rows))


def rsk_biword(bw: Biword) -> tuple[Tableau, Tableau, InsertionTrace]:
    p_rows: list[list[int]] = []
    q_rows: list[list[int]] = []
    steps = []
    for a, b in bw:
        bumps, (r, c) = _insert(p_rows, a)
        if r > len(q_rows):
            q_rows.append([])
        q_rows[r - 1].append(b)
        assert len(q_rows[r - 1]) == c
        steps.append(InsertionStep(a, b, tuple(bumps), (r, c)))
    p = Tableau(tuple(tuple(r) for r in p_rows))
    q = Tableau(tuple(tuple(r) for r in q_rows))
    return p, q, InsertionTrace(tuple(steps))


def rsk(alpha: ExponentMatrix) -> tuple[Tableau, Tableau, InsertionTrace]:
    """RSK image ``(P, Q)`` of ``alpha`` along its column-major biword."""
    return rsk_biword(biword(alpha))


def rsk_permutation(w: Sequence[int]) -> tuple[Tableau, Tableau]:
    p, q, _ = rsk_biword(Biword(tuple(w), tuple(range(1, len(w) + 1))))
    return p, q


def shape_of(word: Sequence[int]) -> Partition:
    """``sh(w)``: shape of the insertion tableau, without building a trace."""
    rows: list[list[int]] = []
    for x in word:
        _insert_shape(rows, x)
    return Partition(tuple(len(r) for r in rows))


def has_lateral_bump(word: Sequence[int]) -> bool:
    w = check_injective(word)
    rows: list[list[int]] = []
    for x in w:
        if _insert_lateral(rows, x):
            return True
    return False


def flat(word: Sequence[int]) -> Permutation:
    """Replace each letter by its rank among the letters of ``word``."""
    w = check_injective(word)
    rank = {x: i for i, x in enumerate(sorted(w), 1)}
    return tuple(rank[x] for x in w)


def phi(w: Sequence[int]) -> Permutation:
    """Drop the last letter and flatten."""
    if len(w) < 2:
        raise ValueError("phi needs a permutation of length at least 2")
    return flat(w[:-1])


def children(v: Sequence[int]) -> list[Permutation]:
    """``Flat(v k*)`` for ``k = 0..n``; exactly the fibre of ``phi`` over ``v``."""
    return [flat(with_star(v, k)) for k in range(len(v) + 1)]


def children_in_V(v: Sequence[int], p_v: Tableau | None = None) -> list[Permutation]:
    """Children of ``v`` that have no lateral bump.

    ``v`` itself must be lateral-bump free. Only the last insertion can
    introduce a lateral bump, so each candidate ``k`` costs one probe of
    ``2k+1`` into the doubled insertion tableau of ``v``.
    """
    if p_v is None:
        p_v = insertion_tableau(v)
    doubled = [[2 * x for x in r] for r in p_v.rows]
    return [
        flat(with_star(v, k))
        for k in range(len(v) + 1)
        if not lateral_probe(doubled, 2 * k + 1)
    ]


def describe(word: Sequence[int]) -> str:
    p, trace = schensted(word)
    return f"w={format_word(word)}\n{trace.format()}\nP=\n{p}"
