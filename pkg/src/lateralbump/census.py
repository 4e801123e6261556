"""Exhaustive census of lateral-bump-free permutations.

Two routes count ``V_n``:

* :func:`census_direct` walks ``S_n`` depth first by choosing actual letters,
  sharing insertion work between common prefixes. A prefix with a lateral bump
  condemns every completion, so the whole subtree is counted at once.
* :func:`census_tree` grows ``V_{n+1}`` from ``V_n`` by appending ``k*`` and
  flattening, keeping only children whose last insertion is vertical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Callable, Iterable

from .core import Partition, Permutation, column_heights, format_word
from .errors import BoundExceeded, MemoryBudgetExceeded, VerificationFailure
from .insertion import (
    _insert,
    _insert_lateral,
    children,
    has_lateral_bump,
    lateral_probe,
    phi,
)

DIRECT_BOUND = 10
MAX_LEVEL_MEMBERS = 5_000_000


@dataclass(frozen=True)
class CensusRow:
    n: int
    v_count: int
    c_count: int
    u_count: int
    h_overlap: int

    @property
    def p_n(self) -> Fraction:
        return Fraction(self.v_count, factorial(self.n))

    @property
    def p_n_decimal(self) -> str:
        return f"{float(self.p_n):.12f}"

    def as_dict(self) -> dict:
        p = self.p_n
        return {
            "n": self.n,
            "v_count": self.v_count,
            "c_count": self.c_count,
            "p_n_exact_num": p.numerator,
            "p_n_exact_den": p.denominator,
            "p_n_decimal": self.p_n_decimal,
            "u_count": self.u_count,
            "h_overlap": self.h_overlap,
        }


def distinct_heights(shape: Iterable[int]) -> bool:
    """True when all columns of ``shape`` have different heights (``H_n``)."""
    h = column_heights(tuple(shape))
    return len(set(h)) == len(h)


def surviving_children(rows) -> int:
    """Number of ``k`` in ``0..n`` whose ``k*`` insertion stays vertical."""
    n = sum(len(r) for r in rows)
    doubled = [[2 * x for x in r] for r in rows]
    return sum(1 for k in range(n + 1) if not lateral_probe(doubled, 2 * k + 1))


@dataclass
class _Tally:
    v: int = 0
    c: int = 0
    u: int = 0
    h: int = 0


def _direct_subtree(n: int, prefix: tuple[int, ...]) -> _Tally:
    fact = [factorial(i) for i in range(n + 1)]
    tally = _Tally()
    rows: list[list[int]] = []
    for x in prefix:
        if _insert_lateral(rows, x):
            tally.c += fact[n - len(prefix)]
            return tally
    used = [False] * (n + 1)
    for x in prefix:
        used[x] = True

    def visit(rows, depth):
        if depth == n:
            tally.v += 1
            if surviving_children(rows) == n + 1:
                tally.u += 1
            if distinct_heights(len(r) for r in rows):
                tally.h += 1
            return
        for x in range(1, n + 1):
            if used[x]:
                continue
            nxt = [r[:] for r in rows]
            if _insert_lateral(nxt, x):
                tally.c += fact[n - depth - 1]
                continue
            used[x] = True
            visit(nxt, depth + 1)
            used[x] = False

    visit(rows, len(prefix))
    return tally


def census_direct(n: int, workers: int = 1, bound: int = DIRECT_BOUND) -> CensusRow:
    """Classify every permutation of ``S_n`` by direct Schensted insertion."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > bound:
        raise BoundExceeded(f"n={n} exceeds direct census bound {bound}")
    prefixes = [(x,) for x in range(1, n + 1)]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_direct_subtree, [n] * n, prefixes))
    else:
        parts = [_direct_subtree(n, pre) for pre in prefixes]
    v = sum(t.v for t in parts)
    c = sum(t.c for t in parts)
    assert v + c == factorial(n)
    return CensusRow(n, v, c, sum(t.u for t in parts), sum(t.h for t in parts))


@dataclass
class TreeMember:
    word: Permutation
    rows: tuple[tuple[int, ...], ...]
    parent: Permutation | None
    child_count: int = -1

    @property
    def shape(self) -> Partition:
        return Partition(tuple(len(r) for r in self.rows))


@dataclass
class TreeLevel:
    n: int
    members: list[TreeMember] = field(default_factory=list)

    def __len__(self):
        return len(self.members)

    def words(self) -> list[Permutation]:
        return [m.word for m in self.members]

    def edges(self) -> list[tuple[Permutation, Permutation]]:
        return [(m.parent, m.word) for m in self.members if m.parent is not None]


def _expand(member: TreeMember) -> list[TreeMember]:
    v = member.word
    n = len(v)
    doubled = [[2 * x for x in r] for r in member.rows]
    out = []
    for k in range(n + 1):
        if lateral_probe(doubled, 2 * k + 1):
            continue
        # Flat(v k*): letters above k shift up, k+1 is appended
        word = tuple(x + 1 if x > k else x for x in v) + (k + 1,)
        rows = [[x + 1 if x > k else x for x in r] for r in member.rows]
        bumps, _ = _insert(rows, k + 1)
        assert not any(b.lateral for b in bumps)
        out.append(TreeMember(word, tuple(tuple(r) for r in rows), v))
    member.child_count = len(out)
    return out


def _row_of(level: TreeLevel) -> CensusRow:
    n = level.n
    v = len(level)
    u = sum(1 for m in level.members if m.child_count == n + 1)
    h = sum(1 for m in level.members if distinct_heights(len(r) for r in m.rows))
    return CensusRow(n, v, factorial(n) - v, u, h)


@dataclass
class TreeCensus:
    rows: list[CensusRow]
    levels: dict[int, TreeLevel]


def census_tree(
    n_max: int,
    keep: Iterable[int] | bool = (),
    on_level: Callable[[TreeLevel], None] | None = None,
    max_members: int = MAX_LEVEL_MEMBERS,
) -> TreeCensus:
    """Grow the tree of lateral-bump-free permutations level by level.

    Only the frontier is held in memory; levels whose ``n`` is in ``keep``
    (or all levels when ``keep is True``) are returned. ``on_level`` sees each
    level once its child counts are known.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")
    keep_set = set(range(1, n_max + 1)) if keep is True else set(keep or ())
    rows: list[CensusRow] = []
    kept: dict[int, TreeLevel] = {}
    level = TreeLevel(1, [TreeMember((1,), ((1,),), None)])
    while True:
        if level.n < n_max:
            nxt = []
            for m in level.members:
                nxt.extend(_expand(m))
            if len(nxt) > max_members:
                raise MemoryBudgetExceeded(
                    f"level {level.n + 1} has {len(nxt)} members, budget {max_members}"
                )
            nxt.sort(key=lambda m: m.word)
        else:
            for m in level.members:
                m.child_count = surviving_children(m.rows)
            nxt = None
        rows.append(_row_of(level))
        if on_level is not None:
            on_level(level)
        if level.n in keep_set:
            kept[level.n] = level
        if nxt is None:
            break
        level = TreeLevel(level.n + 1, nxt)
    return TreeCensus(rows, kept)


@dataclass(frozen=True)
class ChildrenBoundReport:
    n: int
    members: int
    u_count: int
    equal_height_members: int
    max_children: int


def verify_children_bound(level: TreeLevel) -> ChildrenBoundReport:
    """Check the child-count caps on one fully built level.

    Every member has at most ``n+1`` children; a member whose shape has two
    columns of equal height has at most ``n``.
    """
    n = level.n
    u = eq = 0
    max_children = 0
    for m in level.members:
        c = m.child_count
        if c < 0:
            raise ValueError(f"child count of {format_word(m.word)} not computed")
        max_children = max(max_children, c)
        if c > n + 1:
            raise VerificationFailure("children <= n+1", format_word(m.word), f"{c} children")
        if not distinct_heights(len(r) for r in m.rows):
            eq += 1
            if c > n:
                raise VerificationFailure(
                    "equal column heights => children <= n", format_word(m.word), f"{c} children"
                )
        if c == n + 1:
            u += 1
    return ChildrenBoundReport(n, len(level), u, eq, max_children)


@dataclass(frozen=True)
class InverseSizeReport:
    n: int
    parents: int
    children_total: int


def verify_inverse_size(n: int, bound: int = 6) -> InverseSizeReport:
    """Each ``v`` in ``S_n`` has exactly ``n+1`` preimages under ``phi``,
    and the fibres partition ``S_{n+1}``."""
    if n > bound:
        raise BoundExceeded(f"n={n} exceeds inverse-size bound {bound}")
    seen: set[Permutation] = set()
    parents = 0
    for v in permutations(range(1, n + 1)):
        parents += 1
        kids = children(v)
        if len(set(kids)) != n + 1:
            raise VerificationFailure("|phi^-1(v)| = n+1", format_word(v), f"{len(set(kids))} children")
        for k, c in enumerate(kids):
            if phi(c) != v:
                raise VerificationFailure("phi(child) = v", format_word(c))
            if c[-1] != k + 1:
                raise VerificationFailure("last entry = k+1", format_word(c))
            if c in seen:
                raise VerificationFailure("fibres disjoint", format_word(c))
            seen.add(c)
    if seen != set(permutations(range(1, n + 2))):
        raise VerificationFailure("fibres cover S_{n+1}", f"n={n}")
    return InverseSizeReport(n, parents, len(seen))


def verify_restriction(n: int, bound: int = 8) -> int:
    """Every ``w`` in ``V_{n+1}`` flattens into ``V_n``; returns ``|V_{n+1}|``."""
    if n > bound:
        raise BoundExceeded(f"n={n} exceeds restriction bound {bound}")
    count = 0
    for w in permutations(range(1, n + 2)):
        if not has_lateral_bump(w):
            count += 1
            if has_lateral_bump(phi(w)):
                raise VerificationFailure("phi(V_{n+1}) in V_n", format_word(w))
    return count
