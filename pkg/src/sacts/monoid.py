"""Finite monoids as multiplication tables.

Elements are identified by table index; names are display-only.  All values
are immutable after construction and every operation is pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Iterator, Optional, Sequence

from .errors import (
    BoundExceeded,
    IdentityLawFails,
    MalformedTable,
    NotAssociative,
    NotClosed,
    NotIdempotent,
)

ENUMERATION_ORDER_BOUND = 5


@dataclass(frozen=True)
class Monoid:
    """A validated multiplication table with a designated identity."""

    elements: tuple[str, ...]
    identity: int
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.elements)
        if n == 0:
            raise MalformedTable("no elements")
        if len(set(self.elements)) != n:
            raise MalformedTable("duplicate element names")
        if not (0 <= self.identity < n):
            raise MalformedTable("identity index out of range")
        if len(self.table) != n:
            raise MalformedTable("table must have one row per element")
        for row in self.table:
            if len(row) != n:
                raise MalformedTable("ragged table row")
            for x in row:
                if not isinstance(x, int) or not (0 <= x < n):
                    raise MalformedTable(f"table entry {x!r} is not a valid index")
        t = self.table
        e = self.identity
        for a in range(n):
            if t[e][a] != a or t[a][e] != a:
                raise IdentityLawFails(a)
        for a in range(n):
            for b in range(n):
                ab = t[a][b]
                for c in range(n):
                    if t[ab][c] != t[a][t[b][c]]:
                        raise NotAssociative(a, b, c)

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def name(self, i: int) -> str:
        return self.elements[i]

    def index(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise KeyError(name) from None

    def __repr__(self):
        return f"Monoid({', '.join(self.elements)}; 1={self.elements[self.identity]})"


def validate_monoid(names: Sequence[str], identity: str,
                    rows: Sequence[Sequence[str]]) -> Monoid:
    """Build a Monoid from a table given in element names.

    Rejects unknown names, ragged rows, duplicate names and any table that
    violates the identity or associativity laws.
    """
    names = tuple(str(x) for x in names)
    if len(set(names)) != len(names):
        raise MalformedTable("duplicate element names")
    pos = {x: i for i, x in enumerate(names)}
    if identity not in pos:
        raise MalformedTable(f"identity {identity!r} not among the elements")
    if len(rows) != len(names):
        raise MalformedTable("table must have one row per element")
    table = []
    for row in rows:
        if len(row) != len(names):
            raise MalformedTable("ragged table row")
        out = []
        for cell in row:
            if cell not in pos:
                raise MalformedTable(f"table entry {cell!r} is not an element")
            out.append(pos[cell])
        table.append(tuple(out))
    return Monoid(names, pos[identity], tuple(table))


def is_commutative(m: Monoid) -> bool:
    t = m.table
    n = m.order
    return all(t[a][b] == t[b][a] for a in range(n) for b in range(a + 1, n))


def noncommuting_pair(m: Monoid) -> Optional[tuple[int, int]]:
    t = m.table
    for a in range(m.order):
        for b in range(a + 1, m.order):
            if t[a][b] != t[b][a]:
                return (a, b)
    return None


def is_group(m: Monoid) -> bool:
    e = m.identity
    t = m.table
    return all(any(t[a][b] == e and t[b][a] == e for b in range(m.order))
               for a in range(m.order))


def idempotents(m: Monoid) -> frozenset[int]:
    return frozenset(a for a in range(m.order) if m.table[a][a] == a)


def principal_left_ideal(m: Monoid, a: int) -> frozenset[int]:
    """Sa = {s*a : s in S}.  Always contains a."""
    return frozenset(m.table[s][a] for s in range(m.order))


def principal_right_ideal(m: Monoid, a: int) -> frozenset[int]:
    """aS = {a*s : s in S}."""
    return frozenset(m.table[a][s] for s in range(m.order))


def left_ideal_leq_idempotent(m: Monoid, a: int, e: int) -> bool:
    """Sa <= Se, decided by the shortcut a*e == a (e idempotent)."""
    if m.table[e][e] != e:
        raise NotIdempotent(e)
    return m.table[a][e] == a


def right_ideal_leq_idempotent(m: Monoid, a: int, e: int) -> bool:
    """aS <= eS, decided by the shortcut e*a == a (e idempotent)."""
    if m.table[e][e] != e:
        raise NotIdempotent(e)
    return m.table[e][a] == a


def is_linearly_ordered(m: Monoid, subset: Iterable[int]
                        ) -> tuple[bool, Optional[tuple[int, int]]]:
    """Whether Ta <= Tb or Tb <= Ta for all a, b in the subset T.

    T must be multiplicatively closed; Ta is computed literally as
    {t*a : t in T}.  On failure the witness incomparable pair is returned.
    """
    T = sorted(set(subset))
    tset = set(T)
    for a in T:
        for b in T:
            if m.table[a][b] not in tset:
                raise NotClosed(T, (a, b))
    ideals = {a: frozenset(m.table[t][a] for t in T) for a in T}
    for i, a in enumerate(T):
        for b in T[i + 1:]:
            if not (ideals[a] <= ideals[b] or ideals[b] <= ideals[a]):
                return False, (a, b)
    return True, None


# -- enumeration up to isomorphism -------------------------------------------

def canonical_table(table: Sequence[Sequence[int]], identity: int
                    ) -> tuple[tuple[int, ...], ...]:
    """Lexicographically minimal relabeling among permutations fixing the identity."""
    n = len(table)
    others = [i for i in range(n) if i != identity]
    best = None
    for perm in permutations(others):
        # p maps old index -> new index; identity pinned to 0
        p = [0] * n
        p[identity] = 0
        for new, old in enumerate(perm, start=1):
            p[old] = new
        inv = [0] * n
        for old, new in enumerate(p):
            inv[new] = old
        cand = tuple(tuple(p[table[inv[i]][inv[j]]] for j in range(n))
                     for i in range(n))
        if best is None or cand < best:
            best = cand
    return best


def _partial_associativity_ok(t: list[list[Optional[int]]], n: int) -> bool:
    for a in range(n):
        ra = t[a]
        for b in range(n):
            ab = ra[b]
            tb = t[b]
            for c in range(n):
                bc = tb[c]
                if ab is not None and t[ab][c] is not None:
                    if bc is not None and t[a][bc] is not None:
                        if t[ab][c] != t[a][bc]:
                            return False
    return True


def _enumerate_tables(n: int, commutative: bool) -> Iterator[tuple[tuple[int, ...], ...]]:
    # identity is pinned at index 0; only the lower block is free
    if n == 1:
        yield ((0,),)
        return
    cells = []
    for i in range(1, n):
        for j in range(1, n):
            if commutative and j < i:
                continue
            cells.append((i, j))

    table: list[list[Optional[int]]] = [[None] * n for _ in range(n)]
    for k in range(n):
        table[0][k] = k
        table[k][0] = k

    def fill(idx: int) -> Iterator[tuple[tuple[int, ...], ...]]:
        if idx == len(cells):
            yield tuple(tuple(row) for row in table)
            return
        i, j = cells[idx]
        for v in range(n):
            table[i][j] = v
            if commutative:
                table[j][i] = v
            if _partial_associativity_ok(table, n):
                yield from fill(idx + 1)
        table[i][j] = None
        if commutative:
            table[j][i] = None

    yield from fill(0)


def enumerate_monoids(n: int, commutative: bool = False,
                      bound: int = ENUMERATION_ORDER_BOUND) -> Iterator[Monoid]:
    """All monoids of order n up to isomorphism, in a deterministic order.

    Emitted tables are canonical (minimal relabeling with the identity at
    index 0) and sorted, so the sequence is reproducible.
    """
    if n < 1 or n > bound:
        raise BoundExceeded(f"order {n} outside 1..{bound}")
    seen = set()
    for table in _enumerate_tables(n, commutative):
        canon = canonical_table(table, 0)
        seen.add(canon)
    names = tuple(f"m{i}" for i in range(n))
    for canon in sorted(seen):
        yield Monoid(names, 0, canon)


def enumerate_commutative_monoids(n: int,
                                  bound: int = ENUMERATION_ORDER_BOUND
                                  ) -> Iterator[Monoid]:
    """Every commutative monoid of order n, once up to isomorphism."""
    return enumerate_monoids(n, commutative=True, bound=bound)
