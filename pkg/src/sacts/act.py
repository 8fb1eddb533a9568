"""Finite left acts of a monoid: validation, orbits, regularity, quotients.

An act stores its action as one row per monoid element; points are carrier
indices and names are display-only, mirroring the monoid convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    CompatibilityFails,
    IdentityFails,
    MalformedTable,
    MixedMonoids,
    NotCompatible,
)
from .monoid import Monoid, idempotents


@dataclass(frozen=True)
class Act:
    """A validated left action of ``monoid`` on ``carrier``."""

    monoid: Monoid
    carrier: tuple[str, ...]
    action: tuple[tuple[int, ...], ...]  # action[s][p] = index of s*p

    def __post_init__(self):
        m = len(self.carrier)
        if m == 0:
            raise MalformedTable("empty carrier")
        if len(set(self.carrier)) != m:
            raise MalformedTable("duplicate point names")
        if len(self.action) != self.monoid.order:
            raise MalformedTable("action needs one row per monoid element")
        for row in self.action:
            if len(row) != m:
                raise MalformedTable("ragged action row")
            for x in row:
                if not isinstance(x, int) or not (0 <= x < m):
                    raise MalformedTable(f"action entry {x!r} is not a point index")
        act = self.action
        e = self.monoid.identity
        for p in range(m):
            if act[e][p] != p:
                raise IdentityFails(p)
        table = self.monoid.table
        n = self.monoid.order
        for s1 in range(n):
            for s2 in range(n):
                comp = act[table[s1][s2]]
                for p in range(m):
                    if act[s1][act[s2][p]] != comp[p]:
                        raise CompatibilityFails(s1, s2, p)

    @property
    def size(self) -> int:
        return len(self.carrier)

    def apply(self, s: int, p: int) -> int:
        return self.action[s][p]

    def point(self, name: str) -> int:
        try:
            return self.carrier.index(name)
        except ValueError:
            raise KeyError(name) from None

    def __repr__(self):
        return f"Act({self.monoid!r} on {len(self.carrier)} points)"


@dataclass(frozen=True)
class Congruence:
    """An action-compatible partition of an act's carrier.

    ``block_of`` maps each point to its block id; blocks are numbered by
    first occurrence along the carrier, so the representation is canonical.
    """

    act: Act
    block_of: tuple[int, ...]

    def __post_init__(self):
        m = self.act.size
        if len(self.block_of) != m:
            raise MalformedTable("partition must cover the carrier")
        seen: dict[int, int] = {}
        for p, b in enumerate(self.block_of):
            if b not in seen:
                if b != len(seen):
                    raise MalformedTable("blocks must be numbered by first occurrence")
                seen[b] = p
        for s in range(self.act.monoid.order):
            row = self.act.action[s]
            for a in range(m):
                for b in range(a + 1, m):
                    if self.block_of[a] == self.block_of[b]:
                        if self.block_of[row[a]] != self.block_of[row[b]]:
                            raise NotCompatible(s, a, b)

    @property
    def block_count(self) -> int:
        return max(self.block_of) + 1

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.block_count)]
        for p, b in enumerate(self.block_of):
            out[b].append(p)
        return tuple(tuple(block) for block in out)


def validate_act(monoid: Monoid, carrier: Sequence[str],
                 rows: Sequence[Sequence[str]]) -> Act:
    """Build an Act from rows given in point names (one row per monoid element)."""
    carrier = tuple(str(x) for x in carrier)
    pos = {x: i for i, x in enumerate(carrier)}
    if len(pos) != len(carrier):
        raise MalformedTable("duplicate point names")
    if len(rows) != monoid.order:
        raise MalformedTable("action needs one row per monoid element")
    action = []
    for row in rows:
        if len(row) != len(carrier):
            raise MalformedTable("ragged action row")
        out = []
        for cell in row:
            if cell not in pos:
                raise MalformedTable(f"action entry {cell!r} is not a carrier point")
            out.append(pos[cell])
        action.append(tuple(out))
    return Act(monoid, carrier, tuple(action))


def regular_representation(m: Monoid) -> Act:
    """The monoid acting on itself by left multiplication."""
    return Act(m, m.elements, m.table)


def cyclic_subact(a: Act, p: int) -> tuple[Act, tuple[int, ...]]:
    """The orbit {s*p : s in S} with the restricted action.

    Returns the sub-act and the inclusion map (new index -> old index).
    """
    members = sorted({a.action[s][p] for s in range(a.monoid.order)})
    old_to_new = {old: new for new, old in enumerate(members)}
    carrier = tuple(a.carrier[old] for old in members)
    action = tuple(tuple(old_to_new[a.action[s][old]] for old in members)
                   for s in range(a.monoid.order))
    return Act(a.monoid, carrier, action), tuple(members)


def kernel_classes(a: Act, p: int) -> tuple[int, ...]:
    """For each monoid element s, the value s*p; two elements are kernel-
    equivalent at p iff their entries agree."""
    return tuple(a.action[s][p] for s in range(a.monoid.order))


def is_act_regular(a: Act, p: int) -> tuple[bool, Optional[int]]:
    """Whether p admits u in S with u*p = p and s*p = t*p implying s*u = t*u.

    Such a u determines the unique orbit-to-monoid homomorphism sending p
    to u.  Returns the least witness u, if any.
    """
    col = kernel_classes(a, p)
    table = a.monoid.table
    n = a.monoid.order
    groups: dict[int, list[int]] = {}
    for s, v in enumerate(col):
        groups.setdefault(v, []).append(s)
    for u in range(n):
        if a.action[u][p] != p:
            continue
        if all(len({table[s][u] for s in members}) == 1
               for members in groups.values()):
            return True, u
    return False, None


def is_regular_act(a: Act) -> tuple[bool, Optional[int]]:
    """All points regular?  On failure returns the least non-regular point."""
    for p in range(a.size):
        ok, _ = is_act_regular(a, p)
        if not ok:
            return False, p
    return True, None


def act_regular_elements(m: Monoid) -> frozenset[int]:
    """Elements of S that are regular as points of the self-action."""
    rep = regular_representation(m)
    return frozenset(p for p in range(m.order) if is_act_regular(rep, p)[0])


def regular_part(m: Monoid) -> frozenset[int]:
    """The largest subset R of S whose orbits consist of regular points.

    Computed directly as {a : Sa subset of regular elements} and re-derived
    as the union of all regular orbits; the two must agree.
    """
    reg = act_regular_elements(m)
    table = m.table
    n = m.order
    direct = frozenset(a for a in range(n)
                       if all(table[s][a] in reg for s in range(n)))
    union: set[int] = set()
    for a in range(n):
        orbit = {table[s][a] for s in range(n)}
        if orbit <= reg:
            union |= orbit
    assert direct == frozenset(union), "regular part computations disagree"
    return direct


def cyclic_iso(a: Act, p: int, b: Act, q: int) -> bool:
    """Whether the orbits of p and q are isomorphic by s*p -> s*q.

    Holds iff the two points have identical kernels; the map is then the
    unique isomorphism sending p to q.
    """
    if a.monoid != b.monoid:
        raise MixedMonoids("points live over different monoids")
    n = a.monoid.order
    cp = kernel_classes(a, p)
    cq = kernel_classes(b, q)
    for s in range(n):
        for t in range(s + 1, n):
            if (cp[s] == cp[t]) != (cq[s] == cq[t]):
                return False
    return True


def regular_via_idempotent(a: Act, p: int) -> tuple[bool, Optional[int]]:
    """Whether some idempotent e in the regular part has an orbit copy of p's.

    Cross-check route for is_act_regular; must agree with it on every input.
    """
    m = a.monoid
    rep = regular_representation(m)
    candidates = sorted(idempotents(m) & regular_part(m))
    for e in candidates:
        if cyclic_iso(a, p, rep, e):
            return True, e
    return False, None


def coproduct(acts: Sequence[Act]) -> tuple[Act, tuple[tuple[int, ...], ...]]:
    """Disjoint union with componentwise action.

    Returns the act and one injection map per summand (old index -> new).
    """
    if not acts:
        raise MalformedTable("coproduct of nothing")
    m = acts[0].monoid
    for other in acts[1:]:
        if other.monoid != m:
            raise MixedMonoids("coproduct requires a common monoid")
    carrier: list[str] = []
    injections: list[tuple[int, ...]] = []
    for i, a in enumerate(acts):
        offset = len(carrier)
        carrier.extend(f"{name}.{i}" for name in a.carrier)
        injections.append(tuple(offset + p for p in range(a.size)))
    rows = []
    for s in range(m.order):
        row: list[int] = []
        for i, a in enumerate(acts):
            base = injections[i][0]
            row.extend(base + a.action[s][p] for p in range(a.size))
        rows.append(tuple(row))
    return Act(m, tuple(carrier), tuple(rows)), tuple(injections)


def congruence_closure(a: Act, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """Least action-compatible equivalence containing the pairs.

    Union-find with a worklist: whenever two points merge, the pair of their
    images under every monoid element is enqueued, until stable.
    """
    parent = list(range(a.size))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    work = [(p, q) for p, q in pairs]
    n = a.monoid.order
    while work:
        p, q = work.pop()
        rp, rq = find(p), find(q)
        if rp == rq:
            continue
        if rq < rp:
            rp, rq = rq, rp
        parent[rq] = rp  # representative = least index
        for s in range(n):
            work.append((a.action[s][p], a.action[s][q]))
    block_ids: dict[int, int] = {}
    block_of = []
    for p in range(a.size):
        r = find(p)
        if r not in block_ids:
            block_ids[r] = len(block_ids)
        block_of.append(block_ids[r])
    return Congruence(a, tuple(block_of))


def quotient(a: Act, cong: Congruence) -> tuple[Act, tuple[int, ...]]:
    """The act on blocks, with s*(block of p) = block of s*p.

    Returns the act and the projection map (point -> block).  The result is
    re-validated against both act axioms on construction.
    """
    if cong.act != a:
        raise NotCompatible(-1, -1, -1)
    blocks = cong.blocks()
    carrier = tuple(a.carrier[block[0]] for block in blocks)
    rows = tuple(tuple(cong.block_of[a.action[s][block[0]]] for block in blocks)
                 for s in range(a.monoid.order))
    return Act(a.monoid, carrier, rows), cong.block_of


def canonical_act_table(a: Act) -> tuple[tuple[int, ...], ...]:
    """Minimal action table over all carrier relabelings; isomorphism invariant."""
    from itertools import permutations as _perms

    m = a.size
    best = None
    for perm in _perms(range(m)):
        inv = [0] * m
        for old, new in enumerate(perm):
            inv[new] = old
        cand = tuple(tuple(perm[a.action[s][inv[p]]] for p in range(m))
                     for s in range(a.monoid.order))
        if best is None or cand < best:
            best = cand
    return best
