"""Coefficient formulas over an act: existential conjunctions of atoms s*u = t*v.

A formula owns its monoid (coefficients are monoid indices), an ordered list
of free variables, an ordered existential block, and a conjunction of atoms.
Parameters are substituted into a suffix of the free variables before
evaluation; the language itself has no constants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Optional, Sequence

from .act import Act
from .errors import (
    BoundExceeded,
    EliminationStuck,
    FormulaSyntaxError,
    MalformedBlocks,
    NotConjunction,
    PreconditionFails,
    UnboundVariable,
    UnknownCoefficient,
)
from .monoid import (
    Monoid,
    idempotents,
    is_commutative,
    is_linearly_ordered,
    principal_left_ideal,
)


@dataclass(frozen=True, order=True)
class Atom:
    """s*u = t*v with coefficient indices s, t and variable slots u, v."""

    s: int
    u: int
    t: int
    v: int

    def canonical(self) -> "Atom":
        left, right = (self.u, self.s), (self.v, self.t)
        if right < left:
            left, right = right, left
        return Atom(left[1], left[0], right[1], right[0])

    def variables(self) -> frozenset[int]:
        return frozenset((self.u, self.v))


@dataclass(frozen=True)
class Formula:
    monoid: Monoid
    free: tuple[str, ...]
    bound: tuple[str, ...]
    atoms: tuple[Atom, ...]

    def __post_init__(self):
        names = self.free + self.bound
        if len(set(names)) != len(names):
            raise MalformedBlocks("variable declared twice")
        n = len(names)
        for atom in self.atoms:
            for v in (atom.u, atom.v):
                if not (0 <= v < n):
                    raise MalformedBlocks(f"atom variable {v} out of scope")
            for c in (atom.s, atom.t):
                if not (0 <= c < self.monoid.order):
                    raise UnknownCoefficient(str(c))

    @property
    def arity(self) -> int:
        return len(self.free)

    def var_name(self, i: int) -> str:
        names = self.free + self.bound
        return names[i]


_TOKEN = re.compile(r"[^\s*=&:]+")


def parse_formula(text: str, monoid: Monoid,
                  free_order: Optional[Sequence[str]] = None) -> Formula:
    """Parse ``exists u v : s*x = t*y & ...``; a bare variable means coefficient 1.

    Free variables are ordered by first occurrence unless ``free_order`` pins
    them explicitly, in which case stray variables are rejected.
    """
    work = text.strip()
    bound: list[str] = []
    body_offset = 0
    m = re.match(r"\s*exists\b", work)
    if m:
        colon = work.find(":")
        if colon < 0:
            raise FormulaSyntaxError(len(work), "missing ':' after exists prefix")
        for tok in _TOKEN.finditer(work[m.end():colon]):
            name = tok.group(0)
            if name in bound:
                raise FormulaSyntaxError(m.end() + tok.start(), f"duplicate bound variable {name!r}")
            bound.append(name)
        if not bound:
            raise FormulaSyntaxError(m.end(), "empty exists prefix")
        body_offset = colon + 1
    body = work[body_offset:]
    if not body.strip():
        raise FormulaSyntaxError(body_offset, "empty formula body")

    free: list[str] = list(free_order) if free_order is not None else []
    fixed_free = free_order is not None
    if fixed_free and (set(free) & set(bound) or len(set(free)) != len(free)):
        raise MalformedBlocks("free_order clashes with the exists prefix")

    def term(side: str, offset: int) -> tuple[int, str]:
        parts = side.split("*")
        if len(parts) == 1:
            coef_name, var_name = None, parts[0].strip()
        elif len(parts) == 2:
            coef_name, var_name = parts[0].strip(), parts[1].strip()
        else:
            raise FormulaSyntaxError(offset, f"too many '*' in term {side.strip()!r}")
        if not var_name or not _TOKEN.fullmatch(var_name):
            raise FormulaSyntaxError(offset, f"bad variable in term {side.strip()!r}")
        if coef_name is None:
            coef = monoid.identity
        else:
            try:
                coef = monoid.index(coef_name)
            except KeyError:
                raise UnknownCoefficient(coef_name, offset) from None
        if var_name not in bound and var_name not in free:
            if fixed_free:
                raise UnboundVariable(var_name)
            free.append(var_name)
        return coef, var_name

    raw_atoms: list[tuple[int, str, int, str]] = []
    cursor = body_offset
    for chunk in body.split("&"):
        if "=" not in chunk:
            raise FormulaSyntaxError(cursor, f"atom {chunk.strip()!r} lacks '='")
        lhs, _, rhs = chunk.partition("=")
        if not lhs.strip() or not rhs.strip():
            raise FormulaSyntaxError(cursor, f"atom {chunk.strip()!r} has an empty side")
        s, u = term(lhs, cursor)
        t, v = term(rhs, cursor + len(lhs) + 1)
        raw_atoms.append((s, u, t, v))
        cursor += len(chunk) + 1

    names = list(free) + bound
    index = {name: i for i, name in enumerate(names)}
    atoms = tuple(Atom(s, index[u], t, index[v]) for s, u, t, v in raw_atoms)
    return Formula(monoid, tuple(free), tuple(bound), atoms)


def format_formula(f: Formula) -> str:
    names = f.free + f.bound
    one = f.monoid.identity

    def side(coef: int, var: int) -> str:
        if coef == one:
            return names[var]
        return f"{f.monoid.elements[coef]}*{names[var]}"

    body = " & ".join(f"{side(a.s, a.u)} = {side(a.t, a.v)}" for a in f.atoms)
    if f.bound:
        return f"exists {' '.join(f.bound)} : {body}"
    return body


# -- evaluation ---------------------------------------------------------------

def solution_set(f: Formula, act: Act,
                 params: Sequence[int] = ()) -> frozenset[tuple[int, ...]]:
    """All tuples over the unassigned free variables that extend to the
    existential block satisfying every atom.

    ``params`` assigns a suffix of the free variables.  Backtracking search
    with per-variable domain pruning: an atom with one ground side restricts
    the other side's variable.
    """
    if act.monoid != f.monoid:
        raise MalformedBlocks("formula and act are over different monoids")
    if len(params) > len(f.free):
        raise MalformedBlocks("more parameters than free variables")
    total = len(f.free) + len(f.bound)
    open_free = len(f.free) - len(params)
    assign: list[Optional[int]] = [None] * total
    for k, value in enumerate(params):
        if not (0 <= value < act.size):
            raise MalformedBlocks(f"parameter {value} is not a carrier point")
        assign[open_free + k] = value

    order = list(range(open_free)) + list(range(len(f.free), total))
    rows = act.action
    carrier = range(act.size)

    by_var: dict[int, list[Atom]] = {i: [] for i in range(total)}
    for atom in f.atoms:
        by_var[atom.u].append(atom)
        if atom.v != atom.u:
            by_var[atom.v].append(atom)

    def domain(var: int) -> list[int]:
        allowed = None
        for atom in by_var[var]:
            if atom.u == var and atom.v == var:
                vals = {p for p in carrier if rows[atom.s][p] == rows[atom.t][p]}
            elif atom.u == var and assign[atom.v] is not None:
                target = rows[atom.t][assign[atom.v]]
                vals = {p for p in carrier if rows[atom.s][p] == target}
            elif atom.v == var and assign[atom.u] is not None:
                target = rows[atom.s][assign[atom.u]]
                vals = {p for p in carrier if rows[atom.t][p] == target}
            else:
                continue
            allowed = vals if allowed is None else allowed & vals
            if not allowed:
                return []
        return sorted(allowed) if allowed is not None else list(carrier)

    results: set[tuple[int, ...]] = set()

    def backtrack(k: int) -> None:
        if k == len(order):
            results.add(tuple(assign[i] for i in range(open_free)))
            return
        var = order[k]
        for value in domain(var):
            assign[var] = value
            ok = all(rows[a.s][assign[a.u]] == rows[a.t][assign[a.v]]
                     for a in f.atoms
                     if assign[a.u] is not None and assign[a.v] is not None)
            if ok:
                backtrack(k + 1)
        assign[var] = None

    backtrack(0)
    return frozenset(results)


@dataclass(frozen=True)
class CopyOverlapWitness:
    """Two parameter tuples whose solution sets overlap without being equal."""

    params1: tuple[int, ...]
    params2: tuple[int, ...]
    shared: tuple[int, ...]
    separating: tuple[int, ...]
    separating_side: int  # 1 if separating lies in the params1 copy, else 2


def is_copy_normal(f: Formula, act: Act, object_width: Optional[int] = None
                   ) -> tuple[bool, Optional[CopyOverlapWitness]]:
    """Whether all parameter instances of f have equal-or-disjoint solutions.

    The free variables split into an object block (first ``object_width``)
    and a parameter block (the rest).
    """
    if object_width is None:
        object_width = len(f.free)
    if not (0 <= object_width <= len(f.free)):
        raise MalformedBlocks("object block wider than the free variables")
    pwidth = len(f.free) - object_width
    seen: list[tuple[tuple[int, ...], frozenset[tuple[int, ...]]]] = []
    for params in product(range(act.size), repeat=pwidth):
        sols = solution_set(f, act, params)
        for prev_params, prev in seen:
            if prev == sols:
                continue
            overlap = prev & sols
            if overlap:
                shared = min(overlap)
                only_prev = prev - sols
                if only_prev:
                    return False, CopyOverlapWitness(
                        prev_params, params, shared, min(only_prev), 1)
                return False, CopyOverlapWitness(
                    prev_params, params, shared, min(sols - prev), 2)
        seen.append((params, sols))
    return True, None


# -- primitive equivalences ---------------------------------------------------

@dataclass(frozen=True)
class PrimitiveEquivalence:
    """A formula-defined equivalence: extension, domain, and classes."""

    formula: Formula
    act: Act
    width: int
    extension: frozenset[tuple[tuple[int, ...], tuple[int, ...]]]
    domain: frozenset[tuple[int, ...]]
    classes: tuple[tuple[tuple[int, ...], ...], ...]

    def class_of(self, tup: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
        for cls in self.classes:
            if tup in cls:
                return cls
        raise KeyError(tup)


def is_primitive_equivalence(f: Formula, act: Act) -> Optional[PrimitiveEquivalence]:
    """The relation defined by f on equal-width halves, when symmetric and
    transitive; reflexivity holds exactly on the diagonal solutions."""
    if len(f.free) % 2 != 0 or not f.free:
        raise MalformedBlocks("need free variables split into two equal blocks")
    w = len(f.free) // 2
    ext = set()
    for sol in solution_set(f, act):
        ext.add((sol[:w], sol[w:]))
    for a, b in ext:
        if (b, a) not in ext:
            return None
    for a, b in ext:
        for c, d in ext:
            if b == c and (a, d) not in ext:
                return None
    domain = frozenset(a for a, b in ext if a == b)
    # symmetry + transitivity force both components of every pair into the domain
    reps: dict[tuple[int, ...], set[tuple[int, ...]]] = {}
    for a in sorted(domain):
        for cls in reps.values():
            if (next(iter(cls)), a) in ext:
                cls.add(a)
                break
        else:
            reps[a] = {a}
    classes = tuple(tuple(sorted(cls)) for _, cls in sorted(reps.items()))
    return PrimitiveEquivalence(f, act, w, frozenset(ext), domain, classes)


@dataclass(frozen=True)
class GeneralizedPrimitiveSet:
    """A quotient of an intersection of solution sets by a generative equivalence."""

    basis: tuple[Formula, ...]
    alpha: PrimitiveEquivalence
    members: frozenset[tuple[int, ...]]
    classes: tuple[tuple[tuple[int, ...], ...], ...]


# -- bounded enumeration ------------------------------------------------------

ENUM_MAX_FREE = 4
ENUM_MAX_BOUND = 2
ENUM_MAX_ATOMS = 4
ENUM_MAX_WORK = 2_000_000


def canonical_atom_tuple(atoms: Sequence[Atom], nfree: int, nbound: int
                         ) -> tuple[Atom, ...]:
    """Minimal sorted atom tuple over renamings within each variable block."""
    from itertools import permutations as _perms

    best = None
    for fperm in _perms(range(nfree)):
        for bperm in _perms(range(nbound)):
            def rename(v: int) -> int:
                return fperm[v] if v < nfree else nfree + bperm[v - nfree]

            cand = tuple(sorted(Atom(a.s, rename(a.u), a.t, rename(a.v)).canonical()
                                for a in atoms))
            if best is None or cand < best:
                best = cand
    return best


def enumerate_formulas(monoid: Monoid, max_free: int, max_bound: int,
                       max_atoms: int) -> Iterator[Formula]:
    """Every formula within the bounds, once up to variable renaming and atom
    order.  Emitted formulas are canonical: sorted atom tuples, minimal under
    block-respecting renamings, with every declared variable used.

    Deterministic; raises BoundExceeded outside the configured limits.
    """
    if max_free > ENUM_MAX_FREE or max_bound > ENUM_MAX_BOUND \
            or max_atoms > ENUM_MAX_ATOMS or max_free < 0 or max_atoms < 1 \
            or max_bound < 0:
        raise BoundExceeded("formula bounds outside configured limits")
    n = monoid.order
    for nfree in range(0, max_free + 1):
        for nbound in range(0, max_bound + 1):
            total = nfree + nbound
            if total == 0:
                continue
            vocab = sorted(
                {Atom(s, u, t, v).canonical()
                 for s in range(n) for t in range(n)
                 for u in range(total) for v in range(total)}
            )
            est = 1
            for k in range(max_atoms):
                est *= max(1, len(vocab) - k)
            if est > ENUM_MAX_WORK * 24:
                raise BoundExceeded("atom vocabulary too large for exhaustive streaming")
            free_names = tuple(f"x{i}" for i in range(nfree))
            bound_names = tuple(f"u{i}" for i in range(nbound))
            for count in range(1, max_atoms + 1):
                for subset in combinations(vocab, count):
                    if not _uses_all_variables(subset, nfree, nbound):
                        continue
                    if canonical_atom_tuple(subset, nfree, nbound) != subset:
                        continue
                    yield Formula(monoid, free_names, bound_names, subset)


def _uses_all_variables(atoms: Sequence[Atom], nfree: int, nbound: int) -> bool:
    used = set()
    for atom in atoms:
        used.add(atom.u)
        used.add(atom.v)
    return used == set(range(nfree + nbound))


# -- variable elimination -----------------------------------------------------

NamedAtom = tuple[int, str, int, str]  # (coef, var, coef, var)


@dataclass(frozen=True)
class MergeStep:
    eliminated: NamedAtom
    kept: NamedAtom
    produced: Optional[NamedAtom]
    divisor: int
    measure_before: tuple[int, int]
    measure_after: tuple[int, int]


@dataclass(frozen=True)
class EliminationResult:
    psi: tuple[NamedAtom, ...]           # atoms free of the pivot variable
    pivot: Optional[NamedAtom]           # the single remaining pivot atom
    steps: tuple[MergeStep, ...]

    @property
    def atoms(self) -> tuple[NamedAtom, ...]:
        return self.psi + ((self.pivot,) if self.pivot is not None else ())


def _normalize_named(atom: NamedAtom) -> NamedAtom:
    s, u, t, v = atom
    if (v, t) < (u, s):
        return (t, v, s, u)
    return atom


def _measure(atoms: Iterable[NamedAtom], x0: str) -> tuple[int, int]:
    count = occ = 0
    for s, u, t, v in atoms:
        hits = (u == x0) + (v == x0)
        if hits:
            count += 1
            occ += hits
    return count, occ


def eliminate_variable(atoms, x0: str, monoid: Monoid, e: int,
                       max_states: int = 4096) -> EliminationResult:
    """Rewrite a conjunction so that at most one atom mentions ``x0``.

    Requires a commutative monoid whose regular part equals e*(regular part)
    for the given idempotent e and is linearly ordered.  Each step compares
    the pivot coefficients' ideals at e, divides the smaller by the larger,
    and replaces the divisible atom; the lexicographic measure (number of
    pivot atoms, pivot occurrences) strictly decreases on the greedy path.

    Raises EliminationStuck when no sound sequence of merge steps reaches a
    normal form; with atoms carrying the pivot on both sides this can happen.
    """
    from .act import regular_part

    if isinstance(atoms, Formula):
        if atoms.bound:
            raise NotConjunction("input must be quantifier-free")
        f = atoms
        atoms = [(a.s, f.free[a.u], a.t, f.free[a.v]) for a in f.atoms]
    work: list[NamedAtom] = []
    for item in atoms:
        if not (isinstance(item, tuple) and len(item) == 4):
            raise NotConjunction(f"not an atom: {item!r}")
        s, u, t, v = item
        s = s if isinstance(s, int) else monoid.index(s)
        t = t if isinstance(t, int) else monoid.index(t)
        if not (0 <= s < monoid.order and 0 <= t < monoid.order):
            raise UnknownCoefficient(str((s, t)))
        work.append(_normalize_named((s, str(u), t, str(v))))

    if not is_commutative(monoid):
        raise PreconditionFails("noncommutative")
    r = regular_part(monoid)
    if e not in idempotents(monoid) or e not in r:
        raise PreconditionFails("R != eR")
    if frozenset(monoid.table[e][x] for x in r) != r:
        raise PreconditionFails("R != eR")
    ok, _ = is_linearly_ordered(monoid, r)
    if not ok:
        raise PreconditionFails("R not linearly ordered")

    mul = monoid.mul
    ideal = {c: principal_left_ideal(monoid, mul(c, e)) for c in range(monoid.order)}

    def class_trivial(atom: NamedAtom) -> bool:
        s, u, t, v = atom
        return u == v and mul(s, e) == mul(t, e)

    def divisor(small: int, large: int) -> int:
        target = mul(small, e)
        base = mul(large, e)
        for rr in range(monoid.order):
            if mul(rr, base) == target:
                return rr
        raise AssertionError("comparable ideals must divide")

    def orientations(atom: NamedAtom):
        """(t_side, s_coef) views with the pivot on the s side."""
        s, u, t, v = atom
        out = []
        if v == x0:
            out.append(((s, u), t))
        if u == x0:
            out.append(((t, v), s))
        return out

    def successors(state: tuple[NamedAtom, ...]):
        """Sound one-step rewrites, deterministically ordered."""
        atoms_list = list(state)
        pivots = [i for i, a in enumerate(atoms_list) if x0 in (a[1], a[3])]
        # dropping a class-trivial pivot atom is always sound and decreasing
        for i in pivots:
            if class_trivial(atoms_list[i]):
                rest = tuple(a for k, a in enumerate(atoms_list) if k != i)
                yield (("drop", atoms_list[i]), _dedup(rest))
                return
        for i in pivots:
            for j in pivots:
                if i == j:
                    continue
                alpha, beta = atoms_list[i], atoms_list[j]
                for (ta, wa), sa in orientations(alpha):
                    for (tb, wb), sb in orientations(beta):
                        if ideal[sa] <= ideal[sb]:
                            rr = divisor(sa, sb)
                            produced = _normalize_named((mul(rr, tb), wb, ta, wa))
                            rest = [a for k, a in enumerate(atoms_list) if k != i]
                            if not class_trivial(produced):
                                rest.append(produced)
                            yield (("merge", alpha, beta, produced, rr), _dedup(tuple(rest)))

    def _dedup(state: Iterable[NamedAtom]) -> tuple[NamedAtom, ...]:
        return tuple(sorted(set(state)))

    state = _dedup(work)
    steps: list[MergeStep] = []

    def record(move, before, after):
        if move[0] == "drop":
            steps.append(MergeStep(move[1], move[1], None, monoid.identity,
                                   _measure(before, x0), _measure(after, x0)))
        else:
            _, alpha, beta, produced, rr = move
            steps.append(MergeStep(alpha, beta,
                                   None if produced not in after else produced,
                                   rr, _measure(before, x0), _measure(after, x0)))

    # greedy phase: always apply a measure-decreasing step when one exists
    while _measure(state, x0)[0] > 1:
        best = None
        for move, nxt in successors(state):
            if _measure(nxt, x0) < _measure(state, x0):
                key = (_measure(nxt, x0), nxt)
                if best is None or key < best[0]:
                    best = (key, move, nxt)
        if best is None:
            break
        record(best[1], state, best[2])
        state = best[2]

    if _measure(state, x0)[0] > 1:
        # search phase: some inputs need a non-decreasing step first
        from collections import deque

        start = state
        seen = {start: None}
        queue = deque([start])
        goal = None
        while queue and len(seen) < max_states:
            cur = queue.popleft()
            if _measure(cur, x0)[0] <= 1:
                goal = cur
                break
            for move, nxt in sorted(successors(cur), key=lambda p: p[1]):
                if nxt not in seen:
                    seen[nxt] = (cur, move)
                    queue.append(nxt)
        if goal is None:
            raise EliminationStuck(state)
        path = []
        node = goal
        while seen[node] is not None:
            prev, move = seen[node]
            path.append((move, prev, node))
            node = prev
        for move, before, after in reversed(path):
            record(move, before, after)
        state = goal

    pivot_atoms = [a for a in state if x0 in (a[1], a[3])]
    psi = tuple(a for a in state if x0 not in (a[1], a[3]))
    pivot = pivot_atoms[0] if pivot_atoms else None
    return EliminationResult(psi, pivot, tuple(steps))
