"""Decision procedures over acts and monoids.

The per-act normality criterion quantifies kernel data of point triples; the
class-level decision for commutative monoids reduces to a linear-order test
on the regular part; failing monoids yield a concrete violating act, built
by gluing three copies of an idempotent orbit.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from .act import (
    Act,
    congruence_closure,
    coproduct,
    cyclic_iso,
    cyclic_subact,
    is_regular_act,
    quotient,
    regular_part,
    regular_representation,
)
from .errors import (
    BasisOutsideDomain,
    ComparableIdeals,
    ConstructionFailed,
    EmptyR,
    MalformedBlocks,
    NoIdempotentWitness,
    Noncommutative,
    QuotientNotRegular,
)
from .formula import (
    Atom,
    CopyOverlapWitness,
    Formula,
    GeneralizedPrimitiveSet,
    is_copy_normal,
    is_primitive_equivalence,
    solution_set,
)
from .monoid import (
    Monoid,
    idempotents,
    is_commutative,
    is_linearly_ordered,
    noncommuting_pair,
    principal_left_ideal,
)

HOLDS = "holds"
FAILS = "fails"
INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class Verdict:
    outcome: str
    witness: Optional[dict] = None
    reason: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.outcome == HOLDS

    @staticmethod
    def holds(witness: Optional[dict] = None) -> "Verdict":
        return Verdict(HOLDS, witness)

    @staticmethod
    def fails(witness: dict) -> "Verdict":
        return Verdict(FAILS, witness)

    @staticmethod
    def inapplicable(reason: str, witness: Optional[dict] = None) -> "Verdict":
        return Verdict(INAPPLICABLE, witness, reason)


# -- per-act criterion ---------------------------------------------------------

def _kernel_sets(act: Act, a1: int, a2: int, a3: int):
    """Maximal coefficient sets usable against the triple (a1, a2, a3)."""
    rows = act.action
    n = act.monoid.order
    I = [s for s in range(n) if rows[s][a1] == rows[s][a2]]
    J = [t for t in range(n) if rows[t][a2] == rows[t][a3]]
    K = [(r1, r2) for r1 in range(n) for r2 in range(r1 + 1, n)
         if rows[r1][a1] == rows[r2][a1]
         and rows[r1][a2] == rows[r2][a2]
         and rows[r1][a3] == rows[r2][a3]]
    return I, J, K


def _criterion_witness_exists(act: Act, a1: int, a3: int,
                              I: Sequence[int], J: Sequence[int],
                              K: Sequence[tuple[int, int]]) -> Optional[int]:
    rows = act.action
    for b in range(act.size):
        if all(rows[s][a3] == rows[s][b] for s in I) \
                and all(rows[t][b] == rows[t][a1] for t in J) \
                and all(rows[r1][b] == rows[r2][b] for r1, r2 in K):
            return b
    return None


def normality_criterion(act: Act) -> Verdict:
    """Per-act normality test via maximal kernel sets.

    For every point triple, the coefficients identifying a1 with a2, a2 with
    a3, and pairs acting equally on all three are collected; the act passes
    iff some b satisfies the transported conditions.  Coefficient sets
    smaller than the maximal ones impose weaker requirements, and longer
    tuples decompose coordinatewise, so this single sweep decides them all.
    """
    for a1, a2, a3 in product(range(act.size), repeat=3):
        I, J, K = _kernel_sets(act, a1, a2, a3)
        if _criterion_witness_exists(act, a1, a3, I, J, K) is None:
            return Verdict.fails({
                "triple": (a1, a2, a3),
                "I": tuple(I),
                "J": tuple(J),
                "K": tuple(K),
            })
    return Verdict.holds()


@dataclass(frozen=True)
class CriterionInstance:
    """An explicit instance: tuple length and coefficient/coordinate lists."""

    n: int
    I: tuple[tuple[int, int], ...]            # (coefficient, coordinate)
    J: tuple[tuple[int, int], ...]
    K: tuple[tuple[int, int, int], ...]       # (coefficient, coefficient, coordinate)

    def __post_init__(self):
        if self.n < 1:
            raise MalformedBlocks("tuple length must be positive")
        for _, l in self.I:
            if not (0 <= l < self.n):
                raise MalformedBlocks("I coordinate out of range")
        for _, l in self.J:
            if not (0 <= l < self.n):
                raise MalformedBlocks("J coordinate out of range")
        for _, _, l in self.K:
            if not (0 <= l < self.n):
                raise MalformedBlocks("K coordinate out of range")


def normality_criterion_bounded(act: Act, inst: CriterionInstance) -> Verdict:
    """Direct, unreduced evaluation of one explicit instance.

    Quantifies every triple of n-tuples; wherever the hypothesis holds, a
    witness tuple must exist.  Serves as the audit oracle for the
    maximal-set reduction in normality_criterion.
    """
    rows = act.action
    m = act.size
    n = inst.n
    tuples = list(product(range(m), repeat=n))
    for t1 in tuples:
        for t2 in tuples:
            if not all(rows[s][t1[l]] == rows[s][t2[l]] for s, l in inst.I):
                continue
            for t3 in tuples:
                if not all(rows[t][t2[l]] == rows[t][t3[l]] for t, l in inst.J):
                    continue
                if not all(rows[r1][tm[l]] == rows[r2][tm[l]]
                           for r1, r2, l in inst.K for tm in (t1, t2, t3)):
                    continue
                for b in tuples:
                    if all(rows[s][t3[l]] == rows[s][b[l]] for s, l in inst.I) \
                            and all(rows[t][b[l]] == rows[t][t1[l]] for t, l in inst.J) \
                            and all(rows[r1][b[l]] == rows[r2][b[l]]
                                    for r1, r2, l in inst.K):
                        break
                else:
                    return Verdict.fails({"triple": (t1, t2, t3)})
    return Verdict.holds()


def copy_violation_from_triple(act: Act, a1: int, a2: int, a3: int
                               ) -> tuple[Formula, CopyOverlapWitness]:
    """Convert a failing triple into a formula whose copies overlap unequally.

    The formula binds u and asserts: the I-coefficients identify x with u,
    the J-coefficients identify u with y, and every K-pair acts equally on
    x, u and y.  Its copies at parameters a1 and a3 then share a1 while a3
    belongs only to the a3 copy.
    """
    m = act.monoid
    I, J, K = _kernel_sets(act, a1, a2, a3)
    one = m.identity
    x, y, u = 0, 1, 2
    atoms = []
    for s in I:
        atoms.append(Atom(s, x, s, u))
    for t in J:
        atoms.append(Atom(t, u, t, y))
    for r1, r2 in K:
        atoms.extend((Atom(r1, x, r2, x), Atom(r1, u, r2, u), Atom(r1, y, r2, y)))
    if not atoms:
        atoms.append(Atom(one, x, one, x))
    probe = Formula(m, ("x", "y"), ("u",), tuple(atoms))

    copy1 = solution_set(probe, act, (a1,))
    copy3 = solution_set(probe, act, (a3,))
    if (a1,) not in copy1 or (a1,) not in copy3 or (a3,) not in copy3:
        raise ConstructionFailed("expected memberships missing")
    if (a3,) in copy1:
        raise ConstructionFailed("triple does not violate the criterion")
    witness = CopyOverlapWitness((a1,), (a3,), (a1,), (a3,), 2)
    return probe, witness


# -- structural checks on the regular part ------------------------------------

def regular_part_decomposition(m: Monoid) -> Verdict:
    """Whether R equals the union of e*R over idempotents e in R.

    When the monoid is commutative and R is linearly ordered, also records a
    single idempotent generator e with R = e*R.
    """
    r = regular_part(m)
    if not r:
        raise EmptyR("regular part is empty")
    er = sorted(idempotents(m) & r)
    covered: set[int] = set()
    for e in er:
        covered |= {m.table[e][x] for x in r}
    witness: dict = {"idempotents": tuple(er)}
    if covered != r:
        witness["missing"] = tuple(sorted(r - covered))
        return Verdict.fails(witness)
    if is_commutative(m) and is_linearly_ordered(m, r)[0]:
        for e in er:
            if frozenset(m.table[e][x] for x in r) == r:
                witness["generator"] = e
                break
    return Verdict.holds(witness)


def is_regularly_linearly_ordered(m: Monoid) -> Verdict:
    """Whether for every a in R the ideals of the orbit Sa form a chain."""
    r = regular_part(m)
    if not r:
        raise EmptyR("regular part is empty")
    ideals = [principal_left_ideal(m, x) for x in range(m.order)]
    for a in sorted(r):
        orbit = sorted({m.table[s][a] for s in range(m.order)})
        for i, b in enumerate(orbit):
            for c in orbit[i + 1:]:
                if not (ideals[b] <= ideals[c] or ideals[c] <= ideals[b]):
                    return Verdict.fails({"a": a, "b": b, "c": c})
    return Verdict.holds()


def idempotent_comparability(m: Monoid) -> Verdict:
    """Whether all idempotents in R have comparable principal left ideals."""
    pair = noncommuting_pair(m)
    if pair is not None:
        raise Noncommutative(*pair)
    r = regular_part(m)
    if not r:
        raise EmptyR("regular part is empty")
    er = sorted(idempotents(m) & r)
    for i, e in enumerate(er):
        se = principal_left_ideal(m, e)
        for f in er[i + 1:]:
            sf = principal_left_ideal(m, f)
            if not (se <= sf or sf <= se):
                return Verdict.fails({"e": e, "f": f})
    return Verdict.holds()


# -- counterexample construction -----------------------------------------------

@dataclass(frozen=True)
class Counterexample:
    kind: str                      # "glued-copies" or "regular-part-probe"
    act: Act
    formula: Formula
    witness: CopyOverlapWitness
    data: dict


def build_counterexample(m: Monoid, a: int, b: int, c: int) -> Counterexample:
    """Glue three copies of an idempotent orbit so the probe formula
    exists u (b*u = x & c*u = y) produces overlapping unequal copies.

    Requires b, c in the orbit of a, incomparable ideals Sb and Sc, and a in
    the regular part.  The two copies of c*e in the first and second
    summands and of b*e in the second and third are identified; the glued
    act must come out regular, and the four-point satisfaction pattern is
    re-verified by the evaluator before returning.
    """
    orbit_of_a = {m.table[s][a] for s in range(m.order)}
    if b not in orbit_of_a or c not in orbit_of_a:
        raise ConstructionFailed("b and c must lie in the orbit of a")
    sb = principal_left_ideal(m, b)
    sc = principal_left_ideal(m, c)
    if sb <= sc or sc <= sb:
        raise ComparableIdeals(b, c)

    rep = regular_representation(m)
    r = regular_part(m)
    e = None
    for cand in sorted(idempotents(m) & r):
        if cyclic_iso(rep, a, rep, cand):
            e = cand
            break
    if e is None:
        raise NoIdempotentWitness(a)

    orbit, members = cyclic_subact(rep, e)
    pos = {old: new for new, old in enumerate(members)}
    be = m.table[b][e]
    ce = m.table[c][e]
    glued, inj = coproduct([orbit, orbit, orbit])
    pairs = [(inj[0][pos[ce]], inj[1][pos[ce]]),
             (inj[1][pos[be]], inj[2][pos[be]])]
    cong = congruence_closure(glued, pairs)
    q, proj = quotient(glued, cong)

    regular, bad = is_regular_act(q)
    if not regular:
        raise QuotientNotRegular(q.carrier[bad])

    one = m.identity
    probe = Formula(m, ("x", "y"), ("u",),
                    (Atom(b, 2, one, 0), Atom(c, 2, one, 1)))
    be1 = proj[inj[0][pos[be]]]
    be2 = proj[inj[1][pos[be]]]
    ce1 = proj[inj[0][pos[ce]]]
    ce3 = proj[inj[2][pos[ce]]]
    copy_at_ce1 = solution_set(probe, q, (ce1,))
    copy_at_ce3 = solution_set(probe, q, (ce3,))
    pattern = {
        "positive": ((be1, ce1), (be2, ce1), (be2, ce3)),
        "negative": (be1, ce3),
    }
    if not ((be1,) in copy_at_ce1 and (be2,) in copy_at_ce1
            and (be2,) in copy_at_ce3):
        raise ConstructionFailed("expected probe satisfactions missing")
    if (be1,) in copy_at_ce3:
        raise ConstructionFailed("probe fails to separate the copies")
    witness = CopyOverlapWitness((ce1,), (ce3,), (be2,), (be1,), 1)
    return Counterexample(
        kind="glued-copies",
        act=q,
        formula=probe,
        witness=witness,
        data={
            "a": a, "b": b, "c": c, "e": e,
            "glued_pairs": tuple(pairs),
            "pattern": pattern,
        },
    )


def restrict_to_regular_part(m: Monoid) -> tuple[Act, tuple[int, ...]]:
    """The self-action restricted to the regular part (a regular act)."""
    r = sorted(regular_part(m))
    if not r:
        raise EmptyR("regular part is empty")
    pos = {old: new for new, old in enumerate(r)}
    carrier = tuple(m.elements[x] for x in r)
    rows = tuple(tuple(pos[m.table[s][x]] for x in r) for s in range(m.order))
    return Act(m, carrier, rows), tuple(r)


def regular_part_probe_counterexample(m: Monoid, e: int, f: int) -> Counterexample:
    """Fallback violation on the regular part itself, from incomparable
    idempotents: exists u (e*u = e*x & f*u = f*y)."""
    act, members = restrict_to_regular_part(m)
    probe = Formula(m, ("x", "y"), ("u",),
                    (Atom(e, 2, e, 0), Atom(f, 2, f, 1)))
    ok, witness = is_copy_normal(probe, act, 1)
    if ok:
        raise ConstructionFailed("probe did not separate copies on the regular part")
    return Counterexample(
        kind="regular-part-probe",
        act=act,
        formula=probe,
        witness=witness,
        data={"e": e, "f": f, "carrier_members": tuple(members)},
    )


def find_incomparable_triple(m: Monoid) -> Optional[tuple[int, int, int]]:
    """Least (a, b, c) with a in R and incomparable Sb, Sc inside the orbit of a."""
    r = regular_part(m)
    ideals = [principal_left_ideal(m, x) for x in range(m.order)]
    for a in sorted(r):
        orbit = sorted({m.table[s][a] for s in range(m.order)})
        for i, b in enumerate(orbit):
            for c in orbit[i + 1:]:
                if not (ideals[b] <= ideals[c] or ideals[c] <= ideals[b]):
                    return (a, b, c)
    return None


# -- class-level decision --------------------------------------------------------

PRIMITIVE_NORMAL = "primitive-normal"
NOT_PRIMITIVE_NORMAL = "not-primitive-normal"


@dataclass(frozen=True)
class ClassVerdict:
    outcome: str                       # primitive-normal | not-primitive-normal | inapplicable
    reason: Optional[str]
    regular_part: tuple[int, ...]
    witness: dict
    counterexample: Optional[Counterexample]

    @property
    def antiadditive(self) -> Optional[bool]:
        """The additive-structure verdict coincides with the normality one."""
        if self.outcome == PRIMITIVE_NORMAL:
            return True
        if self.outcome == NOT_PRIMITIVE_NORMAL:
            return False
        return None

    @property
    def exit_code(self) -> int:
        return {PRIMITIVE_NORMAL: 0, NOT_PRIMITIVE_NORMAL: 1}.get(self.outcome, 2)


def decide_class(m: Monoid) -> ClassVerdict:
    """Class-level decision for the regular acts over a commutative monoid.

    Inapplicable for noncommutative monoids, an empty regular part, or a
    failing idempotent decomposition of R.  Otherwise the class verdict is
    exactly the linear-order test on R; a negative answer comes with a
    violating act.
    """
    pair = noncommuting_pair(m)
    if pair is not None:
        return ClassVerdict(INAPPLICABLE, "noncommutative", (),
                            {"noncommuting_pair": pair}, None)
    r = regular_part(m)
    sorted_r = tuple(sorted(r))
    if not r:
        return ClassVerdict(INAPPLICABLE, "empty-regular-part", (), {}, None)
    decomp = regular_part_decomposition(m)
    if not decomp.ok:
        return ClassVerdict(INAPPLICABLE, "regular-part-decomposition-fails",
                            sorted_r, decomp.witness or {}, None)
    ordered, incmp = is_linearly_ordered(m, r)
    if ordered:
        return ClassVerdict(PRIMITIVE_NORMAL, None, sorted_r,
                            decomp.witness or {}, None)
    triple = find_incomparable_triple(m)
    if triple is not None:
        cx = build_counterexample(m, *triple)
        witness = {"incomparable_pair": incmp, "triple": triple}
    else:
        idem = idempotent_comparability(m)
        if idem.ok:
            raise ConstructionFailed(
                "regular part unordered yet no violating configuration found")
        e, f = idem.witness["e"], idem.witness["f"]
        cx = regular_part_probe_counterexample(m, e, f)
        witness = {"incomparable_pair": incmp, "idempotent_pair": (e, f)}
    return ClassVerdict(NOT_PRIMITIVE_NORMAL, None, sorted_r, witness, cx)


# -- definable group detection ----------------------------------------------------

@dataclass(frozen=True)
class GroupCertificate:
    size: int
    identity: int
    table: tuple[tuple[int, ...], ...]
    classes: tuple[tuple[tuple[int, ...], ...], ...]


def detect_primitive_group(basis: Sequence[Formula], alpha: Formula,
                           op: Formula, params: Sequence[int],
                           act: Act) -> Optional[GroupCertificate]:
    """A group certificate when op induces a well-defined total group
    operation on the quotient of the basis intersection by alpha.

    ``op`` must expose three equal-width blocks (arguments and result) before
    its parameter slots; ``params`` fills the parameter suffix.
    """
    equiv = is_primitive_equivalence(alpha, act)
    if equiv is None:
        raise MalformedBlocks("generative relation is not an equivalence")
    w = equiv.width
    members: Optional[frozenset] = None
    for bf in basis:
        if len(bf.free) != w:
            raise MalformedBlocks("basis width differs from the equivalence width")
        sols = solution_set(bf, act)
        members = sols if members is None else members & sols
    if members is None:
        members = frozenset(equiv.domain)
    for tup in sorted(members):
        if tup not in equiv.domain:
            raise BasisOutsideDomain(tup)
    if len(op.free) != 3 * w + len(params):
        raise MalformedBlocks("operation needs three blocks plus the parameter slots")

    class_index: dict[tuple[int, ...], int] = {}
    kept_classes: list[tuple[tuple[int, ...], ...]] = []
    for cls in equiv.classes:
        if any(t in members for t in cls):
            idx = len(kept_classes)
            kept_classes.append(cls)
            for t in cls:
                class_index[t] = idx
    k = len(kept_classes)
    if k == 0:
        return None

    rel = solution_set(op, act, tuple(params))
    results: dict[tuple[int, int], set[int]] = {}
    seen_pairs: dict[tuple[int, int], set[tuple[tuple[int, ...], tuple[int, ...]]]] = {}
    for sol in rel:
        xs, ys, zs = sol[:w], sol[w:2 * w], sol[2 * w:3 * w]
        if xs not in class_index or ys not in class_index or zs not in class_index:
            continue
        key = (class_index[xs], class_index[ys])
        results.setdefault(key, set()).add(class_index[zs])
        seen_pairs.setdefault(key, set()).add((xs, ys))
    table = []
    for i in range(k):
        row = []
        for j in range(k):
            out = results.get((i, j))
            if out is None or len(out) != 1:
                return None
            # class-independence: every representative pair must produce a result
            expected = len(kept_classes[i]) * len(kept_classes[j])
            if len(seen_pairs[(i, j)]) != expected:
                return None
            row.append(next(iter(out)))
        table.append(tuple(row))
    table = tuple(table)

    identity = None
    for ecand in range(k):
        if all(table[ecand][x] == x and table[x][ecand] == x for x in range(k)):
            identity = ecand
            break
    if identity is None:
        return None
    for x in range(k):
        if not any(table[x][y] == identity and table[y][x] == identity
                   for y in range(k)):
            return None
    for x in range(k):
        for y in range(k):
            for z in range(k):
                if table[table[x][y]][z] != table[x][table[y][z]]:
                    return None
    return GroupCertificate(k, identity, table, tuple(kept_classes))
