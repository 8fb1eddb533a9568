"""Exhaustive cross-validation harness.

Enumerates monoids, acts, and formula semantics at desk scale, runs the
reduced per-act criterion against an independent formula-sweep oracle, and
checks the class-level decision chain.  Every discrepancy record carries
enough data to replay the disagreement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .act import (
    Act,
    canonical_act_table,
    congruence_closure,
    coproduct,
    cyclic_subact,
    is_regular_act,
    quotient,
    regular_part,
    regular_representation,
)
from .deciders import (
    Verdict,
    copy_violation_from_triple,
    decide_class,
    detect_primitive_group,
    idempotent_comparability,
    is_regularly_linearly_ordered,
    normality_criterion,
    regular_part_decomposition,
)
from .errors import (
    BasisOutsideDomain,
    BoundExceeded,
    CompatibilityFails,
    ConstructionFailed,
    IdentityFails,
    SactsError,
)
from .formula import (
    Atom,
    Formula,
    enumerate_formulas,
    is_copy_normal,
    is_primitive_equivalence,
    solution_set,
)
from .monoid import Monoid, enumerate_monoids, idempotents, is_commutative
from .report import act_payload, formula_payload, monoid_payload

MAX_MONOID_ORDER = 4
MAX_ACT_SIZE = 8


@dataclass(frozen=True)
class ExperimentConfig:
    """Bounds for a sweep; exhaustive runs ignore the seed."""

    monoid_order_bound: int = 2
    act_size_bound: int = 2
    formula_free: int = 4          # object block + parameter block
    formula_bound_vars: int = 2
    formula_atoms: int = 4
    object_width: int = 2
    param_width: int = 2
    include_noncommutative: bool = True
    seed: int = 0
    parallelism: int = 1

    def __post_init__(self):
        if self.monoid_order_bound < 1 or self.act_size_bound < 1:
            raise BoundExceeded("bounds must be positive")
        if self.monoid_order_bound > MAX_MONOID_ORDER:
            raise BoundExceeded(f"monoid order bound above {MAX_MONOID_ORDER}")
        if self.act_size_bound > MAX_ACT_SIZE:
            raise BoundExceeded(f"act size bound above {MAX_ACT_SIZE}")
        if self.object_width + self.param_width > self.formula_free:
            raise BoundExceeded("free variables fewer than the two blocks need")

    def payload(self) -> dict:
        return {
            "monoid_order_bound": self.monoid_order_bound,
            "act_size_bound": self.act_size_bound,
            "formula_bounds": {
                "free": self.formula_free,
                "bound": self.formula_bound_vars,
                "atoms": self.formula_atoms,
            },
            "object_width": self.object_width,
            "param_width": self.param_width,
            "include_noncommutative": self.include_noncommutative,
            "seed": self.seed,
            "parallelism": self.parallelism,
        }


@dataclass(frozen=True)
class Discrepancy:
    """A replayable disagreement between two routes."""

    kind: str
    monoid: dict
    act: Optional[dict]
    detail: dict

    def payload(self) -> dict:
        return {
            "kind": self.kind,
            "monoid": self.monoid,
            "act": self.act,
            "detail": self.detail,
        }


# -- act enumeration -----------------------------------------------------------

def enumerate_acts(m: Monoid, size: int) -> list[Act]:
    """Every act of the given size over m, once up to isomorphism.

    Rows are assigned element by element with composition constraints checked
    as soon as both factors are placed, then deduplicated by the minimal
    relabeled action table.
    """
    n = m.order
    identity_row = tuple(range(size))
    all_rows = list(product(range(size), repeat=size))
    order = [s for s in range(n) if s != m.identity]
    assigned: dict[int, tuple[int, ...]] = {m.identity: identity_row}
    found: set[tuple[tuple[int, ...], ...]] = set()

    def consistent(new_s: int) -> bool:
        keys = assigned.keys()
        for a in keys:
            for b in keys:
                prod_ab = m.table[a][b]
                if prod_ab in assigned and (a == new_s or b == new_s
                                            or prod_ab == new_s):
                    fa, fb, fab = assigned[a], assigned[b], assigned[prod_ab]
                    if any(fa[fb[p]] != fab[p] for p in range(size)):
                        return False
        return True

    def fill(k: int) -> None:
        if k == len(order):
            action = tuple(assigned[s] for s in range(n))
            found.add(canonical_act_table(Act(m, tuple(f"p{i}" for i in range(size)),
                                              action)))
            return
        s = order[k]
        for row in all_rows:
            assigned[s] = row
            if consistent(s):
                fill(k + 1)
        del assigned[s]

    fill(0)
    names = tuple(f"p{i}" for i in range(size))
    return [Act(m, names, table) for table in sorted(found)]


def enumerate_all_acts(m: Monoid, max_size: int) -> list[Act]:
    out = []
    for size in range(1, max_size + 1):
        out.extend(enumerate_acts(m, size))
    return out


def regular_acts_filtered(m: Monoid, max_size: int) -> list[Act]:
    return [a for a in enumerate_all_acts(m, max_size) if is_regular_act(a)[0]]


def regular_acts_built(m: Monoid, max_size: int) -> list[Act]:
    """Regular acts reached from idempotent orbits by coproducts and quotients."""
    rep = regular_representation(m)
    orbits = [cyclic_subact(rep, e)[0]
              for e in sorted(idempotents(m) & regular_part(m))]
    seeds: list[Act] = []
    for count in range(1, 4):
        for combo in combinations_with_replacement(range(len(orbits)), count):
            total = sum(orbits[i].size for i in combo)
            if total <= max_size:
                seeds.append(coproduct([orbits[i] for i in combo])[0])
    results: dict[tuple, Act] = {}
    for act in seeds:
        key = canonical_act_table(act)
        results.setdefault(key, act)
        for p in range(act.size):
            for q in range(p + 1, act.size):
                cong = congruence_closure(act, [(p, q)])
                qact, _ = quotient(act, cong)
                if qact.size <= max_size and is_regular_act(qact)[0]:
                    results.setdefault(canonical_act_table(qact), qact)
    names_cache: dict[int, tuple[str, ...]] = {}
    out = []
    for key in sorted(results):
        size = len(key[0])
        names = names_cache.setdefault(
            size, tuple(f"p{i}" for i in range(size)))
        out.append(Act(m, names, key))
    return out


# -- semantic formula sweep (bitmask engine) -------------------------------------

@dataclass
class SweepViolation:
    formula: Formula
    params1: tuple[int, ...]
    params2: tuple[int, ...]


def _position_masks(size: int, exponents: Sequence[int], total_bits: int
                    ) -> list[list[int]]:
    """For each variable and value, the bitmask of assignments taking it."""
    out = []
    for exp in exponents:
        period = size * exp
        repeats = total_bits // period
        unit = (1 << exp) - 1
        per_value = []
        for value in range(size):
            block = unit << (value * exp)
            mask = 0
            for k in range(repeats):
                mask |= block << (k * period)
            per_value.append(mask)
        out.append(per_value)
    return out


def copy_normality_formula_sweep(act: Act, object_width: int = 2,
                                 param_width: int = 2, bound_width: int = 2,
                                 max_atoms: int = 4,
                                 confirm: bool = True
                                 ) -> Optional[SweepViolation]:
    """Search every conjunction of at most max_atoms atoms over the given
    variable blocks for a normality violation on the act.

    Works on bitmasks over full assignments, deduplicating conjunctions with
    equal semantics: the verdict only depends on the solution relation, and
    unused variables subsume every narrower block shape.  Returns the first
    violation (confirmed against the direct evaluator) or None.
    """
    m = act.size
    total_vars = object_width + param_width + bound_width
    nbits = m ** total_vars
    # variable order: object block, then parameters, then the bound block;
    # bit layout: parameters most significant, bound least significant
    exponents = []
    for i in range(object_width):
        exponents.append(m ** (bound_width + (object_width - 1 - i)))
    for k in range(param_width):
        exponents.append(m ** (bound_width + object_width + (param_width - 1 - k)))
    for j in range(bound_width):
        exponents.append(m ** (bound_width - 1 - j))
    pos = _position_masks(m, exponents, nbits)

    rows = act.action
    n = act.monoid.order
    atom_masks: dict[int, Atom] = {}
    for u in range(total_vars):
        for v in range(u, total_vars):
            for s in range(n):
                for t in range(n):
                    mask = 0
                    for a_u in range(m):
                        left = rows[s][a_u]
                        pu = pos[u][a_u]
                        if u == v:
                            if left == rows[t][a_u]:
                                mask |= pu
                            continue
                        for a_v in range(m):
                            if left == rows[t][a_v]:
                                mask |= pu & pos[v][a_v]
                    atom = Atom(s, u, t, v).canonical()
                    if mask not in atom_masks or atom < atom_masks[mask]:
                        atom_masks[mask] = atom
    full = (1 << nbits) - 1
    vocab = sorted((mask, atom) for mask, atom in atom_masks.items())

    chunk = m ** bound_width
    chunk_mask = (1 << chunk) - 1
    groups = m ** (object_width + param_width)
    row_bits = m ** object_width
    row_mask = (1 << row_bits) - 1
    params_count = m ** param_width

    def violates(mask: int) -> Optional[tuple[int, int]]:
        if mask == 0:
            return None
        proj = 0
        rest = mask
        for i in range(groups):
            if rest & chunk_mask:
                proj |= 1 << i
            rest >>= chunk
            if not rest:
                break
        rows_by_param = [(proj >> (p * row_bits)) & row_mask
                         for p in range(params_count)]
        for i in range(params_count):
            ri = rows_by_param[i]
            for j in range(i + 1, params_count):
                rj = rows_by_param[j]
                if ri != rj and (ri & rj):
                    return (i, j)
        return None

    def decode_params(index: int) -> tuple[int, ...]:
        digits = []
        for _ in range(param_width):
            digits.append(index % m)
            index //= m
        return tuple(reversed(digits))

    def build_formula(atoms: tuple[Atom, ...]) -> Formula:
        free = tuple(f"x{i}" for i in range(object_width)) + \
            tuple(f"y{k}" for k in range(param_width))
        bound = tuple(f"u{j}" for j in range(bound_width))
        return Formula(act.monoid, free, bound, atoms)

    checked: set[int] = set()
    best_last: dict[int, int] = {}
    frontier: list[tuple[int, int, tuple[Atom, ...]]] = []
    for idx, (mask, atom) in enumerate(vocab):
        if mask not in best_last or idx < best_last[mask]:
            best_last[mask] = idx
            frontier.append((mask, idx, (atom,)))

    for _level in range(max_atoms):
        new_frontier = []
        for mask, last, atoms in frontier:
            if mask not in checked:
                checked.add(mask)
                hit = violates(mask)
                if hit is not None:
                    formula = build_formula(atoms)
                    p1, p2 = decode_params(hit[0]), decode_params(hit[1])
                    if confirm:
                        ok, witness = is_copy_normal(formula, act, object_width)
                        if ok:
                            raise ConstructionFailed(
                                "mask sweep and evaluator disagree")
                        p1, p2 = witness.params1, witness.params2
                    return SweepViolation(formula, p1, p2)
            if _level == max_atoms - 1:
                continue
            for j in range(last + 1, len(vocab)):
                nmask = mask & vocab[j][0]
                if nmask == mask:
                    continue
                if nmask in best_last and best_last[nmask] <= j:
                    continue
                best_last[nmask] = j
                new_frontier.append((nmask, j, atoms + (vocab[j][1],)))
        frontier = new_frontier
        if not frontier:
            break
    return None


# -- sweeps ----------------------------------------------------------------------

def run_normality_crossval(cfg: ExperimentConfig,
                           checker: Callable[[Act], Verdict] = normality_criterion
                           ) -> dict:
    """Reduced criterion vs. exhaustive formula sweep, both directions.

    A holding act must survive the bounded sweep with no violation; a failing
    act must convert its witness triple into a concrete separating formula.
    """
    discrepancies: list[Discrepancy] = []
    cases = 0
    holds = fails = 0
    for order in range(1, cfg.monoid_order_bound + 1):
        for m in enumerate_monoids(order, commutative=False):
            if not cfg.include_noncommutative and not is_commutative(m):
                continue
            mp = monoid_payload(m)
            for act in enumerate_all_acts(m, cfg.act_size_bound):
                cases += 1
                verdict = checker(act)
                if verdict.ok:
                    holds += 1
                    violation = copy_normality_formula_sweep(
                        act,
                        object_width=cfg.object_width,
                        param_width=cfg.param_width,
                        bound_width=cfg.formula_bound_vars,
                        max_atoms=cfg.formula_atoms,
                    )
                    if violation is not None:
                        discrepancies.append(Discrepancy(
                            "criterion-holds-but-copies-split",
                            mp, act_payload(act),
                            {"formula": formula_payload(violation.formula),
                             "params": [list(violation.params1),
                                        list(violation.params2)]}))
                else:
                    fails += 1
                    triple = verdict.witness["triple"]
                    try:
                        probe, witness = copy_violation_from_triple(act, *triple)
                    except ConstructionFailed as exc:
                        discrepancies.append(Discrepancy(
                            "criterion-fails-but-no-violating-formula",
                            mp, act_payload(act),
                            {"triple": list(triple), "error": str(exc)}))
                        continue
                    ok, _ = is_copy_normal(probe, act, 1)
                    if ok:
                        discrepancies.append(Discrepancy(
                            "constructed-formula-not-violating",
                            mp, act_payload(act),
                            {"triple": list(triple),
                             "formula": formula_payload(probe)}))
    return {
        "config": cfg.payload(),
        "cases": cases,
        "criterion_holds": holds,
        "criterion_fails": fails,
        "discrepancies": sorted((d.payload() for d in discrepancies),
                                key=lambda p: str(sorted(p.items()))),
        "status": "ok" if not discrepancies else "discrepancies",
    }


def run_class_decision_sweep(cfg: ExperimentConfig,
                             checker: Callable[[Act], Verdict] = normality_criterion
                             ) -> dict:
    """Class decisions and their consequences over all enumerated monoids."""
    discrepancies: list[Discrepancy] = []
    outcomes: dict[str, int] = {}
    cases = 0
    for order in range(1, cfg.monoid_order_bound + 1):
        for m in enumerate_monoids(order, commutative=False):
            cases += 1
            mp = monoid_payload(m)
            commutative = is_commutative(m)
            try:
                verdict = decide_class(m)
            except SactsError as exc:
                discrepancies.append(Discrepancy(
                    "class-decision-crash", mp, None, {"error": str(exc)}))
                continue
            outcomes[verdict.outcome] = outcomes.get(verdict.outcome, 0) + 1
            if not commutative:
                if verdict.outcome != "inapplicable" \
                        or verdict.reason != "noncommutative":
                    discrepancies.append(Discrepancy(
                        "noncommutative-not-routed", mp, None,
                        {"outcome": verdict.outcome}))
                continue
            if verdict.outcome == "inapplicable":
                continue
            built = regular_acts_built(m, cfg.act_size_bound)
            filtered = regular_acts_filtered(m, cfg.act_size_bound)
            filtered_keys = {a.action for a in filtered}
            for act in built:
                if act.action not in filtered_keys:
                    discrepancies.append(Discrepancy(
                        "builder-act-missing-from-enumeration", mp,
                        act_payload(act), {}))
            if verdict.outcome == "primitive-normal":
                if not idempotent_comparability(m).ok:
                    discrepancies.append(Discrepancy(
                        "normal-but-idempotents-incomparable", mp, None, {}))
                if not is_regularly_linearly_ordered(m).ok:
                    discrepancies.append(Discrepancy(
                        "normal-but-orbit-ideals-unordered", mp, None, {}))
                if "generator" not in (regular_part_decomposition(m).witness or {}):
                    discrepancies.append(Discrepancy(
                        "normal-but-no-single-generator", mp, None, {}))
                for act in filtered:
                    if not checker(act).ok:
                        discrepancies.append(Discrepancy(
                            "normal-class-with-failing-regular-act", mp,
                            act_payload(act), {}))
            else:
                cx = verdict.counterexample
                if cx is None:
                    discrepancies.append(Discrepancy(
                        "not-normal-without-counterexample", mp, None, {}))
                elif checker(cx.act).ok:
                    discrepancies.append(Discrepancy(
                        "counterexample-act-passes-criterion", mp,
                        act_payload(cx.act), {"kind": cx.kind}))
                elif not is_regular_act(cx.act)[0]:
                    discrepancies.append(Discrepancy(
                        "counterexample-act-not-regular", mp,
                        act_payload(cx.act), {"kind": cx.kind}))
    return {
        "config": cfg.payload(),
        "cases": cases,
        "outcomes": {k: outcomes[k] for k in sorted(outcomes)},
        "discrepancies": sorted((d.payload() for d in discrepancies),
                                key=lambda p: str(sorted(p.items()))),
        "status": "ok" if not discrepancies else "discrepancies",
    }


def _semantic_candidates(m: Monoid, act: Act, nfree: int, max_atoms: int,
                         max_bound: int = 1) -> list[tuple[Formula, frozenset]]:
    """Formulas of the given free width, deduplicated by solution relation."""
    out: dict[frozenset, Formula] = {}
    for f in enumerate_formulas(m, nfree, max_bound, max_atoms):
        if len(f.free) != nfree:
            continue
        key = solution_set(f, act)
        if key not in out:
            out[key] = f
    return sorted(out.items(), key=lambda kv: (sorted(kv[0]), kv[1].atoms))


def run_antiadditivity_sweep(cfg: ExperimentConfig,
                             detector: Callable = detect_primitive_group) -> dict:
    """Group-certificate search over quotients of definable sets.

    Sweeps deduplicated (basis, equivalence, operation) candidates over the
    regular acts of monoids whose class verdict is primitive-normal; any
    certificate with two or more classes is a discrepancy.
    """
    discrepancies: list[Discrepancy] = []
    certificates = 0
    singleton_certs = 0
    cases = 0
    for order in range(1, cfg.monoid_order_bound + 1):
        for m in enumerate_monoids(order, commutative=True):
            if decide_class(m).outcome != "primitive-normal":
                continue
            mp = monoid_payload(m)
            for act in regular_acts_filtered(m, cfg.act_size_bound):
                alphas = []
                for key, f in _semantic_candidates(m, act, 2, 2):
                    equiv = is_primitive_equivalence(f, act)
                    if equiv is not None:
                        alphas.append(f)
                bases = _semantic_candidates(m, act, 1, 2)
                ops = _semantic_candidates(m, act, 3, min(cfg.formula_atoms, 2))
                for alpha in alphas:
                    for _, basis in bases:
                        for _, op in ops:
                            cases += 1
                            try:
                                cert = detector([basis], alpha, op, (), act)
                            except BasisOutsideDomain:
                                continue
                            if cert is None:
                                continue
                            certificates += 1
                            if cert.size == 1:
                                singleton_certs += 1
                            else:
                                discrepancies.append(Discrepancy(
                                    "group-certificate-on-normal-class", mp,
                                    act_payload(act),
                                    {"size": cert.size,
                                     "alpha": formula_payload(alpha),
                                     "basis": formula_payload(basis),
                                     "op": formula_payload(op)}))
    return {
        "config": cfg.payload(),
        "cases": cases,
        "certificates": certificates,
        "singleton_certificates": singleton_certs,
        "discrepancies": sorted((d.payload() for d in discrepancies),
                                key=lambda p: str(sorted(p.items()))),
        "status": "ok" if not discrepancies else "discrepancies",
    }
