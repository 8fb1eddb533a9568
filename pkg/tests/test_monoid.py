"""Monoid layer: validation, ideals, order tests, enumeration."""

import itertools

import pytest

from sacts.errors import (
    BoundExceeded,
    MalformedTable,
    NotAssociative,
    NotClosed,
    NotIdempotent,
)
from sacts.monoid import (
    Monoid,
    canonical_table,
    enumerate_commutative_monoids,
    enumerate_monoids,
    idempotents,
    is_commutative,
    is_group,
    is_linearly_ordered,
    left_ideal_leq_idempotent,
    principal_left_ideal,
    principal_right_ideal,
    right_ideal_leq_idempotent,
    validate_monoid,
)

from fixtures import CHAIN3, DIAMOND, RIGHTZERO, TRIVIAL, Z2


# -- validation --------------------------------------------------------------

def test_trivial_monoid_is_valid():
    m = validate_monoid(["1"], "1", [["1"]])
    assert m.order == 1 and m.identity == 0


def test_z2_is_valid_group():
    m = validate_monoid(["1", "g"], "1", [["1", "g"], ["g", "1"]])
    assert is_group(m)
    assert is_commutative(m)


def test_undefined_entry_rejected():
    with pytest.raises(MalformedTable):
        validate_monoid(["1", "g"], "1", [["1", "g"], ["g", "q"]])


def test_ragged_row_rejected():
    with pytest.raises(MalformedTable):
        validate_monoid(["1", "g"], "1", [["1", "g"], ["g"]])


def test_duplicate_names_rejected():
    with pytest.raises(MalformedTable):
        validate_monoid(["1", "1"], "1", [["1", "1"], ["1", "1"]])


def test_missing_identity_rejected():
    with pytest.raises(MalformedTable):
        validate_monoid(["a", "b"], "1", [["a", "b"], ["b", "a"]])


def test_nonassociative_table_rejected():
    # subtraction-like table on three elements is not associative
    with pytest.raises(NotAssociative):
        Monoid(("1", "a", "b"), 0, ((0, 1, 2), (1, 0, 1), (2, 2, 0)))


# -- idempotents and ideals --------------------------------------------------

def test_group_idempotents_is_identity_only():
    assert idempotents(Z2) == frozenset({0})


def test_diamond_all_idempotent():
    assert idempotents(DIAMOND) == frozenset({0, 1, 2, 3})


def test_rightzero_idempotents():
    assert idempotents(RIGHTZERO) == frozenset({0, 1, 2})


def test_principal_ideal_trivial():
    assert principal_left_ideal(TRIVIAL, 0) == frozenset({0})


def test_principal_ideal_diamond():
    e = DIAMOND.index("e")
    zero = DIAMOND.index("0")
    assert principal_left_ideal(DIAMOND, e) == frozenset({e, zero})


def test_principal_ideal_rightzero():
    e1 = RIGHTZERO.index("e1")
    assert principal_left_ideal(RIGHTZERO, e1) == frozenset({e1})


def test_ideal_contains_generator_everywhere():
    for m in (TRIVIAL, Z2, CHAIN3, DIAMOND, RIGHTZERO):
        for a in range(m.order):
            assert a in principal_left_ideal(m, a)
            assert a in principal_right_ideal(m, a)


def test_ideal_shortcut_reflexive():
    for m in (Z2, CHAIN3, DIAMOND):
        for e in idempotents(m):
            assert left_ideal_leq_idempotent(m, e, e)
            assert right_ideal_leq_idempotent(m, e, e)


def test_ideal_shortcut_diamond_cases():
    e, zero = DIAMOND.index("e"), DIAMOND.index("0")
    one = DIAMOND.index("1")
    assert left_ideal_leq_idempotent(DIAMOND, zero, e)
    assert not left_ideal_leq_idempotent(DIAMOND, one, e)


def test_ideal_shortcut_requires_idempotent():
    with pytest.raises(NotIdempotent):
        left_ideal_leq_idempotent(Z2, 0, 1)  # g is not idempotent


def shortcut_agrees_with_inclusion(m):
    for a in range(m.order):
        for e in idempotents(m):
            left = left_ideal_leq_idempotent(m, a, e)
            assert left == (principal_left_ideal(m, a) <= principal_left_ideal(m, e))
            right = right_ideal_leq_idempotent(m, a, e)
            assert right == (principal_right_ideal(m, a) <= principal_right_ideal(m, e))


def test_ideal_shortcut_agrees_on_fixtures():
    for m in (TRIVIAL, Z2, CHAIN3, DIAMOND, RIGHTZERO):
        shortcut_agrees_with_inclusion(m)


# -- linear order ------------------------------------------------------------

def test_chain_is_linearly_ordered():
    ok, witness = is_linearly_ordered(CHAIN3, range(3))
    assert ok and witness is None


def test_rightzero_pair_incomparable():
    e1, e2 = RIGHTZERO.index("e1"), RIGHTZERO.index("e2")
    ok, witness = is_linearly_ordered(RIGHTZERO, {e1, e2})
    assert not ok
    assert witness == (e1, e2)


def test_singleton_idempotent_is_ordered():
    e = DIAMOND.index("e")
    ok, _ = is_linearly_ordered(DIAMOND, {e})
    assert ok


def test_non_closed_subset_rejected():
    e, f = DIAMOND.index("e"), DIAMOND.index("f")
    with pytest.raises(NotClosed):
        is_linearly_ordered(DIAMOND, {e, f})  # e*f = 0 escapes


def test_group_carrier_always_ordered():
    for m in (Z2,):
        ok, _ = is_linearly_ordered(m, range(m.order))
        assert ok


# -- enumeration -------------------------------------------------------------

def brute_force_commutative_tables(n):
    """Unpruned oracle: every commutative monoid table with identity 0."""
    if n == 1:
        return {((0,),)}
    cells = [(i, j) for i in range(1, n) for j in range(i, n)]
    found = set()
    for values in itertools.product(range(n), repeat=len(cells)):
        t = [[None] * n for _ in range(n)]
        for k in range(n):
            t[0][k] = t[k][0] = k
        for (i, j), v in zip(cells, values):
            t[i][j] = t[j][i] = v
        if all(t[t[a][b]][c] == t[a][t[b][c]]
               for a in range(n) for b in range(n) for c in range(n)):
            found.add(canonical_table(t, 0))
    return found


def test_enumerate_order_1():
    assert len(list(enumerate_commutative_monoids(1))) == 1


def test_enumerate_order_2_is_group_and_semilattice():
    ms = list(enumerate_commutative_monoids(2))
    assert len(ms) == 2
    kinds = {(is_group(m), idempotents(m)) for m in ms}
    assert (True, frozenset({0})) in kinds
    assert (False, frozenset({0, 1})) in kinds


@pytest.mark.parametrize("n", [1, 2, 3])
def test_enumeration_matches_brute_force(n):
    expected = brute_force_commutative_tables(n)
    got = [m.table for m in enumerate_commutative_monoids(n)]
    assert set(got) == expected
    assert len(got) == len(expected)  # no duplicates


def test_enumeration_internal_consistency_order_3():
    ms = list(enumerate_commutative_monoids(3))
    for m in ms:
        assert is_commutative(m)
    tables = {m.table for m in ms}
    assert len(tables) == len(ms)
    for m in ms:
        assert canonical_table(m.table, m.identity) == m.table


def test_enumeration_deterministic():
    a = [m.table for m in enumerate_commutative_monoids(3)]
    b = [m.table for m in enumerate_commutative_monoids(3)]
    assert a == b


def test_general_enumeration_includes_noncommutative():
    ms = list(enumerate_monoids(3))
    assert any(not is_commutative(m) for m in ms)
    comm = [m.table for m in ms if is_commutative(m)]
    assert set(comm) == {m.table for m in enumerate_commutative_monoids(3)}


def test_enumeration_bound():
    with pytest.raises(BoundExceeded):
        list(enumerate_commutative_monoids(6))
    with pytest.raises(BoundExceeded):
        list(enumerate_commutative_monoids(0))
