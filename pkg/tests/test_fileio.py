"""File formats: strict parsing and round-trips."""

import pytest

from sacts.act import regular_representation, validate_act
from sacts.errors import MalformedTable
from sacts.fileio import (
    dumps_act,
    dumps_monoid,
    loads_act,
    loads_monoid,
    read_act,
    read_monoid,
    write_act,
    write_monoid,
)

from fixtures import ALL_NAMED, DIAMOND, Z2


@pytest.mark.parametrize("name", sorted(ALL_NAMED))
def test_monoid_round_trip(name):
    m = ALL_NAMED[name]
    assert loads_monoid(dumps_monoid(m)) == m


def test_monoid_file_round_trip(tmp_path):
    path = str(tmp_path / "diamond.monoid")
    write_monoid(path, DIAMOND)
    assert read_monoid(path) == DIAMOND


def test_comments_and_blank_lines_ignored():
    text = "# a diamond\n\nelements: 1 e\nidentity: 1 # the unit\ntable:\n1 e\ne e\n"
    m = loads_monoid(text)
    assert m.order == 2


def test_monoid_trailing_content_rejected():
    with pytest.raises(MalformedTable):
        loads_monoid(dumps_monoid(Z2) + "stray\n")


def test_monoid_missing_identity_rejected():
    with pytest.raises(MalformedTable):
        loads_monoid("elements: a b\nidentity: c\ntable:\na b\nb a\n")


def test_monoid_ragged_rejected():
    with pytest.raises(MalformedTable):
        loads_monoid("elements: a b\nidentity: a\ntable:\na b\nb\n")


def test_monoid_duplicate_names_rejected():
    with pytest.raises(MalformedTable):
        loads_monoid("elements: a a\nidentity: a\ntable:\na a\na a\n")


def test_act_round_trip_inline():
    rep = regular_representation(DIAMOND)
    assert loads_act(dumps_act(rep)) == rep


def test_act_file_round_trip(tmp_path):
    a = validate_act(Z2, ["p", "q"], [["p", "q"], ["q", "p"]])
    path = str(tmp_path / "swap.act")
    write_act(path, a)
    assert read_act(path) == a


def test_act_with_monoid_reference(tmp_path):
    mpath = tmp_path / "z2.monoid"
    write_monoid(str(mpath), Z2)
    text = "monoid: z2.monoid\ncarrier: p q\naction:\n1: p q\ng: q p\n"
    apath = tmp_path / "swap.act"
    apath.write_text(text)
    a = read_act(str(apath))
    assert a.monoid == Z2 and a.size == 2


def test_act_rows_keyed_by_element_any_order():
    text = "monoid: inline\nelements: 1 g\nidentity: 1\ntable:\n1 g\ng 1\n" \
           "carrier: p q\naction:\ng: q p\n1: p q\n"
    a = loads_act(text)
    assert a.action == ((0, 1), (1, 0))


def test_act_duplicate_row_rejected():
    text = "monoid: inline\nelements: 1 g\nidentity: 1\ntable:\n1 g\ng 1\n" \
           "carrier: p q\naction:\n1: p q\n1: p q\n"
    with pytest.raises(MalformedTable):
        loads_act(text)


def test_act_missing_row_rejected():
    text = "monoid: inline\nelements: 1 g\nidentity: 1\ntable:\n1 g\ng 1\n" \
           "carrier: p q\naction:\n1: p q\n"
    with pytest.raises(MalformedTable):
        loads_act(text)
