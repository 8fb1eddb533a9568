"""Shared fixture monoids, built from explicit tables."""

from sacts.monoid import Monoid

TRIVIAL = Monoid(("1",), 0, ((0,),))

# the two-element group: g*g = 1
Z2 = Monoid(("1", "g"), 0, ((0, 1), (1, 0)))

# three-element cyclic group
Z3 = Monoid(("1", "g", "h"), 0, ((0, 1, 2), (1, 2, 0), (2, 0, 1)))

# chain of idempotents 1 > e > 0
CHAIN3 = Monoid(("1", "e", "0"), 0, ((0, 1, 2), (1, 1, 2), (2, 2, 2)))

# diamond: two incomparable idempotents e, f with meet 0
DIAMOND = Monoid(
    ("1", "e", "f", "0"),
    0,
    (
        (0, 1, 2, 3),
        (1, 1, 3, 3),
        (2, 3, 2, 3),
        (3, 3, 3, 3),
    ),
)

# two right-zero elements adjoined to an identity: x*e_i = e_i (noncommutative)
RIGHTZERO = Monoid(("1", "e1", "e2"), 0, ((0, 1, 2), (1, 1, 2), (2, 1, 2)))

# two-element semilattice 1 > e
SEMI2 = Monoid(("1", "e"), 0, ((0, 1), (1, 1)))

ALL_NAMED = {
    "trivial": TRIVIAL,
    "z2": Z2,
    "z3": Z3,
    "chain3": CHAIN3,
    "diamond": DIAMOND,
    "rightzero": RIGHTZERO,
    "semi2": SEMI2,
}
