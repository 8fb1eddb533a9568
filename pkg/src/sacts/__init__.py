"""sacts: a workbench for finite monoids and their acts.

Decides regularity of act elements, computes the regular part of a monoid,
tests linear order of ideals, checks per-act normality of definable sets,
decides the class-level question for commutative monoids, builds
counterexample acts, and rewrites coefficient conjunctions.
"""

from .monoid import (
    Monoid,
    validate_monoid,
    idempotents,
    is_commutative,
    is_group,
    principal_left_ideal,
    principal_right_ideal,
    left_ideal_leq_idempotent,
    right_ideal_leq_idempotent,
    is_linearly_ordered,
    enumerate_monoids,
    enumerate_commutative_monoids,
)
from .act import (
    Act,
    Congruence,
    validate_act,
    regular_representation,
    cyclic_subact,
    is_act_regular,
    is_regular_act,
    act_regular_elements,
    regular_part,
    cyclic_iso,
    regular_via_idempotent,
    coproduct,
    congruence_closure,
    quotient,
)

__version__ = "0.1.0"
