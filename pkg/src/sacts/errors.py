"""Exception types raised by the workbench.

Every error that carries a witness stores it as plain data so that a failed
check can be replayed from the exception alone.
"""

from __future__ import annotations


class SactsError(Exception):
    """Base class for all workbench errors."""


# -- monoid validation ------------------------------------------------------

class MalformedTable(SactsError):
    pass


class NotAssociative(SactsError):
    def __init__(self, a: int, b: int, c: int):
        self.witness = (a, b, c)
        super().__init__(f"associativity fails at triple {self.witness}")


class IdentityLawFails(SactsError):
    def __init__(self, a: int):
        self.witness = a
        super().__init__(f"identity law fails at element {a}")


class NotIdempotent(SactsError):
    def __init__(self, e: int):
        self.element = e
        super().__init__(f"element {e} is not idempotent")


class NotClosed(SactsError):
    def __init__(self, subset, witness):
        self.subset = frozenset(subset)
        self.witness = witness
        super().__init__(f"subset not multiplicatively closed: {witness}")


class BoundExceeded(SactsError):
    pass


# -- act validation ---------------------------------------------------------

class CompatibilityFails(SactsError):
    def __init__(self, s1: int, s2: int, a: int):
        self.witness = (s1, s2, a)
        super().__init__(f"action incompatible at (s1, s2, a) = {self.witness}")


class IdentityFails(SactsError):
    def __init__(self, a: int):
        self.witness = a
        super().__init__(f"identity does not fix point {a}")


class MixedMonoids(SactsError):
    pass


class NotCompatible(SactsError):
    def __init__(self, s: int, a: int, b: int):
        self.witness = (s, a, b)
        super().__init__(f"partition not action-compatible at s={s}, pair=({a},{b})")


# -- formula layer ----------------------------------------------------------

class UnknownCoefficient(SactsError):
    def __init__(self, name: str, position: int = -1):
        self.name = name
        self.position = position
        super().__init__(f"unknown coefficient {name!r}")


class UnboundVariable(SactsError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"variable {name!r} not in the declared scope")


class FormulaSyntaxError(SactsError):
    def __init__(self, position: int, message: str):
        self.position = position
        super().__init__(f"at {position}: {message}")


class PreconditionFails(SactsError):
    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


class NotConjunction(SactsError):
    pass


class EliminationStuck(SactsError):
    """No sound rewrite step makes progress; the input has no normal form
    reachable by coefficient-divisor merges."""

    def __init__(self, atoms):
        self.atoms = tuple(atoms)
        super().__init__(f"no progress possible on {len(self.atoms)} atoms")


class MalformedBlocks(SactsError):
    pass


class BasisOutsideDomain(SactsError):
    def __init__(self, tup):
        self.tuple = tup
        super().__init__(f"basis tuple {tup} outside the generative domain")


# -- deciders ---------------------------------------------------------------

class EmptyR(SactsError):
    pass


class Noncommutative(SactsError):
    def __init__(self, a: int, b: int):
        self.witness = (a, b)
        super().__init__(f"monoid not commutative at pair {self.witness}")


class ComparableIdeals(SactsError):
    def __init__(self, b: int, c: int):
        self.witness = (b, c)
        super().__init__(f"principal ideals of {b} and {c} are comparable")


class NoIdempotentWitness(SactsError):
    def __init__(self, a: int):
        self.element = a
        super().__init__(f"no idempotent generates a copy of the orbit of {a}")


class QuotientNotRegular(SactsError):
    def __init__(self, point):
        self.point = point
        super().__init__(f"glued quotient has a non-regular point: {point}")


class ConstructionFailed(SactsError):
    pass
