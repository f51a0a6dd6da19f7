"""Exception hierarchy for the engine.

Every engine error derives from LhottError so the CLI can map failures to
exit codes uniformly.  InternalAxiomFailure is special: it signals that a
comparison map which is provably invertible in this model came out singular,
i.e. an implementation bug, never a user error.
"""


class LhottError(Exception):
    pass


class ValidationError(LhottError):
    """An engine value failed its construction invariants."""


class NotAGroup(ValidationError):
    pass


class NotAnAction(ValidationError):
    pass


class UnknownObject(LhottError):
    pass


class CodomainMismatch(LhottError):
    pass


class BaseMismatch(LhottError):
    pass


class Composability(LhottError):
    pass


class NotAnEquivalence(LhottError):
    pass


class InternalAxiomFailure(LhottError):
    """A canonical map that must be invertible in this model is not: a bug."""


class NonInvertibleNorm(InternalAxiomFailure):
    pass


class IncoherentSquare(LhottError):
    pass


class InterfaceMismatch(LhottError):
    """Legs, coefficients or classes of a composite do not line up."""


class CarrierMismatch(LhottError):
    pass


class TwistedClassUnsupported(LhottError):
    pass


class ShapeMismatch(LhottError):
    pass


class SizeLimit(LhottError):
    pass


class BadCharacterData(LhottError):
    pass
