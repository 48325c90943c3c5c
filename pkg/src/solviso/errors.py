"""Exception types shared across the package.

Validation errors carry the first witnessing element or triple found in
row-major scan order, so failures are reproducible and debuggable.
"""


class SolvisoError(Exception):
    """Base class for all library errors."""


class TableValidationError(SolvisoError):
    """A raw multiplication table violates one of the group axioms."""


class NotLatinSquare(TableValidationError):
    def __init__(self, kind: str, index: int, value: int):
        self.kind = kind  # "row" or "column"
        self.index = index
        self.value = value
        super().__init__(f"{kind} {index} repeats value {value}")


class NoIdentity(TableValidationError):
    def __init__(self):
        super().__init__("no two-sided identity element")


class NonAssociative(TableValidationError):
    def __init__(self, a: int, b: int, c: int):
        self.triple = (a, b, c)
        super().__init__(f"(a*b)*c != a*(b*c) for (a, b, c) = ({a}, {b}, {c})")


class MissingInverse(TableValidationError):
    def __init__(self, element: int):
        self.element = element
        super().__init__(f"element {element} has no inverse")


class NotNested(SolvisoError):
    """H is not contained in K where containment was required."""


class NoSuchPrime(SolvisoError):
    """The requested prime does not divide the group order."""


class NotSolvable(SolvisoError):
    """The group has no Sylow basis (equivalently, is not solvable)."""


class NotGenerating(SolvisoError):
    """A claimed generating sequence does not generate its subgroup."""


class BadParams(SolvisoError):
    """Invalid parameters for a group-family constructor."""


class ProductMismatch(SolvisoError):
    """An element is not a unique product across a decomposition."""


class MalformedEncoding(SolvisoError):
    """A graph fails a structural probe required of pair encodings."""

    def __init__(self, probe: str):
        self.probe = probe
        super().__init__(f"structural probe failed: {probe}")


class NotPairIso(SolvisoError):
    """A map violates the structure of an augmented composition pair."""


class WitnessVerificationFailed(SolvisoError):
    """A positive answer produced a witness that failed verification.

    This always signals an internal bug (e.g. in the canonizer) and is
    never swallowed.
    """
