"""Exception types shared across the package."""


class GcaError(Exception):
    """Base class for all library errors."""


class GroupError(GcaError):
    pass


class NonAssociative(GroupError):
    def __init__(self, a, b, c):
        super().__init__(f"multiplication is not associative on ({a}, {b}, {c})")
        self.triple = (a, b, c)


class NoIdentity(GroupError):
    def __init__(self):
        super().__init__("no two-sided identity element")


class NoInverse(GroupError):
    def __init__(self, element):
        super().__init__(f"element {element} has no inverse")
        self.element = element


class NotHomomorphism(GroupError):
    def __init__(self, a, b):
        super().__init__(f"map is not a homomorphism on the pair ({a}, {b})")
        self.pair = (a, b)


class PowerTooLarge(GcaError):
    def __init__(self, order, limit):
        super().__init__(f"power group of order {order} exceeds the limit {limit}")
        self.order = order
        self.limit = limit


class ShapeMismatch(GcaError):
    pass


class DomainTooSmall(GcaError):
    pass


class NotPowerAlphabet(GcaError):
    pass


class DimensionMismatch(GcaError):
    pass


class BudgetExceeded(GcaError):
    """Raised when a search runs out of its resource budget.

    ``frontier`` describes how far the search got, ``partial`` may carry the
    last verified approximation of a construction.
    """

    def __init__(self, message="budget exceeded", frontier=None, partial=None):
        super().__init__(message)
        self.frontier = frontier or {}
        self.partial = partial


class NotGroupHom(GcaError):
    def __init__(self, p, q, detail=""):
        super().__init__(f"local rule is not a group homomorphism on ({p}, {q}){detail}")
        self.pair = (p, q)


class NotEndomorphism(GcaError):
    def __init__(self, pattern):
        super().__init__(f"image contains the forbidden pattern {pattern}")
        self.pattern = pattern


class NotOneDimensional(GcaError):
    pass


class Unsupported(GcaError):
    pass


class EmptyAutomaton(GcaError):
    pass


class ConfigNotInShift(GcaError):
    pass


class ParseError(GcaError):
    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class ValidationError(GcaError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
