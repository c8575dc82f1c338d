"""Exception types shared by all modules."""


class TightGroupoidError(Exception):
    """Base class for every error raised by the package."""


class InternalInconsistency(TightGroupoidError):
    """A computed value violates an invariant that valid inputs guarantee."""


class InvalidWord(TightGroupoidError, ValueError):
    """A (class, r, n, m) tuple does not satisfy the class constraints."""


class NotInDomain(TightGroupoidError):
    """A character lies outside the domain of the word acting on it."""


class NotComposable(TightGroupoidError):
    """Two germs do not match source to range."""


class WitnessNotFound(TightGroupoidError):
    """No orthogonality witness exists for an excluded projection."""

    def __init__(self, projection, message=None):
        self.projection = projection
        super().__init__(message or f"no witness for {projection}")


class GramDegeneracyMismatch(TightGroupoidError):
    """The rank of a Gram matrix disagrees with the expected quotient dimension."""


class ParseError(TightGroupoidError, ValueError):
    """Text does not match a grammar; carries the offending position."""

    def __init__(self, text, pos, expected):
        self.text = text
        self.pos = pos
        self.expected = expected
        super().__init__(f"parse error at position {pos} in {text!r}: expected {expected}")
