"""Exception types shared across the package."""


class Error(Exception):
    """Base class for every error raised by finloc."""


# -- modulus / residue arithmetic -------------------------------------------

class ValueTooSmall(Error):
    """Modulus below 2."""


class ValueTooLarge(Error):
    """Modulus beyond the supported 64-bit range."""


class CompositeInFieldMode(Error):
    """Field-mode modulus failed the deterministic primality test."""


class ModulusMismatch(Error):
    """Operands live over different moduli."""


class NonUnit(Error):
    """Element has no multiplicative inverse (expected for ring zero divisors)."""


class DimensionMismatch(Error):
    """Matrix shapes are incompatible."""


class SingularPivot(Error):
    """Elimination found a nonzero column with no invertible pivot."""


class NotADivisor(Error):
    """Target modulus does not divide the source modulus."""


class RangeExhausted(Error):
    """Prime search left the supported integer width."""


# -- locality scales / decoding ---------------------------------------------

class OverflowAtRequestedLevel(Error):
    """Height bound l**m left the supported range."""


class ScaleTooLargeForModulus(Error):
    """Uniqueness window 2*L**2 < q violated; decoding would be ambiguous."""


class NotLocalError(Error):
    """Residue has no bounded-height representation at this scale."""


class DenominatorNotUnit(Error):
    """Denominator shares a factor with the modulus; encoding undefined."""


class EnumerationBudgetExceeded(Error):
    """Requested enumeration is larger than the caller-supplied cap."""


# -- group structures / varieties -------------------------------------------

class HeightExceeded(Error):
    """Generated matrix entries exceed the height bound."""


class DegenerateParams(Error):
    """Seed data does not produce a group element (e.g. non-unit quaternion)."""


class WindowTooSmall(Error):
    """Modulus cannot accommodate products at the requested height bound."""


class EmptyPointSet(Error):
    """No generated point (or no grid point) to measure against."""


# -- formula language --------------------------------------------------------

class ParseError(Error):
    """Syntax error with source position and the expected-token set."""

    def __init__(self, message, line, col, expected=()):
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        hint = f" (expected: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{line}:{col}: {message}{hint}")


class UnboundVariable(ParseError):
    """Variable occurs outside any sup/inf binder."""


class TermEscapesSorts(Error):
    """Term value is not representable at any level the modulus can window."""
