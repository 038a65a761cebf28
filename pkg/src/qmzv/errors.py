"""Typed errors shared across the package."""


class QmzvError(Exception):
    """Base class for all package errors."""


class ExcludedPrimeError(QmzvError, ArithmeticError):
    """A denominator is divisible by p, so the value has no image in Z_(p).

    Finitely many small primes are excluded from any given congruence family;
    callers are expected to drop the prime (with a report) rather than guess
    a value for it.
    """

    def __init__(self, p: int, message: str = ""):
        self.p = p
        super().__init__(message or f"prime {p} divides a denominator (excluded prime)")


class NonInvertibleError(QmzvError, ArithmeticError):
    """The residue is a zero divisor modulo [p]^n."""


class PrecisionError(QmzvError, ArithmeticError):
    """A floating computation failed its self-check at the working precision."""
