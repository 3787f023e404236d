"""Exceptions shared across the package."""


class HermsigError(Exception):
    """Base class for all library errors."""


class FieldMismatchError(HermsigError):
    """Operands belong to different number fields."""


class AlgebraMismatchError(HermsigError):
    """Operands belong to different algebras."""


class InvariantError(HermsigError):
    """An internal exactness invariant was violated; indicates a bug or
    an instance outside the validated catalogue."""


class SearchExhaustedError(HermsigError):
    """A bounded deterministic search ran out of candidates."""


class UnsupportedError(HermsigError):
    """Instance outside the supported catalogue or field tower."""
