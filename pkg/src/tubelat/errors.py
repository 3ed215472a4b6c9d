"""Exception types shared across the package.

Every domain error raised by the library is a subclass of ``TubelatError``,
so callers (in particular the CLI) can convert any expected failure into a
machine-readable error object without catching bare ``Exception``.
"""

from __future__ import annotations


class TubelatError(Exception):
    """Base class for all domain errors raised by this package."""

    name = "error"


class ParameterDomainError(TubelatError):
    """A scalar parameter lies outside its allowed domain (e.g. lambda in {0,1})."""

    name = "parameter-domain"


class SpecFormatError(TubelatError):
    """An algebra/representation/formula description is structurally malformed."""

    name = "spec-format"


class NonConfluentRewriteError(TubelatError):
    """The oriented relations fail the overlap test; names the ambiguous path."""

    name = "non-confluent-rewrite"

    def __init__(self, word, left, right):
        self.word = tuple(word)
        super().__init__(
            f"rewriting is not confluent on path {'.'.join(word)}: "
            f"normal forms {left!r} and {right!r} disagree"
        )


class InfiniteDimensionError(TubelatError):
    """Normal-form paths of unbounded length exist, so the algebra is infinite-dimensional."""

    name = "infinite-dimension"


class ConsistencyError(TubelatError):
    """Two independent computation routes disagree, or data contradicts a derived invariant."""

    name = "internal-consistency"


class ValidationError(TubelatError):
    """A named validation check against the printed invariants failed."""

    name = "validation"

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("; ".join(self.failures))


class UndefinedSlopeError(TubelatError):
    """Both radical pairings vanish, so the slope is undefined."""

    name = "undefined-slope"


class PreconditionError(TubelatError):
    """An operation was called on input violating its stated precondition."""

    name = "precondition"


class UnsupportedFormError(TubelatError):
    """The quadratic form does not have the shape this derivation supports."""

    name = "unsupported-form"


class BudgetExhaustedError(TubelatError):
    """An internal search budget ran out before a certified answer was found."""

    name = "budget-exhausted"


class TypeMismatchError(TubelatError):
    """Vertex types, vector lengths or algebra specs of two operands do not match."""

    name = "type-mismatch"


class ContractViolationError(TubelatError):
    """A relation assumed by an operation (e.g. psi <= phi on M) does not hold."""

    name = "contract-violation"
