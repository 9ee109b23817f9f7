"""Exception hierarchy for the rank2 package.

Every error carries enough context to be rendered as machine-readable JSON
by the CLI (``code`` plus the message).
"""


class Rank2Error(Exception):
    """Base class; ``code`` is a stable machine-readable identifier."""

    code = "error"


class NonOddPrime(Rank2Error):
    code = "non-odd-prime"


class MalformedRelation(Rank2Error):
    code = "malformed-relation"


class MixedAmbient(Rank2Error):
    code = "mixed-ambient"


class OrderBoundExceeded(Rank2Error):
    code = "order-bound-exceeded"


class InconsistentPresentation(Rank2Error):
    code = "inconsistent-presentation"


class BadParams(Rank2Error):
    code = "bad-params"


class ValidationFailure(Rank2Error):
    code = "validation-failure"


class NotASubgroup(Rank2Error):
    code = "not-a-subgroup"


class RankNotTwo(Rank2Error):
    code = "rank-not-two"


class Mismatch(Rank2Error):
    code = "mismatch"


class CounterexampleFound(Rank2Error):
    code = "counterexample-found"


class BoundExceeded(Rank2Error):
    code = "bound-exceeded"


class NotSylow(Rank2Error):
    code = "not-sylow"


class ClosureDiverges(Rank2Error):
    code = "closure-diverges"


class CriterionInapplicable(Rank2Error):
    code = "criterion-inapplicable"


class NotFullyNormalized(Rank2Error):
    code = "not-fully-normalized"


class NotFullyCentralized(Rank2Error):
    code = "not-fully-centralized"


class UnsupportedGroup(Rank2Error):
    code = "unsupported-group"


class NotRealizedHere(Rank2Error):
    code = "not-realized-here"


class SpecError(Rank2Error):
    code = "spec-error"
