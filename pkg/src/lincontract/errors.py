"""Exception hierarchy for the contract solver."""


class ContractError(Exception):
    """Base class for every error raised by this package."""


class InstanceError(ContractError, ValueError):
    """An oracle returned a value outside its declared range.

    Rewards must lie in [0, 1] and costs must be nonnegative.
    """


class EqualRewardsError(ContractError, ArithmeticError):
    """Two distinct demanded sets have the same reward.

    This cannot happen with a consistently tie-broken demand oracle, so it
    almost always means the oracle handed to the enumerator is broken.
    """


class GroundSetTooLarge(ContractError, ValueError):
    pass


class SchemaError(ContractError, ValueError):
    """Malformed instance file or JSON payload."""


class OracleMismatch(ContractError, ValueError):
    """The requested demand oracle cannot serve this instance kind."""


class NormalizationError(ContractError, ValueError):
    pass


class NoPerfectMatchingError(ContractError, ValueError):
    pass


class NegativeWeightError(ContractError, ValueError):
    pass


class UnreachableError(ContractError, ValueError):
    pass


class CostNotOneSidedError(ContractError, ValueError):
    pass


class ClassViolation(ContractError, ValueError):
    """A set function failed an exhaustive class-membership check."""
