"""
Exception hierarchy of RHSActions.

Every error raised on purpose derives from RHSActionsError. The three
intermediate classes decide how the command line reports a failure:
InputError maps to exit code 2, BudgetError to exit code 3, and
ClassificationError is recorded per field inside reports.
"""


class RHSActionsError(Exception):
    """Base class of all RHSActions errors."""

    tag = "error"


class InputError(RHSActionsError):
    """Invalid input: malformed group data, parameters or specifications."""

    tag = "input_error"


class BudgetError(RHSActionsError):
    """A configured size or cost bound would be exceeded."""

    tag = "budget_error"


class ClassificationError(RHSActionsError):
    """A recognizer could not reach a trustworthy answer."""

    tag = "classification_error"


# group-core


class InvalidPermutationError(InputError):
    tag = "invalid_permutation"


class DegreeMismatchError(InputError):
    tag = "degree_mismatch"


class NotAnActionError(InputError):
    tag = "not_an_action"


class NotNormalError(InputError):
    tag = "not_normal"


class NotPrimeError(InputError):
    tag = "not_prime"


class OrderBoundExceededError(BudgetError):
    tag = "order_bound_exceeded"


# structure


class NotA2GroupError(InputError):
    tag = "not_a_2_group"


class InconsistentClassificationError(ClassificationError):
    """The rank route and the Sylow route to periodicity disagree."""

    tag = "inconsistent_classification"


# cohomology


class BudgetExceededError(BudgetError):
    tag = "budget_exceeded"


class InvalidCocycleError(InputError):
    tag = "invalid_cocycle"


class SubgroupMismatchError(InputError):
    tag = "subgroup_mismatch"


# catalog


class BadParameterError(InputError):
    tag = "bad_parameter"


class UnrecognizedError(ClassificationError):
    tag = "unrecognized"


class CatalogVerificationError(ClassificationError):
    tag = "catalog_verification_failed"


# theorem engine


class BadInvariantFactorsError(InputError):
    tag = "bad_invariant_factors"


class NotAPGroupError(InputError):
    tag = "not_a_p_group"


class WrongTypeError(InputError):
    tag = "wrong_type"


class NotCentralCyclicError(InputError):
    tag = "not_central_cyclic"


class EvenDError(InputError):
    tag = "even_d"


class BadPrimesError(InputError):
    tag = "bad_primes"


# command line


class ConfigurationError(InputError):
    tag = "configuration_error"


class GroupSpecSyntaxError(InputError):
    """Syntax error in a group specification; `offset` is a byte offset."""

    tag = "syntax_error"

    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset
        self.text = text


class ElaborationError(InputError):
    """A syntactically valid specification names an invalid group."""

    tag = "elaboration_error"

    def __init__(self, path: str, cause: Exception):
        super().__init__(f"{path}: {cause}")
        self.path = path
        self.cause = cause
        if isinstance(cause, BudgetError):
            # budget failures keep their exit code through the wrapper
            self.budget = True
        else:
            self.budget = False
