"""
Errors raised by thinbase.  Every error is a ValueError, so callers that only care about bad
input can catch that, the command line catches ThinBaseError and exits with code 2.
"""

from typing import Optional


class ThinBaseError(ValueError):
    pass


class GroupConstructionError(ThinBaseError):
    """
    Generators or a multiplication table do not describe a group we can build.
    """


class SubgroupError(ThinBaseError):
    """
    A subset passed as a subgroup (or normal subgroup) is not one.
    """


class TrivialWordError(ThinBaseError):
    pass


class WordBudgetError(ThinBaseError):
    pass


class TableValidationError(ThinBaseError):
    """
    A character table failed validation, or does not fit the group it was paired with.
    """


class UncoverableError(ThinBaseError):
    """
    Some element has no representation as a product from the given sets.
    """

    witness: int

    def __init__(self, message: str, witness: int):
        super().__init__(message)
        self.witness = witness


class DecompositionStuckError(ThinBaseError):
    group_name: Optional[str]

    def __init__(self, message: str, group_name: Optional[str] = None):
        super().__init__(message)
        self.group_name = group_name


class GridBudgetError(ThinBaseError):
    pass


class ReportSchemaError(ThinBaseError):
    pass
