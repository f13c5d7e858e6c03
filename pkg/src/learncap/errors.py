"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Two distributions (or a distribution and a table) disagree on alphabet size."""


class BudgetExceededError(RuntimeError):
    """An exact enumeration would exceed the configured work budget."""
