"""Exception hierarchy shared by the numerical modules."""


class ModelError(ValueError):
    """Base class for invalid inputs to the simulator and the analytics."""


class LabelCollisionError(ModelError):
    pass


class UnknownLabelError(ModelError):
    pass


class DimensionMismatchError(ModelError):
    pass


class CapacityError(ModelError):
    """Raised when a zero-padded embedding does not fit its target factor."""


class BudgetError(ModelError):
    """Raised when a dense simulation would exceed the configured dimension cap."""


class InconsistentParametersError(ModelError):
    pass
