"""Exception hierarchy shared across the toolkit.

Exit-code mapping used by the CLI: data errors -> 2, estimation/model
errors -> 3, infeasible search -> 4.
"""


class PoloptError(Exception):
    """Base class for all toolkit errors."""


class DataError(PoloptError):
    """Problems with input data (CLI exit code 2)."""


class MissingColumn(DataError):
    pass


class NonBinaryTreatment(DataError):
    pass


class NonNumericCell(DataError):
    pass


class EmptyDataset(DataError):
    pass


class LengthMismatch(DataError):
    pass


class EstimationError(PoloptError):
    """Problems during model fitting or grid construction (CLI exit code 3)."""


class TooFewUnits(EstimationError):
    pass


class EmptyArm(EstimationError):
    pass


class NoTreatedUnits(EstimationError):
    pass


class UnknownVariable(EstimationError):
    pass


class DegenerateVariable(EstimationError):
    pass


class NoFeasiblePoint(PoloptError):
    """No grid point satisfies the constraints (CLI exit code 4)."""
