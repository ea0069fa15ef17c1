"""Exception types raised by the workbench.

Every exception carries a short machine-readable ``code`` that the command
line front end reports in its JSON error object.
"""


class WorkbenchError(Exception):
    code = "WorkbenchError"


class ZeroConstantTerm(WorkbenchError):
    code = "ZeroConstantTerm"


class InvalidAutomorphism(WorkbenchError):
    code = "InvalidAutomorphism"


class InvalidBeta(WorkbenchError):
    code = "InvalidBeta"


class OutsideDisk(WorkbenchError):
    code = "OutsideDisk"


class InsufficientSamples(WorkbenchError):
    code = "InsufficientSamples"


class BudgetTooSmall(WorkbenchError):
    code = "BudgetTooSmall"


class BoundViolation(WorkbenchError):
    code = "BoundViolation"


class NonConverged(WorkbenchError):
    """Power iteration hit its iteration cap.

    ``estimate`` holds the best singular value seen, which is still a valid
    lower bound for the largest singular value.
    """

    code = "NonConverged"

    def __init__(self, message, estimate):
        super().__init__(message)
        self.estimate = estimate
