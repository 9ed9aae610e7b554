class GraphFormatError(ValueError):
    """Malformed edge-list input."""


class ContractViolation(ValueError):
    """An operation was called outside its documented precondition."""


class CoverValidationError(RuntimeError):
    """A constructed cover left an edge uncovered; always a bug."""


class ConvergenceError(RuntimeError):
    pass
