"""Exception hierarchy shared by every module."""


class CsFaceError(Exception):
    """Base class for all errors raised by csface."""


class NotFound(CsFaceError, FileNotFoundError):
    pass


class FormatError(CsFaceError, ValueError):
    pass


class DimensionMismatch(CsFaceError, ValueError):
    pass


class SplitError(CsFaceError, ValueError):
    pass


class EmptyMask(CsFaceError, ValueError):
    pass


class InsufficientBudget(CsFaceError, ValueError):
    pass


class SolverDiverged(CsFaceError, ArithmeticError):
    def __init__(self, iteration: int, message: str = ""):
        self.iteration = iteration
        super().__init__(message or f"non-finite iterate at iteration {iteration}")


class TooSmall(CsFaceError, ValueError):
    pass


class EmptyClass(CsFaceError, ValueError):
    pass


class NotEnoughClasses(CsFaceError, ValueError):
    pass


class FingerprintMismatch(CsFaceError, ValueError):
    pass
