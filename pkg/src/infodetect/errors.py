"""Exception and warning types shared across the package."""


class DegenerateParametersError(ValueError):
    """Structural parameters make a closed form undefined (e.g. zero denominator)."""


class SingularParametersError(DegenerateParametersError):
    """A named denominator of a closed-form coefficient vanishes."""

    def __init__(self, denominator: str, message: str | None = None):
        self.denominator = denominator
        super().__init__(message or f"singular parameters: denominator '{denominator}' is zero")


class RemovableSingularityError(DegenerateParametersError):
    """The printed formula is singular at this point but the model is not.

    Use :func:`infodetect.model_core.delta_limit` to evaluate the limit.
    """


class NoInvertibleRootError(ArithmeticError):
    """Autocovariance matching found no MA root strictly inside (-1, 1)."""

    def __init__(self, message: str, params=None):
        self.params = params
        super().__init__(message)


class EmptyInputError(ValueError):
    """An input series or file holds no observations."""


class InsufficientDataError(ValueError):
    """Too few observations to fit the requested model."""


class TickParseError(ValueError):
    """A tick file row could not be parsed."""

    def __init__(self, message: str, line: int | None = None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}" if where else message)


class PathDegenerateWarning(UserWarning):
    """A simulated additive price path reached zero or below."""


class TickOrderWarning(UserWarning):
    """Tick rows were out of timestamp order and have been sorted."""
