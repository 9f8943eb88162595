"""Exception hierarchy shared by all modules."""


class ChateletError(ValueError):
    """Base class for every error raised by this package."""


class ZeroInputError(ChateletError):
    pass


class CriterionFailsError(ChateletError):
    """Hensel's criterion v(f(x0)) > 2 v(f'(x0)) does not hold."""


class PrecisionLossError(ChateletError):
    pass


class RamifiedOrSplitError(ChateletError):
    """Expected an unramified quadratic extension of the local field."""


class NotRamifiedError(ChateletError):
    pass


class NotIrreducibleError(ChateletError):
    pass


class NotSeparableError(ChateletError):
    pass


class SquareAError(ChateletError):
    pass


class BadDegreeError(ChateletError):
    pass


class NotSplitError(ChateletError):
    pass


class WrongShapeError(ChateletError):
    pass


class ReducibleError(ChateletError):
    pass


class DepthExceededError(ChateletError):
    pass


class EmptyRealLocusError(ChateletError):
    pass


class NotOnCurveError(ChateletError):
    pass


class TwoTorsionError(ChateletError):
    pass


class AllRepresentativesVanishError(ChateletError):
    """Internal invariant violation: no representative is defined at a point."""


class ParseError(ChateletError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.message = message
        self.position = position
        self.text = text
        super().__init__(self._render())

    def _render(self) -> str:
        if not self.text:
            return f"{self.message} (at position {self.position})"
        return f"{self.message} at position {self.position}\n  {self.text}\n  {' ' * self.position}^"
