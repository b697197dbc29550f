"""Exception hierarchy.

Every error carries a short machine-readable ``reason`` (the class name) so the
CLI can report it on one line and map it to an exit code.
"""


class SpiderkeepError(Exception):
    exit_code = 2

    @property
    def reason(self) -> str:
        return type(self).__name__


class InvalidInput(SpiderkeepError, ValueError):
    pass


class MalformedLine(InvalidInput):
    pass


class SelfLoop(InvalidInput):
    pass


class DuplicateEdge(InvalidInput):
    pass


class IndexOutOfRange(InvalidInput):
    pass


class UnknownVertex(InvalidInput):
    pass


class ZeroLeg(InvalidInput):
    pass


class OrderMismatch(InvalidInput):
    pass


class BadParameters(InvalidInput):
    pass


class NotACut(InvalidInput):
    pass


class NotATree(InvalidInput):
    pass


class EmptyGraph(InvalidInput):
    pass


class HypothesisNotMet(SpiderkeepError):
    pass


class CompleteGraph(HypothesisNotMet):
    pass


class Disconnected(HypothesisNotMet):
    pass


class GuardTripped(SpiderkeepError):
    exit_code = 3


class TooLarge(GuardTripped):
    pass


class CapExceeded(GuardTripped):
    pass


class GenerationBudgetExceeded(GuardTripped):
    pass


class ExtractionFailed(SpiderkeepError):
    """No verified witness could be produced.

    ``diagnostics`` holds the transcript of every abandoned attempt.
    """

    exit_code = 1

    def __init__(self, message: str, diagnostics: list | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


class ReductionFailed(ExtractionFailed):
    pass
