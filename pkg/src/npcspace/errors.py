"""Exception hierarchy.

Every error carries a stable ``code`` (the class name) so the CLI can emit
``{"error": code, "message": text}`` without a lookup table.
"""


class NPCSpaceError(Exception):
    @property
    def code(self) -> str:
        return type(self).__name__


class InvalidSplit(NPCSpaceError, ValueError):
    pass


class LeafCountMismatch(NPCSpaceError, ValueError):
    pass


class UnknownAxis(NPCSpaceError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class NotAFace(NPCSpaceError, ValueError):
    pass


class NotFlag(NPCSpaceError, ValueError):
    pass


class NegativeLength(NPCSpaceError, ValueError):
    pass


class PointsInDifferentSpaces(NPCSpaceError, ValueError):
    pass


class OutOfRange(NPCSpaceError, ValueError):
    pass


class EmptySide(NPCSpaceError, ValueError):
    pass


class ZeroWeight(NPCSpaceError, ValueError):
    pass


class FlowNotMaximum(NPCSpaceError, ValueError):
    pass


class CountExceeded(NPCSpaceError, RuntimeError):
    pass


class NotInteriorToMaximalOrthant(NPCSpaceError, ValueError):
    pass


class InvalidSquaredCoordinate(NPCSpaceError, ValueError):
    pass


class TimedOut(NPCSpaceError, RuntimeError):
    pass


class MaxOuterIterationsExceeded(NPCSpaceError, RuntimeError):
    pass


class SupportMismatch(NPCSpaceError, ValueError):
    pass


class EmptyInterior(NPCSpaceError, ValueError):
    pass


class LimitExceeded(NPCSpaceError, RuntimeError):
    pass


class NewickError(NPCSpaceError, ValueError):
    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class DuplicateLeafLabel(NewickError):
    pass


class FewerThanThreeLeaves(NewickError):
    pass


class SpaceFileError(NPCSpaceError, ValueError):
    pass
