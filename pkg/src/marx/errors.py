"""Exception types shared across the package."""


class MarxError(Exception):
    """Base class for all package errors."""


class InvalidAction(MarxError):
    """An action identifier is not valid for the environment."""


class IncompatibleState(MarxError):
    """A joint state does not fit the environment's dimensions."""


class NonMonotone(MarxError):
    """A completion bit flipped from done back to not-done."""


class NoCompletePath(MarxError):
    """No state completing every task is reachable along the greedy walk."""


class UnsupportedVersion(MarxError):
    """An abstraction file was written with an unknown format version."""


class MmdpFormatError(MarxError):
    """An abstraction file is malformed; message carries position info."""


class ParseError(MarxError):
    """Query text is syntactically invalid.

    ``offset`` is the byte offset of the offending token.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownTask(MarxError):
    """A query names a task the environment does not define."""


class UnknownAgent(MarxError):
    """A query names an agent outside 1..N."""


class EmptySampleMap(MarxError):
    """A frontier state has no stored concrete samples to roll out from."""


class TooManyVariables(MarxError):
    """Boolean minimization was asked for more variables than the cap."""


class RepairDiverged(MarxError):
    """Query repair exceeded its iteration cap without reaching feasibility."""
