"""Exception hierarchy shared by all pipeline stages."""


class HarChainError(Exception):
    """Base class for errors raised by the activity recognition chain."""


class RecordingFormatError(HarChainError, ValueError):
    """A recording file or in-memory recording violates the canonical format."""

    def __init__(self, message: str, path: str | None = None, row: int | None = None):
        """Initialize the error.

        :param message: Description of the violation.
        :param path: File the violation was found in, if any.
        :param row: 1-based data row (header excluded), if applicable.
        """
        self.path = path
        self.row = row
        location = ""
        if path is not None:
            location += f"{path}: "
        super().__init__(f"{location}{message}")


class ShapeError(HarChainError, ValueError):
    """Operand shapes are incompatible with an operation."""


class GraphReleasedError(HarChainError, RuntimeError):
    """Backward was requested on a graph that has already been released."""


class NonFiniteLossError(HarChainError, FloatingPointError):
    """Training produced a NaN or infinite loss."""

    def __init__(self, epoch: int, batch: int, value: float):
        self.epoch = epoch
        self.batch = batch
        self.value = value
        super().__init__(f"non-finite loss {value} at epoch {epoch}, batch {batch}")


class ProtocolError(HarChainError, ValueError):
    """A split or cross-validation protocol cannot be applied to the data."""


class StageError(HarChainError):
    """A pipeline stage failed; wraps the original cause with the stage name."""

    def __init__(self, stage: str, cause: BaseException, fold: str | None = None):
        self.stage = stage
        self.fold = fold
        self.cause = cause
        where = f"stage '{stage}'"
        if fold is not None:
            where += f" (fold {fold})"
        super().__init__(f"{where} failed: {cause}")
