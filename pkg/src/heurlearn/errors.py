"""Exception hierarchy shared across the package."""


class HeurlearnError(Exception):
    """Base class for all package errors."""


class PddlError(HeurlearnError):
    """Invalid or unsupported PDDL input, optionally positioned."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class PddlSyntaxError(PddlError):
    pass


class UnsupportedFeatureError(PddlError):
    pass


class UnknownTypeError(PddlError):
    pass


class ArityError(PddlError):
    pass


class UndeclaredError(PddlError):
    pass


class GroundingError(HeurlearnError):
    pass


class ContractError(HeurlearnError):
    """A caller violated a documented precondition."""


class InvalidPlanError(HeurlearnError):
    def __init__(self, step, message):
        self.step = step
        super().__init__(f"step {step}: {message}")


class DeadEndError(HeurlearnError):
    pass


class ConfigurationError(HeurlearnError):
    pass


class TrainingDivergedError(HeurlearnError):
    def __init__(self, epoch):
        self.epoch = epoch
        super().__init__(
            f"non-finite training loss at epoch {epoch}; try a smaller learning_rate"
        )


class ModelFormatError(HeurlearnError):
    pass


class ModelVersionError(ModelFormatError):
    pass


class CorruptModelError(ModelFormatError):
    pass


class ModelSchemaError(ModelFormatError):
    pass


class DatasetError(HeurlearnError):
    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class GenerationError(HeurlearnError):
    pass
