class TeqError(Exception):
    """Base class for every error the simulator raises on purpose."""


class ConfigError(TeqError, ValueError):
    """Invalid sweep configuration (frame arithmetic, unknown channel, bad pattern...)."""


class LengthMismatchError(TeqError, ValueError):
    pass


class EmptyInputError(TeqError, ValueError):
    pass


class CsvFormatError(TeqError, ValueError):
    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {reason}")
