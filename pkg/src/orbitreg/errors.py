"""Exceptions shared across the package."""


class Refusal(RuntimeError):
    """A computation declined to run because it would exceed an explicit budget
    or leave the decidable fragment."""


class FormatError(ValueError):
    """Malformed text input; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
