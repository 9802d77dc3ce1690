"""Exception types raised across the package."""


class DecodeError(Exception):
    """Image bytes could not be decoded (corrupt, truncated, unsupported)."""


class ImageTooSmall(ValueError):
    def __init__(self, width: int, height: int, minimum: int = 8):
        super().__init__(f"image {width}x{height} is smaller than {minimum}x{minimum}")
        self.width = width
        self.height = height


class LengthMismatch(ValueError):
    pass


class InvalidRecord(ValueError):
    pass


class ExtensionError(ValueError):
    pass


class ParseError(ValueError):
    """A descriptor line failed strict parsing.

    ``reason`` is either ``"WrongDimension"`` or ``"MalformedField"``.
    ``line_number`` is 1-based, or None when parsing a detached line.
    """

    WRONG_DIMENSION = "WrongDimension"
    MALFORMED_FIELD = "MalformedField"

    def __init__(self, reason: str, detail: str, line_number: int | None = None, path=None):
        self.reason = reason
        self.detail = detail
        self.line_number = line_number
        self.path = path
        super().__init__(str(self))

    def __str__(self) -> str:
        where = ""
        if self.path is not None:
            where += f"{self.path}: "
        if self.line_number is not None:
            where += f"line {self.line_number}: "
        return f"{where}{self.reason}: {self.detail}"


class KindMismatch(ValueError):
    pass


class DuplicateId(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass
