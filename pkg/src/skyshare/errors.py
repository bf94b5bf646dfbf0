"""Exception types shared across the simulator."""


class SkyshareError(Exception):
    """Base class for all simulator errors."""


class PlacementError(SkyshareError):
    """Area placement could not satisfy the overlap constraints."""


class ConfigError(SkyshareError):
    """Invalid or incomplete configuration."""


class SchemaError(SkyshareError):
    """A data file violates its expected schema.

    Carries the 1-based row number (header excluded from the count)
    and the offending path when known.
    """

    def __init__(self, message: str, row: int | None = None, path: str | None = None):
        self.row = row
        self.path = path
        prefix = ""
        if path is not None:
            prefix += f"{path}: "
        if row is not None:
            prefix += f"row {row}: "
        super().__init__(prefix + message)


class DataError(SkyshareError):
    """A dataset is empty or degenerate after processing."""


class NoStationsError(SkyshareError):
    """An event was mapped to an area with no placed stations."""
