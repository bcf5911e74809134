"""Exception types shared across the package."""


class ZoneError(Exception):
    """Base class for all geozones errors."""


class CoordinateError(ZoneError, ValueError):
    """A latitude/longitude value is out of range or non-finite."""


class ParseError(ZoneError, ValueError):
    """A payload could not be parsed at all (malformed JSON/XML).

    ``offset`` is the byte offset of the failure when known; ``position``
    is a (line, column) pair for XML payloads.
    """

    def __init__(self, message, offset=None, position=None):
        super().__init__(message)
        self.offset = offset
        self.position = position


class SchemaError(ZoneError, ValueError):
    """A parsed payload or document violates its expected shape.

    ``path`` names the offending field (e.g. ``photo.geo.longitude``).
    """

    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path


class ConfigError(ZoneError, ValueError):
    """An algorithm or query configuration is invalid."""


class StorageError(ZoneError):
    """The document store could not be read, written or locked."""


class EmptyCorpusError(ZoneError):
    """No corpus records survived filtering; the pipeline cannot proceed."""
