"""Exception hierarchy shared by all swhid modules.

Everything raised on purpose by this package derives from SwhidError, so
callers can catch one base class. The CLI maps these onto exit codes.
"""
from __future__ import annotations


class SwhidError(Exception):
    """Base class for all errors raised by this package."""


# --- model / node construction -------------------------------------------

class ModelError(SwhidError):
    """Invalid Merkle node construction."""


class DuplicateNameError(ModelError):
    """A directory contains two entries with the same name."""


class InvalidNameError(ModelError):
    """A directory entry name is empty or contains NUL or '/'."""


class MalformedPersonError(ModelError):
    """A person stamp has a bad UTC offset or a newline in the raw bytes."""


class MalformedNameError(ModelError):
    """A release name is empty or contains NUL or newline."""


class InvalidBranchNameError(ModelError):
    """A snapshot branch name contains NUL."""


# --- ingest / filesystem ---------------------------------------------------

class IngestError(SwhidError):
    """Base class for filesystem ingestion failures."""


class NotFoundError(IngestError):
    """The requested path does not exist."""


class UnreadableError(IngestError):
    """A file or directory exists but cannot be read."""


class UnsupportedNodeKindError(IngestError):
    """The path is neither a regular file, directory, nor symlink."""


class TypeMismatchError(IngestError):
    """The identifier's object type contradicts the node kind on disk."""


class RangeOutOfBoundsError(IngestError):
    """A line range starts beyond the last line of the content."""


class StoreError(SwhidError):
    """An object store directory is structurally invalid."""


# --- description files -----------------------------------------------------

class SchemaError(SwhidError):
    """A node description document violates the expected schema."""

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location


class UnknownReferenceError(SwhidError):
    """A description references a label that cannot be resolved."""


# --- resolution ------------------------------------------------------------

class ResolveError(SwhidError):
    """Base class for archive resolution failures."""


class NotFoundInArchiveError(ResolveError):
    """The archive does not know the requested identifier."""


class TypeContradictionError(ResolveError):
    """The archive holds the object under a different type."""


class TransportError(ResolveError):
    """Network-level failure talking to the archive."""


class IntegrityMismatchError(ResolveError):
    """Fetched bytes do not hash back to the requested identifier."""

    def __init__(self, expected_hex: str, actual_hex: str):
        super().__init__(
            f"fetched bytes hash to {actual_hex}, expected {expected_hex}"
        )
        self.expected_hex = expected_hex
        self.actual_hex = actual_hex
