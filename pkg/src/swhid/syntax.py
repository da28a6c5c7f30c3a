"""Parsing, validation, and canonical formatting of swh identifiers.

An identifier names one node of the Merkle DAG:

    swh:1:cnt:94a9ed024d3859793618152ea559a168bbcbb5e2

optionally followed by ``;``-separated context qualifiers (``origin=<url>``,
``lines=N`` or ``lines=N-M``). Parsing is strict by default; validate()
returns the full list of diagnostics instead of stopping at the first error.
"""
from __future__ import annotations

import dataclasses
import enum
import re
from typing import Optional, Union

from .errors import SwhidError

__all__ = [
    "ObjectType",
    "ObjectId",
    "CoreSwhid",
    "LineRange",
    "QualifiedSwhid",
    "DiagnosticKind",
    "ParseDiagnostic",
    "SwhidParseError",
    "parse",
    "format_swhid",
    "validate",
]

SCHEMA_VERSION = 1

_HEX_RE = re.compile(r"\A[0-9a-fA-F]{40}\Z")
_LINES_RE = re.compile(r"\A([0-9]+)(?:-([0-9]+))?\Z")
_SCHEME_RE = re.compile(r"\A[A-Za-z][A-Za-z0-9+.\-]*:")


class ObjectType(enum.Enum):
    """The five node kinds, valued by their identifier tag."""

    CONTENT = "cnt"
    DIRECTORY = "dir"
    REVISION = "rev"
    RELEASE = "rel"
    SNAPSHOT = "snp"

    @property
    def long_name(self) -> str:
        return self.name.lower()

    @classmethod
    def from_long_name(cls, name: str) -> "ObjectType":
        for member in cls:
            if member.long_name == name:
                return member
        raise ValueError(f"unknown object type name {name!r}")


@dataclasses.dataclass(frozen=True)
class ObjectId:
    """A 20-byte intrinsic object id (sha1 of the object's manifest)."""

    raw: bytes

    def __post_init__(self):
        if not isinstance(self.raw, bytes) or len(self.raw) != 20:
            raise ValueError("object id must be exactly 20 bytes")

    @classmethod
    def from_hex(cls, hex_digits: str) -> "ObjectId":
        if not _HEX_RE.match(hex_digits):
            raise ValueError("object id must be 40 hex digits")
        return cls(bytes.fromhex(hex_digits))

    @property
    def hex(self) -> str:
        return self.raw.hex()

    def __str__(self) -> str:
        return self.hex


@dataclasses.dataclass(frozen=True)
class CoreSwhid:
    """A bare identifier: scheme version, object type, object id."""

    object_type: ObjectType
    object_id: ObjectId
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.schema_version != SCHEMA_VERSION:
            raise ValueError(
                f"unsupported schema version {self.schema_version!r}"
            )

    def __str__(self) -> str:
        return (
            f"swh:{self.schema_version}:"
            f"{self.object_type.value}:{self.object_id.hex}"
        )


@dataclasses.dataclass(frozen=True)
class LineRange:
    """1-indexed inclusive line selection inside a content object.

    ``end is None`` selects the single line ``start``. ``end == start`` is
    distinct from that (it round-trips as ``N-N``, not ``N``).
    """

    start: int
    end: Optional[int] = None

    def __post_init__(self):
        if self.start < 1:
            raise ValueError("line numbers are 1-indexed")
        if self.end is not None and self.end < self.start:
            raise ValueError(
                f"line range end {self.end} precedes start {self.start}"
            )

    def __str__(self) -> str:
        if self.end is None:
            return str(self.start)
        return f"{self.start}-{self.end}"


def _origin_problem(url: str) -> Optional[str]:
    """Return a message if url is not usable as an origin qualifier."""
    if not url:
        return "origin URL is empty"
    if ";" in url:
        return "origin URL may not contain ';'"
    if any(ch.isspace() or ord(ch) < 0x20 or ord(ch) == 0x7F for ch in url):
        return "origin URL may not contain whitespace or control characters"
    if not _SCHEME_RE.match(url):
        return "origin URL lacks a scheme"
    return None


@dataclasses.dataclass(frozen=True)
class QualifiedSwhid:
    """A core identifier plus optional origin and line-range context."""

    core: CoreSwhid
    origin: Optional[str] = None
    lines: Optional[LineRange] = None

    def __post_init__(self):
        if self.origin is not None:
            problem = _origin_problem(self.origin)
            if problem:
                raise ValueError(problem)

    @property
    def object_type(self) -> ObjectType:
        return self.core.object_type

    @property
    def object_id(self) -> ObjectId:
        return self.core.object_id

    def __str__(self) -> str:
        # Canonical emission order: origin before lines.
        parts = [str(self.core)]
        if self.origin is not None:
            parts.append(f"origin={self.origin}")
        if self.lines is not None:
            parts.append(f"lines={self.lines}")
        return ";".join(parts)


class DiagnosticKind(enum.Enum):
    BAD_PREFIX = "bad-prefix"
    UNSUPPORTED_VERSION = "unsupported-version"
    BAD_TYPE = "bad-type"
    BAD_HEX = "bad-hex"
    BAD_QUALIFIER = "bad-qualifier"
    BAD_LINE_RANGE = "bad-line-range"
    # Warnings: the input is accepted but is not in canonical form.
    UPPERCASE_HEX = "uppercase-hex"
    QUALIFIER_ORDER = "qualifier-order"
    UNKNOWN_QUALIFIER = "unknown-qualifier"


_WARNING_KINDS = frozenset(
    {
        DiagnosticKind.UPPERCASE_HEX,
        DiagnosticKind.QUALIFIER_ORDER,
        DiagnosticKind.UNKNOWN_QUALIFIER,
    }
)


@dataclasses.dataclass(frozen=True)
class ParseDiagnostic:
    """One problem found in an identifier string.

    byte_offset is the UTF-8 offset of the start of the offending field.
    """

    byte_offset: int
    kind: DiagnosticKind
    message: str

    @property
    def is_warning(self) -> bool:
        return self.kind in _WARNING_KINDS

    def __str__(self) -> str:
        severity = "warning" if self.is_warning else "error"
        return f"{severity} at byte {self.byte_offset}: {self.message}"


class SwhidParseError(SwhidError):
    """Raised by parse() for the first error-level diagnostic."""

    def __init__(self, diagnostic: ParseDiagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


def _scan(
    text: str, permissive: bool
) -> "tuple[Optional[QualifiedSwhid], list[ParseDiagnostic]]":
    """Single-pass scanner shared by parse() and validate()."""
    diags: list[ParseDiagnostic] = []

    def boff(char_index: int) -> int:
        return len(text[:char_index].encode("utf-8", "replace"))

    def err(at: int, kind: DiagnosticKind, message: str) -> None:
        diags.append(ParseDiagnostic(boff(at), kind, message))

    if not text.startswith("swh:"):
        err(0, DiagnosticKind.BAD_PREFIX, "identifier must start with 'swh:'")
        return None, diags

    version_end = text.find(":", 4)
    if version_end < 0:
        err(
            len(text),
            DiagnosticKind.BAD_TYPE,
            "identifier truncated before the object type",
        )
        return None, diags
    version = text[4:version_end]
    if version != "1":
        err(
            4,
            DiagnosticKind.UNSUPPORTED_VERSION,
            f"unsupported schema version {version!r} (expected '1')",
        )

    type_start = version_end + 1
    type_end = text.find(":", type_start)
    if type_end < 0:
        err(
            len(text),
            DiagnosticKind.BAD_HEX,
            "identifier truncated before the object id",
        )
        return None, diags
    type_token = text[type_start:type_end]
    object_type: Optional[ObjectType] = None
    try:
        object_type = ObjectType(type_token)
    except ValueError:
        err(
            type_start,
            DiagnosticKind.BAD_TYPE,
            f"unknown object type {type_token!r}"
            " (expected cnt, dir, rev, rel, or snp)",
        )

    id_start = type_end + 1
    id_end = text.find(";", id_start)
    if id_end < 0:
        id_end = len(text)
    hex_part = text[id_start:id_end]
    object_id: Optional[ObjectId] = None
    if not _HEX_RE.match(hex_part):
        if len(hex_part) != 40:
            message = f"object id must be 40 hex digits, got {len(hex_part)}"
        else:
            message = "object id contains non-hex characters"
        err(id_start, DiagnosticKind.BAD_HEX, message)
    else:
        if hex_part != hex_part.lower():
            err(
                id_start,
                DiagnosticKind.UPPERCASE_HEX,
                "object id uses non-canonical uppercase hex digits",
            )
        object_id = ObjectId.from_hex(hex_part.lower())

    origin: Optional[str] = None
    lines: Optional[LineRange] = None
    seg_start = id_end + 1
    while seg_start <= len(text) and id_end < len(text):
        seg_end = text.find(";", seg_start)
        if seg_end < 0:
            seg_end = len(text)
        segment = text[seg_start:seg_end]
        if not segment:
            err(seg_start, DiagnosticKind.BAD_QUALIFIER, "empty qualifier")
        elif "=" not in segment:
            err(
                seg_start,
                DiagnosticKind.BAD_QUALIFIER,
                f"qualifier {segment!r} is not of the form key=value",
            )
        else:
            key, value = segment.split("=", 1)
            if key == "origin":
                if origin is not None:
                    err(
                        seg_start,
                        DiagnosticKind.BAD_QUALIFIER,
                        "duplicate origin qualifier",
                    )
                else:
                    problem = _origin_problem(value)
                    if problem:
                        err(seg_start, DiagnosticKind.BAD_QUALIFIER, problem)
                    else:
                        if lines is not None:
                            err(
                                seg_start,
                                DiagnosticKind.QUALIFIER_ORDER,
                                "non-canonical qualifier order"
                                " (origin belongs before lines)",
                            )
                        origin = value
            elif key == "lines":
                if lines is not None:
                    err(
                        seg_start,
                        DiagnosticKind.BAD_QUALIFIER,
                        "duplicate lines qualifier",
                    )
                else:
                    match = _LINES_RE.match(value)
                    if not match:
                        err(
                            seg_start,
                            DiagnosticKind.BAD_QUALIFIER,
                            f"malformed line range {value!r}",
                        )
                    else:
                        start = int(match.group(1))
                        end = int(match.group(2)) if match.group(2) else None
                        if start < 1 or (end is not None and end < 1):
                            err(
                                seg_start,
                                DiagnosticKind.BAD_LINE_RANGE,
                                "line numbers are 1-indexed",
                            )
                        elif end is not None and end < start:
                            err(
                                seg_start,
                                DiagnosticKind.BAD_LINE_RANGE,
                                f"line range end {end} precedes start {start}",
                            )
                        else:
                            lines = LineRange(start, end)
            elif permissive:
                err(
                    seg_start,
                    DiagnosticKind.UNKNOWN_QUALIFIER,
                    f"unknown qualifier key {key!r} ignored",
                )
            else:
                err(
                    seg_start,
                    DiagnosticKind.BAD_QUALIFIER,
                    f"unknown qualifier key {key!r}",
                )
        seg_start = seg_end + 1

    if any(not d.is_warning for d in diags):
        return None, diags
    assert object_type is not None and object_id is not None
    value = QualifiedSwhid(
        core=CoreSwhid(object_type, object_id), origin=origin, lines=lines
    )
    return value, diags


def parse(text: str, permissive: bool = False) -> QualifiedSwhid:
    """Parse an identifier, raising SwhidParseError on the first error.

    Warnings (uppercase hex, non-canonical qualifier order, unknown keys
    under permissive=True) do not fail the parse; the returned value is
    normalized, so str(parse(text)) is the canonical form.
    """
    value, diags = _scan(text, permissive)
    for diag in diags:
        if not diag.is_warning:
            raise SwhidParseError(diag)
    assert value is not None
    return value


def validate(text: str, permissive: bool = False) -> "list[ParseDiagnostic]":
    """Return every diagnostic for text, in input order. Empty means clean."""
    _, diags = _scan(text, permissive)
    return diags


def format_swhid(value: Union[QualifiedSwhid, CoreSwhid]) -> str:
    """Render an identifier in canonical form."""
    return str(value)
