"""Command line interface.

Exit codes are part of the contract: 0 success, 1 verification mismatch,
2 usage or syntax error, 3 I/O or network failure.
"""
from __future__ import annotations

import enum
import json as jsonlib
import os
import sys
from pathlib import Path
from typing import NoReturn

import click

from .errors import (
    IntegrityMismatchError,
    NotFoundError,
    NotFoundInArchiveError,
    RangeOutOfBoundsError,
    StoreError,
    TransportError,
    TypeContradictionError,
    TypeMismatchError,
    UnreadableError,
    UnsupportedNodeKindError,
)
from .ingest import ObjectStore, extract_lines, ingest_path, verify_path
from .model import Content, content_id
from .resolve import (
    ResolverKind,
    fetch_content_verified,
    resolve_metadata,
    resolver_url,
)
from .syntax import ObjectType, SwhidParseError, parse, validate


class ExitStatus(enum.IntEnum):
    OK = 0
    MISMATCH = 1
    USAGE = 2
    IO_ERROR = 3


def _fail(code: ExitStatus, message: str) -> NoReturn:
    click.echo(f"swhid: {message}", err=True)
    sys.exit(code)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="swhid")
def main():
    """Intrinsic, verifiable identifiers for source code artifacts."""


@main.command()
@click.argument("paths", nargs=-1, required=True)
@click.option(
    "--type",
    "force_type",
    type=click.Choice(["cnt", "dir"]),
    default=None,
    help="Fail unless the computed identifier has this type.",
)
@click.option(
    "--exclude",
    "excludes",
    multiple=True,
    metavar="PATTERN",
    help="Skip entries matching this glob (name or relative path).",
)
@click.option(
    "--recursive",
    is_flag=True,
    help="Print an identifier for every node under each path.",
)
@click.option(
    "--jobs",
    type=click.IntRange(min=1),
    default=1,
    help="Hash file contents with this many threads.",
)
@click.option("--json", "as_json", is_flag=True, help="Emit a JSON array.")
def identify(paths, force_type, excludes, recursive, jobs, as_json):
    """Compute identifiers for filesystem paths."""
    rows = []
    for path in paths:
        collected = [] if recursive else None
        try:
            swhid, _ = ingest_path(
                path, excludes, jobs=jobs, collect=collected
            )
        except (
            NotFoundError,
            UnreadableError,
            UnsupportedNodeKindError,
        ) as exc:
            _fail(ExitStatus.IO_ERROR, str(exc))
        if force_type is not None and swhid.object_type.value != force_type:
            _fail(
                ExitStatus.USAGE,
                f"{path}: computed a {swhid.object_type.long_name}"
                f" identifier, but --type {force_type} was requested",
            )
        if collected is not None:
            for rel, node_id in collected:
                display = os.path.join(path, rel) if rel else path
                rows.append((display, node_id))
        else:
            rows.append((path, swhid))
    if as_json:
        click.echo(
            jsonlib.dumps(
                [{"path": p, "swhid": str(s)} for p, s in rows], indent=2
            )
        )
    else:
        for p, s in rows:
            click.echo(f"{s}\t{p}")


@main.command(name="parse")
@click.argument("identifier")
@click.option(
    "--permissive",
    is_flag=True,
    help="Tolerate unknown qualifier keys (warn and drop them).",
)
@click.option("--json", "as_json", is_flag=True, help="Emit a JSON object.")
def parse_command(identifier, permissive, as_json):
    """Validate an identifier and print its parts."""
    diagnostics = validate(identifier, permissive)
    for diagnostic in diagnostics:
        click.echo(f"swhid: {diagnostic}", err=True)
    if any(not d.is_warning for d in diagnostics):
        sys.exit(ExitStatus.USAGE)
    value = parse(identifier, permissive)
    if as_json:
        click.echo(
            jsonlib.dumps(
                {
                    "canonical": str(value),
                    "schema_version": value.core.schema_version,
                    "object_type": value.object_type.long_name,
                    "object_id": value.object_id.hex,
                    "origin": value.origin,
                    "lines": str(value.lines) if value.lines else None,
                },
                indent=2,
            )
        )
    else:
        click.echo(f"canonical    {value}")
        click.echo(f"object type  {value.object_type.long_name}")
        click.echo(f"object id    {value.object_id.hex}")
        if value.origin is not None:
            click.echo(f"origin       {value.origin}")
        if value.lines is not None:
            click.echo(f"lines        {value.lines}")


@main.command()
@click.argument("identifier")
@click.argument("path")
@click.option(
    "--exclude",
    "excludes",
    multiple=True,
    metavar="PATTERN",
    help="Skip entries matching this glob (name or relative path).",
)
@click.option(
    "--objects",
    "objects_dir",
    type=click.Path(),
    default=None,
    help="Exported object store used to localize directory divergences.",
)
@click.option("--json", "as_json", is_flag=True, help="Emit a JSON object.")
def verify(identifier, path, excludes, objects_dir, as_json):
    """Check that PATH still hashes to IDENTIFIER."""
    try:
        value = parse(identifier)
    except SwhidParseError as exc:
        _fail(ExitStatus.USAGE, str(exc))
    reference = None
    if objects_dir is not None:
        try:
            reference = ObjectStore.load(objects_dir)
        except (StoreError, OSError) as exc:
            _fail(ExitStatus.IO_ERROR, str(exc))
    try:
        report = verify_path(
            value, path, reference=reference, excludes=excludes
        )
    except TypeMismatchError as exc:
        _fail(ExitStatus.USAGE, str(exc))
    except (NotFoundError, UnreadableError, UnsupportedNodeKindError) as exc:
        _fail(ExitStatus.IO_ERROR, str(exc))
    if as_json:
        click.echo(
            jsonlib.dumps(
                {
                    "expected": str(report.expected),
                    "actual": str(report.actual),
                    "matched": report.matched,
                    "detail": [
                        {
                            "path": d.path,
                            "expected": d.expected_hex,
                            "actual": d.actual_hex,
                            "note": d.note,
                        }
                        for d in report.detail
                    ],
                },
                indent=2,
            )
        )
    elif report.matched:
        click.echo(f"ok {report.expected}")
    else:
        click.echo(f"mismatch: expected {report.expected}")
        click.echo(f"          computed {report.actual}")
        for d in report.detail:
            where = d.path or "."
            click.echo(
                f"  {where}: {d.note}"
                f" (expected {d.expected_hex or '-'},"
                f" found {d.actual_hex or '-'})"
            )
    sys.exit(ExitStatus.OK if report.matched else ExitStatus.MISMATCH)


@main.command()
@click.argument("identifier")
@click.option(
    "--resolver",
    type=click.Choice([k.value for k in ResolverKind]),
    default=ResolverKind.ARCHIVE_WEB.value,
    show_default=True,
    help="Which resolver to build a URL for.",
)
@click.option(
    "--check",
    is_flag=True,
    help="Ask the archive whether it knows the object.",
)
@click.option(
    "--fetch",
    "fetch_to",
    type=click.Path(),
    default=None,
    metavar="FILE",
    help="Download a content object into FILE (verified first).",
)
@click.option(
    "--endpoint",
    envvar="SWHID_ARCHIVE_URL",
    default=None,
    metavar="URL",
    help="Archive API base URL [env: SWHID_ARCHIVE_URL].",
)
@click.option("--json", "as_json", is_flag=True, help="Emit a JSON object.")
def resolve(identifier, resolver, check, fetch_to, endpoint, as_json):
    """Build a resolver URL, optionally checking the archive."""
    try:
        value = parse(identifier)
    except SwhidParseError as exc:
        _fail(ExitStatus.USAGE, str(exc))
    if fetch_to is not None and value.object_type is not ObjectType.CONTENT:
        _fail(ExitStatus.USAGE, "--fetch needs a content identifier")
    url = resolver_url(value, ResolverKind(resolver))
    info: dict = {"url": url}
    if check:
        try:
            metadata = resolve_metadata(value.core, endpoint)
        except TypeContradictionError as exc:
            _fail(ExitStatus.MISMATCH, str(exc))
        except (NotFoundInArchiveError, TransportError) as exc:
            _fail(ExitStatus.IO_ERROR, str(exc))
        info["known"] = True
        info["type_confirmed"] = metadata.object_type_confirmed
        if metadata.browse_url:
            info["browse_url"] = metadata.browse_url
    if fetch_to is not None:
        try:
            data = fetch_content_verified(value.core, endpoint)
        except IntegrityMismatchError as exc:
            _fail(ExitStatus.MISMATCH, str(exc))
        except (NotFoundInArchiveError, TransportError) as exc:
            _fail(ExitStatus.IO_ERROR, str(exc))
        try:
            Path(fetch_to).write_bytes(data)
        except OSError as exc:
            _fail(ExitStatus.IO_ERROR, f"{fetch_to}: {exc.strerror or exc}")
        info["written"] = fetch_to
        info["size"] = len(data)
    if as_json:
        click.echo(jsonlib.dumps(info, indent=2))
    else:
        click.echo(url)
        if check:
            suffix = (
                " (type confirmed)" if info["type_confirmed"] else ""
            )
            click.echo(f"known to archive{suffix}")
        if fetch_to is not None:
            click.echo(f"wrote {info['size']} verified bytes to {fetch_to}")


@main.command(name="extract-lines")
@click.argument("identifier")
@click.argument("path")
@click.option(
    "--no-verify",
    is_flag=True,
    help="Skip checking the file against the identifier.",
)
def extract_lines_command(identifier, path, no_verify):
    """Write the line range a qualified identifier selects from PATH."""
    try:
        value = parse(identifier)
    except SwhidParseError as exc:
        _fail(ExitStatus.USAGE, str(exc))
    if value.object_type is not ObjectType.CONTENT:
        _fail(ExitStatus.USAGE, "extract-lines needs a content identifier")
    if value.lines is None:
        _fail(ExitStatus.USAGE, "identifier carries no lines qualifier")
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        _fail(ExitStatus.IO_ERROR, f"{path}: {exc.strerror or exc}")
    if not no_verify:
        actual = content_id(Content(data))
        if actual != value.object_id:
            _fail(
                ExitStatus.MISMATCH,
                f"{path} hashes to {actual.hex},"
                f" identifier says {value.object_id.hex}",
            )
    try:
        selected = extract_lines(data, value.lines)
    except RangeOutOfBoundsError as exc:
        _fail(ExitStatus.USAGE, str(exc))
    click.echo(selected, nl=False)


if __name__ == "__main__":
    main()
