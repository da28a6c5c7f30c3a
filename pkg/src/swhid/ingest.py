"""Filesystem ingestion, the deduplicating object store, and verification.

ingest_path() walks a tree bottom-up, storing one manifest per distinct
object. Symlinks are never followed: the link target bytes are the content,
exactly as in version control. verify_path() recomputes an id and, given a
reference store, walks both trees to localize the divergence. Description
files let callers mint revision/release/snapshot ids for history they
describe as JSON.
"""
from __future__ import annotations

import base64
import binascii
import dataclasses
import fnmatch
import hashlib
import json
import os
import re
import stat
import threading
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    MalformedPersonError,
    NotFoundError,
    RangeOutOfBoundsError,
    SchemaError,
    StoreError,
    TypeMismatchError,
    UnknownReferenceError,
    UnreadableError,
    UnsupportedNodeKindError,
)
from .model import (
    MANIFEST_KIND_TO_TYPE,
    BranchKind,
    BranchTarget,
    Content,
    DagNode,
    Directory,
    DirectoryEntry,
    EntryPermission,
    PersonStamp,
    Release,
    Revision,
    Snapshot,
    manifest_of,
    object_id_of,
)
from .syntax import CoreSwhid, LineRange, ObjectId, ObjectType, QualifiedSwhid

__all__ = [
    "ObjectStore",
    "ingest_path",
    "NodeDescription",
    "describe_nodes",
    "realize_descriptions",
    "EntryMismatch",
    "VerificationReport",
    "verify_path",
    "extract_lines",
]

_HEX40_RE = re.compile(r"\A[0-9a-f]{40}\Z")


class ObjectStore:
    """In-memory map from (object type, object id) to manifest bytes.

    add() is idempotent: re-adding an object keeps one copy and bumps an
    insertion counter, so callers can observe deduplication. Thread-safe.
    """

    def __init__(self):
        self._objects: Dict[Tuple[ObjectType, ObjectId], bytes] = {}
        self._insertions: Counter = Counter()
        self._lock = threading.Lock()

    def add(self, node: DagNode) -> CoreSwhid:
        """Store a node's manifest, returning its identifier."""
        manifest = manifest_of(node)
        object_type, object_id = object_id_of(node)
        key = (object_type, object_id)
        with self._lock:
            self._insertions[key] += 1
            self._objects.setdefault(key, manifest)
        return CoreSwhid(object_type, object_id)

    def get(
        self, object_type: ObjectType, object_id: ObjectId
    ) -> Optional[bytes]:
        return self._objects.get((object_type, object_id))

    def insertions(
        self, object_type: ObjectType, object_id: ObjectId
    ) -> int:
        """How many times add() has seen this object."""
        return self._insertions[(object_type, object_id)]

    def __len__(self) -> int:
        return len(self._objects)

    def __contains__(self, key: Tuple[ObjectType, ObjectId]) -> bool:
        return key in self._objects

    def __iter__(self):
        return iter(self._objects)

    def audit(self) -> List[CoreSwhid]:
        """Re-hash every manifest; return identifiers that no longer match."""
        bad = []
        for (object_type, object_id), manifest in self._objects.items():
            if hashlib.sha1(manifest).digest() != object_id.raw:
                bad.append(CoreSwhid(object_type, object_id))
        return bad

    def save(self, root: Union[str, Path]) -> None:
        """Write manifests under root/objects/<2 hex>/<38 hex>."""
        base = Path(root) / "objects"
        for (_, object_id), manifest in self._objects.items():
            hexid = object_id.hex
            bucket = base / hexid[:2]
            bucket.mkdir(parents=True, exist_ok=True)
            (bucket / hexid[2:]).write_bytes(manifest)

    @classmethod
    def load(cls, root: Union[str, Path]) -> "ObjectStore":
        """Read a directory written by save(). Layout errors raise StoreError."""
        base = Path(root) / "objects"
        if not base.is_dir():
            raise StoreError(f"{root}: no objects/ directory")
        store = cls()
        for bucket in sorted(base.iterdir()):
            if not bucket.is_dir() or not re.fullmatch(r"[0-9a-f]{2}", bucket.name):
                raise StoreError(f"unexpected entry {bucket.name!r} in objects/")
            for item in sorted(bucket.iterdir()):
                if not re.fullmatch(r"[0-9a-f]{38}", item.name):
                    raise StoreError(
                        f"unexpected entry {item.name!r} in objects/{bucket.name}/"
                    )
                manifest = item.read_bytes()
                kind = manifest.split(b" ", 1)[0]
                object_type = MANIFEST_KIND_TO_TYPE.get(kind)
                if object_type is None:
                    raise StoreError(
                        f"objects/{bucket.name}/{item.name}:"
                        f" unknown manifest kind {kind!r}"
                    )
                object_id = ObjectId.from_hex(bucket.name + item.name)
                key = (object_type, object_id)
                store._insertions[key] += 1
                store._objects.setdefault(key, manifest)
        return store


# --- filesystem ingestion ----------------------------------------------------


def _is_excluded(name: str, rel: str, excludes: Sequence[str]) -> bool:
    # Patterns match the bare entry name or the root-relative path.
    for pattern in excludes:
        if fnmatch.fnmatchcase(name, pattern):
            return True
        if rel and fnmatch.fnmatchcase(rel, pattern):
            return True
    return False


def _read_file(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        raise UnreadableError(f"{path}: {exc.strerror or exc}") from exc


def _read_link(path: Path) -> bytes:
    try:
        return os.readlink(os.fsencode(str(path)))
    except OSError as exc:
        raise UnreadableError(f"{path}: {exc.strerror or exc}") from exc


def _listdir(path: Path) -> List[str]:
    try:
        return sorted(os.listdir(path))
    except OSError as exc:
        raise UnreadableError(f"{path}: {exc.strerror or exc}") from exc


def _prehash_files(
    root: Path,
    excludes: Sequence[str],
    store: ObjectStore,
    jobs: int,
) -> Dict[Path, CoreSwhid]:
    """Hash regular files concurrently before the sequential tree walk."""
    targets: List[Path] = []
    for dirpath, dirnames, filenames in os.walk(root):
        rel_dir = os.path.relpath(dirpath, root)
        rel_dir = "" if rel_dir == "." else rel_dir
        dirnames[:] = [
            d
            for d in dirnames
            if not _is_excluded(d, os.path.join(rel_dir, d), excludes)
        ]
        for name in filenames:
            if _is_excluded(name, os.path.join(rel_dir, name), excludes):
                continue
            candidate = Path(dirpath, name)
            if candidate.is_symlink() or not candidate.is_file():
                continue
            targets.append(candidate)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        ids = list(
            pool.map(lambda p: store.add(Content(_read_file(p))), targets)
        )
    return dict(zip(targets, ids))


def _ingest_node(
    path: Path,
    rel: str,
    excludes: Sequence[str],
    store: ObjectStore,
    collect: Optional[List[Tuple[str, CoreSwhid]]],
    file_ids: Mapping[Path, CoreSwhid],
) -> Tuple[CoreSwhid, EntryPermission]:
    if path.is_symlink():
        swhid = store.add(Content(_read_link(path)))
        permission = EntryPermission.SYMLINK
    elif path.is_dir():
        entries = []
        for name in _listdir(path):
            child_rel = f"{rel}/{name}" if rel else name
            if _is_excluded(name, child_rel, excludes):
                continue
            child_id, child_perm = _ingest_node(
                path / name, child_rel, excludes, store, collect, file_ids
            )
            entries.append(
                DirectoryEntry(os.fsencode(name), child_perm, child_id.object_id)
            )
        swhid = store.add(Directory(tuple(entries)))
        permission = EntryPermission.DIRECTORY
    elif path.is_file():
        swhid = file_ids.get(path) or store.add(Content(_read_file(path)))
        mode = path.stat().st_mode
        permission = (
            EntryPermission.EXECUTABLE_FILE
            if mode & stat.S_IXUSR
            else EntryPermission.REGULAR_FILE
        )
    else:
        raise UnsupportedNodeKindError(
            f"{path}: not a regular file, directory, or symlink"
        )
    if collect is not None:
        collect.append((rel, swhid))
    return swhid, permission


def ingest_path(
    path: Union[str, Path],
    excludes: Sequence[str] = (),
    *,
    store: Optional[ObjectStore] = None,
    jobs: int = 1,
    collect: Optional[List[Tuple[str, CoreSwhid]]] = None,
) -> Tuple[CoreSwhid, ObjectStore]:
    """Compute the identifier of a filesystem node.

    Returns the root identifier and the store holding every object reached.
    collect, if given, receives (root-relative path, id) pairs for every
    node, children before parents; the root's relative path is "".
    jobs > 1 hashes file contents in a thread pool first.
    """
    root = Path(path)
    if store is None:
        store = ObjectStore()
    if not os.path.lexists(root):
        raise NotFoundError(f"{path}: no such file or directory")
    file_ids: Mapping[Path, CoreSwhid] = {}
    if jobs > 1 and root.is_dir() and not root.is_symlink():
        file_ids = _prehash_files(root, excludes, store, jobs)
    swhid, _ = _ingest_node(root, "", excludes, store, collect, file_ids)
    return swhid, store


# --- verification ------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class EntryMismatch:
    """One localized divergence. path is root-relative; "" is the root."""

    path: str
    expected_hex: Optional[str]
    actual_hex: Optional[str]
    note: str  # "differs", "missing", "unexpected", or "mode differs"


@dataclasses.dataclass(frozen=True)
class VerificationReport:
    expected: CoreSwhid
    actual: CoreSwhid
    detail: Tuple[EntryMismatch, ...] = ()

    @property
    def matched(self) -> bool:
        return self.expected == self.actual


def _tree_entries(
    manifest: bytes,
) -> Dict[bytes, Tuple[bytes, ObjectId]]:
    body = manifest[manifest.index(b"\x00") + 1 :]
    entries: Dict[bytes, Tuple[bytes, ObjectId]] = {}
    pos = 0
    while pos < len(body):
        space = body.index(b" ", pos)
        nul = body.index(b"\x00", space)
        name = body[space + 1 : nul]
        entries[name] = (body[pos:space], ObjectId(body[nul + 1 : nul + 21]))
        pos = nul + 21
    return entries


def _localize(
    expected_id: ObjectId,
    actual_id: ObjectId,
    rel: str,
    reference: ObjectStore,
    actual_store: ObjectStore,
    out: List[EntryMismatch],
    limit: int,
) -> None:
    if len(out) >= limit:
        return
    expected_manifest = reference.get(ObjectType.DIRECTORY, expected_id)
    actual_manifest = actual_store.get(ObjectType.DIRECTORY, actual_id)
    if expected_manifest is None or actual_manifest is None:
        out.append(
            EntryMismatch(rel, expected_id.hex, actual_id.hex, "differs")
        )
        return
    expected_entries = _tree_entries(expected_manifest)
    actual_entries = _tree_entries(actual_manifest)
    for name in sorted(set(expected_entries) | set(actual_entries)):
        if len(out) >= limit:
            return
        child_rel = (
            f"{rel}/{os.fsdecode(name)}" if rel else os.fsdecode(name)
        )
        exp = expected_entries.get(name)
        act = actual_entries.get(name)
        if act is None:
            assert exp is not None
            out.append(EntryMismatch(child_rel, exp[1].hex, None, "missing"))
        elif exp is None:
            out.append(EntryMismatch(child_rel, None, act[1].hex, "unexpected"))
        elif exp == act:
            continue
        elif exp[1] == act[1]:
            out.append(
                EntryMismatch(child_rel, exp[1].hex, act[1].hex, "mode differs")
            )
        elif exp[0] == b"40000" and act[0] == b"40000":
            _localize(
                exp[1], act[1], child_rel, reference, actual_store, out, limit
            )
        else:
            out.append(
                EntryMismatch(child_rel, exp[1].hex, act[1].hex, "differs")
            )


def verify_path(
    expected: Union[QualifiedSwhid, CoreSwhid],
    path: Union[str, Path],
    *,
    reference: Optional[ObjectStore] = None,
    excludes: Sequence[str] = (),
    detail_limit: int = 20,
) -> VerificationReport:
    """Recompute the id of path and compare against expected.

    Only content and directory identifiers can be checked against the
    filesystem; anything else raises TypeMismatchError, as does a content
    id named against a directory (and vice versa). With a reference store
    holding the expected tree's manifests, a directory mismatch is
    localized to the diverging entries instead of just the root.
    """
    core = expected.core if isinstance(expected, QualifiedSwhid) else expected
    if core.object_type not in (ObjectType.CONTENT, ObjectType.DIRECTORY):
        raise TypeMismatchError(
            f"{core.object_type.long_name} identifiers cannot be checked"
            " against a filesystem path"
        )
    root = Path(path)
    if not os.path.lexists(root):
        raise NotFoundError(f"{path}: no such file or directory")
    is_dir_node = root.is_dir() and not root.is_symlink()
    if core.object_type is ObjectType.DIRECTORY and not is_dir_node:
        raise TypeMismatchError(f"{path}: expected a directory")
    if core.object_type is ObjectType.CONTENT and is_dir_node:
        raise TypeMismatchError(f"{path}: expected a file")
    actual, actual_store = ingest_path(root, excludes)
    report_detail: Tuple[EntryMismatch, ...] = ()
    if actual.object_id != core.object_id:
        if (
            core.object_type is ObjectType.DIRECTORY
            and reference is not None
            and reference.get(ObjectType.DIRECTORY, core.object_id) is not None
        ):
            found: List[EntryMismatch] = []
            _localize(
                core.object_id,
                actual.object_id,
                "",
                reference,
                actual_store,
                found,
                detail_limit,
            )
            report_detail = tuple(found)
        else:
            report_detail = (
                EntryMismatch("", core.object_id.hex, actual.object_id.hex, "differs"),
            )
    return VerificationReport(expected=core, actual=actual, detail=report_detail)


# --- line extraction ---------------------------------------------------------


def extract_lines(data: bytes, line_range: LineRange) -> bytes:
    """Return the 1-indexed inclusive line range of data.

    Lines are separated by LF only. An end past the last line clamps; a
    start past the last line raises RangeOutOfBoundsError. The result ends
    with LF only if the last extracted line did in the original bytes.
    """
    physical = data.split(b"\n")
    if data.endswith(b"\n") or not data:
        physical = physical[:-1]
    count = len(physical)
    start = line_range.start
    end = line_range.end if line_range.end is not None else start
    if start > count:
        raise RangeOutOfBoundsError(
            f"range starts at line {start} but content has {count} line(s)"
        )
    end = min(end, count)
    selected = b"\n".join(physical[start - 1 : end])
    if end < count or data.endswith(b"\n"):
        selected += b"\n"
    return selected


# --- description files -------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class _Ref:
    """A 'label:<name>' placeholder in an id slot of a description."""

    label: str


class _Unresolved(Exception):
    def __init__(self, label: str):
        super().__init__(label)
        self.label = label


@dataclasses.dataclass(frozen=True, eq=False)
class NodeDescription:
    """One parsed entry of a description document.

    fields holds normalized values: ObjectId or _Ref in id slots,
    PersonStamp for identities, bytes for names and messages.
    """

    kind: ObjectType
    label: Optional[str]
    fields: Dict[str, Any]


def _want(obj: Dict[str, Any], key: str, types, loc: str) -> Any:
    if key not in obj:
        raise SchemaError(f"missing required field {key!r}", loc)
    value = obj[key]
    if not isinstance(value, types):
        raise SchemaError(f"field {key!r} has the wrong type", f"{loc}.{key}")
    return value


def _parse_object_id(value: Any, loc: str) -> Union[ObjectId, _Ref]:
    if not isinstance(value, str):
        raise SchemaError("object reference must be a string", loc)
    if value.startswith("label:"):
        label = value[len("label:") :]
        if not label:
            raise SchemaError("empty label reference", loc)
        return _Ref(label)
    if not _HEX40_RE.match(value):
        raise SchemaError(
            f"{value!r} is neither 40 lowercase hex digits nor 'label:<name>'",
            loc,
        )
    return ObjectId.from_hex(value)


def _parse_bytes(
    obj: Dict[str, Any], key: str, loc: str, required: bool = True
) -> Optional[bytes]:
    plain = obj.get(key)
    encoded = obj.get(f"{key}_b64")
    if plain is not None and encoded is not None:
        raise SchemaError(f"both {key!r} and '{key}_b64' given", loc)
    if plain is not None:
        if not isinstance(plain, str):
            raise SchemaError(f"field {key!r} must be a string", f"{loc}.{key}")
        return plain.encode("utf-8")
    if encoded is not None:
        if not isinstance(encoded, str):
            raise SchemaError(
                f"field '{key}_b64' must be a string", f"{loc}.{key}_b64"
            )
        try:
            return base64.b64decode(encoded, validate=True)
        except binascii.Error as exc:
            raise SchemaError(
                f"bad base64 in '{key}_b64': {exc}", f"{loc}.{key}_b64"
            ) from exc
    if required:
        raise SchemaError(f"missing required field {key!r}", loc)
    return None


def _parse_person(obj: Dict[str, Any], key: str, loc: str) -> PersonStamp:
    raw = _parse_bytes(obj, key, loc)
    date = _want(obj, f"{key}_date", dict, loc)
    date_loc = f"{loc}.{key}_date"
    seconds = _want(date, "seconds", int, date_loc)
    if isinstance(seconds, bool):
        raise SchemaError("field 'seconds' has the wrong type", date_loc)
    offset = _want(date, "offset", str, date_loc)
    try:
        return PersonStamp(raw, seconds, offset)
    except MalformedPersonError as exc:
        raise SchemaError(str(exc), date_loc) from exc


def _parse_revision(obj: Dict[str, Any], loc: str) -> Dict[str, Any]:
    parents_raw = _want(obj, "parents", list, loc)
    parents = tuple(
        _parse_object_id(p, f"{loc}.parents[{i}]")
        for i, p in enumerate(parents_raw)
    )
    headers_raw = obj.get("extra_headers", [])
    if not isinstance(headers_raw, list):
        raise SchemaError(
            "field 'extra_headers' must be a list of [key, value] pairs",
            f"{loc}.extra_headers",
        )
    headers = []
    for i, pair in enumerate(headers_raw):
        pair_loc = f"{loc}.extra_headers[{i}]"
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(part, str) for part in pair)
        ):
            raise SchemaError("expected a [key, value] string pair", pair_loc)
        headers.append((pair[0].encode("utf-8"), pair[1].encode("utf-8")))
    return {
        "tree": _parse_object_id(_want(obj, "tree", str, loc), f"{loc}.tree"),
        "parents": parents,
        "author": _parse_person(obj, "author", loc),
        "committer": _parse_person(obj, "committer", loc),
        "message": _parse_bytes(obj, "message", loc),
        "extra_headers": tuple(headers),
    }


def _parse_release(obj: Dict[str, Any], loc: str) -> Dict[str, Any]:
    type_name = _want(obj, "target_type", str, loc)
    try:
        target_type = ObjectType.from_long_name(type_name)
    except ValueError as exc:
        raise SchemaError(str(exc), f"{loc}.target_type") from exc
    tagger = None
    if "tagger" in obj or "tagger_b64" in obj:
        tagger = _parse_person(obj, "tagger", loc)
    elif "tagger_date" in obj:
        raise SchemaError("'tagger_date' given without 'tagger'", loc)
    return {
        "target": _parse_object_id(
            _want(obj, "target", str, loc), f"{loc}.target"
        ),
        "target_type": target_type,
        "name": _parse_bytes(obj, "name", loc),
        "message": _parse_bytes(obj, "message", loc),
        "tagger": tagger,
    }


def _parse_snapshot(obj: Dict[str, Any], loc: str) -> Dict[str, Any]:
    branches_raw = _want(obj, "branches", dict, loc)
    branches: Dict[bytes, Tuple[BranchKind, Any]] = {}
    for name, value in branches_raw.items():
        branch_loc = f"{loc}.branches[{name!r}]"
        key = name.encode("utf-8")
        if value is None:
            branches[key] = (BranchKind.DANGLING, None)
            continue
        if not isinstance(value, dict):
            raise SchemaError("branch must be null or an object", branch_loc)
        kind_name = _want(value, "target_type", str, branch_loc)
        try:
            kind = BranchKind(kind_name)
        except ValueError as exc:
            raise SchemaError(
                f"unknown branch target type {kind_name!r}", branch_loc
            ) from exc
        if kind is BranchKind.DANGLING:
            raise SchemaError(
                "dangling branches are written as null", branch_loc
            )
        if kind is BranchKind.ALIAS:
            alias = _parse_bytes(value, "target", branch_loc)
            branches[key] = (kind, alias)
        else:
            target = _parse_object_id(
                _want(value, "target", str, branch_loc), f"{branch_loc}.target"
            )
            branches[key] = (kind, target)
    return {"branches": branches}


_DESCRIPTION_PARSERS = {
    "revision": (ObjectType.REVISION, _parse_revision),
    "release": (ObjectType.RELEASE, _parse_release),
    "snapshot": (ObjectType.SNAPSHOT, _parse_snapshot),
}


def _iter_refs(description: NodeDescription):
    fields = description.fields
    if description.kind is ObjectType.REVISION:
        candidates = [fields["tree"], *fields["parents"]]
    elif description.kind is ObjectType.RELEASE:
        candidates = [fields["target"]]
    else:
        candidates = [payload for _, payload in fields["branches"].values()]
    for value in candidates:
        if isinstance(value, _Ref):
            yield value


def describe_nodes(data: bytes) -> List[NodeDescription]:
    """Parse a JSON description document into normalized node descriptions.

    The document is a list of objects, each with a "type" of revision,
    release, or snapshot, an optional "label" other entries may reference
    in id slots as "label:<name>", and the node's fields. Schema problems
    raise SchemaError with a JSONPath-style location; references to labels
    defined nowhere in the document raise UnknownReferenceError.
    """
    try:
        document = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    if not isinstance(document, list):
        raise SchemaError("top-level value must be a list")
    descriptions: List[NodeDescription] = []
    labels = set()
    for index, item in enumerate(document):
        loc = f"$[{index}]"
        if not isinstance(item, dict):
            raise SchemaError("each description must be an object", loc)
        kind_name = _want(item, "type", str, loc)
        if kind_name not in _DESCRIPTION_PARSERS:
            raise SchemaError(
                f"unknown node type {kind_name!r}"
                " (expected revision, release, or snapshot)",
                f"{loc}.type",
            )
        label = item.get("label")
        if label is not None:
            if not isinstance(label, str) or not label:
                raise SchemaError(
                    "label must be a non-empty string", f"{loc}.label"
                )
            if label in labels:
                raise SchemaError(f"duplicate label {label!r}", f"{loc}.label")
            labels.add(label)
        kind, parser = _DESCRIPTION_PARSERS[kind_name]
        descriptions.append(
            NodeDescription(kind=kind, label=label, fields=parser(item, loc))
        )
    for description in descriptions:
        for ref in _iter_refs(description):
            if ref.label not in labels:
                raise UnknownReferenceError(
                    f"label {ref.label!r} is never defined"
                )
    return descriptions


def _resolve_ref(value: Any, labels: Dict[str, ObjectId]) -> Any:
    if isinstance(value, _Ref):
        if value.label not in labels:
            raise _Unresolved(value.label)
        return labels[value.label]
    return value


def _build_node(
    description: NodeDescription, labels: Dict[str, ObjectId]
) -> DagNode:
    fields = description.fields
    if description.kind is ObjectType.REVISION:
        return Revision(
            tree=_resolve_ref(fields["tree"], labels),
            parents=tuple(
                _resolve_ref(p, labels) for p in fields["parents"]
            ),
            author=fields["author"],
            committer=fields["committer"],
            message=fields["message"],
            extra_headers=fields["extra_headers"],
        )
    if description.kind is ObjectType.RELEASE:
        return Release(
            target=_resolve_ref(fields["target"], labels),
            target_type=fields["target_type"],
            name=fields["name"],
            message=fields["message"],
            tagger=fields["tagger"],
        )
    branches = {}
    for name, (kind, payload) in fields["branches"].items():
        if kind is BranchKind.DANGLING:
            branches[name] = BranchTarget.dangling_ref()
        elif kind is BranchKind.ALIAS:
            branches[name] = BranchTarget.to_alias(payload)
        else:
            branches[name] = BranchTarget(
                kind, target=_resolve_ref(payload, labels)
            )
    return Snapshot(branches=branches)


def realize_descriptions(
    descriptions: Sequence[NodeDescription],
    store: Optional[ObjectStore] = None,
) -> List[Tuple[CoreSwhid, DagNode]]:
    """Build every described node and compute its id.

    Label references may point forward or backward inside the document;
    nodes are realized in dependency order (a hash cannot contain itself,
    so a cycle means a reference can never resolve). Results come back in
    document order. Nodes are added to store when one is given.
    """
    labels: Dict[str, ObjectId] = {}
    results: List[Optional[Tuple[CoreSwhid, DagNode]]] = [None] * len(
        descriptions
    )
    pending = list(enumerate(descriptions))
    while pending:
        stuck = []
        progressed = False
        for index, description in pending:
            try:
                node = _build_node(description, labels)
            except _Unresolved:
                stuck.append((index, description))
                continue
            if store is not None:
                swhid = store.add(node)
            else:
                object_type, object_id = object_id_of(node)
                swhid = CoreSwhid(object_type, object_id)
            if description.label:
                labels[description.label] = swhid.object_id
            results[index] = (swhid, node)
            progressed = True
        if not progressed:
            unresolved = sorted(
                {
                    ref.label
                    for _, description in stuck
                    for ref in _iter_refs(description)
                    if ref.label not in labels
                }
            )
            raise UnknownReferenceError(
                "reference cycle or undefined labels: " + ", ".join(unresolved)
            )
        pending = stuck
    return [result for result in results if result is not None]
