"""File-backed document store for ingested tweets and photos.

On-disk layout under the store directory:

    tweet.jsonl   one canonical-form JSON document per line, LF-terminated
    photo.jsonl   same
    LOCK          advisory lock file; the writer holds an exclusive flock

Each line is an envelope ``{"doc_id": n, "len": m, "body": {...}}`` where
``len`` is the byte length of the canonical serialization of ``body`` and
doubles as a per-line integrity check on read. ``doc_id`` is the insertion
sequence number within its collection, so ids are deterministic.

Document bodies follow a fixed two-collection schema:

    photo: {"geo": {"latitude", "longitude", "accuracy"}, "name"}
    tweet: {"coordinates": {"coordinates": {"latitude", "longitude"},
            "type"} | null, "source", "text"}
"""

from __future__ import annotations

import fcntl
import json
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .errors import SchemaError, StorageError
from .ingest import PhotoRecord, RawTweet

COLLECTIONS = ("tweet", "photo")


@dataclass(frozen=True)
class StoredDocument:
    collection: str
    body: dict
    doc_id: int


@dataclass(frozen=True)
class StoreStats:
    tweet_count: int
    photo_count: int


def canonical_json(obj) -> str:
    """Canonical serialization: sorted keys, compact separators, raw UTF-8."""
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"), sort_keys=True)


def _check_number(value, path: str, lo: float, hi: float):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{path} must be a number", path=path)
    if not math.isfinite(value) or not lo <= value <= hi:
        raise SchemaError(f"{path} value {value} outside [{lo}, {hi}]", path=path)


def _check_str(value, path: str):
    if not isinstance(value, str):
        raise SchemaError(f"{path} must be a string", path=path)


def _require(body: dict, key: str, path: str):
    if not isinstance(body, dict) or key not in body:
        raise SchemaError(f"missing required field {path}", path=path)
    return body[key]


def validate_body(collection: str, body: dict):
    """Raise SchemaError (naming the offending path) unless ``body`` conforms."""
    if collection == "photo":
        geo = _require(body, "geo", "photo.geo")
        lat = _require(geo, "latitude", "photo.geo.latitude")
        _check_number(lat, "photo.geo.latitude", -90.0, 90.0)
        lon = _require(geo, "longitude", "photo.geo.longitude")
        _check_number(lon, "photo.geo.longitude", -180.0, 180.0)
        acc = _require(geo, "accuracy", "photo.geo.accuracy")
        if isinstance(acc, bool) or not isinstance(acc, int):
            raise SchemaError("photo.geo.accuracy must be an integer", path="photo.geo.accuracy")
        _check_str(_require(body, "name", "photo.name"), "photo.name")
    elif collection == "tweet":
        block = _require(body, "coordinates", "tweet.coordinates")
        if block is not None:
            inner = _require(block, "coordinates", "tweet.coordinates.coordinates")
            lat = _require(inner, "latitude", "tweet.coordinates.coordinates.latitude")
            _check_number(lat, "tweet.coordinates.coordinates.latitude", -90.0, 90.0)
            lon = _require(inner, "longitude", "tweet.coordinates.coordinates.longitude")
            _check_number(lon, "tweet.coordinates.coordinates.longitude", -180.0, 180.0)
            _check_str(_require(block, "type", "tweet.coordinates.type"), "tweet.coordinates.type")
        _check_str(_require(body, "source", "tweet.source"), "tweet.source")
        _check_str(_require(body, "text", "tweet.text"), "tweet.text")
    else:
        raise SchemaError(f"unknown collection {collection!r}", path=collection)


def tweet_body(raw: RawTweet) -> dict:
    """Store-schema body for a parsed tweet."""
    block = None
    if raw.coordinates is not None:
        block = {
            "coordinates": {
                "latitude": raw.coordinates.lat_deg,
                "longitude": raw.coordinates.lon_deg,
            },
            "type": "Point",
        }
    return {"coordinates": block, "source": raw.source, "text": raw.text}


def photo_body(record: PhotoRecord) -> dict:
    """Store-schema body for a joined photo record."""
    return {
        "geo": {
            "latitude": record.location.lat_deg,
            "longitude": record.location.lon_deg,
            "accuracy": record.accuracy,
        },
        "name": record.name,
    }


def has_coordinates(doc: StoredDocument) -> bool:
    """True when the document carries a complete coordinate fix."""
    if doc.collection == "photo":
        return True
    return doc.body.get("coordinates") is not None


class DocumentStore:
    """Append-only two-collection store under one directory.

    A writable store holds an exclusive advisory lock for its lifetime; a
    second writer on the same directory fails fast. Readers never lock and
    see every write completed before their scan started.
    """

    def __init__(self, directory, read_only: bool = False):
        self.directory = Path(directory)
        self.read_only = read_only
        self._lock_fd = None
        self._counts: dict[str, int] = {}
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageError(f"cannot create store directory {self.directory}: {exc}") from exc
        if not read_only:
            self._acquire_lock()
        for collection in COLLECTIONS:
            self._counts[collection] = self._count_lines(self._path(collection))

    def _path(self, collection: str) -> Path:
        return self.directory / f"{collection}.jsonl"

    def _acquire_lock(self):
        lock_path = self.directory / "LOCK"
        fd = os.open(lock_path, os.O_CREAT | os.O_RDWR, 0o644)
        try:
            fcntl.flock(fd, fcntl.LOCK_EX | fcntl.LOCK_NB)
        except OSError:
            os.close(fd)
            raise StorageError(f"store directory already locked by another writer: {self.directory}")
        self._lock_fd = fd

    @staticmethod
    def _count_lines(path: Path) -> int:
        if not path.exists():
            return 0
        with open(path, "rb") as fh:
            return sum(1 for _ in fh)

    def close(self):
        if self._lock_fd is not None:
            fcntl.flock(self._lock_fd, fcntl.LOCK_UN)
            os.close(self._lock_fd)
            self._lock_fd = None

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()

    def put(self, collection: str, body: dict) -> int:
        """Validate, append and fsync one document; returns its doc_id."""
        if self.read_only:
            raise StorageError("store opened read-only")
        validate_body(collection, body)
        doc_id = self._counts[collection]
        body_text = canonical_json(body)
        line = canonical_json({"doc_id": doc_id, "len": len(body_text.encode("utf-8")), "body": body})
        try:
            with open(self._path(collection), "ab") as fh:
                fh.write(line.encode("utf-8") + b"\n")
                fh.flush()
                os.fsync(fh.fileno())
        except OSError as exc:
            raise StorageError(f"write failed for {self._path(collection)}: {exc}") from exc
        self._counts[collection] = doc_id + 1
        return doc_id

    def get(self, collection: str, doc_id: int) -> StoredDocument:
        for doc in self.scan(collection):
            if doc.doc_id == doc_id:
                return doc
        raise StorageError(f"no {collection} document with id {doc_id}")

    def scan(self, collection: str, geo_only: bool = False) -> Iterator[StoredDocument]:
        """Yield documents of one collection in insertion order.

        ``geo_only`` keeps only documents with a complete coordinate fix.
        """
        if collection not in COLLECTIONS:
            raise SchemaError(f"unknown collection {collection!r}", path=collection)
        path = self._path(collection)
        if not path.exists():
            return
        try:
            lines = path.read_bytes().splitlines()
        except OSError as exc:
            raise StorageError(f"scan failed for {path}: {exc}") from exc
        for lineno, raw in enumerate(lines):
            try:
                envelope = json.loads(raw.decode("utf-8"))
                body = envelope["body"]
                declared = envelope["len"]
                doc_id = envelope["doc_id"]
            except (ValueError, KeyError, UnicodeDecodeError) as exc:
                raise StorageError(f"corrupt record at {path}:{lineno + 1}: {exc}") from exc
            actual = len(canonical_json(body).encode("utf-8"))
            if actual != declared:
                raise StorageError(
                    f"integrity check failed at {path}:{lineno + 1}: length {actual} != declared {declared}"
                )
            doc = StoredDocument(collection=collection, body=body, doc_id=doc_id)
            if geo_only and not has_coordinates(doc):
                continue
            yield doc

    def stats(self) -> StoreStats:
        # Recount from disk so readers agree with what a fresh scan returns.
        return StoreStats(
            tweet_count=self._count_lines(self._path("tweet")),
            photo_count=self._count_lines(self._path("photo")),
        )
